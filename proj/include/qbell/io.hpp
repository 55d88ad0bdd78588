#pragma once

// Matrix files and report serialization.
//
// Matrix file schema:
//   {"dim": N, "re": [[...N...] x N], "im": [[...N...] x N], "label": "optional"}
// "im" may be omitted for a real matrix.
//
// Reports are written with every floating-point number printed to 17
// significant digits (and always with a '.', 'e', or "inf"/"nan" guard), so
// parsing a report and writing it again reproduces the same bytes.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>

#include "json.hpp"
#include "qbell/errors.hpp"
#include "qbell/linalg.hpp"

namespace qbell {

using OrderedJson = nlohmann::ordered_json;

struct MatrixFile {
    ComplexMatrix matrix;
    std::optional<std::string> label;
};

namespace detail {

inline std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

inline OrderedJson parse_json_text(const std::string& text) {
    try {
        return OrderedJson::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const auto [line, column] = line_column(text, e.byte);
        throw ParseError("malformed JSON at line " + std::to_string(line) + ", column " + std::to_string(column) +
                             ": " + e.what(),
                         line, column);
    }
}

inline std::vector<double> read_row(const OrderedJson& row, std::size_t dim, const char* field, std::size_t r) {
    const std::string where = std::string(field) + "[" + std::to_string(r) + "]";
    if (!row.is_array()) throw SchemaError(where + " is not an array");
    if (row.size() != dim) {
        throw SchemaError(where + " has " + std::to_string(row.size()) + " entries, expected " + std::to_string(dim));
    }
    std::vector<double> out;
    out.reserve(dim);
    for (std::size_t c = 0; c < dim; ++c) {
        const auto& v = row[c];
        if (!v.is_number()) throw SchemaError(where + "[" + std::to_string(c) + "] is not a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) throw SchemaError(where + "[" + std::to_string(c) + "] is not finite");
        out.push_back(x);
    }
    return out;
}

inline std::vector<std::vector<double>> read_square(const OrderedJson& doc, const char* field, std::size_t dim) {
    const auto& arr = doc.at(field);
    if (!arr.is_array()) throw SchemaError(std::string("\"") + field + "\" is not an array");
    if (arr.size() != dim) {
        throw SchemaError(std::string("\"") + field + "\" has " + std::to_string(arr.size()) + " rows, expected " +
                          std::to_string(dim));
    }
    std::vector<std::vector<double>> rows;
    for (std::size_t r = 0; r < dim; ++r) rows.push_back(read_row(arr[r], dim, field, r));
    return rows;
}

}  // namespace detail

inline MatrixFile parse_matrix_text(const std::string& text) {
    const OrderedJson doc = detail::parse_json_text(text);
    if (!doc.is_object()) throw SchemaError("matrix file must be a JSON object");
    if (!doc.contains("dim")) throw SchemaError("missing \"dim\"");
    const auto& dim_node = doc["dim"];
    if (!dim_node.is_number_integer() || dim_node.get<long long>() < 1) {
        throw SchemaError("\"dim\" must be a positive integer");
    }
    const auto dim = static_cast<std::size_t>(dim_node.get<long long>());
    if (!doc.contains("re")) throw SchemaError("missing \"re\"");

    const auto re = detail::read_square(doc, "re", dim);
    std::vector<std::vector<double>> im(dim, std::vector<double>(dim, 0.0));
    if (doc.contains("im")) im = detail::read_square(doc, "im", dim);

    MatrixFile out;
    out.matrix = ComplexMatrix(dim, dim);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) out.matrix(r, c) = Complex{re[r][c], im[r][c]};
    if (doc.contains("label")) {
        if (!doc["label"].is_string()) throw SchemaError("\"label\" must be a string");
        out.label = doc["label"].get<std::string>();
    }
    return out;
}

/// Reads a matrix file from `path`, or from `in` when path is "-".
inline MatrixFile parse_matrix(const std::string& path, std::istream& in = std::cin) {
    std::string text;
    if (path == "-") {
        text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    } else {
        std::ifstream file(path, std::ios::binary);
        if (!file) throw InvalidArgument("cannot open matrix file '" + path + "'");
        text.assign(std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>());
    }
    return parse_matrix_text(text);
}

inline OrderedJson matrix_to_json(const ComplexMatrix& m, const std::optional<std::string>& label = std::nullopt) {
    OrderedJson doc;
    doc["dim"] = m.rows();
    OrderedJson re = OrderedJson::array();
    OrderedJson im = OrderedJson::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        OrderedJson re_row = OrderedJson::array();
        OrderedJson im_row = OrderedJson::array();
        for (std::size_t c = 0; c < m.cols(); ++c) {
            re_row.push_back(m(r, c).real());
            im_row.push_back(m(r, c).imag());
        }
        re.push_back(std::move(re_row));
        im.push_back(std::move(im_row));
    }
    doc["re"] = std::move(re);
    doc["im"] = std::move(im);
    if (label) doc["label"] = *label;
    return doc;
}

// ---------------------------------------------------------------------------

inline std::string format_double(double x) {
    if (std::isnan(x)) return "null";
    if (std::isinf(x)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    std::string s(buf);
    if (s.find_first_of(".eE") == std::string::npos) s += ".0";
    return s;
}

namespace detail {

inline void write_json(std::string& out, const OrderedJson& j, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (j.type()) {
        case OrderedJson::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += inner + OrderedJson(it.key()).dump() + ": ";
                write_json(out, it.value(), indent + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case OrderedJson::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            // Arrays of scalars stay on one line.
            bool flat = true;
            for (const auto& v : j) flat = flat && !v.is_structured();
            if (flat) {
                out += "[";
                for (std::size_t i = 0; i < j.size(); ++i) {
                    if (i) out += ", ";
                    write_json(out, j[i], indent + 1);
                }
                out += "]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ",\n";
                out += inner;
                write_json(out, j[i], indent + 1);
            }
            out += "\n" + pad + "]";
            return;
        }
        case OrderedJson::value_t::number_float:
            out += format_double(j.get<double>());
            return;
        default:
            out += j.dump();
            return;
    }
}

}  // namespace detail

/// Deterministic text form of a report; ends with a newline.
inline std::string serialize_report(const OrderedJson& j) {
    std::string out;
    detail::write_json(out, j, 0);
    out += '\n';
    return out;
}

}  // namespace qbell
