#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "qbell/cli.hpp"

using namespace qbell;
using Catch::Matchers::WithinAbs;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run_cli(std::vector<std::string> args, const std::string& stdin_text = "") {
    args.insert(args.begin(), "qbell");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::istringstream in(stdin_text);
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), in, out, err);
    return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(QBELL_DATA_DIR) + "/" + name; }

OrderedJson verdict_named(const OrderedJson& report, const std::string& name) {
    for (const auto& v : report["verdicts"])
        if (v["check"] == name) return v;
    FAIL("no verdict " << name);
    return {};
}

std::string strip_wall_time(const std::string& report) {
    auto j = OrderedJson::parse(report);
    j.erase("wall_time_ms");
    return serialize_report(j);
}

}  // namespace

TEST_CASE("parse_matrix_text", "[io]") {
    SECTION("complex entries and label") {
        const auto mf = parse_matrix_text(R"({"dim": 2, "re": [[0.5, 0], [0, 0.5]], "im": [[0, 0.25], [-0.25, 0]], "label": "q"})");
        CHECK(mf.matrix(0, 1) == Complex{0, 0.25});
        CHECK(mf.matrix(1, 0) == Complex{0, -0.25});
        CHECK(mf.label == std::optional<std::string>("q"));
    }

    SECTION("missing im means a real matrix") {
        const auto mf = parse_matrix_text(R"({"dim": 2, "re": [[1, 0], [0, 0]]})");
        CHECK(mf.matrix == ComplexMatrix::diagonal({1, 0}));
        CHECK_FALSE(mf.label.has_value());
    }

    SECTION("schema errors") {
        CHECK_THROWS_AS(parse_matrix_text(R"({"re": [[1]]})"), SchemaError);
        CHECK_THROWS_AS(parse_matrix_text(R"({"dim": 0, "re": []})"), SchemaError);
        CHECK_THROWS_AS(parse_matrix_text(R"({"dim": 2, "re": [[1, 0]]})"), SchemaError);
        CHECK_THROWS_AS(parse_matrix_text(R"({"dim": 2, "re": [[1, 0], [0]]})"), SchemaError);
        CHECK_THROWS_AS(parse_matrix_text(R"({"dim": 1, "re": [["1"]]})"), SchemaError);
        CHECK_THROWS_AS(parse_matrix_text(R"({"dim": 1, "re": [[1]], "im": [[1, 2]]})"), SchemaError);
        CHECK_THROWS_AS(parse_matrix_text(R"([1, 2])"), SchemaError);
    }

    SECTION("malformed JSON reports line and column") {
        try {
            parse_matrix_text("{\n  \"dim\": 2,\n  \"re\": [[1, 0], [0, 0]],,\n}");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 3);
            CHECK(e.column() == 26);
        }
    }
}

TEST_CASE("report serialization round-trips byte for byte", "[io]") {
    OrderedJson j;
    j["a"] = 0.1;
    j["b"] = 2.0;
    j["c"] = 1e-300;
    j["d"] = std::vector<double>{1.0 / 3.0, -2.5e10, 0.0};
    j["e"] = "text";
    j["f"] = true;
    j["g"] = std::int64_t{12};
    const std::string once = serialize_report(j);
    CHECK(serialize_report(OrderedJson::parse(once)) == once);
    CHECK(once.find("\"b\": 2.0") != std::string::npos);
    CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("check", "[cli]") {
    SECTION("valid matrix") {
        const auto r = run_cli({"check", data("phi_plus.json")});
        CHECK(r.code == 0);
        const auto j = OrderedJson::parse(r.out);
        CHECK(j["command"] == "check");
        CHECK(j["input_label"] == "phi_plus");
        CHECK(verdict_named(j, "positive_semidefinite")["holds"] == true);
    }

    SECTION("negative eigenvalue") {
        const auto r = run_cli({"check", data("indefinite.json")});
        CHECK(r.code == 2);
        CHECK(r.err.find("negative eigenvalue") != std::string::npos);
        const auto j = OrderedJson::parse(r.out);
        const auto v = verdict_named(j, "positive_semidefinite");
        CHECK(v["holds"] == false);
        CHECK_THAT(v["values"]["min_eigenvalue"].get<double>(), WithinAbs(-0.5, 1e-12));
    }

    SECTION("standard input") {
        const auto r = run_cli({"check", "-"}, R"({"dim": 1, "re": [[1]]})");
        CHECK(r.code == 0);
        CHECK(OrderedJson::parse(r.out)["input_label"] == "<stdin>");
    }
}

TEST_CASE("entropy", "[cli]") {
    const auto r = run_cli({"entropy", data("phi_plus.json"), "--partition", "2", "2"});
    CHECK(r.code == 0);
    const auto j = OrderedJson::parse(r.out);
    const auto v = verdict_named(j, "subadditivity")["values"];
    CHECK_THAT(v["s_joint"].get<double>(), WithinAbs(0.0, 1e-12));
    CHECK_THAT(v["s_first"].get<double>(), WithinAbs(0.6931471805599453, 1e-12));
    CHECK_THAT(v["s_second"].get<double>(), WithinAbs(0.6931471805599453, 1e-12));
    CHECK(verdict_named(j, "araki_lieb")["holds"] == true);

    CHECK(run_cli({"entropy", data("phi_plus.json"), "--partition", "2", "3"}).code == 2);
    CHECK(run_cli({"entropy", data("indefinite.json"), "--partition", "2", "2"}).code == 2);
}

TEST_CASE("tomogram and bell", "[cli]") {
    const auto t = run_cli({"tomogram", data("phi_plus.json"), "--angles", "0", "0", "1", "0"});
    CHECK(t.code == 0);
    const auto probs = OrderedJson::parse(t.out)["details"]["probabilities"].get<std::vector<double>>();
    CHECK_THAT(probs[0], WithinAbs(0.5, 1e-15));
    CHECK_THAT(probs[3], WithinAbs(0.5, 1e-15));

    const std::string q = std::to_string(std::numbers::pi / 4);
    const std::string h = std::to_string(std::numbers::pi / 2);
    const auto b = run_cli({"bell", data("phi_plus.json"), "--angles", "0", "0", "0", h, "0", q, "0", "-" + q});
    CHECK(b.code == 0);
    const auto j = OrderedJson::parse(b.out);
    CHECK_THAT(j["details"]["B"].get<double>(), WithinAbs(2 * std::sqrt(2.0), 1e-5));
    CHECK(j["details"]["classification"] == "hidden_bell_correlation");
    CHECK(verdict_named(j, "separable_bound")["holds"] == false);
    CHECK(verdict_named(j, "tsirelson_bound")["holds"] == true);
}

TEST_CASE("bell-max", "[cli]") {
    const auto r = run_cli({"bell-max", data("phi_plus.json"), "--restarts", "16", "--seed", "7"});
    CHECK(r.code == 0);
    const auto j = OrderedJson::parse(r.out);
    CHECK_THAT(j["details"]["abs_B"].get<double>(), WithinAbs(2.8284271247461903, 1e-6));
    CHECK(j["details"]["classification"] == "hidden_bell_correlation");
    CHECK(j["seed"] == 7);
    CHECK(j["optimizer"]["restarts"] == 16);

    const auto keys = [&] {
        std::vector<std::string> k;
        for (const auto& [key, _] : j.items()) k.push_back(key);
        return k;
    }();
    CHECK(keys.back() == "wall_time_ms");
    CHECK(keys.front() == "command");

    SECTION("deterministic apart from wall time") {
        const auto again = run_cli({"bell-max", data("phi_plus.json"), "--restarts", "16", "--seed", "7"});
        CHECK(strip_wall_time(again.out) == strip_wall_time(r.out));
    }

    SECTION("separable input stays within 2") {
        const auto m = run_cli({"bell-max", data("maximally_mixed.json")});
        CHECK(m.code == 0);
        CHECK(OrderedJson::parse(m.out)["details"]["classification"] == "within_separable_bound");
    }
}

TEST_CASE("QBELL_SEED supplies the default seed", "[cli]") {
    ::setenv("QBELL_SEED", "42", 1);
    const auto from_env = run_cli({"bell-max", data("phi_plus.json"), "--restarts", "2"});
    const auto explicit_seed = run_cli({"bell-max", data("phi_plus.json"), "--restarts", "2", "--seed", "42"});
    ::setenv("QBELL_SEED", "not-a-number", 1);
    const auto bad = run_cli({"bell-max", data("phi_plus.json"), "--restarts", "2"});
    const auto flag_wins = run_cli({"bell-max", data("phi_plus.json"), "--restarts", "2", "--seed", "42"});
    ::unsetenv("QBELL_SEED");
    const auto fallback = run_cli({"bell-max", data("phi_plus.json"), "--restarts", "2"});

    CHECK(OrderedJson::parse(from_env.out)["seed"] == 42);
    CHECK(strip_wall_time(from_env.out) == strip_wall_time(explicit_seed.out));
    CHECK(bad.code == 2);
    CHECK(bad.err.find("QBELL_SEED") != std::string::npos);
    CHECK(flag_wins.code == 0);
    CHECK(OrderedJson::parse(fallback.out)["seed"] == 0);
}

TEST_CASE("appendix", "[cli]") {
    SECTION("fixed quadruple") {
        const auto r = run_cli({"appendix", data("observable.json"), "--x", "2", "--angles", "0", "0", "0", "0", "0",
                                "0", "0", "0"});
        CHECK(r.code == 0);
        const auto j = OrderedJson::parse(r.out);
        const auto eig = j["details"]["rho_x_spectrum"].get<std::vector<double>>();
        CHECK_THAT(eig.front(), WithinAbs(1.0 / 8, 1e-12));
        CHECK_THAT(eig.back(), WithinAbs(3.0 / 8, 1e-12));
        for (const auto& row : j["details"]["omega"]) {
            double sum = 0;
            for (double v : row) sum += v;
            CHECK_THAT(sum, WithinAbs(1.0, 1e-12));
        }
        CHECK_FALSE(j.contains("seed"));
    }

    SECTION("optimized quadruple") {
        const auto r = run_cli({"appendix", data("phi_plus.json"), "--x", "1.5", "--restarts", "4"});
        CHECK(r.code == 0);
        const auto j = OrderedJson::parse(r.out);
        // ρ(1.5) = (P + 1.5)/7 keeps a seventh of the Φ+ correlations.
        CHECK_THAT(verdict_named(j, "rho_x_tsirelson_bound")["values"]["value"].get<double>(),
                   WithinAbs(2 * std::sqrt(2.0) / 7, 1e-6));
        CHECK(j.contains("optimizer"));
    }

    SECTION("x below max|f_j|") {
        const auto r = run_cli({"appendix", data("observable.json"), "--x", "1"});
        CHECK(r.code == 2);
        CHECK(r.err.find("x") != std::string::npos);
    }
}

TEST_CASE("embed-qutrit", "[cli]") {
    const auto r = run_cli({"embed-qutrit", data("qutrit_mixed.json")});
    CHECK(r.code == 0);
    const auto mf = parse_matrix_text(r.out);
    CHECK(mf.matrix.rows() == 4);
    CHECK(std::abs(trace(mf.matrix) - Complex{1, 0}) <= 1e-15);
    CHECK(mf.label.value().ends_with("(embedded)"));

    CHECK(run_cli({"embed-qutrit", data("phi_plus.json")}).code == 2);
}

TEST_CASE("usage and input errors exit with 2", "[cli]") {
    CHECK(run_cli({}).code == 2);
    CHECK(run_cli({"frobnicate", data("phi_plus.json")}).code == 2);
    CHECK(run_cli({"check"}).code == 2);
    CHECK(run_cli({"check", data("does_not_exist.json")}).code == 2);
    CHECK(run_cli({"bell", data("phi_plus.json"), "--angles", "1", "2"}).code == 2);
    CHECK(run_cli({"bell-max", data("phi_plus.json"), "--restarts", "0"}).code == 2);

    const auto malformed = run_cli({"check", "-"}, "{\"dim\": 1,\n \"re\": [[1]] oops}");
    CHECK(malformed.code == 2);
    CHECK(malformed.err.find("line 2") != std::string::npos);

    CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("installed binary", "[cli]") {
    const std::string cmd = std::string(QBELL_EXE) + " check " + data("phi_plus.json") + " > /dev/null";
    CHECK(std::system(cmd.c_str()) == 0);
}
