#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qbell/block_partition.hpp"
#include "qbell/errors.hpp"
#include "qbell/linalg.hpp"
#include "qbell/random.hpp"

namespace qbell {

struct ValidationTolerances {
    double hermiticity = 1e-10;  // ‖ρ − ρ†‖_max
    double trace = 1e-10;        // |Tr ρ − 1|
    double psd = 1e-9;           // smallest admissible eigenvalue is −psd
};

/// Hermitian, unit-trace, positive-semidefinite matrix. Only `validate` makes one,
/// so holding a DensityMatrix means the three invariants were checked. The
/// spectrum computed during validation is kept.
class DensityMatrix {
public:
    std::size_t dim() const noexcept { return mat_.rows(); }
    const ComplexMatrix& matrix() const noexcept { return mat_; }
    /// Eigenvalues, ascending.
    const std::vector<double>& spectrum() const noexcept { return spectrum_; }

    const Complex& operator()(std::size_t r, std::size_t c) const { return mat_(r, c); }

private:
    DensityMatrix(ComplexMatrix mat, std::vector<double> spectrum)
        : mat_(std::move(mat)), spectrum_(std::move(spectrum)) {}

    friend DensityMatrix validate(ComplexMatrix mat, const ValidationTolerances& tol);

    ComplexMatrix mat_;
    std::vector<double> spectrum_;
};

inline DensityMatrix validate(ComplexMatrix mat, const ValidationTolerances& tol = {}) {
    if (!mat.is_square() || mat.rows() == 0) {
        throw InvalidArgument("validate: density matrix must be square and non-empty, got " +
                              std::to_string(mat.rows()) + "x" + std::to_string(mat.cols()));
    }
    const double herm = hermiticity_defect(mat);
    if (herm > tol.hermiticity) {
        throw HermiticityError("hermiticity violated: ‖ρ − ρ†‖_max = " + std::to_string(herm), herm);
    }
    const double trace_dev = std::abs(trace(mat) - Complex{1.0, 0.0});
    if (trace_dev > tol.trace) {
        throw TraceError("unit trace violated: |Tr ρ − 1| = " + std::to_string(trace_dev), trace_dev);
    }
    auto spectrum = hermitian_eigenvalues(mat, tol.hermiticity);
    if (spectrum.front() < -tol.psd) {
        throw NegativeEigenvalueError("negative eigenvalue " + std::to_string(spectrum.front()) +
                                          " below −" + std::to_string(tol.psd),
                                      spectrum.front());
    }
    return DensityMatrix(std::move(mat), std::move(spectrum));
}

inline DensityMatrix maximally_mixed(std::size_t dim) {
    return validate(ComplexMatrix::identity(dim) * Complex{1.0 / static_cast<double>(dim), 0.0});
}

/// ½[[1,0,0,1],[0,0,0,0],[0,0,0,0],[1,0,0,1]]: the pure state (|1⟩ + |4⟩)/√2,
/// i.e. (|3/2⟩ + |−3/2⟩)/√2 for the j = 3/2 qudit.
inline ComplexMatrix phi_plus_matrix() {
    ComplexMatrix m(4, 4);
    m(0, 0) = m(0, 3) = m(3, 0) = m(3, 3) = 0.5;
    return m;
}

// ---------------------------------------------------------------------------
// Index maps between composite labels and linear indices 1..4.
//
// Labels are spin projections stored doubled so they stay integral:
// (1/2, −1/2) is {1, −1} and −3/2 is {−3}.

enum class IndexMapKind { two_qubit, qudit_3_2 };

using SpinLabel = std::vector<int>;

class IndexMap {
public:
    static IndexMap two_qubit() {
        return IndexMap(IndexMapKind::two_qubit, {SpinLabel{1, 1}, SpinLabel{1, -1}, SpinLabel{-1, 1}, SpinLabel{-1, -1}});
    }

    static IndexMap qudit_3_2() {
        return IndexMap(IndexMapKind::qudit_3_2, {SpinLabel{3}, SpinLabel{1}, SpinLabel{-1}, SpinLabel{-3}});
    }

    static IndexMap of(IndexMapKind kind) {
        return kind == IndexMapKind::two_qubit ? two_qubit() : qudit_3_2();
    }

    IndexMapKind kind() const noexcept { return kind_; }
    std::size_t size() const noexcept { return backward_.size(); }

    /// 1-based linear index of a label.
    int to_index(const SpinLabel& label) const {
        auto it = forward_.find(label);
        if (it == forward_.end()) throw InvalidArgument("index map: unknown label " + describe(label));
        return it->second;
    }

    SpinLabel to_label(int index) const {
        if (index < 1 || static_cast<std::size_t>(index) > backward_.size()) {
            throw InvalidArgument("index map: index " + std::to_string(index) + " outside 1.." +
                                  std::to_string(backward_.size()));
        }
        return backward_[static_cast<std::size_t>(index - 1)];
    }

    static std::string describe(const SpinLabel& label) {
        std::string s = "(";
        for (std::size_t i = 0; i < label.size(); ++i) {
            if (i) s += ", ";
            const int twice = label[i];
            s += (twice % 2 == 0) ? std::to_string(twice / 2) : std::to_string(twice) + "/2";
        }
        return s + ")";
    }

private:
    IndexMap(IndexMapKind kind, std::vector<SpinLabel> labels) : kind_(kind), backward_(std::move(labels)) {
        for (std::size_t i = 0; i < backward_.size(); ++i) forward_[backward_[i]] = static_cast<int>(i + 1);
    }

    IndexMapKind kind_;
    std::vector<SpinLabel> backward_;
    std::map<SpinLabel, int> forward_;
};

inline int label_to_index(const IndexMap& map, const SpinLabel& label) { return map.to_index(label); }
inline SpinLabel index_to_label(const IndexMap& map, int index) { return map.to_label(index); }

// ---------------------------------------------------------------------------

/// Places a qutrit density matrix in the top-left 3x3 block of a 4x4 matrix;
/// the fourth row and column are zero.
inline DensityMatrix embed_qutrit(const DensityMatrix& rho3) {
    if (rho3.dim() != 3) {
        throw InvalidArgument("embed_qutrit: expected a 3x3 density matrix, got dimension " +
                              std::to_string(rho3.dim()));
    }
    ComplexMatrix out(4, 4);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) out(i, j) = rho3(i, j);
    return validate(std::move(out));
}

/// Transpose of the second factor: each m x m block is transposed in place.
inline ComplexMatrix partial_transpose(const ComplexMatrix& rho, BlockPartition p = {2, 2}) {
    if (!rho.is_square()) throw InvalidArgument("partial_transpose: matrix is not square");
    p.require_dim(rho.rows(), "partial_transpose");
    ComplexMatrix out(rho.rows(), rho.cols());
    for (std::size_t bi = 0; bi < p.n; ++bi)
        for (std::size_t bj = 0; bj < p.n; ++bj)
            for (std::size_t i = 0; i < p.m; ++i)
                for (std::size_t j = 0; j < p.m; ++j)
                    out(bi * p.m + i, bj * p.m + j) = rho(bi * p.m + j, bj * p.m + i);
    return out;
}

inline ComplexMatrix partial_transpose(const DensityMatrix& rho, BlockPartition p = {2, 2}) {
    return partial_transpose(rho.matrix(), p);
}

// ---------------------------------------------------------------------------
// Separable constructions Σ p_n ρ⁽ⁿ⁾(1) ⊗ ρ⁽ⁿ⁾(2).

struct ProductTerm {
    double weight = 0.0;
    ComplexMatrix first;   // 2x2 density matrix
    ComplexMatrix second;  // 2x2 density matrix
};

/// Explicit separable decomposition: the witness that a matrix is separable.
struct SeparableDecomposition {
    std::vector<ProductTerm> terms;

    ComplexMatrix compose() const {
        if (terms.empty()) throw InvalidArgument("SeparableDecomposition: no terms");
        const std::size_t d = terms.front().first.rows() * terms.front().second.rows();
        ComplexMatrix out(d, d);
        for (const auto& t : terms) out += kron(t.first, t.second) * Complex{t.weight, 0.0};
        return out;
    }
};

/// Random separable decomposition, deterministic in `seed`. Each factor is a
/// random 2x2 density matrix; about half of them are pure, so products of pure
/// states (where the separable Bell bound is attained) are well represented.
inline SeparableDecomposition separable_decomposition(std::uint64_t seed, std::size_t terms) {
    if (terms < 1) throw InvalidArgument("separable_sample: terms must be >= 1");
    Rng rng(derive_seed(seed, 0x5E9A));
    SeparableDecomposition dec;
    const auto weights = random_probability_vector(rng, terms);
    for (std::size_t t = 0; t < terms; ++t) {
        ProductTerm term;
        term.weight = weights[t];
        term.first = random_density_matrix(rng, 2, rng.uniform() < 0.5 ? 1 : 2);
        term.second = random_density_matrix(rng, 2, rng.uniform() < 0.5 ? 1 : 2);
        dec.terms.push_back(std::move(term));
    }
    return dec;
}

inline DensityMatrix separable_sample(std::uint64_t seed, std::size_t terms) {
    return validate(separable_decomposition(seed, terms).compose());
}

}  // namespace qbell
