#pragma once

// Bell-type inequalities for an arbitrary Hermitian 4x4 matrix f.
//
// ρ(x) = (f + x·1) / (4x + Tr f) is a density matrix for every x > max_j |f_j|.
// With U⁽¹⁾ = u1⊗u3, U⁽²⁾ = u1⊗u4, U⁽³⁾ = u2⊗u3, U⁽⁴⁾ = u2⊗u4 the row-stochastic
// matrix Ω_αβ(x) = (U⁽α⁾ρ(x)U⁽α⁾†)_ββ contracted with the sign matrix gives the
// Bell number of ρ(x) at directions a = u1, d = u2, b = u3, c = u4.

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "qbell/bell.hpp"
#include "qbell/density.hpp"
#include "qbell/errors.hpp"
#include "qbell/linalg.hpp"
#include "qbell/tomography.hpp"

namespace qbell {

/// Hermitian 4x4 matrix with its spectrum f_j.
class ObservableMatrix {
public:
    explicit ObservableMatrix(ComplexMatrix mat, double herm_tol = kDefaultHermitianTol) : mat_(std::move(mat)) {
        if (mat_.rows() != 4 || mat_.cols() != 4) {
            throw InvalidArgument("ObservableMatrix: expected 4x4, got " + std::to_string(mat_.rows()) + "x" +
                                  std::to_string(mat_.cols()));
        }
        spectrum_ = hermitian_eigenvalues(mat_, herm_tol);
    }

    const ComplexMatrix& matrix() const noexcept { return mat_; }
    const std::vector<double>& spectrum() const noexcept { return spectrum_; }
    double trace() const { return qbell::trace(mat_).real(); }

    double max_abs_eigenvalue() const {
        return std::max(std::abs(spectrum_.front()), std::abs(spectrum_.back()));
    }

private:
    ComplexMatrix mat_;
    std::vector<double> spectrum_;
};

struct UnitaryQuadruple {
    EulerAngles u1, u2, u3, u4;

    /// The equivalent Bell setting: a = u1, d = u2, b = u3, c = u4.
    BellSetting to_setting() const { return {u1, u3, u4, u2}; }

    static UnitaryQuadruple from_setting(const BellSetting& s) { return {s.a, s.d, s.b, s.c}; }

    /// U⁽¹⁾..U⁽⁴⁾.
    std::array<ComplexMatrix, 4> unitaries() const {
        const auto m1 = measurement_unitary(u1);
        const auto m2 = measurement_unitary(u2);
        const auto m3 = measurement_unitary(u3);
        const auto m4 = measurement_unitary(u4);
        return {kron(m1, m3), kron(m1, m4), kron(m2, m3), kron(m2, m4)};
    }
};

using StochasticMatrix = std::array<std::array<double, 4>, 4>;

/// Throws DomainError unless x > max_j |f_j|.
inline void require_admissible_x(const ObservableMatrix& f, double x) {
    const double x_min = f.max_abs_eigenvalue();
    if (!(x > x_min)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "rho_of_x: x = " << x << " is not admissible; x must exceed max|f_j| = " << x_min;
        throw DomainError(msg.str());
    }
}

inline DensityMatrix rho_of_x(const ObservableMatrix& f, double x) {
    require_admissible_x(f, x);
    ComplexMatrix m = f.matrix() + ComplexMatrix::identity(4) * Complex{x, 0.0};
    m *= Complex{1.0 / (4.0 * x + f.trace()), 0.0};
    return validate(std::move(m));
}

/// (U M U†)_ββ for each β, without clamping.
inline std::array<double, 4> rotated_diagonal(const ComplexMatrix& m, const ComplexMatrix& u) {
    const ComplexMatrix r = matmul(matmul(u, m), adjoint(u));
    return {r(0, 0).real(), r(1, 1).real(), r(2, 2).real(), r(3, 3).real()};
}

/// Σ_{α,β} I[α][β]·Ω[α][β], α the setting and β the outcome.
inline double sign_contraction(const StochasticMatrix& omega) {
    double s = 0.0;
    for (std::size_t alpha = 0; alpha < 4; ++alpha)
        for (std::size_t beta = 0; beta < 4; ++beta) s += kSignMatrix[alpha][beta] * omega[alpha][beta];
    return s;
}

/// Row α is the tomogram of ρ(x) under U⁽α⁾.
inline StochasticMatrix stochastic_omega(const ObservableMatrix& f, double x, const UnitaryQuadruple& q) {
    const DensityMatrix rho = rho_of_x(f, x);
    const auto us = q.unitaries();
    StochasticMatrix omega{};
    for (std::size_t alpha = 0; alpha < 4; ++alpha) {
        const auto t = tomogram(rho, us[alpha]).probs;
        std::copy(t.begin(), t.end(), omega[alpha].begin());
    }
    return omega;
}

inline double appendix_bell_value(const ObservableMatrix& f, double x, const UnitaryQuadruple& q) {
    return std::abs(sign_contraction(stochastic_omega(f, x, q)));
}

struct ObservableBoundReport {
    double value = 0.0;
    double bound = 0.0;
    bool holds = false;
};

/// |Σ I (U⁽α⁾ f U⁽α⁾†)_ββ| <= 2√2·Tr f for positive-definite f.
inline ObservableBoundReport observable_bound_check(const ObservableMatrix& f, const UnitaryQuadruple& q) {
    std::vector<double> offending;
    for (double fj : f.spectrum())
        if (!(fj > 0.0)) offending.push_back(fj);
    if (!offending.empty()) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "observable_bound_check: spectrum must be strictly positive; offending f_j:";
        for (double v : offending) msg << ' ' << v;
        throw DomainError(msg.str());
    }
    const auto us = q.unitaries();
    StochasticMatrix rows{};
    for (std::size_t alpha = 0; alpha < 4; ++alpha) rows[alpha] = rotated_diagonal(f.matrix(), us[alpha]);
    ObservableBoundReport r;
    r.value = std::abs(sign_contraction(rows));
    r.bound = kTsirelsonBound * f.trace();
    r.holds = r.value <= r.bound + 1e-9 * std::max(1.0, f.trace());
    return r;
}

/// |Σ I (U⁽α⁾ f U⁽α⁾†)_ββ| <= 2 for f given by an explicit separable decomposition.
/// Only a decomposition is accepted; separability of a bare matrix is never decided.
inline ObservableBoundReport separable_observable_check(const SeparableDecomposition& witness,
                                                        const UnitaryQuadruple& q) {
    double total = 0.0;
    for (const auto& t : witness.terms) {
        if (t.weight < 0.0 || t.weight > 1.0) throw InvalidArgument("separable witness: weight outside [0, 1]");
        if (t.first.rows() != 2 || t.second.rows() != 2) throw InvalidArgument("separable witness: factors must be 2x2");
        validate(t.first);
        validate(t.second);
        total += t.weight;
    }
    if (std::abs(total - 1.0) > 1e-10) throw InvalidArgument("separable witness: weights do not sum to 1");

    const ComplexMatrix f = witness.compose();
    const auto us = q.unitaries();
    StochasticMatrix rows{};
    for (std::size_t alpha = 0; alpha < 4; ++alpha) rows[alpha] = rotated_diagonal(f, us[alpha]);
    ObservableBoundReport r;
    r.value = std::abs(sign_contraction(rows));
    r.bound = kSeparableBound;
    r.holds = r.value <= kSeparableBound + 1e-9;
    return r;
}

struct AppendixMaximum {
    double value = 0.0;
    UnitaryQuadruple quadruple;
    OptimizerStats optimizer_stats;
};

/// Best appendix_bell_value over quadruples. The value equals the Bell number
/// of ρ(x), so this is the Bell optimizer applied to ρ(x).
inline AppendixMaximum maximize_appendix(const ObservableMatrix& f, double x, const BellOptimizerConfig& config = {}) {
    const auto report = maximize_bell(rho_of_x(f, x), config);
    return {report.value, UnitaryQuadruple::from_setting(report.setting), report.optimizer_stats};
}

}  // namespace qbell
