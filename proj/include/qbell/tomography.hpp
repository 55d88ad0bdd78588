#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "qbell/density.hpp"
#include "qbell/errors.hpp"
#include "qbell/linalg.hpp"

namespace qbell {

/// SU(2) Euler angles in radians.
struct EulerAngles {
    double phi = 0.0;
    double theta = 0.0;
    double psi = 0.0;

    /// A measurement direction: polar angle θ, azimuth φ.
    static EulerAngles direction(double phi, double theta) { return {phi, theta, 0.0}; }

    friend bool operator==(const EulerAngles&, const EulerAngles&) = default;
};

/// u(φ,θ,ψ) = [[cos(θ/2)e^{i(φ+ψ)/2},   sin(θ/2)e^{i(φ−ψ)/2}],
///             [−sin(θ/2)e^{−i(φ−ψ)/2}, cos(θ/2)e^{−i(φ+ψ)/2}]].
///
/// This factors as Rz(φ)·Ry(θ)·Rz(ψ), so under w = ⟨m|uρu†|m⟩ the left angle φ
/// only contributes a phase and the measured direction is fixed by (θ, ψ).
inline std::array<Complex, 4> su2_entries(const EulerAngles& a) {
    const double c = std::cos(0.5 * a.theta);
    const double s = std::sin(0.5 * a.theta);
    const Complex e_sum = std::polar(1.0, 0.5 * (a.phi + a.psi));
    const Complex e_diff = std::polar(1.0, 0.5 * (a.phi - a.psi));
    return {c * e_sum, s * e_diff, -s * std::conj(e_diff), c * std::conj(e_sum)};
}

inline ComplexMatrix su2(const EulerAngles& a) {
    const auto e = su2_entries(a);
    return ComplexMatrix(2, 2, {e[0], e[1], e[2], e[3]});
}

/// Unitary whose tomogram measures spin along n = (sinθcosφ, sinθsinφ, cosθ).
/// It is su2 with the outer angles exchanged, so the azimuth φ is the rotation
/// applied first and ψ becomes an unobservable phase.
inline EulerAngles measurement_euler(const EulerAngles& a) { return {a.psi, a.theta, a.phi}; }

inline ComplexMatrix measurement_unitary(const EulerAngles& a) { return su2(measurement_euler(a)); }

inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kProbabilityClamp = 1e-12;

/// Outcome probabilities, ordered by the density matrix's index convention.
struct Tomogram {
    std::vector<double> probs;

    double sum() const {
        double s = 0.0;
        for (double p : probs) s += p;
        return s;
    }
};

namespace detail {

inline double clamp_probability(double p) { return (p < 0.0 && p >= -kProbabilityClamp) ? 0.0 : p; }

}  // namespace detail

/// w(k) = (uρu†)_kk.
inline Tomogram tomogram(const DensityMatrix& rho, const ComplexMatrix& u) {
    if (!u.is_square() || u.rows() != rho.dim()) {
        throw InvalidArgument("tomogram: unitary is " + std::to_string(u.rows()) + "x" + std::to_string(u.cols()) +
                              ", density matrix has dimension " + std::to_string(rho.dim()));
    }
    const double defect = unitarity_defect(u);
    if (defect > kUnitaryTol) {
        throw NonUnitaryError("tomogram: ‖u†u − 1‖_max = " + std::to_string(defect), defect);
    }
    const ComplexMatrix rotated = matmul(matmul(u, rho.matrix()), adjoint(u));
    Tomogram t;
    t.probs.reserve(rho.dim());
    for (std::size_t k = 0; k < rho.dim(); ++k) t.probs.push_back(detail::clamp_probability(rotated(k, k).real()));
    return t;
}

namespace detail {

/// Ω(k|u1,u2) = v_k ρ v_k† with v_k = row_i(u1) ⊗ row_j(u2), k = 2i + j.
/// Works on the raw 4x4 entries; this is the optimizer's inner loop.
inline std::array<double, 4> joint_probabilities(const ComplexMatrix& rho, const std::array<Complex, 4>& u1,
                                                 const std::array<Complex, 4>& u2) {
    std::array<double, 4> out{};
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            const std::array<Complex, 4> v{u1[2 * i] * u2[2 * j], u1[2 * i] * u2[2 * j + 1],
                                           u1[2 * i + 1] * u2[2 * j], u1[2 * i + 1] * u2[2 * j + 1]};
            Complex acc{0.0, 0.0};
            for (std::size_t p = 0; p < 4; ++p) {
                Complex row{0.0, 0.0};
                for (std::size_t q = 0; q < 4; ++q) row += rho(p, q) * std::conj(v[q]);
                acc += v[p] * row;
            }
            out[2 * i + j] = clamp_probability(acc.real());
        }
    }
    return out;
}

}  // namespace detail

/// Ω(k|u1,u2) for directions a1 (first factor) and a2 (second factor); outcomes
/// k = 1..4 are (+,+), (+,−), (−,+), (−,−).
inline Tomogram joint_tomogram(const DensityMatrix& rho, const EulerAngles& a1, const EulerAngles& a2) {
    if (rho.dim() != 4) {
        throw InvalidArgument("joint_tomogram: expected a 4x4 density matrix, got dimension " +
                              std::to_string(rho.dim()));
    }
    const auto p = detail::joint_probabilities(rho.matrix(), su2_entries(measurement_euler(a1)),
                                               su2_entries(measurement_euler(a2)));
    return Tomogram{{p.begin(), p.end()}};
}

}  // namespace qbell
