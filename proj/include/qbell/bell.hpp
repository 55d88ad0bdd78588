#pragma once

// CHSH Bell number of a 4x4 density matrix read as two artificial qubits.
//
//   B = E(a,b) + E(a,c) + E(d,b) − E(d,c),   E(x,y) = Σ_k s_k Ω(k|x,y)
//
// with outcome signs s = (+1, −1, −1, +1) over (++, +−, −+, −−). Separable
// matrices satisfy |B| <= 2, every density matrix satisfies |B| <= 2√2.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "qbell/density.hpp"
#include "qbell/optimize.hpp"
#include "qbell/tomography.hpp"

namespace qbell {

inline constexpr double kSeparableBound = 2.0;
inline constexpr double kTsirelsonBound = 2.0 * std::numbers::sqrt2;
inline constexpr double kBoundTol = 1e-6;

/// Rows are measurement settings (a,b), (a,c), (d,b), (d,c); columns are
/// outcomes (++, +−, −+, −−). Every row sums to zero.
inline constexpr std::array<std::array<int, 4>, 4> kSignMatrix{{
    {1, -1, -1, 1},
    {1, -1, -1, 1},
    {1, -1, -1, 1},
    {-1, 1, 1, -1},
}};

/// Four measurement directions; a, d act on the first factor, b, c on the second.
struct BellSetting {
    EulerAngles a, b, c, d;

    /// Pairs in sign-matrix row order.
    std::array<std::pair<EulerAngles, EulerAngles>, 4> pairs() const { return {{{a, b}, {a, c}, {d, b}, {d, c}}}; }

    /// Parameter vector (φa, θa, φb, θb, φc, θc, φd, θd).
    std::array<double, 8> to_params() const {
        return {a.phi, a.theta, b.phi, b.theta, c.phi, c.theta, d.phi, d.theta};
    }

    static BellSetting from_params(const std::array<double, 8>& x) {
        return {EulerAngles::direction(x[0], x[1]), EulerAngles::direction(x[2], x[3]),
                EulerAngles::direction(x[4], x[5]), EulerAngles::direction(x[6], x[7])};
    }
};

inline void require_two_qubit_shape(const DensityMatrix& rho, const char* where) {
    if (rho.dim() != 4) {
        throw InvalidArgument(std::string(where) + ": expected a 4x4 density matrix, got dimension " +
                              std::to_string(rho.dim()));
    }
}

/// ⟨m1 m2⟩ along directions d1, d2 with m = ±1.
inline double correlation(const DensityMatrix& rho, const EulerAngles& d1, const EulerAngles& d2) {
    require_two_qubit_shape(rho, "correlation");
    const auto w = joint_tomogram(rho, d1, d2).probs;
    return w[0] - w[1] - w[2] + w[3];
}

inline double bell_number(const DensityMatrix& rho, const BellSetting& s) {
    return correlation(rho, s.a, s.b) + correlation(rho, s.a, s.c) + correlation(rho, s.d, s.b) -
           correlation(rho, s.d, s.c);
}

/// Tomographic probabilities W(k, α) = Ω(k | pair α), outcomes down, settings across.
inline std::array<std::array<double, 4>, 4> tomographic_table(const DensityMatrix& rho, const BellSetting& s) {
    require_two_qubit_shape(rho, "tomographic_table");
    std::array<std::array<double, 4>, 4> w{};
    const auto pairs = s.pairs();
    for (std::size_t alpha = 0; alpha < 4; ++alpha) {
        const auto probs = joint_tomogram(rho, pairs[alpha].first, pairs[alpha].second).probs;
        for (std::size_t k = 0; k < 4; ++k) w[k][alpha] = probs[k];
    }
    return w;
}

/// B = Tr(I·W) with I the sign matrix.
inline double bell_number_trace_form(const DensityMatrix& rho, const BellSetting& s) {
    const auto w = tomographic_table(rho, s);
    double tr = 0.0;
    for (std::size_t j = 0; j < 4; ++j)
        for (std::size_t k = 0; k < 4; ++k) tr += kSignMatrix[j][k] * w[k][j];
    return tr;
}

struct OptimizerStats {
    std::size_t restarts = 0;
    std::size_t evaluations = 0;
    bool converged = false;
};

struct BellReport {
    double value = 0.0;  // |B|
    BellSetting setting;
    bool separable_bound_satisfied = false;
    bool tsirelson_bound_satisfied = false;
    OptimizerStats optimizer_stats;
};

enum class BellClass { within_separable_bound, hidden_bell_correlation, tsirelson_violation_error };

inline std::string_view to_string(BellClass c) {
    switch (c) {
        case BellClass::within_separable_bound: return "within_separable_bound";
        case BellClass::hidden_bell_correlation: return "hidden_bell_correlation";
        case BellClass::tsirelson_violation_error: return "tsirelson_violation_error";
    }
    return "unknown";
}

inline BellClass classify(double abs_value, double tol = kBoundTol) {
    if (abs_value <= kSeparableBound + tol) return BellClass::within_separable_bound;
    if (abs_value <= kTsirelsonBound + tol) return BellClass::hidden_bell_correlation;
    return BellClass::tsirelson_violation_error;
}

inline BellClass classify(const BellReport& report, double tol = kBoundTol) { return classify(report.value, tol); }

inline BellReport make_bell_report(double abs_value, const BellSetting& setting, OptimizerStats stats = {},
                                   double tol = kBoundTol) {
    BellReport r;
    r.value = abs_value;
    r.setting = setting;
    r.separable_bound_satisfied = abs_value <= kSeparableBound + tol;
    r.tsirelson_bound_satisfied = abs_value <= kTsirelsonBound + tol;
    r.optimizer_stats = stats;
    return r;
}

struct BellOptimizerConfig {
    std::size_t restarts = 8;
    std::uint64_t seed = 0;
    std::size_t max_evals = 20000;  // per restart
    double step_tol = 1e-7;
    unsigned threads = 1;
};

namespace detail {

/// |B| straight from the parameter vector, without allocating.
inline double abs_bell_from_params(const ComplexMatrix& rho, const std::vector<double>& x) {
    std::array<std::array<Complex, 4>, 4> u{};
    for (std::size_t i = 0; i < 4; ++i) u[i] = su2_entries(measurement_euler(EulerAngles::direction(x[2 * i], x[2 * i + 1])));
    const auto& ua = u[0];
    const auto& ub = u[1];
    const auto& uc = u[2];
    const auto& ud = u[3];
    auto corr = [&](const std::array<Complex, 4>& u1, const std::array<Complex, 4>& u2) {
        const auto w = joint_probabilities(rho, u1, u2);
        return w[0] - w[1] - w[2] + w[3];
    };
    return std::abs(corr(ua, ub) + corr(ua, uc) + corr(ud, ub) - corr(ud, uc));
}

/// φ uniform on [0, 2π), θ uniform on [0, π].
inline std::vector<double> sample_directions(Rng& rng, std::size_t count) {
    std::vector<double> x(2 * count);
    for (std::size_t i = 0; i < count; ++i) {
        x[2 * i] = rng.uniform(0.0, 2.0 * std::numbers::pi);
        x[2 * i + 1] = rng.uniform(0.0, std::numbers::pi);
    }
    return x;
}

inline MultistartOptions to_multistart(const BellOptimizerConfig& config) {
    MultistartOptions opt;
    opt.restarts = config.restarts;
    opt.seed = config.seed;
    opt.threads = config.threads;
    opt.search.step_tol = config.step_tol;
    opt.search.max_evals = config.max_evals;
    return opt;
}

}  // namespace detail

/// Best |B| over measurement settings, by multistart compass search over the
/// eight direction angles.
inline BellReport maximize_bell(const DensityMatrix& rho, const BellOptimizerConfig& config = {}) {
    require_two_qubit_shape(rho, "maximize_bell");
    if (config.restarts < 1) throw InvalidArgument("maximize_bell: restarts must be >= 1");
    const ComplexMatrix& m = rho.matrix();
    const auto result = multistart_maximize(
        [&m](const std::vector<double>& x) { return detail::abs_bell_from_params(m, x); },
        [](Rng& rng) { return detail::sample_directions(rng, 4); }, detail::to_multistart(config));

    std::array<double, 8> params{};
    std::copy(result.best.x.begin(), result.best.x.end(), params.begin());
    return make_bell_report(result.best.value, BellSetting::from_params(params),
                            {result.restarts, result.evaluations, result.converged});
}

}  // namespace qbell
