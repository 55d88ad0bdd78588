#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qbell/block_partition.hpp"
#include "qbell/channels.hpp"
#include "qbell/density.hpp"
#include "qbell/errors.hpp"

namespace qbell {

inline constexpr double kEntropyTol = 1e-9;

/// −Σ λ ln λ in nats, with 0·ln 0 = 0. Slightly negative eigenvalues admitted by
/// validation are treated as zero.
inline double entropy_of_spectrum(std::span<const double> eigenvalues) {
    double s = 0.0;
    for (double l : eigenvalues)
        if (l > 0.0) s -= l * std::log(l);
    return s;
}

inline double von_neumann(const DensityMatrix& rho) { return entropy_of_spectrum(rho.spectrum()); }

struct EntropyReport {
    double s_joint = 0.0;
    double s_first = 0.0;
    double s_second = 0.0;
    double mutual_information = 0.0;  // s_first + s_second − s_joint
    bool subadditivity_holds = false;
    bool araki_lieb_holds = false;
    double slack_sub = 0.0;  // == mutual_information
    double slack_al = 0.0;   // s_joint − |s_first − s_second|
};

/// Entropies of ρ and of both block-trace images, with both inequality verdicts.
inline EntropyReport entropy_report(const DensityMatrix& rho, BlockPartition p, double tol = kEntropyTol) {
    p.require_dim(rho.dim(), "entropy_report");
    EntropyReport r;
    r.s_joint = von_neumann(rho);
    r.s_first = von_neumann(block_trace_first(rho, p));
    r.s_second = von_neumann(block_trace_second(rho, p));
    r.mutual_information = r.s_first + r.s_second - r.s_joint;
    r.slack_sub = r.mutual_information;
    r.slack_al = r.s_joint - std::abs(r.s_first - r.s_second);
    r.subadditivity_holds = r.s_joint <= r.s_first + r.s_second + tol;
    r.araki_lieb_holds = r.s_joint >= std::abs(r.s_first - r.s_second) - tol;
    return r;
}

/// S(ρ) <= S(ρ(1)) + S(ρ(2)).
inline EntropyReport check_subadditivity(const DensityMatrix& rho, BlockPartition p, double tol = kEntropyTol) {
    return entropy_report(rho, p, tol);
}

/// S(ρ) >= |S(ρ(1)) − S(ρ(2))|.
inline EntropyReport check_araki_lieb(const DensityMatrix& rho, BlockPartition p, double tol = kEntropyTol) {
    return entropy_report(rho, p, tol);
}

/// Kullback–Leibler divergence in nats; `divergent` marks +∞ (support of w1
/// not contained in support of w2), in which case `nats` is meaningless.
struct RelativeEntropy {
    double nats = 0.0;
    bool divergent = false;

    static RelativeEntropy infinite() { return {0.0, true}; }
};

inline constexpr double kSupportEps = 1e-12;

inline RelativeEntropy relative_entropy(std::span<const double> w1, std::span<const double> w2) {
    if (w1.size() != w2.size()) {
        throw InvalidArgument("relative_entropy: length mismatch " + std::to_string(w1.size()) + " vs " +
                              std::to_string(w2.size()));
    }
    auto check = [](std::span<const double> w, const char* name) {
        double sum = 0.0;
        for (double x : w) {
            if (!(x >= 0.0)) throw InvalidArgument(std::string("relative_entropy: negative entry in ") + name);
            sum += x;
        }
        if (std::abs(sum - 1.0) > 1e-9) {
            throw InvalidArgument(std::string("relative_entropy: ") + name + " sums to " + std::to_string(sum));
        }
    };
    check(w1, "w1");
    check(w2, "w2");

    double d = 0.0;
    for (std::size_t i = 0; i < w1.size(); ++i) {
        if (w1[i] <= 0.0) continue;
        if (w2[i] <= kSupportEps) {
            if (w1[i] > kSupportEps) return RelativeEntropy::infinite();
            continue;
        }
        d += w1[i] * std::log(w1[i] / w2[i]);
    }
    return {d, false};
}

}  // namespace qbell
