#pragma once

// Seeded, platform-independent random generation.
//
// std::mt19937_64 has a fully specified output sequence, but the standard
// distributions do not, so uniforms and normals are derived here by hand:
// uniform = top 53 bits / 2^53, normal = Box–Muller on two uniforms.
// Independent streams are keyed with splitmix64(seed ^ stream-mix).

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "qbell/linalg.hpp"

namespace qbell {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed of the `stream`-th independent substream of `seed`.
inline constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632BE59BD9B4E019ULL));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static Rng stream(std::uint64_t seed, std::uint64_t index) { return Rng(derive_seed(seed, index)); }

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(angle);
        has_spare_ = true;
        return r * std::cos(angle);
    }

    Complex complex_normal() {
        const double re = normal();
        const double im = normal();
        return {re, im};
    }

    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// rows x cols matrix with independent standard complex normal entries.
inline ComplexMatrix ginibre(Rng& rng, std::size_t rows, std::size_t cols) {
    ComplexMatrix g(rows, cols);
    for (auto& z : g.entries()) z = rng.complex_normal();
    return g;
}

/// Haar-distributed unitary: Gram–Schmidt on the columns of a Ginibre matrix.
inline ComplexMatrix random_unitary(Rng& rng, std::size_t n) {
    ComplexMatrix q = ginibre(rng, n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t k = 0; k < j; ++k) {
                Complex dot{0.0, 0.0};
                for (std::size_t i = 0; i < n; ++i) dot += std::conj(q(i, k)) * q(i, j);
                for (std::size_t i = 0; i < n; ++i) q(i, j) -= dot * q(i, k);
            }
        }
        double norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) norm += std::norm(q(i, j));
        norm = std::sqrt(norm);
        for (std::size_t i = 0; i < n; ++i) q(i, j) /= norm;
    }
    return q;
}

/// G·G† / Tr(G·G†) with G an n x rank Ginibre matrix; rank defaults to full.
inline ComplexMatrix random_density_matrix(Rng& rng, std::size_t n, std::size_t rank = 0) {
    if (rank == 0) rank = n;
    const ComplexMatrix g = ginibre(rng, n, rank);
    ComplexMatrix rho = matmul(g, adjoint(g));
    const double tr = trace(rho).real();
    rho *= Complex{1.0 / tr, 0.0};
    // Symmetrize away rounding so the result is exactly Hermitian.
    for (std::size_t i = 0; i < n; ++i) {
        rho(i, i) = rho(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j) rho(j, i) = std::conj(rho(i, j));
    }
    return rho;
}

/// Hermitian matrix with standard normal real diagonal and complex normal upper triangle.
inline ComplexMatrix random_hermitian(Rng& rng, std::size_t n) {
    ComplexMatrix h(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        h(i, i) = rng.normal();
        for (std::size_t j = i + 1; j < n; ++j) {
            h(i, j) = rng.complex_normal();
            h(j, i) = std::conj(h(i, j));
        }
    }
    return h;
}

/// Probability vector from normalized exponential draws (flat Dirichlet).
inline std::vector<double> random_probability_vector(Rng& rng, std::size_t n) {
    std::vector<double> p(n);
    double total = 0.0;
    for (auto& x : p) {
        double u = rng.uniform();
        while (u <= 0.0) u = rng.uniform();
        x = -std::log(u);
        total += x;
    }
    for (auto& x : p) x /= total;
    return p;
}

}  // namespace qbell
