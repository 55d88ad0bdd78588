#include <catch_amalgamated.hpp>

#include "qbell/channels.hpp"
#include "qbell/density.hpp"
#include "test_support.hpp"

using namespace qbell;

namespace {

// 1-based element access, matching the written form ρ_jk.
Complex at(const ComplexMatrix& m, int j, int k) { return m(static_cast<std::size_t>(j - 1), static_cast<std::size_t>(k - 1)); }

}  // namespace

TEST_CASE("block_trace_first", "[channels]") {
    SECTION("two-qubit partial trace, written out") {
        Rng rng(31);
        const auto rho = testing::random_state(rng, 4);
        const auto r1 = block_trace_first(rho, {2, 2});
        CHECK(std::abs(r1(0, 0) - (at(rho, 1, 1) + at(rho, 2, 2))) <= 1e-15);
        CHECK(std::abs(r1(0, 1) - (at(rho, 1, 3) + at(rho, 2, 4))) <= 1e-15);
        CHECK(std::abs(r1(1, 0) - (at(rho, 3, 1) + at(rho, 4, 2))) <= 1e-15);
        CHECK(std::abs(r1(1, 1) - (at(rho, 3, 3) + at(rho, 4, 4))) <= 1e-15);
    }

    SECTION("maximally mixed") {
        CHECK(block_trace_first(maximally_mixed(4), {2, 2}).matrix() == ComplexMatrix::diagonal({0.5, 0.5}));
    }

    SECTION("Φ+-like matrix") {
        CHECK(block_trace_first(validate(phi_plus_matrix()), {2, 2}).matrix() == ComplexMatrix::diagonal({0.5, 0.5}));
    }

    SECTION("dimension mismatch") {
        CHECK_THROWS_AS(block_trace_first(maximally_mixed(4), {2, 3}), InvalidArgument);
        CHECK_THROWS_AS(block_trace_first(maximally_mixed(4), {4, 0}), InvalidArgument);
    }
}

TEST_CASE("block_trace_second", "[channels]") {
    SECTION("two-qubit partial trace, written out") {
        Rng rng(32);
        const auto rho = testing::random_state(rng, 4);
        const auto r2 = block_trace_second(rho, {2, 2});
        CHECK(std::abs(r2(0, 0) - (at(rho, 1, 1) + at(rho, 3, 3))) <= 1e-15);
        CHECK(std::abs(r2(0, 1) - (at(rho, 1, 2) + at(rho, 3, 4))) <= 1e-15);
        CHECK(std::abs(r2(1, 0) - (at(rho, 2, 1) + at(rho, 4, 3))) <= 1e-15);
        CHECK(std::abs(r2(1, 1) - (at(rho, 2, 2) + at(rho, 4, 4))) <= 1e-15);
    }

    SECTION("product state") {
        CHECK(block_trace_second(validate(ComplexMatrix::diagonal({1, 0, 0, 0})), {2, 2}).matrix() ==
              ComplexMatrix::diagonal({1, 0}));
    }

    SECTION("Kronecker products are split exactly") {
        Rng rng(33);
        for (int trial = 0; trial < 200; ++trial) {
            const auto a = random_density_matrix(rng, 2);
            const auto b = random_density_matrix(rng, 3);
            const auto k = kron(a, b);
            CHECK(max_abs_diff(block_trace_first(k, {2, 3}), a) <= 1e-15);
            CHECK(max_abs_diff(block_trace_second(k, {2, 3}), b) <= 1e-15);
        }
    }

    SECTION("dimension mismatch") {
        CHECK_THROWS_AS(block_trace_second(maximally_mixed(6), {2, 2}), InvalidArgument);
    }
}

TEST_CASE("block-trace maps are positive and trace preserving", "[channels][property]") {
    Rng rng(34);
    const std::vector<BlockPartition> partitions{{2, 2}, {2, 3}, {3, 2}, {1, 4}, {4, 1}, {1, 6}, {6, 1}};
    for (int trial = 0; trial < 10000; ++trial) {
        const std::size_t dim = trial % 2 == 0 ? 4 : 6;
        const auto rho = validate(testing::random_state(rng, dim));
        for (const auto& p : partitions) {
            if (p.dim() != dim) continue;
            for (const auto& reduced : {block_trace_first(rho.matrix(), p), block_trace_second(rho.matrix(), p)}) {
                CHECK(std::abs(trace(reduced) - Complex{1.0, 0.0}) <= 1e-12);
                CHECK(hermiticity_defect(reduced) <= 1e-15);
                CHECK(hermitian_eigenvalues(reduced).front() >= -1e-9);
            }
        }
    }
}

TEST_CASE("block-trace maps are linear", "[channels][property]") {
    Rng rng(35);
    for (int trial = 0; trial < 500; ++trial) {
        const auto r1 = testing::random_state(rng, 6);
        const auto r2 = testing::random_state(rng, 6);
        const double alpha = rng.uniform();
        const auto mix = r1 * Complex{alpha, 0} + r2 * Complex{1 - alpha, 0};
        for (const BlockPartition p : {BlockPartition{2, 3}, BlockPartition{3, 2}}) {
            CHECK(max_abs_diff(block_trace_first(mix, p), block_trace_first(r1, p) * Complex{alpha, 0} +
                                                              block_trace_first(r2, p) * Complex{1 - alpha, 0}) <= 1e-12);
            CHECK(max_abs_diff(block_trace_second(mix, p), block_trace_second(r1, p) * Complex{alpha, 0} +
                                                               block_trace_second(r2, p) * Complex{1 - alpha, 0}) <= 1e-12);
        }
    }
}

TEST_CASE("dimension 6 admits two different block readings", "[channels]") {
    Rng rng(36);
    const auto rho = validate(testing::random_state(rng, 6));
    const auto a1 = block_trace_first(rho, {2, 3});
    const auto a2 = block_trace_second(rho, {2, 3});
    const auto b1 = block_trace_first(rho, {3, 2});
    const auto b2 = block_trace_second(rho, {3, 2});
    CHECK(a1.dim() == 2);
    CHECK(a2.dim() == 3);
    CHECK(b1.dim() == 3);
    CHECK(b2.dim() == 2);
    CHECK(max_abs_diff(a1.matrix(), b2.matrix()) > 1e-6);
    CHECK(max_abs_diff(a2.matrix(), b1.matrix()) > 1e-6);
}
