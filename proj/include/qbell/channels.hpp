#pragma once

// The two positive maps ρ → ρ(1), ρ → ρ(2) for a matrix read as an n x n grid
// of m x m blocks. For n = m = 2 they are the two-qubit partial traces.
//
// Block (k, j) occupies rows k·m .. k·m+m−1 and columns j·m .. j·m+m−1.

#include "qbell/block_partition.hpp"
#include "qbell/density.hpp"
#include "qbell/linalg.hpp"

namespace qbell {

/// n x n matrix of block traces: entry (k, j) = Tr ρ_kj.
inline ComplexMatrix block_trace_first(const ComplexMatrix& rho, BlockPartition p) {
    if (!rho.is_square()) throw InvalidArgument("block_trace_first: matrix is not square");
    p.require_dim(rho.rows(), "block_trace_first");
    ComplexMatrix out(p.n, p.n);
    for (std::size_t k = 0; k < p.n; ++k)
        for (std::size_t j = 0; j < p.n; ++j) {
            Complex s{0.0, 0.0};
            for (std::size_t i = 0; i < p.m; ++i) s += rho(k * p.m + i, j * p.m + i);
            out(k, j) = s;
        }
    return out;
}

/// m x m sum of the diagonal blocks: Σ_k ρ_kk.
inline ComplexMatrix block_trace_second(const ComplexMatrix& rho, BlockPartition p) {
    if (!rho.is_square()) throw InvalidArgument("block_trace_second: matrix is not square");
    p.require_dim(rho.rows(), "block_trace_second");
    ComplexMatrix out(p.m, p.m);
    for (std::size_t k = 0; k < p.n; ++k)
        for (std::size_t i = 0; i < p.m; ++i)
            for (std::size_t j = 0; j < p.m; ++j) out(i, j) += rho(k * p.m + i, k * p.m + j);
    return out;
}

inline DensityMatrix block_trace_first(const DensityMatrix& rho, BlockPartition p) {
    return validate(block_trace_first(rho.matrix(), p));
}

inline DensityMatrix block_trace_second(const DensityMatrix& rho, BlockPartition p) {
    return validate(block_trace_second(rho.matrix(), p));
}

}  // namespace qbell
