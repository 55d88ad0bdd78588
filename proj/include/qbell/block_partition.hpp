#pragma once

#include <cstddef>
#include <string>

#include "qbell/errors.hpp"

namespace qbell {

/// Reading of an N x N matrix as an n x n grid of m x m blocks, N = n·m.
struct BlockPartition {
    std::size_t n = 1;  // outer block count
    std::size_t m = 1;  // block size

    std::size_t dim() const noexcept { return n * m; }

    void require_dim(std::size_t dim, const char* where) const {
        if (n < 1 || m < 1) throw InvalidArgument(std::string(where) + ": partition factors must be >= 1");
        if (n * m != dim) {
            throw InvalidArgument(std::string(where) + ": partition " + std::to_string(n) + "x" +
                                  std::to_string(m) + " does not factor dimension " + std::to_string(dim));
        }
    }

    friend bool operator==(const BlockPartition&, const BlockPartition&) = default;
};

}  // namespace qbell
