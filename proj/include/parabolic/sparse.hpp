#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/SparseCore>

namespace parabolic {

/// Compressed sparse row matrix with sorted, duplicate-free columns per row.
struct CsrMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::size_t> row_ptr{0};
    std::vector<std::size_t> col_idx;
    std::vector<double> values;

    std::size_t nnz() const noexcept { return values.size(); }
    /// Entry (r, c) or 0 when not stored.
    double at(std::size_t r, std::size_t c) const noexcept;
};

struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
};

/// Sums duplicates. Explicit zeros produced by cancellation are kept so the
/// sparsity pattern depends only on the stencil, not on coefficient values.
CsrMatrix build_csr(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets);

CsrMatrix transpose(const CsrMatrix& a);

/// alpha * a + beta * b (patterns merged).
CsrMatrix add(const CsrMatrix& a, const CsrMatrix& b, double alpha = 1.0, double beta = 1.0);

CsrMatrix identity_csr(std::size_t n);

Eigen::SparseMatrix<double> to_eigen(const CsrMatrix& a);

} // namespace parabolic
