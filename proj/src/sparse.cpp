#include "parabolic/sparse.hpp"

#include <algorithm>

namespace parabolic {

double CsrMatrix::at(std::size_t r, std::size_t c) const noexcept
{
    const auto first = col_idx.begin() + static_cast<std::ptrdiff_t>(row_ptr[r]);
    const auto last = col_idx.begin() + static_cast<std::ptrdiff_t>(row_ptr[r + 1]);
    const auto it = std::lower_bound(first, last, c);
    if (it == last || *it != c) return 0.0;
    return values[static_cast<std::size_t>(it - col_idx.begin())];
}

CsrMatrix build_csr(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets)
{
    std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    CsrMatrix m;
    m.rows = rows;
    m.cols = cols;
    m.row_ptr.assign(rows + 1, 0);
    m.col_idx.reserve(triplets.size());
    m.values.reserve(triplets.size());
    std::size_t k = 0;
    for (std::size_t r = 0; r < rows; ++r) {
        m.row_ptr[r] = m.values.size();
        while (k < triplets.size() && triplets[k].row == r) {
            const std::size_t c = triplets[k].col;
            double v = 0.0;
            while (k < triplets.size() && triplets[k].row == r && triplets[k].col == c) {
                v += triplets[k].value;
                ++k;
            }
            m.col_idx.push_back(c);
            m.values.push_back(v);
        }
    }
    m.row_ptr[rows] = m.values.size();
    return m;
}

CsrMatrix transpose(const CsrMatrix& a)
{
    CsrMatrix t;
    t.rows = a.cols;
    t.cols = a.rows;
    t.row_ptr.assign(a.cols + 1, 0);
    for (auto c : a.col_idx) ++t.row_ptr[c + 1];
    for (std::size_t r = 0; r < a.cols; ++r) t.row_ptr[r + 1] += t.row_ptr[r];
    t.col_idx.resize(a.nnz());
    t.values.resize(a.nnz());
    std::vector<std::size_t> next(t.row_ptr.begin(), t.row_ptr.end() - 1);
    // Rows of `a` are visited in order, so columns of each row of `t` come out sorted.
    for (std::size_t r = 0; r < a.rows; ++r) {
        for (std::size_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) {
            const auto dst = next[a.col_idx[k]]++;
            t.col_idx[dst] = r;
            t.values[dst] = a.values[k];
        }
    }
    return t;
}

CsrMatrix add(const CsrMatrix& a, const CsrMatrix& b, double alpha, double beta)
{
    std::vector<Triplet> trip;
    trip.reserve(a.nnz() + b.nnz());
    for (std::size_t r = 0; r < a.rows; ++r) {
        for (std::size_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k)
            trip.push_back({r, a.col_idx[k], alpha * a.values[k]});
        for (std::size_t k = b.row_ptr[r]; k < b.row_ptr[r + 1]; ++k)
            trip.push_back({r, b.col_idx[k], beta * b.values[k]});
    }
    return build_csr(a.rows, a.cols, std::move(trip));
}

CsrMatrix identity_csr(std::size_t n)
{
    std::vector<Triplet> trip;
    trip.reserve(n);
    for (std::size_t i = 0; i < n; ++i) trip.push_back({i, i, 1.0});
    return build_csr(n, n, std::move(trip));
}

Eigen::SparseMatrix<double> to_eigen(const CsrMatrix& a)
{
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(a.nnz());
    for (std::size_t r = 0; r < a.rows; ++r) {
        for (std::size_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k)
            trip.emplace_back(static_cast<int>(r), static_cast<int>(a.col_idx[k]), a.values[k]);
    }
    Eigen::SparseMatrix<double> m(static_cast<int>(a.rows), static_cast<int>(a.cols));
    m.setFromTriplets(trip.begin(), trip.end());
    m.makeCompressed();
    return m;
}

} // namespace parabolic
