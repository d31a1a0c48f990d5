#include "parabolic/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace parabolic::kernels {

namespace serial {

double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double max_abs(std::span<const double> a)
{
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y)
{
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void axpby(double alpha, std::span<const double> x, double beta, std::span<double> y)
{
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = alpha * x[i] + beta * y[i];
}

void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y)
{
    for (std::size_t r = 0; r < a.rows; ++r) {
        double s = 0.0;
        for (std::size_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) s += a.values[k] * x[a.col_idx[k]];
        y[r] = s;
    }
}

} // namespace serial

namespace omp {

namespace {

template <class BlockFn>
double blocked_sum(std::size_t n, BlockFn&& fn)
{
    const std::size_t blocks = (n + kReductionBlock - 1) / kReductionBlock;
    std::vector<double> partial(blocks, 0.0);
    const auto nb = static_cast<std::ptrdiff_t>(blocks);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t blk = 0; blk < nb; ++blk) {
        const std::size_t lo = static_cast<std::size_t>(blk) * kReductionBlock;
        const std::size_t hi = std::min(n, lo + kReductionBlock);
        partial[static_cast<std::size_t>(blk)] = fn(lo, hi);
    }
    double s = 0.0;
    for (double p : partial) s += p;
    return s;
}

} // namespace

double dot(std::span<const double> a, std::span<const double> b)
{
    return blocked_sum(a.size(), [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += a[i] * b[i];
        return s;
    });
}

double max_abs(std::span<const double> a)
{
    double m = 0.0;
    const auto n = static_cast<std::ptrdiff_t>(a.size());
#pragma omp parallel for reduction(max : m) schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) m = std::max(m, std::abs(a[static_cast<std::size_t>(i)]));
    return m;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y)
{
    const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] += alpha * x[static_cast<std::size_t>(i)];
}

void axpby(double alpha, std::span<const double> x, double beta, std::span<double> y)
{
    const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        y[k] = alpha * x[k] + beta * y[k];
    }
}

void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y)
{
    const auto rows = static_cast<std::ptrdiff_t>(a.rows);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ri = 0; ri < rows; ++ri) {
        const auto r = static_cast<std::size_t>(ri);
        double s = 0.0;
        for (std::size_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) s += a.values[k] * x[a.col_idx[k]];
        y[r] = s;
    }
}

} // namespace omp

} // namespace parabolic::kernels
