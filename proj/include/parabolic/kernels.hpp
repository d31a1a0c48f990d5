#pragma once

#include <cstddef>
#include <span>

#include "parabolic/sparse.hpp"

// Data-parallel inner loops. Each kernel exists twice: `serial` is the plain
// reference loop kept for testing; `omp` is the OpenMP version used by the
// solvers. Reductions in `omp` sum fixed-size blocks in index order and then
// add the block partials serially, so results do not depend on the thread
// count.
namespace parabolic::kernels {

inline constexpr std::size_t kReductionBlock = 2048;

namespace serial {

double dot(std::span<const double> a, std::span<const double> b);
double max_abs(std::span<const double> a);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void axpby(double alpha, std::span<const double> x, double beta, std::span<double> y);
void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y);

} // namespace serial

namespace omp {

double dot(std::span<const double> a, std::span<const double> b);
double max_abs(std::span<const double> a);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void axpby(double alpha, std::span<const double> x, double beta, std::span<double> y);
void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y);

} // namespace omp

using omp::axpby;
using omp::axpy;
using omp::dot;
using omp::max_abs;
using omp::spmv;

} // namespace parabolic::kernels
