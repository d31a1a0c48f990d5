#include <doctest.h>

#include <cmath>
#include <vector>

#include <omp.h>

#include "parabolic/kernels.hpp"
#include "parabolic/sparse.hpp"
#include "support.hpp"

using namespace parabolic;
using testsupport::Gen;

namespace {

CsrMatrix random_csr(Gen& gen, std::size_t rows, std::size_t cols, int per_row)
{
    std::vector<Triplet> t;
    for (std::size_t r = 0; r < rows; ++r)
        for (int k = 0; k < per_row; ++k)
            t.push_back({r, static_cast<std::size_t>(gen.integer(0, static_cast<int>(cols) - 1)), gen.uniform(-1, 1)});
    return build_csr(rows, cols, std::move(t));
}

} // namespace

TEST_CASE("build_csr sums duplicates and sorts columns")
{
    auto a = build_csr(2, 3, {{0, 2, 1.0}, {0, 0, 2.0}, {0, 2, 3.0}, {1, 1, -1.0}, {1, 1, 1.0}});
    CHECK(a.at(0, 0) == 2.0);
    CHECK(a.at(0, 2) == 4.0);
    CHECK(a.at(1, 1) == 0.0);
    CHECK(a.nnz() == 3); // cancellation keeps the explicit zero
    CHECK(a.col_idx[0] == 0);
    CHECK(a.col_idx[1] == 2);
}

TEST_CASE("transpose, add and eigen conversion against dense oracles")
{
    Gen gen(11);
    const auto a = random_csr(gen, 17, 23, 4);
    const auto b = random_csr(gen, 17, 23, 3);
    const auto at = transpose(a);
    const auto sum = add(a, b, 2.0, -0.5);
    const auto e = to_eigen(a);
    for (std::size_t r = 0; r < 17; ++r)
        for (std::size_t c = 0; c < 23; ++c) {
            CHECK(at.at(c, r) == a.at(r, c));
            CHECK(sum.at(r, c) == doctest::Approx(2.0 * a.at(r, c) - 0.5 * b.at(r, c)));
            CHECK(e.coeff(static_cast<int>(r), static_cast<int>(c)) == a.at(r, c));
        }
    const auto att = transpose(at);
    CHECK(att.values == a.values);
    CHECK(att.col_idx == a.col_idx);
}

TEST_CASE("omp kernels agree with the serial reference")
{
    Gen gen(5);
    for (std::size_t n : {1ul, 7ul, 2047ul, 2048ul, 2049ul, 100000ul}) {
        const auto x = gen.vector(n);
        const auto y = gen.vector(n);
        CHECK(kernels::omp::dot(x, y) == doctest::Approx(kernels::serial::dot(x, y)).epsilon(1e-12));
        CHECK(kernels::omp::max_abs(x) == kernels::serial::max_abs(x));
        auto y1 = y, y2 = y;
        kernels::serial::axpy(0.3, x, y1);
        kernels::omp::axpy(0.3, x, y2);
        CHECK(y1 == y2);
        kernels::serial::axpby(0.3, x, -2.0, y1);
        kernels::omp::axpby(0.3, x, -2.0, y2);
        CHECK(y1 == y2);
    }
    const auto a = random_csr(gen, 3000, 3000, 7);
    const auto x = gen.vector(3000);
    std::vector<double> y1(3000), y2(3000);
    kernels::serial::spmv(a, x, y1);
    kernels::omp::spmv(a, x, y2);
    CHECK(y1 == y2);
}

TEST_CASE("omp reductions do not depend on the thread count")
{
    Gen gen(9);
    const auto x = gen.vector(123457);
    const auto y = gen.vector(123457);
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const double d1 = kernels::omp::dot(x, y);
    omp_set_num_threads(4);
    const double d4 = kernels::omp::dot(x, y);
    omp_set_num_threads(3);
    const double d3 = kernels::omp::dot(x, y);
    omp_set_num_threads(saved);
    CHECK(d1 == d4);
    CHECK(d1 == d3);
}
