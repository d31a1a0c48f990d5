#include "parabolic/linear_solver.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/SparseLU>

#include "parabolic/errors.hpp"
#include "parabolic/kernels.hpp"

namespace parabolic {

struct StepSystem::Factor {
    Eigen::SparseMatrix<double> a;
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
};

namespace {

std::vector<double> inverse_diagonal(const CsrMatrix& a)
{
    std::vector<double> d(a.rows, 1.0);
    for (std::size_t r = 0; r < a.rows; ++r) {
        const double v = a.at(r, r);
        d[r] = v != 0.0 ? 1.0 / v : 1.0;
    }
    return d;
}

} // namespace

StepSystem::StepSystem(const CsrMatrix& k, double dt, double theta, const LinearSolverOptions& options)
    : theta_(theta), options_(options)
{
    if (!(theta > 0.0 && theta <= 1.0)) throw LabError(ErrorKind::ConfigError, "theta must lie in (0, 1]");
    const auto id = identity_csr(k.rows);
    m_ = add(id, k, 1.0, theta * dt);
    mt_ = transpose(m_);
    if (theta < 1.0) {
        explicit_ = add(id, k, 1.0, -(1.0 - theta) * dt);
        explicit_t_ = transpose(explicit_);
    }
    if (options_.kind == LinearSolverKind::direct) {
        factor_ = std::make_unique<Factor>();
        factor_->a = to_eigen(m_);
        factor_->lu.analyzePattern(factor_->a);
        factor_->lu.factorize(factor_->a);
        if (factor_->lu.info() != Eigen::Success)
            throw LabError(ErrorKind::LinearSolveFailure, "sparse LU factorisation failed: " + factor_->lu.lastErrorMessage());
    } else {
        inv_diag_ = inverse_diagonal(m_);
        inv_diag_t_ = inverse_diagonal(mt_);
    }
}

StepSystem::~StepSystem() = default;
StepSystem::StepSystem(StepSystem&&) noexcept = default;
StepSystem& StepSystem::operator=(StepSystem&&) noexcept = default;

SolveInfo StepSystem::finish(const CsrMatrix& a, std::span<const double> rhs, std::span<const double> x,
                             int iters) const
{
    std::vector<double> r(rhs.size());
    kernels::spmv(a, x, r);
    kernels::axpby(1.0, rhs, -1.0, r);
    const double bn = std::sqrt(kernels::dot(rhs, rhs));
    const double rn = std::sqrt(kernels::dot(r, r));
    SolveInfo info{bn > 0.0 ? rn / bn : rn, iters};
    if (!(info.relative_residual <= options_.tolerance)) {
        std::ostringstream os;
        os << "relative residual " << info.relative_residual << " exceeds " << options_.tolerance << " after "
           << iters << " iterations";
        throw LabError(ErrorKind::LinearSolveFailure, os.str());
    }
    return info;
}

int StepSystem::bicgstab(const CsrMatrix& a, const std::vector<double>& inv_diag, std::span<const double> rhs,
                         std::span<double> x) const
{
    namespace k = kernels;
    const std::size_t n = rhs.size();
    const double bn = std::sqrt(k::dot(rhs, rhs));
    if (bn == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        return 0;
    }
    std::vector<double> r(n), r0(n), p(n, 0.0), v(n, 0.0), s(n), t(n), ph(n), sh(n);
    k::spmv(a, x, r);
    k::axpby(1.0, rhs, -1.0, r);
    r0 = r;
    double rho = 1.0, alpha = 1.0, omega = 1.0;
    double best = std::sqrt(k::dot(r, r)) / bn;
    int stalled = 0;
    int it = 0;
    for (; it < options_.max_iterations && best > options_.iterative_target; ++it) {
        const double rho_new = k::dot(r0, r);
        if (rho_new == 0.0) break;
        const double beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        // p = r + beta (p - omega v)
        k::axpy(-omega, v, p);
        k::axpby(1.0, r, beta, p);
        for (std::size_t i = 0; i < n; ++i) ph[i] = inv_diag[i] * p[i];
        k::spmv(a, ph, v);
        const double r0v = k::dot(r0, v);
        if (r0v == 0.0) break;
        alpha = rho / r0v;
        s = r;
        k::axpy(-alpha, v, s);
        for (std::size_t i = 0; i < n; ++i) sh[i] = inv_diag[i] * s[i];
        k::spmv(a, sh, t);
        const double tt = k::dot(t, t);
        omega = tt > 0.0 ? k::dot(t, s) / tt : 0.0;
        k::axpy(alpha, ph, x);
        k::axpy(omega, sh, x);
        r = s;
        k::axpy(-omega, t, r);
        const double rel = std::sqrt(k::dot(r, r)) / bn;
        if (rel < best) {
            best = rel;
            stalled = 0;
        } else if (++stalled >= 20 && best <= options_.tolerance) {
            ++it;
            break;
        }
        if (omega == 0.0) break;
    }
    return it;
}

SolveInfo StepSystem::solve(std::span<const double> rhs, std::span<double> x) const
{
    if (factor_) {
        Eigen::Map<const Eigen::VectorXd> b(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
        Eigen::Map<Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size())) = factor_->lu.solve(b);
        return finish(m_, rhs, x, 1);
    }
    std::copy(rhs.begin(), rhs.end(), x.begin());
    const int it = bicgstab(m_, inv_diag_, rhs, x);
    return finish(m_, rhs, x, it);
}

SolveInfo StepSystem::solve_transpose(std::span<const double> rhs, std::span<double> x) const
{
    if (factor_) {
        Eigen::Map<const Eigen::VectorXd> b(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
        Eigen::Map<Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size())) = factor_->lu.transpose().solve(b);
        return finish(mt_, rhs, x, 1);
    }
    std::copy(rhs.begin(), rhs.end(), x.begin());
    const int it = bicgstab(mt_, inv_diag_t_, rhs, x);
    return finish(mt_, rhs, x, it);
}

void StepSystem::apply_explicit(std::span<const double> x, std::span<double> y) const
{
    if (theta_ < 1.0) {
        kernels::spmv(explicit_, x, y);
    } else {
        std::copy(x.begin(), x.end(), y.begin());
    }
}

void StepSystem::apply_explicit_transpose(std::span<const double> x, std::span<double> y) const
{
    if (theta_ < 1.0) {
        kernels::spmv(explicit_t_, x, y);
    } else {
        std::copy(x.begin(), x.end(), y.begin());
    }
}

} // namespace parabolic
