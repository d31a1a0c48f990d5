#pragma once

#include <memory>
#include <span>

#include "parabolic/sparse.hpp"

namespace parabolic {

enum class LinearSolverKind {
    direct,    ///< sparse LU; forward and transposed solves share one factorisation
    iterative, ///< Jacobi-preconditioned BiCGSTAB on the OpenMP kernels
};

struct SolveInfo {
    double relative_residual = 0.0;
    int iterations = 0;
};

struct LinearSolverOptions {
    LinearSolverKind kind = LinearSolverKind::direct;
    /// Contract: every solve must reach this relative residual.
    double tolerance = 1e-10;
    /// Iterative solves keep going until this tighter target (or stagnation).
    double iterative_target = 1e-14;
    int max_iterations = 2000;
};

/**
 * One implicit step of the theta scheme for u' + K u = f:
 *   (I + theta dt K) u_new = (I - (1 - theta) dt K) u_old + dt f.
 * Holds M = I + theta dt K, its transpose, and the explicit part.
 */
class StepSystem {
public:
    StepSystem(const CsrMatrix& k, double dt, double theta, const LinearSolverOptions& options);
    ~StepSystem();
    StepSystem(StepSystem&&) noexcept;
    StepSystem& operator=(StepSystem&&) noexcept;

    /// M x = rhs. Throws LinearSolveFailure when the residual contract fails.
    SolveInfo solve(std::span<const double> rhs, std::span<double> x) const;
    /// M^T x = rhs.
    SolveInfo solve_transpose(std::span<const double> rhs, std::span<double> x) const;

    /// y = (I - (1 - theta) dt K) x, or its transpose.
    void apply_explicit(std::span<const double> x, std::span<double> y) const;
    void apply_explicit_transpose(std::span<const double> x, std::span<double> y) const;
    bool has_explicit_part() const noexcept { return theta_ < 1.0; }

    const CsrMatrix& matrix() const noexcept { return m_; }
    const CsrMatrix& matrix_transpose() const noexcept { return mt_; }

private:
    struct Factor;

    SolveInfo finish(const CsrMatrix& a, std::span<const double> rhs, std::span<const double> x, int iters) const;
    int bicgstab(const CsrMatrix& a, const std::vector<double>& inv_diag, std::span<const double> rhs,
                 std::span<double> x) const;

    double theta_;
    LinearSolverOptions options_;
    CsrMatrix m_;
    CsrMatrix mt_;
    CsrMatrix explicit_;
    CsrMatrix explicit_t_;
    std::vector<double> inv_diag_;
    std::vector<double> inv_diag_t_;
    std::unique_ptr<Factor> factor_;
};

} // namespace parabolic
