#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "parabolic/coefficients.hpp"
#include "parabolic/discrete_operator.hpp"
#include "parabolic/lattice.hpp"
#include "parabolic/linear_solver.hpp"

namespace parabolic {

/// Writes the forcing at `level` into `out` (pre-zeroed); returns false when
/// the forcing vanishes at that level.
using Forcing = std::function<bool(int level, SpaceField& out)>;

/// Called once per computed level, in the order levels are produced.
using LevelObserver = std::function<void(int level, const SpaceField& u)>;

/// Forcing read from a stored space-time field (zero on unstored levels).
Forcing forcing_from(const SpaceTimeField& f);

struct EvolveOptions {
    LinearSolverOptions solver;
    /// 1 = backward Euler (the default and the scheme used for acceptance).
    double theta = 1.0;
};

struct RunControl {
    bool store = true;
    int store_stride = 1;
    LevelObserver observer;
};

struct RunStats {
    double max_residual = 0.0;
    long solves = 0;
    long iterations = 0;
};

struct Solution {
    SpaceTimeField field;
    RunStats stats;
};

/**
 * Time stepper for L and its discrete adjoint on a fixed grid.
 *
 * One StepSystem is built per coefficient slice at construction, so a const
 * Evolver can be shared by concurrent solves. The adjoint evolution is the
 * exact transpose of the forward one: with forward forced steps
 *   u^j = M_j^{-1} (N_j u^{j-1} + dt f^j)
 * the adjoint runs backwards as
 *   U^l = M_l^{-T} (dt g^l + N_{l+1}^T U^{l+1}),
 * so sum_j <u^j, g^j> = sum_l <f^l, U^l> up to roundoff.
 */
class Evolver {
public:
    /// Throws NotValidated for unvalidated coefficients.
    Evolver(const Grid& grid, const CoefficientSet& coeffs, EvolveOptions options = {});
    ~Evolver();
    Evolver(Evolver&&) noexcept;

    const Grid& grid() const noexcept { return *grid_; }
    const CoefficientSet& coefficients() const noexcept { return *coeffs_; }
    const EvolveOptions& options() const noexcept { return options_; }

    const DiscreteOperator& operator_for_level(int level) const;
    const StepSystem& system_for_level(int level) const;

    /// L u = 0 from u(s) = g up to T. Returns g unchanged when T == s.
    Solution solve_cauchy(const SpaceField& g, double s, double t_end, const RunControl& control = {}) const;

    /// L u = f from zero data at s0 up to T.
    Solution solve_forced(const Forcing& f, double s0, double t_end, const RunControl& control = {}) const;

    /// L* u = f backwards from u(t0) = 0 down to t_begin; the field is stored
    /// in ascending level order.
    Solution solve_adjoint(const Forcing& f, double t0, double t_begin, const RunControl& control = {}) const;

    /// Level-indexed forward run from `initial` at `first`; `f` may be empty.
    Solution run_levels(const SpaceField& initial, int first, int last, const Forcing& f,
                        const RunControl& control) const;

private:
    const Grid* grid_;
    const CoefficientSet* coeffs_;
    EvolveOptions options_;
    std::vector<DiscreteOperator> operators_;
    std::vector<StepSystem> systems_;
};

} // namespace parabolic
