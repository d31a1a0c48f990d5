#pragma once

#include <functional>
#include <optional>

#include "parabolic/lattice.hpp"

namespace parabolic {

struct FieldNorms {
    double l2 = 0.0;
    double linf = 0.0;
    /// (||D_h u||^2_{L2} + max_t ||u(t)||^2_{L2})^{1/2}, D_h the centred gradient.
    double v2 = 0.0;
};

/// Selects the space-time nodes a norm is taken over.
using NodePredicate = std::function<bool(int level, std::size_t node)>;

struct V2Parts {
    double grad_sq = 0.0; ///< sum over selected nodes of |D_h u|^2 h^n dt_stored
    double sup_sq = 0.0;  ///< max over stored levels of the selected slice's ||u||^2
    double l2_sq = 0.0;
    double linf = 0.0;
};

/// |D_h u(p)|^2 summed over axes and components (centred differences).
double centered_gradient_sq(const Grid& grid, const SpaceField& u, std::size_t p);

/// ||u||^2_{L2} over the whole torus at one time.
double l2_sq(const Grid& grid, const SpaceField& u);

/// Accumulates the pieces of the L2, L-infinity and V2 norms over the stored
/// levels of `u`, restricted by `select` when given. The time weight of one
/// stored level is stride * dt.
V2Parts v2_parts(const Grid& grid, const SpaceTimeField& u, const NodePredicate& select = {});

/// Norms over `region` (or the whole stored domain). Throws
/// UnresolvableCylinder for a region the grid cannot resolve.
FieldNorms field_norms(const Grid& grid, const SpaceTimeField& u,
                       const std::optional<ParabolicCylinder>& region = std::nullopt);

/// Streaming accumulator for the whole-domain V2 norm of a solve whose
/// levels arrive one at a time.
class V2Accumulator {
public:
    explicit V2Accumulator(const Grid& grid) : grid_(&grid) {}

    void add(const SpaceField& u, double time_weight);
    double grad_sq() const noexcept { return grad_sq_; }
    double sup_sq() const noexcept { return sup_sq_; }
    double value() const noexcept;

private:
    const Grid* grid_;
    double grad_sq_ = 0.0;
    double sup_sq_ = 0.0;
};

} // namespace parabolic
