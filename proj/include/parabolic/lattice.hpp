#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace parabolic {

/// Spatial point; only the first `Grid::dim` coordinates are meaningful.
using Point = std::array<double, 2>;

struct SpaceTimePoint {
    double t = 0.0;
    Point x{0.0, 0.0};
};

/**
 * Periodic space-time lattice.
 *
 * Space is the torus [0, side)^dim discretised by `cells` nodes per axis;
 * time runs over uniform levels t0, t0 + dt, ..., up to t1. Node indices are
 * row-major with the first axis fastest: p = ix + cells * iy.
 */
class Grid {
public:
    /// Validates and builds a grid. Throws LabError(InvalidGrid).
    static Grid make(int dim, int components, double side, int cells, double dt, double t0,
                     double t1);

    int dim() const noexcept { return dim_; }
    int components() const noexcept { return components_; }
    double side() const noexcept { return side_; }
    int cells() const noexcept { return cells_; }
    double h() const noexcept { return side_ / cells_; }
    double dt() const noexcept { return dt_; }
    double t0() const noexcept { return t0_; }
    double t1() const noexcept { return t1_; }

    std::size_t nodes() const noexcept { return nodes_; }
    /// Unknowns per time level: nodes * components.
    std::size_t size() const noexcept { return nodes_ * static_cast<std::size_t>(components_); }
    /// h^dim, the quadrature weight of one node.
    double cell_volume() const noexcept;

    int levels() const noexcept { return levels_; }
    double time(int level) const noexcept { return t0_ + level * dt_; }
    /// Level whose time equals t up to 1e-9 dt. Throws TimeRangeError otherwise.
    int level_of(double t) const;
    /// Largest level with time(level) <= t (clamped into range).
    int level_floor(double t) const noexcept;

    std::array<int, 2> node_coords(std::size_t p) const noexcept;
    std::size_t node_at(int ix, int iy = 0) const noexcept;
    /// Periodic neighbour of p shifted by `shift` cells along `axis`.
    std::size_t neighbor(std::size_t p, int axis, int shift) const noexcept;
    Point position(std::size_t p) const noexcept;

    /// Minimum-image signed difference a - b along one axis, in [-side/2, side/2).
    double wrap_delta(double a, double b) const noexcept;
    double torus_distance(const Point& a, const Point& b) const noexcept;

private:
    int dim_ = 1;
    int components_ = 1;
    double side_ = 1.0;
    int cells_ = 8;
    double dt_ = 1.0;
    double t0_ = 0.0;
    double t1_ = 1.0;
    std::size_t nodes_ = 0;
    int levels_ = 0;
};

/// max(sqrt|t - s|, |x - y|) with the spatial part in the torus metric.
double parabolic_distance(const Grid& grid, const SpaceTimePoint& a, const SpaceTimePoint& b);

enum class CylinderKind { backward, forward, two_sided };

struct ParabolicCylinder {
    SpaceTimePoint center;
    double radius = 0.0;
    CylinderKind kind = CylinderKind::two_sided;

    /// Inclusive membership: closed time interval, closed torus ball.
    bool contains(const Grid& grid, const SpaceTimePoint& p) const;
    double t_begin() const noexcept;
    double t_end() const noexcept;
};

struct SpaceTimeIndex {
    int level = 0;
    std::size_t node = 0;

    friend bool operator==(const SpaceTimeIndex&, const SpaceTimeIndex&) = default;
};

/// Throws UnresolvableCylinder unless r >= 2h and r^2 >= 2dt.
void require_resolvable(const Grid& grid, double radius);

/// All grid nodes inside the cylinder, ordered by (level, node). Levels are
/// limited to the grid's time range.
std::vector<SpaceTimeIndex> cylinder_indices(const ParabolicCylinder& cyl, const Grid& grid);

/// Spatial nodes of the closed torus ball B_r(center).
std::vector<std::size_t> ball_nodes(const Grid& grid, const Point& center, double radius);

/**
 * Values of an m-vector field on all spatial nodes at one time.
 * Layout: values[p * m + i].
 */
class SpaceField {
public:
    SpaceField() = default;
    explicit SpaceField(const Grid& grid) : m_(grid.components()), values_(grid.size(), 0.0) {}
    SpaceField(int components, std::vector<double> values)
        : m_(components), values_(std::move(values)) {}

    int components() const noexcept { return m_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::size_t nodes() const noexcept { return m_ == 0 ? 0 : values_.size() / m_; }

    double& operator()(std::size_t p, int i) noexcept { return values_[p * m_ + i]; }
    double operator()(std::size_t p, int i) const noexcept { return values_[p * m_ + i]; }

    std::span<double> span() noexcept { return values_; }
    std::span<const double> span() const noexcept { return values_; }
    std::vector<double>& values() noexcept { return values_; }
    const std::vector<double>& values() const noexcept { return values_; }

    void fill(double v) { std::fill(values_.begin(), values_.end(), v); }
    bool all_finite() const noexcept;

private:
    int m_ = 1;
    std::vector<double> values_;
};

/**
 * A run of SpaceFields on levels first_level, first_level + stride, ...
 * Levels before first_level are implicitly zero (the causal extension used
 * for fundamental-solution columns).
 */
class SpaceTimeField {
public:
    SpaceTimeField() = default;
    SpaceTimeField(int first_level, int stride) : first_level_(first_level), stride_(stride) {}

    int first_level() const noexcept { return first_level_; }
    int stride() const noexcept { return stride_; }
    int last_level() const noexcept
    {
        return first_level_ + stride_ * (static_cast<int>(slices_.size()) - 1);
    }
    std::size_t count() const noexcept { return slices_.size(); }
    int level_at(std::size_t k) const noexcept { return first_level_ + stride_ * static_cast<int>(k); }

    void push_back(SpaceField f) { slices_.push_back(std::move(f)); }
    SpaceField& slice(std::size_t k) { return slices_[k]; }
    const SpaceField& slice(std::size_t k) const { return slices_[k]; }

    /// Stored slice at `level`, or nullptr when the level is not stored.
    const SpaceField* find(int level) const noexcept;

    bool all_finite() const noexcept;

private:
    int first_level_ = 0;
    int stride_ = 1;
    std::vector<SpaceField> slices_;
};

} // namespace parabolic
