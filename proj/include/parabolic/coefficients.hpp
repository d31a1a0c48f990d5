#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "parabolic/lattice.hpp"

namespace parabolic {

/**
 * Coefficients of L u = u_t - D_a(A^{ab} D_b u) + B^a D_a u + C u at one
 * tabulated time slice. Per-node blocks, node-major:
 *   a[p * n*n*m*m + ((a*n + b)*m + i)*m + j] = A^{ab}_{ij}
 *   b[p * n*m*m   + (a*m + i)*m + j]         = B^a_{ij}
 *   c[p * m*m     + i*m + j]                 = C_{ij}
 */
struct CoefficientSlice {
    std::vector<double> a;
    std::vector<double> b;
    std::vector<double> c;
};

/// Stream matrix Phi^{ab}_{ij} at one time slice, laid out like CoefficientSlice::a.
struct StreamSlice {
    std::vector<double> phi;
};

/// Index helpers for the per-node blocks above.
struct CoefficientLayout {
    int n = 1;
    int m = 1;

    std::size_t a_block() const noexcept { return static_cast<std::size_t>(n * n * m * m); }
    std::size_t b_block() const noexcept { return static_cast<std::size_t>(n * m * m); }
    std::size_t c_block() const noexcept { return static_cast<std::size_t>(m * m); }
    std::size_t a_index(std::size_t p, int a, int b, int i, int j) const noexcept
    {
        return p * a_block() + static_cast<std::size_t>(((a * n + b) * m + i) * m + j);
    }
    std::size_t b_index(std::size_t p, int a, int i, int j) const noexcept
    {
        return p * b_block() + static_cast<std::size_t>((a * m + i) * m + j);
    }
    std::size_t c_index(std::size_t p, int i, int j) const noexcept
    {
        return p * c_block() + static_cast<std::size_t>(i * m + j);
    }
};

enum class DriftSource { direct, stream };

struct MeasuredConstants {
    double lambda = 0.0;
    double Lambda = 0.0;
    /// Torus-dyadic BMO bound of the stream matrix; empty for direct drifts.
    std::optional<double> Theta;
    double divergence_residual = 0.0;
    double symmetry_residual = 0.0;
    double zeroth_min_eigenvalue = 0.0;
};

/**
 * Tabulated coefficients over the run. Slice k applies to levels
 * [slice_start[k], slice_start[k+1]); coefficients are piecewise constant in
 * time and a backward-Euler step into level l uses the slice of level l.
 */
class CoefficientSet {
public:
    CoefficientSet() = default;
    CoefficientSet(const Grid& grid, std::vector<CoefficientSlice> slices,
                   std::vector<int> slice_start = {0}, DriftSource source = DriftSource::direct,
                   std::vector<StreamSlice> stream = {});

    const CoefficientLayout& layout() const noexcept { return layout_; }
    DriftSource drift_source() const noexcept { return source_; }
    std::size_t slice_count() const noexcept { return slices_.size(); }
    std::size_t slice_index(int level) const noexcept;
    const CoefficientSlice& slice(std::size_t k) const { return slices_[k]; }
    const std::vector<StreamSlice>& stream() const noexcept { return stream_; }
    const std::vector<int>& slice_start() const noexcept { return slice_start_; }

    bool validated() const noexcept { return constants_.has_value(); }
    /// Throws NotValidated when validate_coefficients has not succeeded.
    const MeasuredConstants& constants() const;
    void set_constants(MeasuredConstants c) { constants_ = c; }

private:
    CoefficientLayout layout_;
    std::vector<CoefficientSlice> slices_;
    std::vector<int> slice_start_{0};
    DriftSource source_ = DriftSource::direct;
    std::vector<StreamSlice> stream_;
    std::optional<MeasuredConstants> constants_;
};

/// Throws ShapeMismatch / NonFinite unless Phi is antisymmetric in (a, b),
/// symmetric in (i, j) and finite.
void check_stream(const Grid& grid, const StreamSlice& phi);

/// B^a_{ij} = D_{h,b} Phi^{ab}_{ij} with centred differences on the torus.
std::vector<double> drift_from_stream(const Grid& grid, const StreamSlice& phi);

struct ParabolicityReport {
    double lambda = 0.0;
    double Lambda = 0.0;
};

/// Sharp lambda = min over nodes of the smallest eigenvalue of the symmetric
/// part of M_{(a,i),(b,j)} = A^{ab}_{ij}; Lambda = max Frobenius norm.
/// Throws NotParabolic (lambda <= 0) or NonFinite.
ParabolicityReport validate_parabolicity(const Grid& grid, std::span<const double> a);

struct DriftReport {
    double divergence_residual = 0.0;
    double symmetry_residual = 0.0;
    bool pass = false;
};

DriftReport validate_drift(const Grid& grid, std::span<const double> b, double tolerance = 1e-10);

struct ZerothReport {
    double min_eigenvalue = 0.0;
    bool pass = false;
};

ZerothReport validate_zeroth(const Grid& grid, std::span<const double> c);

struct ValidationOptions {
    /// Divergence/symmetry tolerance for direct drifts; stream drifts use 1e-10.
    double drift_tolerance = 1e-10;
};

/// Runs every validator on every slice, measures Theta for stream-derived
/// drifts and stores the measured constants on `coeffs`. Throws on failure.
MeasuredConstants validate_coefficients(const Grid& grid, CoefficientSet& coeffs,
                                        const ValidationOptions& options = {});

} // namespace parabolic
