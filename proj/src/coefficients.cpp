#include "parabolic/coefficients.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "parabolic/bmo.hpp"
#include "parabolic/errors.hpp"

namespace parabolic {

namespace {

void require_size(std::size_t got, std::size_t want, const char* what)
{
    if (got != want) {
        std::ostringstream os;
        os << what << " has " << got << " entries, expected " << want;
        throw LabError(ErrorKind::ShapeMismatch, os.str());
    }
}

void require_finite(std::span<const double> v, const char* what)
{
    for (double x : v) {
        if (!std::isfinite(x)) throw LabError(ErrorKind::NonFinite, std::string(what) + " has non-finite entries");
    }
}

// Smallest eigenvalue of the symmetric part of a k x k row-major block.
double min_sym_eigenvalue(const double* block, int k)
{
    Eigen::MatrixXd s(k, k);
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) s(r, c) = 0.5 * (block[r * k + c] + block[c * k + r]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s, Eigen::EigenvaluesOnly);
    return eig.eigenvalues()(0);
}

} // namespace

CoefficientSet::CoefficientSet(const Grid& grid, std::vector<CoefficientSlice> slices,
                               std::vector<int> slice_start, DriftSource source,
                               std::vector<StreamSlice> stream)
    : layout_{grid.dim(), grid.components()}, slices_(std::move(slices)),
      slice_start_(std::move(slice_start)), source_(source), stream_(std::move(stream))
{
    if (slices_.empty()) throw LabError(ErrorKind::ShapeMismatch, "no coefficient slices");
    if (slice_start_.size() != slices_.size() || slice_start_.front() != 0)
        throw LabError(ErrorKind::ShapeMismatch, "slice_start must have one entry per slice starting at 0");
    for (std::size_t k = 1; k < slice_start_.size(); ++k) {
        if (slice_start_[k] <= slice_start_[k - 1])
            throw LabError(ErrorKind::ShapeMismatch, "slice_start must be increasing");
    }
    if (source_ == DriftSource::stream && stream_.size() != slices_.size())
        throw LabError(ErrorKind::ShapeMismatch, "stream-derived drift needs one stream slice per slice");
    const std::size_t nodes = grid.nodes();
    for (const auto& s : slices_) {
        require_size(s.a.size(), nodes * layout_.a_block(), "A");
        require_size(s.b.size(), nodes * layout_.b_block(), "B");
        require_size(s.c.size(), nodes * layout_.c_block(), "C");
    }
}

std::size_t CoefficientSet::slice_index(int level) const noexcept
{
    std::size_t k = 0;
    while (k + 1 < slice_start_.size() && slice_start_[k + 1] <= level) ++k;
    return k;
}

const MeasuredConstants& CoefficientSet::constants() const
{
    if (!constants_) throw LabError(ErrorKind::NotValidated, "coefficients have not been validated");
    return *constants_;
}

void check_stream(const Grid& grid, const StreamSlice& phi)
{
    const CoefficientLayout lay{grid.dim(), grid.components()};
    require_size(phi.phi.size(), grid.nodes() * lay.a_block(), "Phi");
    require_finite(phi.phi, "Phi");
    for (std::size_t p = 0; p < grid.nodes(); ++p) {
        for (int a = 0; a < lay.n; ++a)
            for (int b = 0; b < lay.n; ++b)
                for (int i = 0; i < lay.m; ++i)
                    for (int j = 0; j < lay.m; ++j) {
                        const double v = phi.phi[lay.a_index(p, a, b, i, j)];
                        if (v != -phi.phi[lay.a_index(p, b, a, i, j)])
                            throw LabError(ErrorKind::ShapeMismatch, "Phi must be antisymmetric in (alpha, beta)");
                        if (v != phi.phi[lay.a_index(p, a, b, j, i)])
                            throw LabError(ErrorKind::ShapeMismatch, "Phi must be symmetric in (i, j)");
                    }
    }
}

std::vector<double> drift_from_stream(const Grid& grid, const StreamSlice& phi)
{
    check_stream(grid, phi);
    const CoefficientLayout lay{grid.dim(), grid.components()};
    std::vector<double> b(grid.nodes() * lay.b_block(), 0.0);
    const double inv2h = 1.0 / (2.0 * grid.h());
    for (std::size_t p = 0; p < grid.nodes(); ++p) {
        for (int a = 0; a < lay.n; ++a)
            for (int i = 0; i < lay.m; ++i)
                for (int j = 0; j < lay.m; ++j) {
                    double s = 0.0;
                    for (int beta = 0; beta < lay.n; ++beta) {
                        const auto fwd = grid.neighbor(p, beta, +1);
                        const auto bwd = grid.neighbor(p, beta, -1);
                        s += (phi.phi[lay.a_index(fwd, a, beta, i, j)] - phi.phi[lay.a_index(bwd, a, beta, i, j)]) *
                             inv2h;
                    }
                    b[lay.b_index(p, a, i, j)] = s;
                }
    }
    return b;
}

ParabolicityReport validate_parabolicity(const Grid& grid, std::span<const double> a)
{
    const CoefficientLayout lay{grid.dim(), grid.components()};
    require_size(a.size(), grid.nodes() * lay.a_block(), "A");
    require_finite(a, "A");
    const int k = lay.n * lay.m;
    double lambda = std::numeric_limits<double>::infinity();
    double Lambda = 0.0;
    const auto nodes = static_cast<std::ptrdiff_t>(grid.nodes());
#pragma omp parallel for reduction(min : lambda) reduction(max : Lambda) schedule(static)
    for (std::ptrdiff_t pi = 0; pi < nodes; ++pi) {
        const auto p = static_cast<std::size_t>(pi);
        // Form matrix M_{(a,i),(b,j)} = A^{ab}_{ij}, row-major over (a*m+i, b*m+j).
        std::vector<double> form(static_cast<std::size_t>(k * k));
        double frob = 0.0;
        for (int al = 0; al < lay.n; ++al)
            for (int be = 0; be < lay.n; ++be)
                for (int i = 0; i < lay.m; ++i)
                    for (int j = 0; j < lay.m; ++j) {
                        const double v = a[lay.a_index(p, al, be, i, j)];
                        form[static_cast<std::size_t>((al * lay.m + i) * k + be * lay.m + j)] = v;
                        frob += v * v;
                    }
        lambda = std::min(lambda, min_sym_eigenvalue(form.data(), k));
        Lambda = std::max(Lambda, std::sqrt(frob));
    }
    if (!(lambda > 0.0)) {
        std::ostringstream os;
        os << "smallest eigenvalue of the symmetric form is " << lambda;
        throw LabError(ErrorKind::NotParabolic, os.str());
    }
    return {lambda, Lambda};
}

DriftReport validate_drift(const Grid& grid, std::span<const double> b, double tolerance)
{
    const CoefficientLayout lay{grid.dim(), grid.components()};
    require_size(b.size(), grid.nodes() * lay.b_block(), "B");
    const double inv2h = 1.0 / (2.0 * grid.h());
    double div = 0.0;
    double sym = 0.0;
    const auto nodes = static_cast<std::ptrdiff_t>(grid.nodes());
#pragma omp parallel for reduction(max : div, sym) schedule(static)
    for (std::ptrdiff_t pi = 0; pi < nodes; ++pi) {
        const auto p = static_cast<std::size_t>(pi);
        for (int i = 0; i < lay.m; ++i)
            for (int j = 0; j < lay.m; ++j) {
                double d = 0.0;
                for (int a = 0; a < lay.n; ++a) {
                    const auto fwd = grid.neighbor(p, a, +1);
                    const auto bwd = grid.neighbor(p, a, -1);
                    d += (b[lay.b_index(fwd, a, i, j)] - b[lay.b_index(bwd, a, i, j)]) * inv2h;
                    sym = std::max(sym, std::abs(b[lay.b_index(p, a, i, j)] - b[lay.b_index(p, a, j, i)]));
                }
                div = std::max(div, std::abs(d));
            }
    }
    const bool finite = std::isfinite(div) && std::isfinite(sym);
    return {div, sym, finite && div <= tolerance && sym <= tolerance};
}

ZerothReport validate_zeroth(const Grid& grid, std::span<const double> c)
{
    const CoefficientLayout lay{grid.dim(), grid.components()};
    require_size(c.size(), grid.nodes() * lay.c_block(), "C");
    double mn = std::numeric_limits<double>::infinity();
    const auto nodes = static_cast<std::ptrdiff_t>(grid.nodes());
#pragma omp parallel for reduction(min : mn) schedule(static)
    for (std::ptrdiff_t pi = 0; pi < nodes; ++pi) {
        const auto p = static_cast<std::size_t>(pi);
        mn = std::min(mn, min_sym_eigenvalue(&c[lay.c_index(p, 0, 0)], lay.m));
    }
    return {mn, mn >= -1e-12};
}

MeasuredConstants validate_coefficients(const Grid& grid, CoefficientSet& coeffs, const ValidationOptions& options)
{
    MeasuredConstants out;
    out.lambda = std::numeric_limits<double>::infinity();
    out.zeroth_min_eigenvalue = std::numeric_limits<double>::infinity();
    const double drift_tol = coeffs.drift_source() == DriftSource::stream ? 1e-10 : options.drift_tolerance;
    for (std::size_t k = 0; k < coeffs.slice_count(); ++k) {
        const auto& s = coeffs.slice(k);
        const auto par = validate_parabolicity(grid, s.a);
        out.lambda = std::min(out.lambda, par.lambda);
        out.Lambda = std::max(out.Lambda, par.Lambda);

        require_finite(s.b, "B");
        const auto drift = validate_drift(grid, s.b, drift_tol);
        out.divergence_residual = std::max(out.divergence_residual, drift.divergence_residual);
        out.symmetry_residual = std::max(out.symmetry_residual, drift.symmetry_residual);
        if (!drift.pass) {
            std::ostringstream os;
            os << "drift slice " << k << ": divergence residual " << drift.divergence_residual
               << ", symmetry residual " << drift.symmetry_residual << " (tolerance " << drift_tol << ")";
            throw LabError(ErrorKind::ShapeMismatch, os.str());
        }

        require_finite(s.c, "C");
        const auto zeroth = validate_zeroth(grid, s.c);
        out.zeroth_min_eigenvalue = std::min(out.zeroth_min_eigenvalue, zeroth.min_eigenvalue);
        if (!zeroth.pass) {
            std::ostringstream os;
            os << "C is not nonnegative definite: min eigenvalue " << zeroth.min_eigenvalue;
            throw LabError(ErrorKind::NotParabolic, os.str());
        }
    }
    if (coeffs.drift_source() == DriftSource::stream) out.Theta = theta_of(grid, coeffs.stream());
    coeffs.set_constants(out);
    return out;
}

} // namespace parabolic
