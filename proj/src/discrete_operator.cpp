#include "parabolic/discrete_operator.hpp"

#include "parabolic/errors.hpp"

namespace parabolic {

namespace {

struct Stencil {
    const Grid& grid;
    int m;
    std::vector<Triplet> out;

    // Adds coef * u_j(col_node) to row (row_node, i).
    void add(std::size_t row_node, int i, std::size_t col_node, int j, double coef)
    {
        out.push_back({row_node * static_cast<std::size_t>(m) + static_cast<std::size_t>(i),
                       col_node * static_cast<std::size_t>(m) + static_cast<std::size_t>(j), coef});
    }
};

// `a_at(p, a, b, i, j)` returns the principal coefficient used at node p.
template <class AFn>
CsrMatrix diffusion_matrix(const Grid& grid, AFn&& a_at)
{
    const int n = grid.dim();
    const int m = grid.components();
    const double w = -0.5 / (grid.h() * grid.h());
    Stencil st{grid, m, {}};
    st.out.reserve(grid.size() * static_cast<std::size_t>(m * 8 * n * n));
    for (std::size_t x = 0; x < grid.nodes(); ++x) {
        for (int al = 0; al < n; ++al) {
            const auto xm_a = grid.neighbor(x, al, -1);
            const auto xp_a = grid.neighbor(x, al, +1);
            for (int be = 0; be < n; ++be) {
                const auto xp_b = grid.neighbor(x, be, +1);
                const auto xm_b = grid.neighbor(x, be, -1);
                const auto xm_a_p_b = grid.neighbor(xm_a, be, +1);
                const auto xp_a_m_b = grid.neighbor(xp_a, be, -1);
                for (int i = 0; i < m; ++i)
                    for (int j = 0; j < m; ++j) {
                        // D-_a (A D+_b u)
                        const double a0 = a_at(x, al, be, i, j);
                        const double am = a_at(xm_a, al, be, i, j);
                        st.add(x, i, xp_b, j, w * a0);
                        st.add(x, i, x, j, -w * a0);
                        st.add(x, i, xm_a_p_b, j, -w * am);
                        st.add(x, i, xm_a, j, w * am);
                        // D+_a (A D-_b u)
                        const double ap = a_at(xp_a, al, be, i, j);
                        st.add(x, i, xp_a, j, w * ap);
                        st.add(x, i, xp_a_m_b, j, -w * ap);
                        st.add(x, i, x, j, -w * a0);
                        st.add(x, i, xm_b, j, w * a0);
                    }
            }
        }
    }
    return build_csr(grid.size(), grid.size(), std::move(st.out));
}

CsrMatrix drift_matrix(const Grid& grid, const CoefficientLayout& lay, const std::vector<double>& b, double sign)
{
    const int n = grid.dim();
    const int m = grid.components();
    const double w = sign * 0.25 / grid.h();
    Stencil st{grid, m, {}};
    st.out.reserve(grid.size() * static_cast<std::size_t>(m * 4 * n));
    for (std::size_t x = 0; x < grid.nodes(); ++x) {
        for (int al = 0; al < n; ++al) {
            const auto xp = grid.neighbor(x, al, +1);
            const auto xm = grid.neighbor(x, al, -1);
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) {
                    const double b0 = b[lay.b_index(x, al, i, j)];
                    // B D_a u
                    st.add(x, i, xp, j, w * b0);
                    st.add(x, i, xm, j, -w * b0);
                    // D_a (B u)
                    st.add(x, i, xp, j, w * b[lay.b_index(xp, al, i, j)]);
                    st.add(x, i, xm, j, -w * b[lay.b_index(xm, al, i, j)]);
                }
        }
    }
    return build_csr(grid.size(), grid.size(), std::move(st.out));
}

CsrMatrix zeroth_matrix(const Grid& grid, const CoefficientLayout& lay, const std::vector<double>& c, bool transposed)
{
    const int m = grid.components();
    Stencil st{grid, m, {}};
    for (std::size_t x = 0; x < grid.nodes(); ++x)
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                st.add(x, i, x, j, transposed ? c[lay.c_index(x, j, i)] : c[lay.c_index(x, i, j)]);
    return build_csr(grid.size(), grid.size(), std::move(st.out));
}

DiscreteOperator combine(CsrMatrix diffusion, CsrMatrix drift, CsrMatrix zeroth)
{
    DiscreteOperator op;
    op.total = add(add(diffusion, drift), zeroth);
    op.diffusion = std::move(diffusion);
    op.drift = std::move(drift);
    op.zeroth = std::move(zeroth);
    return op;
}

} // namespace

DiscreteOperator assemble(const Grid& grid, const CoefficientSet& coeffs, std::size_t slice)
{
    (void)coeffs.constants();
    const auto& lay = coeffs.layout();
    const auto& s = coeffs.slice(slice);
    auto diff = diffusion_matrix(grid, [&](std::size_t p, int a, int b, int i, int j) {
        return s.a[lay.a_index(p, a, b, i, j)];
    });
    return combine(std::move(diff), drift_matrix(grid, lay, s.b, +1.0), zeroth_matrix(grid, lay, s.c, false));
}

DiscreteOperator assemble_adjoint(const Grid& grid, const CoefficientSet& coeffs, std::size_t slice)
{
    (void)coeffs.constants();
    const auto& lay = coeffs.layout();
    const auto& s = coeffs.slice(slice);
    auto diff = diffusion_matrix(grid, [&](std::size_t p, int a, int b, int i, int j) {
        return s.a[lay.a_index(p, b, a, j, i)];
    });
    return combine(std::move(diff), drift_matrix(grid, lay, s.b, -1.0), zeroth_matrix(grid, lay, s.c, true));
}

} // namespace parabolic
