#include "pdg/error_analysis.hpp"

#include <cmath>

#include "pdg/errors.hpp"
#include "pdg/integration.hpp"

namespace pdg {

namespace {

int resolve_order(const GlobalSpace& space, int quad_order)
{
    return quad_order >= 0 ? quad_order : 2 * space.degree() + 4;
}

} // namespace

double l2_error(const GlobalSpace& space, const Eigen::VectorXd& u, const ExactSolution& exact, int quad_order)
{
    const int order = resolve_order(space, quad_order);
    const auto pieces = build_integration_pieces(space.mesh(), space.topology(), order, order);
    double sum = 0.0;
    for (const auto& vp : pieces.volumes)
        for (std::size_t q = 0; q < vp.rule.size(); ++q) {
            const Point& x = vp.rule.points[q];
            const double e = exact.u[vp.side](x) - evaluate(space, u, vp.cell, vp.side, x);
            sum += vp.rule.weights[q] * e * e;
        }
    return std::sqrt(sum);
}

DGError dg_energy_error(const GlobalSpace& space, const Eigen::VectorXd& u, const ExactSolution& exact,
                        int quad_order)
{
    const int order = resolve_order(space, quad_order);
    const auto pieces = build_integration_pieces(space.mesh(), space.topology(), order, order);
    std::array<double, 5> sq{};

    for (const auto& vp : pieces.volumes)
        for (std::size_t q = 0; q < vp.rule.size(); ++q) {
            const Point& x = vp.rule.points[q];
            const Point e = exact.grad[vp.side](x) - evaluate_gradient(space, u, vp.cell, vp.side, x);
            sq[0] += vp.rule.weights[q] * e.squaredNorm();
        }

    for (const auto& tp : pieces.traces) {
        const bool interface = tp.kind == TraceKind::Interface;
        const bool boundary = tp.kind == TraceKind::BoundaryFace;
        double jump_sq = 0.0, avg_sq = 0.0;
        for (std::size_t q = 0; q < tp.rule.size(); ++q) {
            const Point& x = tp.rule.points[q];
            const double w = tp.rule.weights[q];
            double jump = exact.u[tp.plus_side](x) - evaluate(space, u, tp.plus_cell, tp.plus_side, x);
            Point avg = exact.grad[tp.plus_side](x) - evaluate_gradient(space, u, tp.plus_cell, tp.plus_side, x);
            if (!boundary) {
                jump -= exact.u[tp.minus_side](x) - evaluate(space, u, tp.minus_cell, tp.minus_side, x);
                avg = 0.5 * (avg + exact.grad[tp.minus_side](x) -
                             evaluate_gradient(space, u, tp.minus_cell, tp.minus_side, x));
            }
            jump_sq += w * jump * jump;
            avg_sq += w * avg.squaredNorm();
        }
        sq[interface ? 3 : 1] += jump_sq / tp.h;
        sq[interface ? 4 : 2] += avg_sq * tp.h;
    }

    DGError out;
    out.parts = {std::sqrt(sq[0]), std::sqrt(sq[1]), std::sqrt(sq[2]), std::sqrt(sq[3]), std::sqrt(sq[4])};
    out.total = std::sqrt(sq[0] + sq[1] + sq[2] + sq[3] + sq[4]);
    return out;
}

double observed_order(double e1, double e2, double h1, double h2)
{
    return std::log(e1 / e2) / std::log(h1 / h2);
}

double fitted_order(std::span<const double> h, std::span<const double> error)
{
    if (h.size() != error.size())
        throw InvalidParameter("fitted_order: h and error lists differ in length");
    const std::size_t n = h.size();
    if (n < 2)
        return std::numeric_limits<double>::quiet_NaN();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = std::log(h[i]), y = std::log(error[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void convergence_orders(std::vector<ErrorReport>& reports)
{
    for (std::size_t i = 1; i < reports.size(); ++i)
        if (!(reports[i].h < reports[i - 1].h))
            throw InvalidParameter("convergence_orders: h must strictly decrease between rows");
    for (std::size_t i = 1; i < reports.size(); ++i) {
        const auto& a = reports[i - 1];
        auto& b = reports[i];
        b.l2_order = observed_order(a.l2_error, b.l2_error, a.h, b.h);
        b.dg_order = observed_order(a.dg_error, b.dg_error, a.h, b.h);
    }
}

int dof_count(const GlobalSpace& space)
{
    const auto& topo = space.topology();
    return topo.num_cells() + topo.num_cut_cells();
}

} // namespace pdg
