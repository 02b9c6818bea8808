#include "pdg/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "pdg/errors.hpp"

namespace pdg {

double default_penalty(int m, const std::array<double, 2>& beta)
{
    return 3.0 * std::max(1, m) * std::max(beta[0], beta[1]);
}

double penalty_weight(const TracePiece& piece, const std::array<double, 2>& beta, PenaltyScaling scaling)
{
    if (scaling == PenaltyScaling::Uniform || piece.kind == TraceKind::Interface)
        return 1.0;
    return beta[piece.plus_side] / std::max(beta[0], beta[1]);
}

namespace {

QuadratureOrders resolve_orders(const QuadratureOrders& orders, int m)
{
    QuadratureOrders r = orders;
    if (r.volume < 0)
        r.volume = 2 * m + 2;
    if (r.trace < 0)
        r.trace = 2 * m + 2;
    return r;
}

double value_or_zero(const ScalarField& f, const Point& x) { return f ? f(x) : 0.0; }

// Normal used to evaluate the flux-jump datum at an interface point.
Point flux_normal(const ProblemData& data, const Point& x, const Point& discrete)
{
    if (data.flux_normal == FluxNormal::Discrete)
        return discrete;
    if (!data.level_set || !data.level_set->has_gradient())
        throw InvalidParameter("level-set flux normal requested without a level-set gradient");
    const Point g = data.level_set->gradient(x);
    return g / g.norm();
}

// Unique DOFs of a trace piece and the position of every plus/minus basis
// function in that list.
struct TraceDofs {
    std::vector<int> unique;
    std::vector<int> plus_pos, minus_pos;
};

TraceDofs trace_dofs(const GlobalSpace& space, const TracePiece& piece)
{
    TraceDofs td;
    const auto plus = space.active_dofs(piece.plus_cell, piece.plus_side);
    std::vector<int> all(plus.begin(), plus.end());
    std::span<const int> minus;
    if (piece.kind != TraceKind::BoundaryFace) {
        minus = space.active_dofs(piece.minus_cell, piece.minus_side);
        all.insert(all.end(), minus.begin(), minus.end());
    }
    td.unique = all;
    std::sort(td.unique.begin(), td.unique.end());
    td.unique.erase(std::unique(td.unique.begin(), td.unique.end()), td.unique.end());
    auto pos = [&](int d) {
        return static_cast<int>(std::lower_bound(td.unique.begin(), td.unique.end(), d) - td.unique.begin());
    };
    for (int d : plus)
        td.plus_pos.push_back(pos(d));
    for (int d : minus)
        td.minus_pos.push_back(pos(d));
    return td;
}

// Per-point trace quantities in the unique DOF space of a piece: jump
// coefficient, normal average flux and average value.
struct TraceRows {
    Eigen::VectorXd jump, flux, mean;
};

void trace_rows(const GlobalSpace& space, const TracePiece& piece, const TraceDofs& td, const Point& x,
                const Point& n, const std::array<double, 2>& beta, TraceRows& rows)
{
    const bool boundary = piece.kind == TraceKind::BoundaryFace;
    const double half = boundary ? 1.0 : 0.5;
    rows.jump.setZero(static_cast<Eigen::Index>(td.unique.size()));
    rows.flux.setZero(rows.jump.size());
    rows.mean.setZero(rows.jump.size());

    const auto& lp = space.basis(piece.plus_cell, piece.plus_side);
    Eigen::VectorXd v(lp.size());
    Eigen::Matrix2Xd g(2, lp.size());
    lp.values(x, v);
    lp.gradients(x, g);
    const double bp = beta[piece.plus_side];
    for (int j = 0; j < lp.size(); ++j) {
        const int u = td.plus_pos[j];
        rows.jump[u] += v[j];
        rows.flux[u] += half * bp * (g(0, j) * n.x() + g(1, j) * n.y());
        rows.mean[u] += half * v[j];
    }
    if (boundary)
        return;
    const auto& lm = space.basis(piece.minus_cell, piece.minus_side);
    v.resize(lm.size());
    g.resize(2, lm.size());
    lm.values(x, v);
    lm.gradients(x, g);
    const double bm = beta[piece.minus_side];
    for (int j = 0; j < lm.size(); ++j) {
        const int u = td.minus_pos[j];
        rows.jump[u] -= v[j];
        rows.flux[u] += 0.5 * bm * (g(0, j) * n.x() + g(1, j) * n.y());
        rows.mean[u] += 0.5 * v[j];
    }
}

// Upper triangle computed once and mirrored, so the local matrix is exactly symmetric.
void mirror_upper(Eigen::MatrixXd& a)
{
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = j + 1; i < a.rows(); ++i)
            a(i, j) = a(j, i);
}

// Right-hand side data term at one trace point.
void add_trace_rhs(const TracePiece& piece, const ProblemData& data, const TraceRows& rows, const Point& x,
                   const Point& n, double w, double sigma, Eigen::VectorXd& rhs)
{
    if (piece.kind == TraceKind::InteriorFace)
        return;
    if (piece.kind == TraceKind::BoundaryFace) {
        const double g = value_or_zero(data.g[piece.plus_side], x);
        if (g != 0.0)
            rhs.noalias() += (w * g) * (sigma * rows.jump - rows.flux);
        return;
    }
    const double a = value_or_zero(data.jump, x);
    const double b = data.flux_jump ? data.flux_jump(x, flux_normal(data, x, n)) : 0.0;
    rhs.noalias() += w * (b * rows.mean - a * rows.flux + sigma * a * rows.jump);
}

struct VolumeContribution {
    std::span<const int> dofs;
    Eigen::MatrixXd matrix;
    Eigen::VectorXd rhs;
};

VolumeContribution volume_terms(const GlobalSpace& space, const VolumePiece& piece, const ProblemData& data)
{
    VolumeContribution vc;
    vc.dofs = space.active_dofs(piece.cell, piece.side);
    const auto& lb = space.basis(piece.cell, piece.side);
    const int n = lb.size();
    vc.matrix.setZero(n, n);
    vc.rhs.setZero(n);
    Eigen::VectorXd v(n);
    Eigen::Matrix2Xd g(2, n);
    const double beta = data.beta[piece.side];
    const auto& f = data.f[piece.side];
    for (std::size_t q = 0; q < piece.rule.size(); ++q) {
        const Point& x = piece.rule.points[q];
        const double w = piece.rule.weights[q];
        lb.gradients(x, g);
        const double bw = beta * w;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i <= j; ++i)
                vc.matrix(i, j) += bw * (g(0, i) * g(0, j) + g(1, i) * g(1, j));
        if (f) {
            lb.values(x, v);
            vc.rhs.noalias() += (w * f(x)) * v;
        }
    }
    mirror_upper(vc.matrix);
    return vc;
}

// Sorted, duplicate-free row lists per column covering every local block.
class PatternBuilder {
public:
    explicit PatternBuilder(int n) : cols_(n), compacted_(n, 0) {}

    void add_block(std::span<const int> dofs)
    {
        for (int c : dofs) {
            auto& col = cols_[c];
            col.insert(col.end(), dofs.begin(), dofs.end());
            if (col.size() > 4 * compacted_[c] + 256)
                compact(c);
        }
    }

    Eigen::SparseMatrix<double> build()
    {
        const int n = static_cast<int>(cols_.size());
        Eigen::VectorXi sizes(n);
        for (int c = 0; c < n; ++c) {
            compact(c);
            sizes[c] = static_cast<int>(cols_[c].size());
        }
        Eigen::SparseMatrix<double> m(n, n);
        m.reserve(sizes);
        for (int c = 0; c < n; ++c)
            for (int r : cols_[c])
                m.insert(r, c) = 0.0;
        m.makeCompressed();
        return m;
    }

private:
    void compact(int c)
    {
        auto& col = cols_[c];
        std::sort(col.begin(), col.end());
        col.erase(std::unique(col.begin(), col.end()), col.end());
        compacted_[c] = col.size();
    }

    std::vector<std::vector<int>> cols_;
    std::vector<std::size_t> compacted_;
};

void scatter(Eigen::SparseMatrix<double>& m, std::span<const int> dofs, const Eigen::MatrixXd& local)
{
    for (std::size_t j = 0; j < dofs.size(); ++j)
        for (std::size_t i = 0; i < dofs.size(); ++i)
            m.coeffRef(dofs[i], dofs[j]) += local(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
}

void validate(const ProblemData& data, double eta)
{
    if (!(data.beta[0] > 0.0) || !(data.beta[1] > 0.0))
        throw InvalidParameter("beta must be positive on both sides");
    if (!(eta > 0.0) || !std::isfinite(eta))
        throw InvalidParameter("penalty eta must be positive");
}

} // namespace

TraceContribution jump_average_terms(const GlobalSpace& space, const TracePiece& piece, const ProblemData& data,
                                     double eta, PenaltyScaling scaling)
{
    TraceContribution tc;
    const TraceDofs td = trace_dofs(space, piece);
    const int n = static_cast<int>(td.unique.size());
    tc.dofs = td.unique;
    tc.matrix.setZero(n, n);
    tc.rhs.setZero(n);
    const double sigma = eta * penalty_weight(piece, data.beta, scaling) / piece.h;
    TraceRows rows;
    for (std::size_t q = 0; q < piece.rule.size(); ++q) {
        const Point& x = piece.rule.points[q];
        const Point& nq = piece.normals[q];
        const double w = piece.rule.weights[q];
        trace_rows(space, piece, td, x, nq, data.beta, rows);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i <= j; ++i)
                tc.matrix(i, j) += w * (sigma * rows.jump[i] * rows.jump[j] - rows.flux[i] * rows.jump[j] -
                                        rows.jump[i] * rows.flux[j]);
        add_trace_rhs(piece, data, rows, x, nq, w, sigma, tc.rhs);
    }
    mirror_upper(tc.matrix);
    return tc;
}

DGSystem assemble(const GlobalSpace& space, const ProblemData& data, const PenaltyConfig& penalty,
                  const QuadratureOrders& orders)
{
    DGSystem sys;
    sys.space = &space;
    sys.data = data;
    sys.eta = penalty.eta > 0.0 ? penalty.eta : default_penalty(space.degree(), data.beta);
    sys.scaling = penalty.scaling;
    sys.orders = resolve_orders(orders, space.degree());
    validate(data, sys.eta);

    const auto pieces =
        build_integration_pieces(space.mesh(), space.topology(), sys.orders.volume, sys.orders.trace);
    const int n = space.n_dof();

    PatternBuilder pattern(n);
    for (const auto& vp : pieces.volumes)
        pattern.add_block(space.active_dofs(vp.cell, vp.side));
    for (const auto& tp : pieces.traces)
        pattern.add_block(trace_dofs(space, tp).unique);
    sys.matrix = pattern.build();
    sys.rhs.setZero(n);

    for (const auto& vp : pieces.volumes) {
        const auto vc = volume_terms(space, vp, data);
        scatter(sys.matrix, vc.dofs, vc.matrix);
        for (std::size_t i = 0; i < vc.dofs.size(); ++i)
            sys.rhs[vc.dofs[i]] += vc.rhs[static_cast<Eigen::Index>(i)];
    }
    for (const auto& tp : pieces.traces) {
        const auto tc = jump_average_terms(space, tp, data, sys.eta, sys.scaling);
        scatter(sys.matrix, tc.dofs, tc.matrix);
        for (std::size_t i = 0; i < tc.dofs.size(); ++i)
            sys.rhs[tc.dofs[i]] += tc.rhs[static_cast<Eigen::Index>(i)];
    }
    if (!sys.rhs.allFinite())
        throw AssemblyError("right-hand side contains non-finite values");
    return sys;
}

double galerkin_orthogonality_check(const DGSystem& system, const ExactSolution& exact, int order_boost)
{
    const GlobalSpace& space = *system.space;
    const ProblemData& data = system.data;
    const auto pieces = build_integration_pieces(space.mesh(), space.topology(),
                                                 system.orders.volume + order_boost,
                                                 system.orders.trace + order_boost);
    Eigen::VectorXd residual = Eigen::VectorXd::Zero(space.n_dof());

    for (const auto& vp : pieces.volumes) {
        const auto dofs = space.active_dofs(vp.cell, vp.side);
        const auto& lb = space.basis(vp.cell, vp.side);
        Eigen::VectorXd v(lb.size());
        Eigen::Matrix2Xd g(2, lb.size());
        const double beta = data.beta[vp.side];
        for (std::size_t q = 0; q < vp.rule.size(); ++q) {
            const Point& x = vp.rule.points[q];
            const double w = vp.rule.weights[q];
            lb.values(x, v);
            lb.gradients(x, g);
            const Point gu = exact.grad[vp.side](x);
            const double fx = value_or_zero(data.f[vp.side], x);
            for (int j = 0; j < lb.size(); ++j)
                residual[dofs[j]] += w * (beta * (gu.x() * g(0, j) + gu.y() * g(1, j)) - fx * v[j]);
        }
    }

    for (const auto& tp : pieces.traces) {
        const TraceDofs td = trace_dofs(space, tp);
        const double sigma = system.eta * penalty_weight(tp, data.beta, system.scaling) / tp.h;
        const bool boundary = tp.kind == TraceKind::BoundaryFace;
        TraceRows rows;
        Eigen::VectorXd local = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(td.unique.size()));
        for (std::size_t q = 0; q < tp.rule.size(); ++q) {
            const Point& x = tp.rule.points[q];
            const Point& n = tp.normals[q];
            const double w = tp.rule.weights[q];
            trace_rows(space, tp, td, x, n, data.beta, rows);
            // Jump and average flux of the exact solution.
            const double up = exact.u[tp.plus_side](x);
            const double fp = data.beta[tp.plus_side] * exact.grad[tp.plus_side](x).dot(n);
            double ju = up, avg_flux = fp;
            if (!boundary) {
                ju -= exact.u[tp.minus_side](x);
                avg_flux = 0.5 * (fp + data.beta[tp.minus_side] * exact.grad[tp.minus_side](x).dot(n));
            }
            local.noalias() += w * (sigma * ju * rows.jump - ju * rows.flux - avg_flux * rows.jump);
            Eigen::VectorXd data_terms = Eigen::VectorXd::Zero(local.size());
            add_trace_rhs(tp, data, rows, x, n, w, sigma, data_terms);
            local -= data_terms;
        }
        for (std::size_t i = 0; i < td.unique.size(); ++i)
            residual[td.unique[i]] += local[static_cast<Eigen::Index>(i)];
    }
    return residual.size() ? residual.cwiseAbs().maxCoeff() : 0.0;
}

void write_matrix_triplets(const DGSystem& system, std::ostream& out)
{
    out.precision(17);
    out << "% " << system.matrix.rows() << ' ' << system.matrix.cols() << ' ' << system.matrix.nonZeros() << '\n';
    for (int c = 0; c < system.matrix.outerSize(); ++c)
        for (Eigen::SparseMatrix<double>::InnerIterator it(system.matrix, c); it; ++it)
            out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
}

} // namespace pdg
