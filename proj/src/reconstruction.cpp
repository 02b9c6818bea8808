#include "pdg/reconstruction.hpp"

#include <ostream>

#include "pdg/errors.hpp"
#include "pdg/parallel.hpp"

namespace pdg {

void LocalBasis::values(const Point& x, Eigen::Ref<Eigen::VectorXd> out) const
{
    Eigen::VectorXd v(basis.size());
    basis.evaluate(frame.to_local(x), v);
    out.noalias() = coeff_map.transpose() * v;
}

void LocalBasis::gradients(const Point& x, Eigen::Ref<Eigen::Matrix2Xd> out) const
{
    Eigen::VectorXd dx(basis.size()), dy(basis.size());
    basis.gradient(frame.to_local(x), dx, dy);
    const double inv = 1.0 / frame.scale;
    out.row(0).noalias() = inv * (coeff_map.transpose() * dx).transpose();
    out.row(1).noalias() = inv * (coeff_map.transpose() * dy).transpose();
}

LocalBasis fit_local_basis(std::span<const Point> nodes, const LocalFrame& frame, int m, int dim)
{
    LocalBasis lb;
    lb.frame = frame;
    lb.basis = MonomialBasis(m, dim);
    lb.coeff_map = least_squares_operator(vandermonde(lb.basis, frame, nodes));
    return lb;
}

LocalBasis fit_local_basis(const ElementPatch& patch, int m)
{
    try {
        return fit_local_basis(patch.nodes, patch.frame, m, patch.dim);
    } catch (const UnisolvenceError& e) {
        throw UnisolvenceError("patch of cell " + std::to_string(patch.anchor) + " on side " +
                               std::to_string(patch.side) + ": " + e.what());
    }
}

GlobalSpace::GlobalSpace(const PolygonalMesh& mesh, const CutTopology& topology, const PatchTable& patches)
    : mesh_(&mesh), topology_(&topology), patches_(&patches)
{
    const int n = mesh.num_cells();
    if (topology.num_cells() != n)
        throw InvalidParameter("topology does not match the mesh");
    for (auto& d : dof_)
        d.assign(n, -1);
    for (int k = 0; k < n; ++k)
        for (int side = 0; side < 2; ++side)
            if (topology.in_side(k, side)) {
                if (!patches.has_patch(k, side))
                    throw PatchError("missing patch for cell " + std::to_string(k) + " on side " +
                                     std::to_string(side));
                dof_[side][k] = static_cast<int>(owners_.size());
                owners_.emplace_back(k, side);
            }

    const auto& list = patches.patches();
    bases_.resize(list.size());
    active_dofs_.resize(list.size());
    parallel_for(static_cast<int>(list.size()), [&](int p) {
        bases_[p] = fit_local_basis(list[p], patches.degree());
        for (int c : list[p].members)
            active_dofs_[p].push_back(dof_[list[p].side][c]);
    });
}

int GlobalSpace::patch_of(int cell, int side) const
{
    if (cell < 0 || cell >= mesh_->num_cells() || side < 0 || side > 1 || dof_[side][cell] < 0)
        throw Error("cell " + std::to_string(cell) + " has no DOF on side " + std::to_string(side));
    return patches_->patch_index(cell, side);
}

const LocalBasis& GlobalSpace::basis(int cell, int side) const { return bases_[patch_of(cell, side)]; }

std::span<const int> GlobalSpace::active_dofs(int cell, int side) const
{
    return active_dofs_[patch_of(cell, side)];
}

Eigen::VectorXd evaluate_basis(const GlobalSpace& space, int cell, int side, const Point& x)
{
    const auto& lb = space.basis(cell, side);
    Eigen::VectorXd out(lb.size());
    lb.values(x, out);
    return out;
}

Eigen::Matrix2Xd evaluate_basis_gradient(const GlobalSpace& space, int cell, int side, const Point& x)
{
    const auto& lb = space.basis(cell, side);
    Eigen::Matrix2Xd out(2, lb.size());
    lb.gradients(x, out);
    return out;
}

double evaluate(const GlobalSpace& space, const Eigen::VectorXd& u, int cell, int side, const Point& x)
{
    const auto values = evaluate_basis(space, cell, side, x);
    const auto dofs = space.active_dofs(cell, side);
    double s = 0.0;
    for (std::size_t j = 0; j < dofs.size(); ++j)
        s += values[static_cast<Eigen::Index>(j)] * u[dofs[j]];
    return s;
}

Point evaluate_gradient(const GlobalSpace& space, const Eigen::VectorXd& u, int cell, int side, const Point& x)
{
    const auto grads = evaluate_basis_gradient(space, cell, side, x);
    const auto dofs = space.active_dofs(cell, side);
    Point g = Point::Zero();
    for (std::size_t j = 0; j < dofs.size(); ++j)
        g += grads.col(static_cast<Eigen::Index>(j)) * u[dofs[j]];
    return g;
}

Eigen::VectorXd interpolate(const GlobalSpace& space, const std::array<ScalarField, 2>& g)
{
    Eigen::VectorXd u(space.n_dof());
    for (int d = 0; d < space.n_dof(); ++d) {
        const auto [cell, side] = space.owner(d);
        u[d] = g[side](space.mesh().barycenter(cell));
    }
    return u;
}

void write_coefficients_csv(const GlobalSpace& space, std::ostream& out)
{
    const auto& list = space.patches().patches();
    out << "side,anchor,monomial,members,coefficients\n";
    out.precision(17);
    for (std::size_t p = 0; p < list.size(); ++p) {
        const auto& patch = list[p];
        const LocalBasis* basis = &space.bases()[p];
        for (Eigen::Index j = 0; j < basis->coeff_map.rows(); ++j) {
            out << patch.side << ',' << patch.anchor << ',' << j << ',';
            for (std::size_t i = 0; i < patch.members.size(); ++i)
                out << (i ? " " : "") << patch.members[i];
            out << ',';
            for (Eigen::Index i = 0; i < basis->coeff_map.cols(); ++i)
                out << (i ? " " : "") << basis->coeff_map(j, i);
            out << '\n';
        }
    }
}

} // namespace pdg
