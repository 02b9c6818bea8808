#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "pdg/interface_geometry.hpp"
#include "pdg/patch.hpp"

namespace pdg {

// Least-squares fit on one patch. Column j of coeff_map holds the monomial
// coefficients of the basis function attached to the j-th patch member.
struct LocalBasis {
    LocalFrame frame;
    MonomialBasis basis{0};
    Eigen::MatrixXd coeff_map;  // dim P_m x N, equal to (A^T A)^{-1} A^T

    int size() const { return static_cast<int>(coeff_map.cols()); }
    Eigen::VectorXd coefficients(const Eigen::VectorXd& nodal_values) const { return coeff_map * nodal_values; }
    // lambda_j(x) for every member j.
    void values(const Point& x, Eigen::Ref<Eigen::VectorXd> out) const;
    // Row 0: d/dx, row 1: d/dy of lambda_j(x).
    void gradients(const Point& x, Eigen::Ref<Eigen::Matrix2Xd> out) const;
};

LocalBasis fit_local_basis(const ElementPatch& patch, int m);
LocalBasis fit_local_basis(std::span<const Point> nodes, const LocalFrame& frame, int m, int dim = 2);

// Piecewise-polynomial space V_h: one DOF per (cell, side) with cell in
// T_h^side, numbered by cell and then side. The mesh, topology and patch
// table must outlive the space.
class GlobalSpace {
public:
    GlobalSpace(const PolygonalMesh& mesh, const CutTopology& topology, const PatchTable& patches);

    const PolygonalMesh& mesh() const { return *mesh_; }
    const CutTopology& topology() const { return *topology_; }
    const PatchTable& patches() const { return *patches_; }
    int degree() const { return patches_->degree(); }

    int n_dof() const { return static_cast<int>(owners_.size()); }
    // DOF of (cell, side) or -1 when cell is not in T_h^side.
    int dof(int cell, int side) const { return dof_[side][cell]; }
    std::pair<int, int> owner(int dof) const { return owners_[dof]; }

    // Basis governing (cell, side); throws Error for unknown pairs.
    const LocalBasis& basis(int cell, int side) const;
    // Global DOFs of the patch members of (cell, side), in basis order.
    std::span<const int> active_dofs(int cell, int side) const;
    // Bases indexed like patches().patches().
    const std::vector<LocalBasis>& bases() const { return bases_; }

private:
    int patch_of(int cell, int side) const;

    const PolygonalMesh* mesh_;
    const CutTopology* topology_;
    const PatchTable* patches_;
    std::array<std::vector<int>, 2> dof_;
    std::vector<std::pair<int, int>> owners_;
    std::vector<LocalBasis> bases_;              // one per patch
    std::vector<std::vector<int>> active_dofs_;  // one per patch
};

Eigen::VectorXd evaluate_basis(const GlobalSpace& space, int cell, int side, const Point& x);
Eigen::Matrix2Xd evaluate_basis_gradient(const GlobalSpace& space, int cell, int side, const Point& x);

// Value and gradient of the discrete function with DOF vector `u`.
double evaluate(const GlobalSpace& space, const Eigen::VectorXd& u, int cell, int side, const Point& x);
Point evaluate_gradient(const GlobalSpace& space, const Eigen::VectorXd& u, int cell, int side, const Point& x);

using ScalarField = std::function<double(const Point&)>;

// DOF (K, i) := g_i(x_K).
Eigen::VectorXd interpolate(const GlobalSpace& space, const std::array<ScalarField, 2>& g);

// One CSV row per (patch, monomial): side, anchor, monomial index, then the
// coefficients for each member.
void write_coefficients_csv(const GlobalSpace& space, std::ostream& out);

} // namespace pdg
