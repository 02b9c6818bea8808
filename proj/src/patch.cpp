#include "pdg/patch.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "pdg/errors.hpp"
#include "pdg/parallel.hpp"

namespace pdg {

bool ElementPatch::contains(int cell) const
{
    return std::find(members.begin(), members.end(), cell) != members.end();
}

int default_patch_target(int m)
{
    return (3 * polynomial_dimension(m) + 1) / 2;
}

const ElementPatch& PatchTable::patch(int cell, int side) const
{
    if (side < 0 || side > 1 || cell < 0 || cell >= static_cast<int>(index_[0].size()) || index_[side][cell] < 0)
        throw PatchError("no patch for cell " + std::to_string(cell) + " on side " + std::to_string(side));
    return patches_[index_[side][cell]];
}

int PatchTable::augmented_count() const
{
    return static_cast<int>(std::count_if(patches_.begin(), patches_.end(),
                                          [](const ElementPatch& p) { return p.augmented; }));
}

namespace {

std::vector<int> grow_patch(const PolygonalMesh& mesh, const CutTopology& topology, int k, int side, int target,
                            std::vector<int>& mark, int stamp)
{
    std::vector<int> members{k};
    std::vector<int> ring{k};
    mark[k] = stamp;
    while (static_cast<int>(members.size()) < target) {
        std::vector<int> next;
        for (int c : ring)
            for (int nb : mesh.face_neighbors(c))
                if (mark[nb] != stamp && topology.in_side(nb, side)) {
                    mark[nb] = stamp;
                    next.push_back(nb);
                }
        if (next.empty())
            throw PatchError("patch of cell " + std::to_string(k) + " on side " + std::to_string(side) +
                             " cannot reach " + std::to_string(target) + " cells (isolated region of " +
                             std::to_string(members.size()) + " cells)");
        std::sort(next.begin(), next.end());
        members.insert(members.end(), next.begin(), next.end());
        ring = std::move(next);
    }
    return members;
}

void fill_nodes(const PolygonalMesh& mesh, ElementPatch& patch)
{
    patch.nodes.clear();
    for (int c : patch.members)
        patch.nodes.push_back(mesh.barycenter(c));
    patch.frame = make_frame(patch.nodes, mesh.barycenter(patch.anchor));
}

} // namespace

PatchTable build_patches(const PolygonalMesh& mesh, const CutTopology& topology, int m, const PatchOptions& options)
{
    if (m < 0)
        throw InvalidParameter("polynomial degree must be non-negative");
    const int required = polynomial_dimension(m, options.dim);
    const int target = options.target > 0 ? options.target : default_patch_target(m);
    if (target < required)
        throw InvalidParameter("patch target " + std::to_string(target) + " is below dim P_m = " +
                               std::to_string(required));

    PatchTable table;
    table.degree_ = m;
    table.target_ = target;
    table.dim_ = options.dim;
    const int n = mesh.num_cells();
    for (auto& idx : table.index_)
        idx.assign(n, -1);

    std::vector<int> mark(n, -1);
    int stamp = 0;
    for (int side = 0; side < 2; ++side) {
        const CutClass pure = side == 0 ? CutClass::Pure0 : CutClass::Pure1;
        for (int k = 0; k < n; ++k) {
            if (topology.cell_class(k) != pure)
                continue;
            ElementPatch patch;
            patch.anchor = k;
            patch.side = side;
            patch.dim = options.dim;
            patch.members = grow_patch(mesh, topology, k, side, target, mark, stamp++);
            fill_nodes(mesh, patch);
            table.index_[side][k] = static_cast<int>(table.patches_.size());
            table.patches_.push_back(std::move(patch));
        }
    }

    for (const auto& cut : topology.cut_cells()) {
        const int k = cut.cell;
        for (int side = 0; side < 2; ++side) {
            const int anchor = cut.anchor[side];
            if (anchor < 0 || table.index_[side][anchor] < 0)
                throw PatchError("cut cell " + std::to_string(k) + " has no uncut anchor on side " +
                                 std::to_string(side) + "; refine mesh");
            const int base = table.index_[side][anchor];
            if (table.patches_[base].contains(k)) {
                table.index_[side][k] = base;
                continue;
            }
            ElementPatch patch = table.patches_[base];
            patch.members.push_back(k);
            patch.nodes.push_back(mesh.barycenter(k));
            patch.frame = make_frame(patch.nodes, mesh.barycenter(anchor));
            patch.augmented = true;
            table.index_[side][k] = static_cast<int>(table.patches_.size());
            table.patches_.push_back(std::move(patch));
        }
    }

    auto& patches = table.patches_;
    parallel_for(static_cast<int>(patches.size()), [&](int p) {
        const auto report = check_unisolvence(patches[p], m);
        patches[p].diagnostics.rank = report.rank;
        patches[p].diagnostics.condition = report.condition;
    });
    for (const auto& patch : patches)
        if (patch.diagnostics.rank < required)
            throw UnisolvenceError("patch of cell " + std::to_string(patch.anchor) + " on side " +
                                   std::to_string(patch.side) + " is not unisolvent for degree " +
                                   std::to_string(m) + " (rank " + std::to_string(patch.diagnostics.rank) +
                                   " < " + std::to_string(required) + ")");
    return table;
}

UnisolvenceReport check_unisolvence(const ElementPatch& patch, int m)
{
    const MonomialBasis basis(m, patch.dim);
    UnisolvenceReport report;
    report.required = basis.size();
    if (patch.nodes.empty())
        return report;
    const Eigen::MatrixXd a = vandermonde(basis, patch.frame, patch.nodes);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    const auto& s = svd.singularValues();
    const double smax = s.size() > 0 ? s(0) : 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > 1e-10 * smax)
            ++report.rank;
    const double smin = s.size() > 0 ? s(s.size() - 1) : 0.0;
    report.condition = (report.rank == basis.size() && smin > 0.0) ? smax / smin
                                                                    : std::numeric_limits<double>::infinity();
    return report;
}

double estimate_lambda(const ElementPatch& patch, int m, std::span<const Point> probes)
{
    const MonomialBasis basis(m, patch.dim);
    const Eigen::MatrixXd coeff = least_squares_operator(vandermonde(basis, patch.frame, patch.nodes));
    Eigen::VectorXd v(basis.size());
    double worst = 0.0;
    for (const auto& x : probes) {
        basis.evaluate(patch.frame.to_local(x), v);
        worst = std::max(worst, (coeff.transpose() * v).norm());
    }
    return std::sqrt(static_cast<double>(patch.nodes.size())) * worst;
}

double estimate_lambda(const ElementPatch& patch, int m, const PolygonalMesh& mesh, int density)
{
    density = std::max(1, density);
    std::vector<Point> probes;
    for (int c : patch.members) {
        const auto poly = mesh.cell_polygon(c);
        const Point& center = mesh.barycenter(c);
        for (std::size_t j = 0; j < poly.size(); ++j) {
            const Point& a = poly[j];
            const Point& b = poly[(j + 1) % poly.size()];
            for (int i = 0; i <= density; ++i)
                for (int l = 0; l <= density - i; ++l) {
                    const double s = static_cast<double>(i) / density;
                    const double t = static_cast<double>(l) / density;
                    probes.push_back(center + s * (a - center) + t * (b - center));
                }
        }
    }
    return estimate_lambda(patch, m, probes);
}

} // namespace pdg
