#pragma once

#include <limits>
#include <span>
#include <vector>

#include "pdg/interface_geometry.hpp"
#include "pdg/mesh.hpp"
#include "pdg/polynomial.hpp"

namespace pdg {

struct PatchDiagnostics {
    int rank = 0;
    double condition = std::numeric_limits<double>::infinity();
    double lambda = std::numeric_limits<double>::quiet_NaN();  // set by estimate_lambda
};

// Element patch S^i(K): the cells whose sampling nodes feed the local fit.
struct ElementPatch {
    int anchor = -1;            // cell the patch was grown from
    int side = 0;
    std::vector<int> members;   // ordered by ring, then by cell index
    std::vector<Point> nodes;   // barycenters of members, same order
    LocalFrame frame;
    int dim = 2;                // 1 for strip layouts fitted in x only
    bool augmented = false;     // a cut cell was appended to its anchor's patch
    PatchDiagnostics diagnostics;

    int cardinality() const { return static_cast<int>(members.size()); }
    bool contains(int cell) const;
};

struct PatchOptions {
    int target = 0;  // minimum cardinality; 0 selects default_patch_target(m)
    int dim = 2;
};

// Defaults: 5, 9, 15 for m = 1, 2, 3 (ceil(1.5 dim P_m) in general).
int default_patch_target(int m);

class PatchTable {
public:
    int degree() const { return degree_; }
    int target() const { return target_; }
    int dim() const { return dim_; }

    bool has_patch(int cell, int side) const { return index_[side][cell] >= 0; }
    // Index into patches(), or -1 when cell is not in T_h^side.
    int patch_index(int cell, int side) const { return index_[side][cell]; }
    const ElementPatch& patch(int cell, int side) const;
    const std::vector<ElementPatch>& patches() const { return patches_; }
    std::vector<ElementPatch>& patches() { return patches_; }
    int augmented_count() const;

private:
    friend PatchTable build_patches(const PolygonalMesh&, const CutTopology&, int, const PatchOptions&);

    int degree_ = 0;
    int target_ = 0;
    int dim_ = 2;
    std::array<std::vector<int>, 2> index_;
    std::vector<ElementPatch> patches_;
};

// Grows full face-adjacent rings inside T_h^i around every uncut cell until
// the target cardinality is reached; cut cells inherit their anchor's patch.
// Throws PatchError if a patch cannot reach the target and UnisolvenceError
// if its sampling nodes cannot determine P_m.
PatchTable build_patches(const PolygonalMesh& mesh, const CutTopology& topology, int m,
                         const PatchOptions& options = {});

struct UnisolvenceReport {
    int rank = 0;
    int required = 0;
    double condition = 0.0;
    bool deficient() const { return rank < required; }
};

// Rank and 2-norm condition number of the scaled Vandermonde matrix.
UnisolvenceReport check_unisolvence(const ElementPatch& patch, int m);

// sqrt(N) * max over probes of |lambda(x)|_2, an upper bound for Lambda(m, S)
// over the probed points.
double estimate_lambda(const ElementPatch& patch, int m, std::span<const Point> probes);
// Probes on a barycentric lattice of resolution `density` in the fan
// triangles of every member cell.
double estimate_lambda(const ElementPatch& patch, int m, const PolygonalMesh& mesh, int density = 4);

} // namespace pdg
