#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pdg/mesh.hpp"

namespace pdg {

// Signed level set: phi > 0 in Omega_0, phi < 0 in Omega_1, phi = 0 on Gamma.
struct LevelSet {
    std::function<double(const Point&)> phi;
    // Optional analytic gradient; enables a Newton polish of edge roots.
    std::function<Point(const Point&)> gradient;

    double operator()(const Point& x) const { return phi(x); }
    bool has_gradient() const { return static_cast<bool>(gradient); }
};

enum class CutClass { Pure0, Pure1, Cut };

inline int side_of(CutClass c) { return c == CutClass::Pure1 ? 1 : 0; }

// Geometry of a cell divided by the interface.
struct CutCellGeometry {
    // Gamma_K as a polyline from the crossing where the boundary walk leaves
    // Omega_1 to the crossing where it leaves Omega_0. With this orientation
    // the right-hand normal of each sub-segment is the outward normal of K^1,
    // i.e. it points from Omega_1 into Omega_0.
    std::vector<Point> interface;
    std::array<std::vector<Point>, 2> region;  // K^0 and K^1, counter-clockwise
    std::array<double, 2> area{};
};

struct CutCell {
    int cell = -1;
    CutCellGeometry geometry;
    std::array<int, 2> anchor{-1, -1};  // uncut neighbours K_o^0 and K_o^1
    // Ring of touching cells the anchor was found in; 1 means Delta(K).
    std::array<int, 2> anchor_ring{0, 0};
};

// Portion of a face on each side; a zero length means the face does not
// reach that side.
struct FacePieces {
    CutClass cls = CutClass::Pure0;
    std::array<std::array<Point, 2>, 2> segment{};
    std::array<double, 2> length{};
};

enum class Assumption { SingleCrossing, UncutNeighbours };

struct AssumptionViolation {
    Assumption assumption;
    int cell = -1;  // -1 when attached to a face only
    int face = -1;
    std::string message;
};

struct ClassifyOptions {
    int n_sub = 4;        // interface sub-segments per cut cell
    bool strict = true;   // throw on the first assumption violation
    int face_samples = 16;  // interior probes per face for double crossings
    // Rings of touching cells searched for anchors. Rings beyond the first
    // go past Delta(K); such anchors are recorded as relaxations.
    int anchor_rings = 1;
    // Treat a face whose endpoints share a side but which Gamma crosses twice
    // as uncut, dropping the excursion of Gamma across it. Recorded as a
    // relaxation instead of a single-crossing violation.
    bool drop_face_excursions = false;
};

class CutTopology {
public:
    int num_cells() const { return static_cast<int>(cell_class_.size()); }
    CutClass cell_class(int k) const { return cell_class_[k]; }
    const FacePieces& face(int f) const { return faces_[f]; }
    CutClass face_class(int f) const { return faces_[f].cls; }

    // K belongs to T_h^side when |K^side| > 0.
    bool in_side(int k, int side) const
    {
        const CutClass c = cell_class_[k];
        return c == CutClass::Cut || side_of(c) == side;
    }

    const std::vector<CutCell>& cut_cells() const { return cut_cells_; }
    // Index into cut_cells() or -1 for uncut cells.
    int cut_index(int k) const { return cut_index_[k]; }
    const CutCell& cut_cell(int k) const { return cut_cells_.at(cut_index_.at(k)); }
    int num_cut_cells() const { return static_cast<int>(cut_cells_.size()); }
    int count(CutClass c) const;

    // Measure of K^side.
    double side_area(const PolygonalMesh& mesh, int k, int side) const;

    const std::vector<AssumptionViolation>& violations() const { return violations_; }
    // Departures from the mesh assumptions that the options allowed.
    const std::vector<AssumptionViolation>& relaxations() const { return relaxations_; }
    int n_sub() const { return n_sub_; }

private:
    friend CutTopology classify(const PolygonalMesh&, const LevelSet&, const ClassifyOptions&);

    std::vector<CutClass> cell_class_;
    std::vector<FacePieces> faces_;
    std::vector<CutCell> cut_cells_;
    std::vector<int> cut_index_;
    std::vector<AssumptionViolation> violations_;
    std::vector<AssumptionViolation> relaxations_;
    int n_sub_ = 0;
};

// Classify every cell and face against the interface, build cut-cell
// geometry and select the uncut anchors. In strict mode a violated mesh
// assumption raises GeometryError; otherwise it is recorded.
CutTopology classify(const PolygonalMesh& mesh, const LevelSet& phi, const ClassifyOptions& options = {});

// Cut geometry of a single cell. `signs` holds the (snapped) side of each
// vertex: +1 for Omega_0, -1 for Omega_1; pass an empty span to derive them
// from phi with the default tangency snapping. Throws GeometryError if the
// boundary is not crossed exactly twice or root finding fails.
CutCellGeometry cut_cell_geometry(std::span<const Point> polygon, const LevelSet& phi, int n_sub,
                                  std::span<const int> signs = {});

struct AssumptionReport {
    std::vector<AssumptionViolation> single_crossing;   // faces and cell boundaries crossed once
    std::vector<AssumptionViolation> uncut_neighbours;  // uncut touching cells on both sides
    bool empty() const { return single_crossing.empty() && uncut_neighbours.empty(); }
};

AssumptionReport verify_assumptions(const CutTopology& topology);

// Root of phi on the segment [a, b] given a sign change (bisection to
// 1e-12 of the segment length, Newton polish when a gradient is available).
Point segment_root(const Point& a, const Point& b, const LevelSet& phi);

// Point on {phi = 0} reached from `x` along the line x + s * direction,
// nearest to s = 0 within |s| <= reach.
Point project_to_interface(const Point& x, const Point& direction, double reach, const LevelSet& phi);

} // namespace pdg
