#include "pdg/interface_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "pdg/errors.hpp"

namespace pdg {

namespace {

constexpr double kSnapTolerance = 1e-12;  // relative to the mesh (or cell) size

int sign_of(double v) { return v >= 0.0 ? 1 : -1; }

// Vertex sides after tangency snapping: vertices with |phi| < tol take the
// majority side of the remaining vertices of the cell.
std::vector<int> snapped_signs(std::span<const double> values, double tol, std::vector<bool>& near_zero)
{
    const std::size_t n = values.size();
    near_zero.assign(n, false);
    int positive = 0, negative = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(values[i]) < tol)
            near_zero[i] = true;
        else if (values[i] > 0.0)
            ++positive;
        else
            ++negative;
    }
    std::vector<int> signs(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!near_zero[i])
            signs[i] = sign_of(values[i]);
        else if (positive != negative)
            signs[i] = positive > negative ? 1 : -1;
        else
            signs[i] = sign_of(values[i]);
    }
    return signs;
}

int count_sign_changes(std::span<const int> signs)
{
    int changes = 0;
    for (std::size_t j = 0; j < signs.size(); ++j)
        if (signs[j] != signs[(j + 1) % signs.size()])
            ++changes;
    return changes;
}

void push_unique(std::vector<Point>& poly, const Point& p, double tol)
{
    if (!poly.empty() && (poly.back() - p).norm() <= tol)
        return;
    poly.push_back(p);
}

void close_unique(std::vector<Point>& poly, double tol)
{
    while (poly.size() > 1 && (poly.back() - poly.front()).norm() <= tol)
        poly.pop_back();
}

// Cut geometry given per-vertex sides and the crossing point of every edge
// with a side change.
CutCellGeometry build_cut_geometry(std::span<const Point> polygon, std::span<const int> signs,
                                   std::span<const std::optional<Point>> crossings, const LevelSet& phi,
                                   int n_sub)
{
    const std::size_t n = polygon.size();
    int leave0 = -1, leave1 = -1;
    for (std::size_t j = 0; j < n; ++j) {
        const int a = signs[j], b = signs[(j + 1) % n];
        if (a == b)
            continue;
        if (a > 0)
            leave0 = static_cast<int>(j);
        else
            leave1 = static_cast<int>(j);
    }
    if (leave0 < 0 || leave1 < 0 || count_sign_changes(signs) != 2)
        throw GeometryError("cell boundary is not crossed exactly twice by the interface; refine mesh");

    const Point ca = *crossings[leave0];  // walk leaves Omega_0 here
    const Point cb = *crossings[leave1];  // walk leaves Omega_1 here
    const double diam = polygon_diameter(polygon);
    const double tol = 1e-14 * diam;

    CutCellGeometry geo;
    if (n_sub < 1)
        throw InvalidParameter("n_sub must be at least 1");
    geo.interface.push_back(cb);
    const Point chord = ca - cb;
    const double chord_len = chord.norm();
    if (chord_len > tol) {
        const Point normal(chord.y() / chord_len, -chord.x() / chord_len);
        for (int k = 1; k < n_sub; ++k) {
            const Point x = cb + (static_cast<double>(k) / n_sub) * chord;
            geo.interface.push_back(project_to_interface(x, normal, diam, phi));
        }
    }
    geo.interface.push_back(ca);

    // K^0: from the first Omega_0 vertex after leave1 up to leave0, then back along Gamma.
    auto& k0 = geo.region[0];
    push_unique(k0, cb, tol);
    for (std::size_t step = 1; step <= n; ++step) {
        const std::size_t j = (static_cast<std::size_t>(leave1) + step) % n;
        if (signs[j] > 0)
            push_unique(k0, polygon[j], tol);
        if (static_cast<int>(j) == leave0)
            break;
    }
    // The polyline is stored cb -> ca; K^0 traverses it ca -> cb.
    for (auto it = geo.interface.rbegin(); it != geo.interface.rend(); ++it)
        push_unique(k0, *it, tol);
    close_unique(k0, tol);

    auto& k1 = geo.region[1];
    push_unique(k1, ca, tol);
    for (std::size_t step = 1; step <= n; ++step) {
        const std::size_t j = (static_cast<std::size_t>(leave0) + step) % n;
        if (signs[j] < 0)
            push_unique(k1, polygon[j], tol);
        if (static_cast<int>(j) == leave1)
            break;
    }
    for (const auto& p : geo.interface)
        push_unique(k1, p, tol);
    close_unique(k1, tol);

    geo.area[0] = k0.size() >= 3 ? std::abs(signed_area(k0)) : 0.0;
    geo.area[1] = k1.size() >= 3 ? std::abs(signed_area(k1)) : 0.0;
    return geo;
}

} // namespace

Point segment_root(const Point& a, const Point& b, const LevelSet& phi)
{
    const double fa = phi(a);
    const double fb = phi(b);
    if (fa == 0.0)
        return a;
    if (fb == 0.0)
        return b;
    if (sign_of(fa) == sign_of(fb))
        throw GeometryError("segment_root: no sign change on the segment");
    double lo = 0.0, hi = 1.0;
    const int slo = sign_of(fa);
    for (int iter = 0; iter < 200 && hi - lo > kSnapTolerance; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double fm = phi(a + mid * (b - a));
        if (fm == 0.0)
            return a + mid * (b - a);
        if (sign_of(fm) == slo)
            lo = mid;
        else
            hi = mid;
    }
    double t = 0.5 * (lo + hi);
    if (phi.has_gradient()) {
        const Point x = a + t * (b - a);
        const double slope = phi.gradient(x).dot(b - a);
        if (slope != 0.0) {
            const double polished = t - phi(x) / slope;
            if (polished >= lo && polished <= hi)
                t = polished;
        }
    }
    return a + t * (b - a);
}

Point project_to_interface(const Point& x, const Point& direction, double reach, const LevelSet& phi)
{
    const Point d = direction.normalized();
    auto g = [&](double s) { return phi(x + s * d); };
    const double g0 = g(0.0);
    if (g0 == 0.0)
        return x;
    const int steps = 64;
    const double delta = reach / steps;
    std::optional<std::pair<double, double>> bracket;
    for (int k = 1; k <= steps && !bracket; ++k) {
        for (double dir : {1.0, -1.0}) {
            const double s = dir * k * delta;
            if (sign_of(g(s)) != sign_of(g0)) {
                bracket = std::make_pair(dir * (k - 1) * delta, s);
                break;
            }
        }
    }
    if (!bracket)
        throw GeometryError("interface projection failed: no root within reach of the chord");
    double lo = bracket->first, hi = bracket->second;  // g(lo) has the sign of g0
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi)
            break;
        const double gm = g(mid);
        if (gm == 0.0) {
            lo = hi = mid;
            break;
        }
        if (sign_of(gm) == sign_of(g0))
            lo = mid;
        else
            hi = mid;
    }
    const double glo = g(lo), ghi = g(hi);
    return x + (std::abs(glo) <= std::abs(ghi) ? lo : hi) * d;
}

CutCellGeometry cut_cell_geometry(std::span<const Point> polygon, const LevelSet& phi, int n_sub,
                                  std::span<const int> signs)
{
    const std::size_t n = polygon.size();
    std::vector<int> sides;
    std::vector<bool> near_zero(n, false);
    if (signs.empty()) {
        std::vector<double> values(n);
        for (std::size_t i = 0; i < n; ++i)
            values[i] = phi(polygon[i]);
        sides = snapped_signs(values, kSnapTolerance * polygon_diameter(polygon), near_zero);
    } else {
        sides.assign(signs.begin(), signs.end());
        for (std::size_t i = 0; i < n; ++i)
            near_zero[i] = std::abs(phi(polygon[i])) < kSnapTolerance * polygon_diameter(polygon);
    }
    std::vector<std::optional<Point>> crossings(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t k = (j + 1) % n;
        if (sides[j] == sides[k])
            continue;
        if (near_zero[j])
            crossings[j] = polygon[j];
        else if (near_zero[k])
            crossings[j] = polygon[k];
        else
            crossings[j] = segment_root(polygon[j], polygon[k], phi);
    }
    return build_cut_geometry(polygon, sides, crossings, phi, n_sub);
}

int CutTopology::count(CutClass c) const
{
    return static_cast<int>(std::count(cell_class_.begin(), cell_class_.end(), c));
}

double CutTopology::side_area(const PolygonalMesh& mesh, int k, int side) const
{
    const CutClass c = cell_class_[k];
    if (c == CutClass::Cut)
        return cut_cells_[cut_index_[k]].geometry.area[side];
    return side_of(c) == side ? mesh.area(k) : 0.0;
}

CutTopology classify(const PolygonalMesh& mesh, const LevelSet& phi, const ClassifyOptions& options)
{
    if (options.n_sub < 1)
        throw InvalidParameter("n_sub must be at least 1");
    CutTopology topo;
    topo.n_sub_ = options.n_sub;
    const double tol = kSnapTolerance * mesh.h();

    std::vector<double> node_phi(mesh.num_nodes());
    for (int i = 0; i < mesh.num_nodes(); ++i) {
        node_phi[i] = phi(mesh.node(i));
        if (!std::isfinite(node_phi[i]))
            throw GeometryError("level set is not finite at node " + std::to_string(i));
    }

    auto violate = [&](Assumption which, int cell, int face, std::string message) {
        topo.violations_.push_back({which, cell, face, std::move(message)});
    };

    // Faces.
    topo.faces_.resize(mesh.num_faces());
    std::vector<std::optional<Point>> face_root(mesh.num_faces());
    for (int f = 0; f < mesh.num_faces(); ++f) {
        const Face& face = mesh.face(f);
        const Point& a = mesh.node(face.nodes[0]);
        const Point& b = mesh.node(face.nodes[1]);
        const double pa = node_phi[face.nodes[0]];
        const double pb = node_phi[face.nodes[1]];
        const bool za = std::abs(pa) < tol, zb = std::abs(pb) < tol;
        FacePieces& pieces = topo.faces_[f];
        auto set_pure = [&](int sign) {
            const int side = sign > 0 ? 0 : 1;
            pieces.cls = side == 0 ? CutClass::Pure0 : CutClass::Pure1;
            pieces.segment[side] = {a, b};
            pieces.length[side] = face.length;
        };

        // Probe the face: sign changes along it, ignoring endpoints on Gamma.
        std::vector<double> probe;
        if (!za)
            probe.push_back(pa);
        double min_abs = std::numeric_limits<double>::infinity();
        const int samples = std::max(1, options.face_samples);
        for (int s = 1; s <= samples; ++s) {
            const double v = phi(a + (static_cast<double>(s) / (samples + 1)) * (b - a));
            min_abs = std::min(min_abs, std::abs(v));
            probe.push_back(v);
        }
        if (!zb)
            probe.push_back(pb);
        int changes = 0;
        for (std::size_t i = 1; i < probe.size(); ++i)
            if (sign_of(probe[i]) != sign_of(probe[i - 1]))
                ++changes;
        const std::string where = std::to_string(f) + " (cell " + std::to_string(face.cells[0]) + ")";

        if (za && zb) {
            // Both endpoints on Gamma: a chord, unless Gamma runs along the face.
            const double pm = phi(0.5 * (a + b));
            set_pure(sign_of(pm));
            if (std::abs(pm) < tol)
                violate(Assumption::SingleCrossing, face.cells[0], f,
                        "interface runs along face " + where + "; refine mesh");
            else if (changes > 0)
                violate(Assumption::SingleCrossing, face.cells[0], f,
                        "face " + where + " is crossed more than twice; refine mesh");
            continue;
        }
        if (za || zb) {
            set_pure(za ? sign_of(pb) : sign_of(pa));
            if (changes > 0)
                violate(Assumption::SingleCrossing, face.cells[0], f,
                        "face " + where + " is crossed more than once; refine mesh");
            continue;
        }
        if (sign_of(pa) == sign_of(pb)) {
            set_pure(sign_of(pa));
            if (changes > 0 && options.drop_face_excursions)
                topo.relaxations_.push_back({Assumption::SingleCrossing, face.cells[0], f,
                                             "excursion of the interface across face " + where + " dropped"});
            else if (changes > 0)
                violate(Assumption::SingleCrossing, face.cells[0], f,
                        "face " + where + " is crossed twice by the interface; refine mesh");
            else if (min_abs < tol)
                violate(Assumption::SingleCrossing, face.cells[0], f,
                        "interface is tangent to face " + where + "; refine mesh");
            continue;
        }
        if (changes > 1)
            violate(Assumption::SingleCrossing, face.cells[0], f,
                    "face " + where + " is crossed more than once; refine mesh");
        const Point root = segment_root(a, b, phi);
        face_root[f] = root;
        pieces.cls = CutClass::Cut;
        const int side_a = pa > 0.0 ? 0 : 1;
        pieces.segment[side_a] = {a, root};
        pieces.length[side_a] = (root - a).norm();
        pieces.segment[1 - side_a] = {root, b};
        pieces.length[1 - side_a] = (b - root).norm();
    }

    // Cells.
    topo.cell_class_.resize(mesh.num_cells());
    topo.cut_index_.assign(mesh.num_cells(), -1);
    for (int k = 0; k < mesh.num_cells(); ++k) {
        const auto loop = mesh.cell(k);
        const auto faces = mesh.cell_faces(k);
        // Boundary loop of the cell with the midpoint of every chord face
        // (both endpoints on Gamma) inserted, carrying the side of that face.
        std::vector<Point> poly;
        std::vector<double> values;
        std::vector<int> edge_face;  // face of the edge starting at each entry, -1 for half faces
        for (std::size_t j = 0; j < loop.size(); ++j) {
            const int v = loop[j], w = loop[(j + 1) % loop.size()];
            poly.push_back(mesh.node(v));
            values.push_back(node_phi[v]);
            const bool chord = std::abs(node_phi[v]) < tol && std::abs(node_phi[w]) < tol;
            const FacePieces& fp = topo.faces_[faces[j]];
            if (chord && fp.length[0] + fp.length[1] > 0.0) {
                edge_face.push_back(-1);
                poly.push_back(0.5 * (mesh.node(v) + mesh.node(w)));
                values.push_back(fp.cls == CutClass::Pure0 ? 1.0 : -1.0);
                edge_face.push_back(-1);
            } else {
                edge_face.push_back(faces[j]);
            }
        }
        const std::size_t n = poly.size();
        std::vector<bool> near_zero;
        const auto signs = snapped_signs(values, tol, near_zero);
        if (std::all_of(near_zero.begin(), near_zero.end(), [](bool z) { return z; }))
            violate(Assumption::SingleCrossing, k, -1,
                    "all vertices of cell " + std::to_string(k) + " lie on the interface; refine mesh");

        const int changes = count_sign_changes(signs);
        if (changes == 0) {
            topo.cell_class_[k] = signs[0] > 0 ? CutClass::Pure0 : CutClass::Pure1;
            continue;
        }
        if (changes != 2) {
            violate(Assumption::SingleCrossing, k, -1,
                    "boundary of cell " + std::to_string(k) + " is crossed " + std::to_string(changes) +
                        " times by the interface; refine mesh");
            const long positive = std::count(signs.begin(), signs.end(), 1);
            topo.cell_class_[k] = 2 * positive >= static_cast<long>(n) ? CutClass::Pure0 : CutClass::Pure1;
            continue;
        }

        std::vector<std::optional<Point>> crossings(n);
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t next = (j + 1) % n;
            if (signs[j] == signs[next])
                continue;
            if (near_zero[j])
                crossings[j] = poly[j];
            else if (near_zero[next])
                crossings[j] = poly[next];
            else if (edge_face[j] >= 0 && face_root[edge_face[j]])
                crossings[j] = *face_root[edge_face[j]];
            else
                crossings[j] = segment_root(poly[j], poly[next], phi);
        }
        CutCell cut;
        cut.cell = k;
        try {
            cut.geometry = build_cut_geometry(poly, signs, crossings, phi, options.n_sub);
        } catch (const GeometryError& e) {
            violate(Assumption::SingleCrossing, k, -1, "cell " + std::to_string(k) + ": " + e.what());
            topo.cell_class_[k] = signs[0] > 0 ? CutClass::Pure0 : CutClass::Pure1;
            continue;
        }
        topo.cell_class_[k] = CutClass::Cut;
        topo.cut_index_[k] = static_cast<int>(topo.cut_cells_.size());
        topo.cut_cells_.push_back(std::move(cut));
    }

    // Anchors: nearest uncut cell of each side among the cells touching K,
    // widening ring by ring up to options.anchor_rings.
    const int rings = std::max(1, options.anchor_rings);
    for (auto& cut : topo.cut_cells_) {
        const int k = cut.cell;
        std::vector<int> ring{k};
        std::vector<char> seen(mesh.num_cells(), 0);
        seen[k] = 1;
        for (int r = 1; r <= rings && (cut.anchor[0] < 0 || cut.anchor[1] < 0); ++r) {
            std::vector<int> next;
            for (int c : ring)
                for (int t : mesh.touching_cells(c))
                    if (!seen[t]) {
                        seen[t] = 1;
                        next.push_back(t);
                    }
            std::sort(next.begin(), next.end());
            for (int side = 0; side < 2; ++side) {
                if (cut.anchor[side] >= 0)
                    continue;
                const CutClass wanted = side == 0 ? CutClass::Pure0 : CutClass::Pure1;
                double best_dist = std::numeric_limits<double>::infinity();
                for (int c : next) {
                    if (topo.cell_class_[c] != wanted)
                        continue;
                    const double d = (mesh.barycenter(c) - mesh.barycenter(k)).norm();
                    if (d < best_dist) {  // sorted, so ties keep the lowest index
                        best_dist = d;
                        cut.anchor[side] = c;
                        cut.anchor_ring[side] = r;
                    }
                }
                if (cut.anchor[side] >= 0 && r > 1)
                    topo.relaxations_.push_back({Assumption::UncutNeighbours, k, -1,
                                                 "anchor of cut cell " + std::to_string(k) + " in Omega_" +
                                                     std::to_string(side) + " taken from ring " +
                                                     std::to_string(r)});
            }
            ring = std::move(next);
        }
        for (int side = 0; side < 2; ++side)
            if (cut.anchor[side] < 0)
                violate(Assumption::UncutNeighbours, k, -1,
                        "cut cell " + std::to_string(k) + " has no uncut neighbour in Omega_" +
                            std::to_string(side) + "; refine mesh");
    }

    if (options.strict && !topo.violations_.empty()) {
        const auto& first = topo.violations_.front();
        std::string message = std::string(first.assumption == Assumption::SingleCrossing
                                              ? "single-crossing mesh assumption violated: "
                                              : "uncut-neighbour mesh assumption violated: ") +
                              first.message;
        if (topo.violations_.size() > 1)
            message += " (" + std::to_string(topo.violations_.size() - 1) + " more)";
        throw GeometryError(message);
    }
    return topo;
}

AssumptionReport verify_assumptions(const CutTopology& topology)
{
    AssumptionReport report;
    for (const auto& v : topology.violations()) {
        if (v.assumption == Assumption::SingleCrossing)
            report.single_crossing.push_back(v);
        else
            report.uncut_neighbours.push_back(v);
    }
    return report;
}

} // namespace pdg
