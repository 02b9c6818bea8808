#include "pdg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>

#include <json.hpp>

#include "pdg/errors.hpp"
#include "pdg/log.hpp"

namespace pdg {

namespace {

double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

// Proper or touching intersection of closed segments [p1,p2] and [q1,q2].
bool segments_intersect(const Point& p1, const Point& p2, const Point& q1, const Point& q2)
{
    auto orient = [](const Point& a, const Point& b, const Point& c) {
        const double v = cross(b - a, c - a);
        const double scale = (b - a).norm() * (c - a).norm();
        if (std::abs(v) <= 1e-14 * scale)
            return 0;
        return v > 0 ? 1 : -1;
    };
    auto on_segment = [](const Point& a, const Point& b, const Point& c) {
        return std::min(a.x(), b.x()) <= c.x() && c.x() <= std::max(a.x(), b.x()) &&
               std::min(a.y(), b.y()) <= c.y() && c.y() <= std::max(a.y(), b.y());
    };
    const int o1 = orient(p1, p2, q1);
    const int o2 = orient(p1, p2, q2);
    const int o3 = orient(q1, q2, p1);
    const int o4 = orient(q1, q2, p2);
    if (o1 != o2 && o3 != o4)
        return true;
    if (o1 == 0 && on_segment(p1, p2, q1))
        return true;
    if (o2 == 0 && on_segment(p1, p2, q2))
        return true;
    if (o3 == 0 && on_segment(q1, q2, p1))
        return true;
    if (o4 == 0 && on_segment(q1, q2, p2))
        return true;
    return false;
}

} // namespace

double signed_area(std::span<const Point> polygon)
{
    double a = 0.0;
    const std::size_t n = polygon.size();
    for (std::size_t i = 0; i < n; ++i)
        a += cross(polygon[i], polygon[(i + 1) % n]);
    return 0.5 * a;
}

Point polygon_centroid(std::span<const Point> polygon)
{
    // Shift to the first vertex to limit cancellation.
    const Point origin = polygon[0];
    double a = 0.0;
    Point c = Point::Zero();
    const std::size_t n = polygon.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point p = polygon[i] - origin;
        const Point q = polygon[(i + 1) % n] - origin;
        const double w = cross(p, q);
        a += w;
        c += w * (p + q);
    }
    if (std::abs(a) <= std::numeric_limits<double>::min()) {
        Point mean = Point::Zero();
        for (const auto& p : polygon)
            mean += p;
        return mean / static_cast<double>(n);
    }
    return origin + c / (3.0 * a);
}

double polygon_diameter(std::span<const Point> polygon)
{
    double d = 0.0;
    for (std::size_t i = 0; i < polygon.size(); ++i)
        for (std::size_t j = i + 1; j < polygon.size(); ++j)
            d = std::max(d, (polygon[i] - polygon[j]).norm());
    return d;
}

bool point_in_polygon(std::span<const Point> polygon, const Point& x)
{
    bool inside = false;
    const std::size_t n = polygon.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point& a = polygon[i];
        const Point& b = polygon[j];
        if ((a.y() > x.y()) != (b.y() > x.y())) {
            const double xc = a.x() + (x.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
            if (x.x() < xc)
                inside = !inside;
        }
    }
    return inside;
}

bool is_simple_polygon(std::span<const Point> polygon)
{
    const std::size_t n = polygon.size();
    if (n < 3)
        return false;
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = polygon[i];
        const Point& b = polygon[(i + 1) % n];
        if ((b - a).norm() == 0.0)
            return false;
        for (std::size_t j = i + 1; j < n; ++j) {
            // Skip edges sharing a vertex with edge i.
            if (j == i + 1 || (i == 0 && j == n - 1))
                continue;
            if (segments_intersect(a, b, polygon[j], polygon[(j + 1) % n]))
                return false;
        }
    }
    return true;
}

double distance_to_segment(const Point& x, const Point& a, const Point& b)
{
    const Point d = b - a;
    const double len2 = d.squaredNorm();
    if (len2 == 0.0)
        return (x - a).norm();
    const double t = std::clamp((x - a).dot(d) / len2, 0.0, 1.0);
    return (x - (a + t * d)).norm();
}

PolygonalMesh::PolygonalMesh(std::vector<Point> nodes, std::vector<std::vector<int>> cells)
    : nodes_(std::move(nodes)), cells_(std::move(cells))
{
    validate_and_orient();
    build_face_topology();
    compute_cell_geometry();
    build_adjacency();
}

void PolygonalMesh::validate_and_orient()
{
    if (cells_.empty())
        throw MeshError("mesh has no cells");
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        if (!nodes_[i].allFinite())
            throw MeshError("node " + std::to_string(i) + " has non-finite coordinates");

    std::vector<bool> referenced(nodes_.size(), false);
    for (std::size_t k = 0; k < cells_.size(); ++k) {
        auto& loop = cells_[k];
        const std::string name = "cell " + std::to_string(k);
        if (loop.size() < 3)
            throw MeshError(name + " has fewer than three nodes");
        for (int v : loop) {
            if (v < 0 || v >= num_nodes())
                throw MeshError(name + " references node " + std::to_string(v) + " out of range");
            referenced[v] = true;
        }
        std::vector<int> sorted = loop;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw MeshError(name + " has duplicate node indices");

        const auto poly = cell_polygon(static_cast<int>(k));
        if (!is_simple_polygon(poly))
            throw MeshError(name + " is not a simple polygon");
        const double a = signed_area(poly);
        if (a == 0.0)
            throw MeshError(name + " has zero area");
        if (a < 0.0)
            std::reverse(loop.begin(), loop.end());
    }
    for (std::size_t i = 0; i < referenced.size(); ++i)
        if (!referenced[i])
            throw MeshError("node " + std::to_string(i) + " is dangling (not used by any cell)");
}

void PolygonalMesh::build_face_topology()
{
    std::map<std::pair<int, int>, int> lookup;
    cell_faces_.assign(cells_.size(), {});
    for (int k = 0; k < num_cells(); ++k) {
        const auto& loop = cells_[k];
        const std::size_t n = loop.size();
        cell_faces_[k].resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            const int a = loop[j];
            const int b = loop[(j + 1) % n];
            const auto key = std::minmax(a, b);
            auto it = lookup.find(key);
            if (it == lookup.end()) {
                Face face;
                face.nodes = {a, b};
                face.cells = {k, -1};
                face.length = (nodes_[b] - nodes_[a]).norm();
                lookup.emplace(key, num_faces());
                cell_faces_[k][j] = num_faces();
                faces_.push_back(face);
                continue;
            }
            Face& face = faces_[it->second];
            if (face.cells[1] >= 0)
                throw MeshError("non-manifold face between nodes " + std::to_string(a) + " and " +
                                std::to_string(b) + " (more than two incident cells, cell " +
                                std::to_string(k) + ")");
            if (face.nodes[0] == a)
                throw MeshError("cells " + std::to_string(face.cells[0]) + " and " + std::to_string(k) +
                                " overlap along the face between nodes " + std::to_string(a) + " and " +
                                std::to_string(b));
            face.cells[1] = k;
            cell_faces_[k][j] = it->second;
        }
    }
}

void PolygonalMesh::compute_cell_geometry()
{
    const int n = num_cells();
    diameter_.resize(n);
    area_.resize(n);
    barycenter_.resize(n);
    convex_.resize(n);
    h_ = 0.0;
    for (int k = 0; k < n; ++k) {
        const auto poly = cell_polygon(k);
        diameter_[k] = polygon_diameter(poly);
        area_[k] = signed_area(poly);
        barycenter_[k] = polygon_centroid(poly);
        bool convex = true;
        const std::size_t m = poly.size();
        for (std::size_t j = 0; j < m; ++j) {
            const Point e1 = poly[(j + 1) % m] - poly[j];
            const Point e2 = poly[(j + 2) % m] - poly[(j + 1) % m];
            if (cross(e1, e2) < -1e-14 * e1.norm() * e2.norm())
                convex = false;
        }
        convex_[k] = convex;
        if (!convex)
            log::warn("cell " + std::to_string(k) + " is not convex");
        h_ = std::max(h_, diameter_[k]);
    }
    if (!(h_ > 0.0) || !std::isfinite(h_))
        throw MeshError("mesh size is not positive and finite");
}

void PolygonalMesh::build_adjacency()
{
    face_neighbors_.assign(cells_.size(), {});
    for (const auto& face : faces_) {
        if (face.is_boundary())
            continue;
        face_neighbors_[face.cells[0]].push_back(face.cells[1]);
        face_neighbors_[face.cells[1]].push_back(face.cells[0]);
    }
    std::vector<std::vector<int>> node_cells(nodes_.size());
    for (int k = 0; k < num_cells(); ++k)
        for (int v : cells_[k])
            node_cells[v].push_back(k);
    touching_.assign(cells_.size(), {});
    for (int k = 0; k < num_cells(); ++k) {
        auto& list = touching_[k];
        for (int v : cells_[k])
            for (int c : node_cells[v])
                if (c != k)
                    list.push_back(c);
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
        std::sort(face_neighbors_[k].begin(), face_neighbors_[k].end());
    }
}

int PolygonalMesh::num_interior_faces() const
{
    return static_cast<int>(std::count_if(faces_.begin(), faces_.end(),
                                          [](const Face& f) { return !f.is_boundary(); }));
}

std::vector<Point> PolygonalMesh::cell_polygon(int k) const
{
    std::vector<Point> poly;
    poly.reserve(cells_[k].size());
    for (int v : cells_[k])
        poly.push_back(nodes_[v]);
    return poly;
}

PolygonalMesh generate_triangular_mesh(const Rectangle& domain, double h)
{
    if (!(h > 0.0) || !std::isfinite(h))
        throw InvalidParameter("mesh spacing h must be positive, got " + std::to_string(h));
    if (!(domain.width() > 0.0) || !(domain.height() > 0.0))
        throw InvalidParameter("domain must have positive width and height");
    if (h > std::min(domain.width(), domain.height()) * (1.0 + 1e-12))
        throw InvalidParameter("mesh spacing h exceeds the shortest side of the domain");

    auto divisions = [h](double length) {
        const double ratio = length / h;
        const double rounded = std::round(ratio);
        if (std::abs(ratio - rounded) <= 1e-9 * ratio)
            return static_cast<int>(rounded);
        return static_cast<int>(std::ceil(ratio));
    };
    const int nx = divisions(domain.width());
    const int ny = divisions(domain.height());

    std::vector<Point> nodes;
    nodes.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i)
            nodes.emplace_back(domain.x_min + domain.width() * i / nx,
                               domain.y_min + domain.height() * j / ny);

    auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
    std::vector<std::vector<int>> cells;
    cells.reserve(static_cast<std::size_t>(2 * nx * ny));
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
            cells.push_back({a, b, c});
            cells.push_back({a, c, d});
        }
    }
    return PolygonalMesh(std::move(nodes), std::move(cells));
}

PolygonalMesh read_mesh_json(std::istream& in)
{
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw MeshError(std::string("mesh file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("nodes") || !doc.contains("cells"))
        throw MeshError("mesh file must be an object with \"nodes\" and \"cells\"");

    std::vector<Point> nodes;
    std::vector<std::vector<int>> cells;
    try {
        for (const auto& p : doc.at("nodes")) {
            if (!p.is_array() || p.size() != 2)
                throw MeshError("node " + std::to_string(nodes.size()) + " is not an [x, y] pair");
            nodes.emplace_back(p[0].get<double>(), p[1].get<double>());
        }
        for (const auto& c : doc.at("cells"))
            cells.push_back(c.get<std::vector<int>>());
    } catch (const nlohmann::json::exception& e) {
        throw MeshError(std::string("malformed mesh file: ") + e.what());
    }
    return PolygonalMesh(std::move(nodes), std::move(cells));
}

PolygonalMesh load_polygonal_mesh(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw MeshError("cannot open mesh file " + path.string());
    try {
        return read_mesh_json(in);
    } catch (const MeshError& e) {
        throw MeshError(path.string() + ": " + e.what());
    }
}

void write_mesh_json(const PolygonalMesh& mesh, std::ostream& out)
{
    nlohmann::json doc;
    doc["nodes"] = nlohmann::json::array();
    for (const auto& p : mesh.nodes())
        doc["nodes"].push_back({p.x(), p.y()});
    doc["cells"] = nlohmann::json::array();
    for (int k = 0; k < mesh.num_cells(); ++k) {
        const auto loop = mesh.cell(k);
        doc["cells"].push_back(std::vector<int>(loop.begin(), loop.end()));
    }
    out << doc.dump() << '\n';
}

RegularityReport regularity_report(const PolygonalMesh& mesh)
{
    RegularityReport report;
    report.rho_v = report.rho_s = report.tau = std::numeric_limits<double>::infinity();
    for (int k = 0; k < mesh.num_cells(); ++k) {
        const auto poly = mesh.cell_polygon(k);
        const double hk = mesh.diameter(k);
        const std::size_t n = poly.size();

        double shortest = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j)
            shortest = std::min(shortest, (poly[(j + 1) % n] - poly[j]).norm());
        if (shortest / hk < report.rho_v) {
            report.rho_v = shortest / hk;
            report.worst_rho_v_cell = k;
        }

        double largest = hk;
        for (int c : mesh.touching_cells(k))
            largest = std::max(largest, mesh.diameter(c));
        if (hk / largest < report.rho_s) {
            report.rho_s = hk / largest;
            report.worst_rho_s_cell = k;
        }

        // Inradius estimate: the largest boundary distance over the barycenter
        // and points refined towards vertices and edge midpoints.
        const Point& xk = mesh.barycenter(k);
        std::vector<Point> samples{xk};
        for (std::size_t j = 0; j < n; ++j) {
            const Point mid = 0.5 * (poly[j] + poly[(j + 1) % n]);
            for (double t : {0.25, 0.5, 0.75}) {
                samples.push_back(xk + t * (poly[j] - xk));
                samples.push_back(xk + t * (mid - xk));
            }
        }
        double inradius = 0.0;
        for (const auto& s : samples) {
            if (!point_in_polygon(poly, s))
                continue;
            double d = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < n; ++j)
                d = std::min(d, distance_to_segment(s, poly[j], poly[(j + 1) % n]));
            inradius = std::max(inradius, d);
        }
        if (inradius / hk < report.tau) {
            report.tau = inradius / hk;
            report.worst_tau_cell = k;
        }
    }
    return report;
}

} // namespace pdg
