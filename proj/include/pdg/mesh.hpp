#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace pdg {

using Point = Eigen::Vector2d;

struct Rectangle {
    double x_min = -1.0;
    double x_max = 1.0;
    double y_min = -1.0;
    double y_max = 1.0;

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
    double area() const { return width() * height(); }
};

// An undirected mesh edge. `nodes` is oriented as traversed by cells[0], so
// the right-hand normal of nodes[0] -> nodes[1] is the outward normal of
// cells[0]. cells[1] is -1 on the domain boundary.
struct Face {
    std::array<int, 2> nodes{};
    std::array<int, 2> cells{-1, -1};
    double length = 0.0;

    bool is_boundary() const { return cells[1] < 0; }
};

// Polygonal mesh with counter-clockwise cells and derived face topology.
// Immutable once constructed.
class PolygonalMesh {
public:
    // Validates the input, normalizes cell orientation to counter-clockwise and
    // builds the face topology. Throws MeshError on invalid input.
    PolygonalMesh(std::vector<Point> nodes, std::vector<std::vector<int>> cells);

    int num_nodes() const { return static_cast<int>(nodes_.size()); }
    int num_cells() const { return static_cast<int>(cells_.size()); }
    int num_faces() const { return static_cast<int>(faces_.size()); }
    int num_interior_faces() const;
    int num_boundary_faces() const { return num_faces() - num_interior_faces(); }

    const std::vector<Point>& nodes() const { return nodes_; }
    const Point& node(int i) const { return nodes_[i]; }
    std::span<const int> cell(int k) const { return cells_[k]; }
    std::vector<Point> cell_polygon(int k) const;

    const std::vector<Face>& faces() const { return faces_; }
    const Face& face(int f) const { return faces_[f]; }
    // Face index of local edge j (vertex j to vertex j+1) of cell k.
    std::span<const int> cell_faces(int k) const { return cell_faces_[k]; }

    double diameter(int k) const { return diameter_[k]; }
    double area(int k) const { return area_[k]; }
    const Point& barycenter(int k) const { return barycenter_[k]; }
    bool is_convex(int k) const { return convex_[k]; }

    // Largest cell diameter.
    double h() const { return h_; }

    // Cells sharing a face with k.
    std::span<const int> face_neighbors(int k) const { return face_neighbors_[k]; }
    // Cells sharing at least one node with k, excluding k itself (Delta(K)).
    std::span<const int> touching_cells(int k) const { return touching_[k]; }

private:
    void validate_and_orient();
    void build_face_topology();
    void compute_cell_geometry();
    void build_adjacency();

    std::vector<Point> nodes_;
    std::vector<std::vector<int>> cells_;
    std::vector<Face> faces_;
    std::vector<std::vector<int>> cell_faces_;
    std::vector<double> diameter_;
    std::vector<double> area_;
    std::vector<Point> barycenter_;
    std::vector<bool> convex_;
    std::vector<std::vector<int>> face_neighbors_;
    std::vector<std::vector<int>> touching_;
    double h_ = 0.0;
};

// Uniform grid of squares of side h over `domain`, each split into two
// triangles along its positive-slope diagonal.
PolygonalMesh generate_triangular_mesh(const Rectangle& domain, double h);

// JSON mesh format: {"nodes": [[x, y], ...], "cells": [[i, j, k, ...], ...]}.
PolygonalMesh read_mesh_json(std::istream& in);
PolygonalMesh load_polygonal_mesh(const std::filesystem::path& path);
void write_mesh_json(const PolygonalMesh& mesh, std::ostream& out);

struct RegularityReport {
    double rho_v = 0.0;  // min over cells of (shortest edge / h_K)
    double rho_s = 0.0;  // min over cells of h_K / max diameter in Delta(K)
    double tau = 0.0;    // min over cells of (inradius estimate / h_K)
    int worst_rho_v_cell = -1;
    int worst_rho_s_cell = -1;
    int worst_tau_cell = -1;
};

RegularityReport regularity_report(const PolygonalMesh& mesh);

// Polygon helpers shared by the geometry modules.
double signed_area(std::span<const Point> polygon);
Point polygon_centroid(std::span<const Point> polygon);
double polygon_diameter(std::span<const Point> polygon);
bool point_in_polygon(std::span<const Point> polygon, const Point& x);
bool is_simple_polygon(std::span<const Point> polygon);
double distance_to_segment(const Point& x, const Point& a, const Point& b);

} // namespace pdg
