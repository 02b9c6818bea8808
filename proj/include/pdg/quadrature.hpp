#pragma once

#include <array>
#include <span>
#include <vector>

#include "pdg/mesh.hpp"

namespace pdg {

enum class QuadratureTarget { WholeCell, SubRegion, FaceSegment, InterfaceSegment };

struct QuadratureRule {
    std::vector<Point> points;
    std::vector<double> weights;
    QuadratureTarget target = QuadratureTarget::WholeCell;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
    double measure() const;
};

// Gauss-Legendre nodes and weights on [0, 1] with n points (exact to degree 2n-1).
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussLegendre& gauss_legendre(int n);

using Triangle = std::array<Point, 3>;

// Ear-clipping triangulation of a simple polygon (either orientation).
// Collinear vertices are dropped, so every returned triangle has positive area.
std::vector<Triangle> triangulate_polygon(std::span<const Point> polygon);

// Collapsed (Duffy) Gauss product rule on a triangle, exact for polynomials of
// total degree `order`; all weights positive.
void append_triangle_rule(const Triangle& tri, int order, QuadratureRule& rule);

// Rule over a simple polygon exact to `order`; weights sum to the polygon
// area. A degenerate polygon yields an empty rule and a warning.
QuadratureRule cell_quadrature(std::span<const Point> polygon, int order,
                               QuadratureTarget target = QuadratureTarget::WholeCell);

// Gauss-Legendre points on every sub-segment of an open polyline; weights sum
// to its arclength.
QuadratureRule segment_quadrature(std::span<const Point> polyline, int order,
                                  QuadratureTarget target = QuadratureTarget::FaceSegment);

} // namespace pdg
