#include "pdg/integration.hpp"

#include "pdg/errors.hpp"

namespace pdg {

namespace {

Point right_normal(const Point& a, const Point& b)
{
    const Point t = b - a;
    return Point(t.y(), -t.x()) / t.norm();
}

} // namespace

IntegrationPieces build_integration_pieces(const PolygonalMesh& mesh, const CutTopology& topology,
                                           int volume_order, int trace_order)
{
    IntegrationPieces pieces;
    for (int k = 0; k < mesh.num_cells(); ++k) {
        const CutClass cls = topology.cell_class(k);
        if (cls != CutClass::Cut) {
            pieces.volumes.push_back({k, side_of(cls), cell_quadrature(mesh.cell_polygon(k), volume_order)});
            continue;
        }
        const auto& geo = topology.cut_cell(k).geometry;
        for (int side = 0; side < 2; ++side)
            pieces.volumes.push_back(
                {k, side, cell_quadrature(geo.region[side], volume_order, QuadratureTarget::SubRegion)});
    }

    for (int f = 0; f < mesh.num_faces(); ++f) {
        const Face& face = mesh.face(f);
        const FacePieces& fp = topology.face(f);
        const Point n = right_normal(mesh.node(face.nodes[0]), mesh.node(face.nodes[1]));
        for (int side = 0; side < 2; ++side) {
            if (fp.length[side] <= 0.0)
                continue;
            TracePiece tp;
            tp.kind = face.is_boundary() ? TraceKind::BoundaryFace : TraceKind::InteriorFace;
            tp.face = f;
            tp.plus_cell = face.cells[0];
            tp.plus_side = side;
            tp.minus_cell = face.cells[1];
            tp.minus_side = side;
            tp.h = face.length;
            const std::array<Point, 2>& seg = fp.segment[side];
            tp.rule = segment_quadrature(seg, trace_order, QuadratureTarget::FaceSegment);
            tp.normals.assign(tp.rule.size(), n);
            for (int c : face.cells)
                if (c >= 0 && !topology.in_side(c, side))
                    throw AssemblyError("face " + std::to_string(f) + " has a side-" + std::to_string(side) +
                                        " portion but cell " + std::to_string(c) + " is not in that side");
            pieces.traces.push_back(std::move(tp));
        }
    }

    for (const auto& cut : topology.cut_cells()) {
        const auto& line = cut.geometry.interface;
        TracePiece tp;
        tp.kind = TraceKind::Interface;
        tp.plus_cell = tp.minus_cell = cut.cell;
        tp.plus_side = 1;
        tp.minus_side = 0;
        tp.h = mesh.diameter(cut.cell);
        for (std::size_t s = 0; s + 1 < line.size(); ++s) {
            const std::array<Point, 2> seg{line[s], line[s + 1]};
            if ((seg[1] - seg[0]).norm() == 0.0)
                continue;
            const auto rule = segment_quadrature(seg, trace_order, QuadratureTarget::InterfaceSegment);
            const Point n = right_normal(seg[0], seg[1]);
            for (std::size_t q = 0; q < rule.size(); ++q) {
                tp.rule.points.push_back(rule.points[q]);
                tp.rule.weights.push_back(rule.weights[q]);
                tp.normals.push_back(n);
            }
        }
        tp.rule.target = QuadratureTarget::InterfaceSegment;
        if (!tp.rule.empty())
            pieces.traces.push_back(std::move(tp));
    }
    return pieces;
}

} // namespace pdg
