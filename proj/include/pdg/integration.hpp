#pragma once

#include <vector>

#include "pdg/interface_geometry.hpp"
#include "pdg/quadrature.hpp"

namespace pdg {

// Quadrature over K (uncut) or K^side (cut).
struct VolumePiece {
    int cell = -1;
    int side = 0;
    QuadratureRule rule;
};

enum class TraceKind { InteriorFace, BoundaryFace, Interface };

// A face portion or interface segment seen from two traces. The jump is
// (v_plus - v_minus) n and the average is (w_plus + w_minus) / 2, with n the
// unit normal pointing out of the plus trace. Boundary pieces have no minus
// trace: jump v_plus n, average w_plus. On the interface the plus trace is
// (K, 1) and the minus trace (K, 0), so n points from Omega_1 into Omega_0.
struct TracePiece {
    TraceKind kind = TraceKind::InteriorFace;
    int face = -1;  // -1 on the interface
    int plus_cell = -1, plus_side = 0;
    int minus_cell = -1, minus_side = 0;
    double h = 0.0;  // h_e on faces, h_K on the interface
    QuadratureRule rule;
    std::vector<Point> normals;  // one per quadrature point
};

struct IntegrationPieces {
    std::vector<VolumePiece> volumes;
    std::vector<TracePiece> traces;
};

// Volume pieces for every (cell, side) with cell in T_h^side, face pieces for
// every non-empty side portion of each face and interface pieces for every
// cut cell. Zero-length portions are skipped.
IntegrationPieces build_integration_pieces(const PolygonalMesh& mesh, const CutTopology& topology,
                                           int volume_order, int trace_order);

} // namespace pdg
