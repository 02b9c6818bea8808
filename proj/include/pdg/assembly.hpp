#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Sparse>

#include "pdg/integration.hpp"
#include "pdg/reconstruction.hpp"

namespace pdg {

using VectorField = std::function<Point(const Point&)>;
// Interface datum evaluated at a point with the unit normal n_Gamma there.
using InterfaceField = std::function<double(const Point&, const Point&)>;

// Exact solution given per side, each piece evaluable on the whole domain.
struct ExactSolution {
    std::array<ScalarField, 2> u;
    std::array<VectorField, 2> grad;
};

enum class FluxNormal {
    Discrete,  // normal of the interface polyline segment
    LevelSet   // grad phi / |grad phi| at the quadrature point
};

// -div(beta grad u) = f in Omega_0 and Omega_1, u = g on the boundary,
// u_1 - u_0 = a and (beta_1 grad u_1 - beta_0 grad u_0) . n_Gamma = b on Gamma.
// Empty functions are read as zero.
struct ProblemData {
    std::array<double, 2> beta{1.0, 1.0};
    std::array<ScalarField, 2> f;
    std::array<ScalarField, 2> g;
    ScalarField jump;          // a
    InterfaceField flux_jump;  // b
    FluxNormal flux_normal = FluxNormal::Discrete;
    std::optional<LevelSet> level_set;  // required for FluxNormal::LevelSet
};

// Uniform: sigma = eta / h on every face and on Gamma.
// Local: face portions on side s use eta * beta_s / max(beta) / h, so the
// penalty tracks the coefficient it balances; Gamma keeps eta / h.
enum class PenaltyScaling { Uniform, Local };

struct PenaltyConfig {
    double eta = 0.0;  // 0 selects default_penalty
    PenaltyScaling scaling = PenaltyScaling::Local;
};

// 3 m max(beta_0, beta_1): about twice the smallest eta giving a positive
// definite matrix with local scaling, which is near 1.5 m for m = 1..3.
double default_penalty(int m, const std::array<double, 2>& beta);

// Multiplier of eta / h on a trace piece.
double penalty_weight(const TracePiece& piece, const std::array<double, 2>& beta, PenaltyScaling scaling);

struct QuadratureOrders {
    int volume = -1;  // -1 selects 2m + 2
    int trace = -1;
};

struct DGSystem {
    Eigen::SparseMatrix<double> matrix;  // column-major, compressed
    Eigen::VectorXd rhs;
    const GlobalSpace* space = nullptr;
    ProblemData data;
    double eta = 0.0;
    PenaltyScaling scaling = PenaltyScaling::Local;
    QuadratureOrders orders;  // resolved values
};

DGSystem assemble(const GlobalSpace& space, const ProblemData& data, const PenaltyConfig& penalty = {},
                  const QuadratureOrders& orders = {});

// Contributions of one face portion or interface piece. `matrix` is indexed by
// the concatenation of the plus and minus active DOFs (plus only on boundary
// faces) and receives the consistency, symmetry and penalty terms; `rhs`
// receives the boundary or interface data terms.
struct TraceContribution {
    std::vector<int> dofs;
    Eigen::MatrixXd matrix;
    Eigen::VectorXd rhs;
};
TraceContribution jump_average_terms(const GlobalSpace& space, const TracePiece& piece, const ProblemData& data,
                                     double eta, PenaltyScaling scaling = PenaltyScaling::Local);

// max over basis functions v of |b_h(u, v) - l_h(v)| for the exact solution u,
// integrated with both quadrature orders raised by `order_boost`.
double galerkin_orthogonality_check(const DGSystem& system, const ExactSolution& exact, int order_boost = 4);

// Coordinate format, one "row col value" line per stored entry (0-based).
void write_matrix_triplets(const DGSystem& system, std::ostream& out);

} // namespace pdg
