#pragma once

#include <array>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "pdg/assembly.hpp"
#include "pdg/reconstruction.hpp"

namespace pdg {

// Breakdown of the DG energy norm; total^2 is the sum of the squared parts.
struct DGNormParts {
    double broken_h1 = 0.0;       // |grad v| over Omega_0 and Omega_1
    double face_jump = 0.0;       // h_e^{-1/2} [v] on faces
    double face_average = 0.0;    // h_e^{1/2} {grad v} on faces
    double interface_jump = 0.0;  // h_K^{-1/2} [v] on Gamma
    double interface_average = 0.0;

    std::array<double, 5> as_array() const
    {
        return {broken_h1, face_jump, face_average, interface_jump, interface_average};
    }
};

struct DGError {
    double total = 0.0;
    DGNormParts parts;
};

struct ErrorReport {
    double h = 0.0;
    int n_dof = 0;
    double l2_error = 0.0;
    double dg_error = 0.0;
    DGNormParts dg_parts;
    double l2_order = std::numeric_limits<double>::quiet_NaN();  // against the previous row
    double dg_order = std::numeric_limits<double>::quiet_NaN();
};

// quad_order < 0 selects 2m + 4.
double l2_error(const GlobalSpace& space, const Eigen::VectorXd& u, const ExactSolution& exact, int quad_order = -1);
DGError dg_energy_error(const GlobalSpace& space, const Eigen::VectorXd& u, const ExactSolution& exact,
                        int quad_order = -1);

// log(e_1 / e_2) / log(h_1 / h_2) between consecutive rows, written into the
// order fields (the first row keeps NaN). Throws InvalidParameter unless h
// strictly decreases.
void convergence_orders(std::vector<ErrorReport>& reports);
double observed_order(double e1, double e2, double h1, double h2);

// Least-squares slope of log(error) against log(h) over all rows; NaN with
// fewer than two rows.
double fitted_order(std::span<const double> h, std::span<const double> error);

// |T_h| + |T_h^Gamma|.
int dof_count(const GlobalSpace& space);

} // namespace pdg
