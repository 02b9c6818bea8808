#pragma once

#include <Eigen/Core>
#include <Eigen/Sparse>

#include "pdg/assembly.hpp"

namespace pdg {

enum class SolverMethod { Direct, CG };

struct SolverOptions {
    SolverMethod method = SolverMethod::Direct;
    double tol = 1e-10;          // relative residual
    int max_iterations = 0;      // cg only; 0 means 10 n
};

struct SolverStats {
    int iterations = 0;          // cg iterations or refinement steps
    double relative_residual = 0.0;
    long factor_nonzeros = 0;    // direct only
};

struct Solution {
    Eigen::VectorXd values;
    SolverStats stats;
};

// Throws SolverError if the matrix is not positive definite (larger eta
// usually helps) or the tolerance is not met.
Solution solve(const Eigen::SparseMatrix<double>& matrix, const Eigen::VectorXd& rhs, const SolverOptions& options = {});
Solution solve(const DGSystem& system, const SolverOptions& options = {});

struct ConditionEstimate {
    double lambda_max = 0.0;
    double lambda_min = 0.0;
    double condition() const { return lambda_max / lambda_min; }
};

// Power iteration for lambda_max and inverse power iteration (through a
// Cholesky factorization) for lambda_min.
ConditionEstimate condition_estimate(const Eigen::SparseMatrix<double>& matrix, int iterations = 200,
                                     double tol = 1e-8);
ConditionEstimate condition_estimate(const DGSystem& system, int iterations = 200, double tol = 1e-8);

} // namespace pdg
