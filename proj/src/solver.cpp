#include "pdg/solver.hpp"

#include <cmath>
#include <random>

#include <Eigen/SparseCholesky>

#include "pdg/errors.hpp"

namespace pdg {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Cholesky = Eigen::SimplicialLLT<SpMat, Eigen::Lower, Eigen::AMDOrdering<int>>;

double relative_residual(const SpMat& a, const Eigen::VectorXd& x, const Eigen::VectorXd& b)
{
    const double nb = b.norm();
    const double nr = (b - a * x).norm();
    return nb > 0.0 ? nr / nb : nr;
}

void check_input(const SpMat& a, const Eigen::VectorXd& b)
{
    if (a.rows() != a.cols() || a.rows() != b.size())
        throw InvalidParameter("solver: matrix and right-hand side sizes differ");
    if (!b.allFinite())
        throw InvalidParameter("solver: right-hand side is not finite");
}

Solution solve_direct(const SpMat& a, const Eigen::VectorXd& b, const SolverOptions& options)
{
    Cholesky llt(a);
    if (llt.info() != Eigen::Success)
        throw SolverError("Cholesky factorization failed: matrix is not positive definite; increase the penalty eta");
    Solution sol;
    sol.values = llt.solve(b);
    sol.stats.factor_nonzeros = static_cast<long>(llt.matrixL().nestedExpression().nonZeros());
    sol.stats.relative_residual = relative_residual(a, sol.values, b);
    // Iterative refinement for badly scaled systems.
    for (int step = 0; step < 2 && sol.stats.relative_residual > options.tol; ++step) {
        sol.values += llt.solve(b - a * sol.values);
        sol.stats.relative_residual = relative_residual(a, sol.values, b);
        sol.stats.iterations = step + 1;
    }
    if (!sol.values.allFinite() || sol.stats.relative_residual > std::max(options.tol, 1e-8))
        throw SolverError("direct solve residual " + std::to_string(sol.stats.relative_residual) +
                          " exceeds tolerance; the system may be indefinite, increase the penalty eta");
    return sol;
}

Solution solve_cg(const SpMat& a, const Eigen::VectorXd& b, const SolverOptions& options)
{
    const Eigen::Index n = a.rows();
    Eigen::VectorXd inv_diag(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double d = a.coeff(i, i);
        if (!(d > 0.0))
            throw SolverError("non-positive diagonal entry at row " + std::to_string(i) +
                              "; the matrix is not positive definite, increase the penalty eta");
        inv_diag[i] = 1.0 / d;
    }
    Solution sol;
    sol.values = Eigen::VectorXd::Zero(n);
    const double nb = b.norm();
    if (nb == 0.0)
        return sol;
    const int max_it = options.max_iterations > 0 ? options.max_iterations : static_cast<int>(10 * n + 100);
    Eigen::VectorXd r = b;
    Eigen::VectorXd z = inv_diag.cwiseProduct(r);
    Eigen::VectorXd p = z;
    Eigen::VectorXd ap(n);
    double rz = r.dot(z);
    int it = 0;
    for (; it < max_it; ++it) {
        if (r.norm() <= options.tol * nb)
            break;
        ap.noalias() = a * p;
        const double pap = p.dot(ap);
        if (!(pap > 0.0))
            throw SolverError("conjugate gradient breakdown (p^T A p <= 0): matrix is not positive definite; "
                              "increase the penalty eta");
        const double alpha = rz / pap;
        sol.values.noalias() += alpha * p;
        r.noalias() -= alpha * ap;
        z = inv_diag.cwiseProduct(r);
        const double rz_new = r.dot(z);
        p = z + (rz_new / rz) * p;
        rz = rz_new;
    }
    sol.stats.iterations = it;
    sol.stats.relative_residual = relative_residual(a, sol.values, b);
    if (sol.stats.relative_residual > options.tol * 10.0)
        throw SolverError("conjugate gradient did not converge: relative residual " +
                          std::to_string(sol.stats.relative_residual) + " after " + std::to_string(it) +
                          " iterations");
    return sol;
}

} // namespace

Solution solve(const SpMat& matrix, const Eigen::VectorXd& rhs, const SolverOptions& options)
{
    check_input(matrix, rhs);
    if (!(options.tol > 0.0))
        throw InvalidParameter("solver tolerance must be positive");
    return options.method == SolverMethod::Direct ? solve_direct(matrix, rhs, options)
                                                  : solve_cg(matrix, rhs, options);
}

Solution solve(const DGSystem& system, const SolverOptions& options)
{
    return solve(system.matrix, system.rhs, options);
}

ConditionEstimate condition_estimate(const SpMat& a, int iterations, double tol)
{
    const Eigen::Index n = a.rows();
    ConditionEstimate est;
    if (n == 0)
        return est;
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> dist(0.5, 1.5);
    Eigen::VectorXd start(n);
    for (Eigen::Index i = 0; i < n; ++i)
        start[i] = dist(rng);

    auto power = [&](auto&& apply) {
        Eigen::VectorXd x = start.normalized();
        double lambda = 0.0;
        for (int it = 0; it < iterations; ++it) {
            Eigen::VectorXd y = apply(x);
            const double next = x.dot(y);
            const double ny = y.norm();
            if (ny == 0.0)
                return 0.0;
            x = y / ny;
            if (it > 0 && std::abs(next - lambda) <= tol * std::abs(next)) {
                lambda = next;
                break;
            }
            lambda = next;
        }
        return lambda;
    };

    est.lambda_max = power([&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return a * x; });
    Cholesky llt(a);
    if (llt.info() != Eigen::Success)
        throw SolverError("condition_estimate: matrix is not positive definite");
    const double inv = power([&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return llt.solve(x); });
    est.lambda_min = inv > 0.0 ? 1.0 / inv : 0.0;
    return est;
}

ConditionEstimate condition_estimate(const DGSystem& system, int iterations, double tol)
{
    return condition_estimate(system.matrix, iterations, tol);
}

} // namespace pdg
