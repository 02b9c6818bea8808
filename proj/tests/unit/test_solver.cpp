#include <doctest.h>

#include <random>

#include <Eigen/Dense>

#include "pdg/benchmarks.hpp"
#include "pdg/errors.hpp"
#include "pdg/harness.hpp"
#include "pdg/solver.hpp"

using namespace pdg;

namespace {

Eigen::SparseMatrix<double> sparse(const Eigen::MatrixXd& a) { return a.sparseView(); }

} // namespace

TEST_CASE("identity system")
{
    Eigen::SparseMatrix<double> id(5, 5);
    id.setIdentity();
    const Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(5, 1.0, 5.0);
    for (auto method : {SolverMethod::Direct, SolverMethod::CG}) {
        const Solution s = solve(id, b, {.method = method});
        CHECK((s.values - b).norm() == doctest::Approx(0.0));
        CHECK(s.stats.relative_residual < 1e-14);
    }
}

TEST_CASE("two by two system")
{
    Eigen::Matrix2d a;
    a << 2, 1, 1, 2;
    const Eigen::Vector2d b(1, 1);
    for (auto method : {SolverMethod::Direct, SolverMethod::CG}) {
        const Solution s = solve(sparse(a), b, {.method = method});
        CHECK(s.values(0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
        CHECK(s.values(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    }
    // Conjugate gradients finish within n steps in exact arithmetic.
    CHECK(solve(sparse(a), b, {.method = SolverMethod::CG}).stats.iterations <= 2);
}

TEST_CASE("condition estimate of a diagonal matrix")
{
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
    a.diagonal() << 1.0, 10.0, 1000.0;
    const ConditionEstimate est = condition_estimate(sparse(a));
    CHECK(est.lambda_max == doctest::Approx(1000.0).epsilon(1e-6));
    CHECK(est.lambda_min == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(est.condition() == doctest::Approx(1000.0).epsilon(1e-6));
}

TEST_CASE("indefinite and malformed systems are rejected")
{
    Eigen::Matrix2d a;
    a << 1, 2, 2, 1;  // eigenvalues 3 and -1
    const Eigen::Vector2d b(1, 0);
    CHECK_THROWS_WITH_AS(solve(sparse(a), b), doctest::Contains("eta"), SolverError);
    Eigen::Matrix2d neg;
    neg << -1, 0, 0, 1;
    CHECK_THROWS_AS(solve(sparse(neg), b, {.method = SolverMethod::CG}), SolverError);
    CHECK_THROWS_AS(solve(sparse(a), Eigen::Vector3d(1, 2, 3)), InvalidParameter);
    CHECK_THROWS_AS(solve(sparse(Eigen::Matrix2d::Identity()), b, {.tol = 0.0}), InvalidParameter);
    CHECK_THROWS_AS(solve(sparse(Eigen::Matrix2d::Identity()), Eigen::Vector2d(1, std::nan(""))),
                    InvalidParameter);
}

TEST_CASE("conjugate gradients agree with the factorization on a DG system")
{
    const auto spec = get_benchmark("example1");
    const Discretization d = discretize(generate_triangular_mesh(spec.domain, 0.1), spec.level_set, 2);
    const DGSystem sys = assemble(*d.space, spec.problem_data());
    const Solution direct = solve(sys);
    const Solution cg = solve(sys, {.method = SolverMethod::CG, .tol = 1e-13});
    CHECK((direct.values - cg.values).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(direct.stats.factor_nonzeros > 0);
    CHECK(cg.stats.iterations > 0);
    const ConditionEstimate est = condition_estimate(sys);
    CHECK(est.lambda_min > 0.0);
    CHECK(est.condition() > 1.0);
    // Against a dense eigenvalue solve: Rayleigh quotients bound the extreme
    // eigenvalues from inside the spectrum.
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig{Eigen::MatrixXd(sys.matrix)};
    const double hi = eig.eigenvalues().maxCoeff(), lo = eig.eigenvalues().minCoeff();
    CHECK(est.lambda_max <= hi * (1 + 1e-12));
    CHECK(est.lambda_max >= 0.95 * hi);
    CHECK(est.lambda_min >= lo * (1 - 1e-12));
    CHECK(est.lambda_min <= 1.05 * lo);
}
