#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "pdg/benchmarks.hpp"
#include "pdg/errors.hpp"
#include "pdg/harness.hpp"
#include "pdg/reconstruction.hpp"
#include "support/oracles.hpp"

using namespace pdg;

namespace {

struct Ex1Space {
    PolygonalMesh mesh;
    CutTopology topo;
    PatchTable table;
    GlobalSpace space;

    Ex1Space(double h, int m)
        : mesh(generate_triangular_mesh(get_benchmark("example1").domain, h)),
          topo(classify(mesh, get_benchmark("example1").level_set)),
          table(build_patches(mesh, topo, m)),
          space(mesh, topo, table)
    {
    }
};

// Random point in cell k: a convex combination of its vertices.
Point random_point(const PolygonalMesh& mesh, int k, std::mt19937& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto poly = mesh.cell_polygon(k);
    Point x = Point::Zero();
    double total = 0.0;
    for (const Point& v : poly) {
        const double w = u(rng) + 1e-3;
        x += w * v;
        total += w;
    }
    return x / total;
}

} // namespace

TEST_CASE("monomials are graded lexicographic")
{
    const MonomialBasis b(2);
    REQUIRE(b.size() == 6);
    CHECK(b.exponent(0) == std::array<int, 2>{0, 0});
    CHECK(b.exponent(1) == std::array<int, 2>{1, 0});
    CHECK(b.exponent(2) == std::array<int, 2>{0, 1});
    CHECK(b.exponent(3) == std::array<int, 2>{2, 0});
    CHECK(b.exponent(4) == std::array<int, 2>{1, 1});
    CHECK(b.exponent(5) == std::array<int, 2>{0, 2});
    CHECK(polynomial_dimension(3) == 10);
    CHECK(polynomial_dimension(3, 1) == 4);
    CHECK(MonomialBasis(3, 1).size() == 4);
    Eigen::VectorXd v(6);
    b.evaluate(Point(2.0, 3.0), v);
    CHECK(v(4) == doctest::Approx(6.0));
    CHECK(v(5) == doctest::Approx(9.0));
}

TEST_CASE("least-squares operator matches the normal equations")
{
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::MatrixXd a(9, 4);
    for (Eigen::Index i = 0; i < a.size(); ++i)
        a.data()[i] = u(rng);
    const Eigen::MatrixXd op = least_squares_operator(a);
    const Eigen::MatrixXd oracle = (a.transpose() * a).inverse() * a.transpose();
    CHECK((op - oracle).norm() < 1e-12 * oracle.norm());
    CHECK((op * a - Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-12);

    Eigen::MatrixXd deficient = a;
    deficient.col(3) = 2.0 * deficient.col(1);
    CHECK_THROWS_AS(least_squares_operator(deficient), UnisolvenceError);
}

TEST_CASE("one-dimensional fit against the closed-form basis")
{
    // Nodes of the patch {K_2, K_3, K_4} of the uniform strip on [-1, 1].
    const std::vector<Point> nodes{Point(-0.625, 0.125), Point(-0.375, 0.125), Point(-0.125, 0.125)};
    const LocalFrame frame = make_frame(nodes, nodes[1]);
    const LocalBasis basis = fit_local_basis(nodes, frame, 1, 1);
    REQUIRE(basis.size() == 3);
    const double mean = -0.375;
    const double spread = 2.0 * 0.25 * 0.25;
    Eigen::VectorXd lam(3);
    Eigen::Matrix2Xd grad(2, 3);
    for (double x : {-1.0, -0.5, -0.2, 0.0, 0.3}) {
        basis.values(Point(x, 0.7), lam);
        basis.gradients(Point(x, 0.7), grad);
        for (int j = 0; j < 3; ++j) {
            CHECK(lam(j) == doctest::Approx(1.0 / 3.0 + (x - mean) * (nodes[j].x() - mean) / spread).epsilon(1e-13));
            CHECK(grad(0, j) == doctest::Approx((nodes[j].x() - mean) / spread).epsilon(1e-13));
            CHECK(grad(1, j) == doctest::Approx(0.0));
        }
        // g(x) = x is reproduced: slope 1, intercept 0.
        double fit = 0.0;
        for (int j = 0; j < 3; ++j)
            fit += lam(j) * nodes[j].x();
        CHECK(fit == doctest::Approx(x).epsilon(1e-13));
    }
}

TEST_CASE("degree-m polynomials are reproduced and the basis sums to one")
{
    std::mt19937 rng(11);
    for (int m = 1; m <= 3; ++m) {
        const Ex1Space s(0.2, m);
        const oracle::RandomPolynomial p(m, rng);
        const Eigen::VectorXd u = interpolate(s.space, {p, p});
        double worst = 0.0, scale = 0.0, pou = 0.0;
        for (int k = 0; k < s.mesh.num_cells(); ++k)
            for (int side = 0; side < 2; ++side) {
                if (s.space.dof(k, side) < 0)
                    continue;
                for (int t = 0; t < 5; ++t) {
                    const Point x = random_point(s.mesh, k, rng);
                    worst = std::max(worst, std::abs(evaluate(s.space, u, k, side, x) - p(x)));
                    scale = std::max(scale, std::abs(p(x)));
                    pou = std::max(pou, std::abs(evaluate_basis(s.space, k, side, x).sum() - 1.0));
                    const Point g = evaluate_gradient(s.space, u, k, side, x);
                    CHECK((g - p.gradient(x)).norm() < 1e-8);
                }
            }
        CHECK(worst < 1e-9 * scale);
        CHECK(pou < 1e-10);
    }
}

TEST_CASE("basis gradients agree with central differences")
{
    const Ex1Space s(0.2, 2);
    std::mt19937 rng(5);
    const double d = 1e-6;
    for (int k = 0; k < s.mesh.num_cells(); k += 7) {
        const int side = s.space.dof(k, 0) >= 0 ? 0 : 1;
        const Point x = random_point(s.mesh, k, rng);
        const Eigen::Matrix2Xd g = evaluate_basis_gradient(s.space, k, side, x);
        const Eigen::VectorXd fx = (evaluate_basis(s.space, k, side, x + Point(d, 0)) -
                                    evaluate_basis(s.space, k, side, x - Point(d, 0))) / (2 * d);
        const Eigen::VectorXd fy = (evaluate_basis(s.space, k, side, x + Point(0, d)) -
                                    evaluate_basis(s.space, k, side, x - Point(0, d))) / (2 * d);
        CHECK((g.row(0).transpose() - fx).norm() < 1e-6 * (1.0 + fx.norm()));
        CHECK((g.row(1).transpose() - fy).norm() < 1e-6 * (1.0 + fy.norm()));
    }
}

TEST_CASE("one DOF per cell plus one per cut cell")
{
    const Ex1Space s(0.1, 1);
    CHECK(s.space.n_dof() == s.mesh.num_cells() + s.topo.num_cut_cells());
    int expect = 0;
    for (int k = 0; k < s.mesh.num_cells(); ++k)
        for (int side = 0; side < 2; ++side)
            if (s.topo.in_side(k, side)) {
                CHECK(s.space.dof(k, side) == expect);
                CHECK(s.space.owner(expect) == std::pair<int, int>{k, side});
                ++expect;
            } else {
                CHECK(s.space.dof(k, side) == -1);
                CHECK_THROWS_AS(s.space.basis(k, side), Error);
            }
    // Active DOFs are the members' DOFs on the same side.
    for (const auto& cut : s.topo.cut_cells()) {
        const auto& patch = s.table.patch(cut.cell, 1);
        const auto dofs = s.space.active_dofs(cut.cell, 1);
        REQUIRE(dofs.size() == patch.members.size());
        for (std::size_t j = 0; j < dofs.size(); ++j)
            CHECK(dofs[j] == s.space.dof(patch.members[j], 1));
    }
}

TEST_CASE("interpolation samples each side at the barycenter")
{
    const Ex1Space s(0.2, 1);
    const ScalarField g0 = [](const Point& x) { return 1.0 + x.x(); };
    const ScalarField g1 = [](const Point& x) { return -2.0 + x.y() * x.y(); };
    const Eigen::VectorXd u = interpolate(s.space, {g0, g1});
    for (int i = 0; i < s.space.n_dof(); ++i) {
        const auto [k, side] = s.space.owner(i);
        const Point c = s.mesh.barycenter(k);
        CHECK(u(i) == doctest::Approx(side == 0 ? g0(c) : g1(c)));
    }
}

TEST_CASE("coefficient table has one row per patch and monomial")
{
    const Ex1Space s(0.2, 2);
    std::ostringstream out;
    write_coefficients_csv(s.space, out);
    std::istringstream in(out.str());
    std::string line;
    int rows = 0;
    while (std::getline(in, line))
        rows += !line.empty();
    // Header plus one row per patch and monomial.
    CHECK(rows == 1 + static_cast<int>(s.table.patches().size()) * 6);
}
