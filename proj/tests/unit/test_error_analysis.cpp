#include <doctest.h>

#include <cmath>
#include <vector>

#include "pdg/benchmarks.hpp"
#include "pdg/error_analysis.hpp"
#include "pdg/errors.hpp"
#include "pdg/harness.hpp"

using namespace pdg;

namespace {

ExactSolution constant(double c0, double c1)
{
    ExactSolution e;
    e.u = {[c0](const Point&) { return c0; }, [c1](const Point&) { return c1; }};
    e.grad = {[](const Point&) { return Point(0, 0); }, [](const Point&) { return Point(0, 0); }};
    return e;
}

} // namespace

TEST_CASE("observed and fitted orders")
{
    CHECK(observed_order(1.0, 0.25, 0.2, 0.1) == doctest::Approx(2.0));
    CHECK(observed_order(8.0, 1.0, 1.0, 0.5) == doctest::Approx(3.0));
    const std::vector<double> h{0.2, 0.1, 0.05, 0.025};
    std::vector<double> e;
    for (double x : h)
        e.push_back(3.0 * std::pow(x, 2.5));
    CHECK(fitted_order(h, e) == doctest::Approx(2.5).epsilon(1e-12));
    // Least-squares slope of (log h, log e) = (0, 0), (1, 1), (2, 3): 1.5.
    const std::vector<double> h3{1.0, std::exp(1.0), std::exp(2.0)};
    const std::vector<double> e3{1.0, std::exp(1.0), std::exp(3.0)};
    CHECK(fitted_order(h3, e3) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(std::isnan(fitted_order(std::vector<double>{0.1}, std::vector<double>{1.0})));
    CHECK_THROWS_AS(fitted_order(h, std::vector<double>{1.0}), InvalidParameter);
}

TEST_CASE("convergence orders fill consecutive rows")
{
    std::vector<ErrorReport> rows(3);
    rows[0].h = 0.2, rows[1].h = 0.1, rows[2].h = 0.05;
    rows[0].l2_error = 1.0, rows[1].l2_error = 0.25, rows[2].l2_error = 0.0625;
    rows[0].dg_error = 1.0, rows[1].dg_error = 0.5, rows[2].dg_error = 0.25;
    convergence_orders(rows);
    CHECK(std::isnan(rows[0].l2_order));
    CHECK(rows[1].l2_order == doctest::Approx(2.0));
    CHECK(rows[2].l2_order == doctest::Approx(2.0));
    CHECK(rows[2].dg_order == doctest::Approx(1.0));
    rows[2].h = 0.1;
    CHECK_THROWS_AS(convergence_orders(rows), InvalidParameter);
}

TEST_CASE("error of the zero function against a constant")
{
    const auto spec = get_benchmark("example1");
    const Discretization d = discretize(generate_triangular_mesh(spec.domain, 0.2), spec.level_set, 1);
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(d.space->n_dof());
    // ||1||_{L^2([-1,1]^2)} = 2.
    CHECK(l2_error(*d.space, zero, constant(1.0, 1.0)) == doctest::Approx(2.0).epsilon(1e-12));
    // With u_0 = 0 and u_1 = 1 only |Omega_1| contributes; the polygonal disc is close to pi/4.
    CHECK(l2_error(*d.space, zero, constant(0.0, 1.0)) == doctest::Approx(std::sqrt(M_PI / 4)).epsilon(2e-3));
    CHECK(dof_count(*d.space) == d.space->n_dof());
}

TEST_CASE("interpolated polynomials have no error")
{
    const auto spec = get_benchmark("example1");
    for (int m = 1; m <= 2; ++m) {
        const Discretization d = discretize(generate_triangular_mesh(spec.domain, 0.2), spec.level_set, m);
        ExactSolution e;
        e.u = {[](const Point& x) { return 1.0 + 2.0 * x.x() - x.y(); },
               [](const Point& x) { return -0.5 + x.x() + 3.0 * x.y(); }};
        e.grad = {[](const Point&) { return Point(2.0, -1.0); }, [](const Point&) { return Point(1.0, 3.0); }};
        const Eigen::VectorXd u = interpolate(*d.space, e.u);
        CHECK(l2_error(*d.space, u, e) < 1e-12);
        const DGError dg = dg_energy_error(*d.space, u, e);
        CHECK(dg.total < 1e-11);
    }
}

TEST_CASE("DG norm parts combine in quadrature")
{
    const auto spec = get_benchmark("example1");
    const Discretization d = discretize(generate_triangular_mesh(spec.domain, 0.2), spec.level_set, 1);
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(d.space->n_dof());
    const DGError dg = dg_energy_error(*d.space, zero, spec.exact);
    double sum = 0.0;
    for (double p : dg.parts.as_array()) {
        CHECK(p >= 0.0);
        sum += p * p;
    }
    CHECK(dg.total == doctest::Approx(std::sqrt(sum)).epsilon(1e-14));
    CHECK(dg.parts.broken_h1 > 0.0);
    CHECK(dg.parts.interface_jump > 0.0);

    // A constant has only jump parts: none on interior faces, sigma-weighted on the boundary.
    const DGError c = dg_energy_error(*d.space, zero, constant(1.0, 1.0));
    CHECK(c.parts.broken_h1 == doctest::Approx(0.0));
    CHECK(c.parts.face_average == doctest::Approx(0.0));
    CHECK(c.parts.interface_jump == doctest::Approx(0.0));
    CHECK(c.parts.face_jump > 0.0);
}
