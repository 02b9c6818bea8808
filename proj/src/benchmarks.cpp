#include "pdg/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "pdg/errors.hpp"

namespace pdg {

namespace {

double r2(const Point& p) { return p.squaredNorm(); }

// Fills a, b and the problem-independent fields from the exact solution.
void finish(BenchmarkSpec& s)
{
    const auto exact = s.exact;
    const auto beta = s.beta;
    s.jump = [exact](const Point& x) { return exact.u[1](x) - exact.u[0](x); };
    s.flux_jump = [exact, beta](const Point& x, const Point& n) {
        return (beta[1] * exact.grad[1](x) - beta[0] * exact.grad[0](x)).dot(n);
    };
    if (!s.near_singular)
        s.near_singular = [](int, const Point&, double) { return false; };
    if (s.h_list.empty() && s.mesh_files.empty())
        s.h_list = {1.0 / 5, 1.0 / 10, 1.0 / 20, 1.0 / 40};
}

LevelSet circle_level_set()
{
    return {[](const Point& p) { return r2(p) - 0.25; }, [](const Point& p) { return Point(2.0 * p); }};
}

BenchmarkSpec example1()
{
    BenchmarkSpec s;
    s.name = "example1";
    s.description = "circle r = 1/2, beta = 10 outside / 2 inside, continuous solution";
    s.level_set = circle_level_set();
    s.beta = {10.0, 2.0};
    const double b = 10.0;
    const double c = 0.25 * (1.0 - 1.0 / (8.0 * b) - 1.0 / b);
    s.exact.u[0] = [=](const Point& p) {
        const double q = r2(p);
        return c + (0.5 * q * q + q) / b;
    };
    s.exact.grad[0] = [=](const Point& p) { return Point((2.0 * r2(p) + 2.0) / b * p); };
    s.exact.u[1] = [](const Point& p) { return r2(p); };
    s.exact.grad[1] = [](const Point& p) { return Point(2.0 * p); };
    s.f[0] = [](const Point& p) { return -(8.0 * r2(p) + 4.0); };
    s.f[1] = [](const Point&) { return -8.0; };
    finish(s);
    return s;
}

BenchmarkSpec example2()
{
    BenchmarkSpec s = example1();
    s.name = "example2";
    s.description = "example1 on centroidal Voronoi meshes with 200 and 800 cells";
    s.h_list.clear();
    s.mesh_files = {"voronoi_200.json", "voronoi_800.json"};
    return s;
}

BenchmarkSpec example3()
{
    BenchmarkSpec s;
    s.name = "example3";
    s.description = "ellipse, beta = 1 outside / 1000 inside";
    const double ax = 18.0 / 27.0, ay = 10.0 / 27.0;
    s.level_set = {[=](const Point& p) { return std::pow(p.x() / ax, 2) + std::pow(p.y() / ay, 2) - 1.0; },
                   [=](const Point& p) { return Point(2.0 * p.x() / (ax * ax), 2.0 * p.y() / (ay * ay)); }};
    s.beta = {1.0, 1000.0};
    s.exact.u[0] = [](const Point& p) { return 5.0 * std::exp(-r2(p)); };
    s.exact.grad[0] = [](const Point& p) { return Point(-10.0 * std::exp(-r2(p)) * p); };
    s.exact.u[1] = [](const Point& p) { return std::exp(p.x()) * std::cos(p.y()); };
    s.exact.grad[1] = [](const Point& p) {
        return Point(std::exp(p.x()) * std::cos(p.y()), -std::exp(p.x()) * std::sin(p.y()));
    };
    s.f[0] = [](const Point& p) { return 20.0 * std::exp(-r2(p)) * (1.0 - r2(p)); };
    s.f[1] = [](const Point&) { return 0.0; };
    finish(s);
    return s;
}

BenchmarkSpec example4()
{
    BenchmarkSpec s;
    s.name = "example4";
    s.description = "kidney-shaped interface, beta = 10 outside / 1 inside";
    s.level_set = {[](const Point& p) {
                       const double q = std::pow(p.x() + 0.5, 2) + p.y() * p.y();
                       const double w = 2.0 * q - p.x() - 0.5;
                       return w * w - q + 0.1;
                   },
                   [](const Point& p) {
                       const double q = std::pow(p.x() + 0.5, 2) + p.y() * p.y();
                       const double w = 2.0 * q - p.x() - 0.5;
                       const Point dq(2.0 * (p.x() + 0.5), 2.0 * p.y());
                       const Point dw = 2.0 * dq - Point(1.0, 0.0);
                       return Point(2.0 * w * dw - dq);
                   }};
    s.beta = {10.0, 1.0};
    s.exact.u[0] = [](const Point& p) { return 0.1 * std::cos(1.0 - r2(p)); };
    s.exact.grad[0] = [](const Point& p) { return Point(0.2 * std::sin(1.0 - r2(p)) * p); };
    s.exact.u[1] = [](const Point& p) {
        return std::sin(2.0 * p.x() * p.x() + p.y() * p.y() + 2.0) + p.x();
    };
    s.exact.grad[1] = [](const Point& p) {
        const double c = std::cos(2.0 * p.x() * p.x() + p.y() * p.y() + 2.0);
        return Point(4.0 * p.x() * c + 1.0, 2.0 * p.y() * c);
    };
    s.f[0] = [](const Point& p) {
        const double t = 1.0 - r2(p);
        return -4.0 * (std::sin(t) - r2(p) * std::cos(t));
    };
    s.f[1] = [](const Point& p) {
        const double q = 2.0 * p.x() * p.x() + p.y() * p.y() + 2.0;
        const double x2 = p.x() * p.x(), y2 = p.y() * p.y();
        return -(6.0 * std::cos(q) - (16.0 * x2 + 4.0 * y2) * std::sin(q));
    };
    finish(s);
    return s;
}

BenchmarkSpec example5()
{
    BenchmarkSpec s;
    s.name = "example5";
    s.description = "interface r = 1/2 + sin(theta)/7, beta = 10 outside / 1 inside";
    s.level_set = {[](const Point& p) {
                       const double r = p.norm();
                       return r == 0.0 ? -0.5 : r - 0.5 - p.y() / (7.0 * r);
                   },
                   [](const Point& p) {
                       const double r = p.norm();
                       if (r == 0.0)
                           return Point(0.0, 0.0);
                       const double r3 = r * r * r;
                       return Point(p.x() / r + p.x() * p.y() / (7.0 * r3),
                                    p.y() / r - p.x() * p.x() / (7.0 * r3));
                   }};
    s.beta = {10.0, 1.0};
    s.exact.u[0] = [](const Point& p) {
        const double q = r2(p);
        return 0.1 * q * q - 0.01 * std::log(2.0 * std::sqrt(q));
    };
    s.exact.grad[0] = [](const Point& p) { return Point((0.4 * r2(p) - 0.01 / r2(p)) * p); };
    s.exact.u[1] = [](const Point& p) { return std::exp(r2(p)); };
    s.exact.grad[1] = [](const Point& p) { return Point(2.0 * std::exp(r2(p)) * p); };
    s.f[0] = [](const Point& p) { return -16.0 * r2(p); };
    s.f[1] = [](const Point& p) { return -(4.0 + 4.0 * r2(p)) * std::exp(r2(p)); };
    s.near_singular = [](int side, const Point& p, double radius) { return side == 0 && p.norm() < 0.05 + radius; };
    finish(s);
    return s;
}

BenchmarkSpec example6()
{
    BenchmarkSpec s;
    s.name = "example6";
    s.description = "kinked piecewise-linear interface, beta = 1, solution C2 across x + y = 0";
    s.level_set = {[](const Point& p) { return p.x() + p.y() > 0.0 ? p.y() - 2.0 * p.x() : p.y() + 0.5 * p.x(); },
                   [](const Point& p) {
                       return p.x() + p.y() > 0.0 ? Point(-2.0, 1.0) : Point(0.5, 1.0);
                   }};
    s.beta = {1.0, 1.0};
    s.exact.u[0] = [](const Point&) { return 8.0; };
    s.exact.grad[0] = [](const Point&) { return Point(0.0, 0.0); };
    s.exact.u[1] = [](const Point& p) {
        const double t = p.x() + p.y();
        return t <= 0.0 ? std::sin(t) : t;
    };
    s.exact.grad[1] = [](const Point& p) {
        const double t = p.x() + p.y();
        const double d = t <= 0.0 ? std::cos(t) : 1.0;
        return Point(d, d);
    };
    s.f[0] = [](const Point&) { return 0.0; };
    s.f[1] = [](const Point& p) {
        const double t = p.x() + p.y();
        return t <= 0.0 ? 2.0 * std::sin(t) : 0.0;
    };
    s.near_singular = [](int side, const Point& p, double radius) {
        return side == 1 && std::abs(p.x() + p.y()) < std::sqrt(2.0) * radius;
    };
    finish(s);
    return s;
}

} // namespace

ProblemData BenchmarkSpec::problem_data() const
{
    ProblemData d;
    d.beta = beta;
    d.f = f;
    d.g = exact.u;
    d.jump = jump;
    d.flux_jump = flux_jump;
    d.level_set = level_set;
    return d;
}

const std::vector<std::string>& benchmark_names()
{
    static const std::vector<std::string> names{"example1", "example2", "example3",
                                                "example4", "example5", "example6"};
    return names;
}

BenchmarkSpec get_benchmark(const std::string& name)
{
    if (name == "example1")
        return example1();
    if (name == "example2")
        return example2();
    if (name == "example3")
        return example3();
    if (name == "example4")
        return example4();
    if (name == "example5")
        return example5();
    if (name == "example6")
        return example6();
    std::string list;
    for (const auto& n : benchmark_names())
        list += (list.empty() ? "" : ", ") + n;
    throw InvalidParameter("unknown benchmark '" + name + "'; registered: " + list);
}

std::string data_directory()
{
    if (const char* env = std::getenv("PDG_DATA_DIR"))
        return env;
#ifdef PDG_DATA_DIR
    return PDG_DATA_DIR;
#else
    return "data";
#endif
}

namespace {

// Sixth-order central second difference.
double second_difference(const std::function<double(double)>& g, double d)
{
    static constexpr double c[4] = {-490.0, 270.0, -27.0, 2.0};
    double s = c[0] * g(0.0);
    for (int k = 1; k <= 3; ++k)
        s += c[k] * (g(k * d) + g(-k * d));
    return s / (180.0 * d * d);
}

// Sixth-order central first difference.
double first_difference(const std::function<double(double)>& g, double d)
{
    return (45.0 * (g(d) - g(-d)) - 9.0 * (g(2 * d) - g(-2 * d)) + (g(3 * d) - g(-3 * d))) / (60.0 * d);
}

} // namespace

ConsistencyReport verify_benchmark_consistency(const BenchmarkSpec& spec, int samples)
{
    ConsistencyReport rep;
    const double delta = 1e-2;
    const double reach = 3.0 * delta;

    // Interface points: vertices of the interface polylines on a fine mesh.
    const auto mesh = generate_triangular_mesh(spec.domain, 0.1);
    ClassifyOptions opts;
    opts.strict = false;
    opts.n_sub = 8;
    const auto topo = classify(mesh, spec.level_set, opts);
    std::vector<Point> gamma;
    for (const auto& cut : topo.cut_cells())
        for (const auto& p : cut.geometry.interface)
            gamma.push_back(p);
    const std::size_t stride = std::max<std::size_t>(1, gamma.size() / std::max(1, samples));
    for (std::size_t i = 0; i < gamma.size(); i += stride) {
        const Point& x = gamma[i];
        ++rep.interface_samples;
        const double jump = spec.exact.u[1](x) - spec.exact.u[0](x);
        rep.max_interface_jump = std::max(rep.max_interface_jump, std::abs(spec.jump(x)));
        rep.max_jump_error = std::max(rep.max_jump_error, std::abs(jump - spec.jump(x)));
        Point n = spec.level_set.gradient(x);
        if (n.norm() == 0.0)
            continue;
        n.normalize();
        const double flux =
            (spec.beta[1] * spec.exact.grad[1](x) - spec.beta[0] * spec.exact.grad[0](x)).dot(n);
        rep.max_flux_error = std::max(rep.max_flux_error, std::abs(flux - spec.flux_jump(x, n)));
    }

    // Interior points on a grid, each checked against its own side.
    const int per_axis = std::max(2, static_cast<int>(std::sqrt(static_cast<double>(samples))));
    for (int i = 0; i < per_axis; ++i)
        for (int j = 0; j < per_axis; ++j) {
            const Point x(spec.domain.x_min + (i + 0.5) * spec.domain.width() / per_axis,
                          spec.domain.y_min + (j + 0.5) * spec.domain.height() / per_axis);
            const int side = spec.level_set(x) > 0.0 ? 0 : 1;
            if (spec.near_singular(side, x, reach))
                continue;
            ++rep.interior_samples;
            const auto& u = spec.exact.u[side];
            auto along = [&](const Point& dir) {
                return std::function<double(double)>([&, dir](double t) { return u(x + t * dir); });
            };
            const Point ex(1.0, 0.0), ey(0.0, 1.0);
            const Point fd_grad(first_difference(along(ex), delta), first_difference(along(ey), delta));
            const Point grad = spec.exact.grad[side](x);
            rep.max_gradient_error =
                std::max(rep.max_gradient_error, (fd_grad - grad).norm() / std::max(1.0, grad.norm()));
            const double lap = second_difference(along(ex), delta) + second_difference(along(ey), delta);
            const double residual = -spec.beta[side] * lap - spec.f[side](x);
            rep.max_source_error = std::max(rep.max_source_error, std::abs(residual));
        }

    if (rep.max_jump_error >= 1e-10)
        throw SpecError(spec.name + ": jump datum a disagrees with u_1 - u_0 on Gamma (error " +
                        std::to_string(rep.max_jump_error) + ")");
    if (rep.max_flux_error >= 1e-8)
        throw SpecError(spec.name + ": flux-jump datum b disagrees with [beta grad u . n] (error " +
                        std::to_string(rep.max_flux_error) + ")");
    if (rep.max_gradient_error >= 1e-6)
        throw SpecError(spec.name + ": registered gradient disagrees with finite differences of u (error " +
                        std::to_string(rep.max_gradient_error) + ")");
    if (rep.max_source_error >= 1e-6)
        throw SpecError(spec.name + ": source f disagrees with -div(beta grad u) (error " +
                        std::to_string(rep.max_source_error) + ")");
    return rep;
}

} // namespace pdg
