#include "pdg/quadrature.hpp"

#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <utility>

#include "pdg/errors.hpp"
#include "pdg/log.hpp"

namespace pdg {

double QuadratureRule::measure() const
{
    return std::accumulate(weights.begin(), weights.end(), 0.0);
}

namespace {

// P_n(x) and P_{n-1}(x) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x)
{
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    return {p1, p0};
}

GaussLegendre compute_gauss_legendre(int n)
{
    GaussLegendre rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int iter = 0; iter < 100; ++iter) {
            const auto [pn, pm] = legendre(n, x);
            const double dp = n * (x * pn - pm) / (x * x - 1.0);
            const double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        const auto [pn, pm] = legendre(n, x);
        const double dp = n * (x * pn - pm) / (x * x - 1.0);
        // Map [-1, 1] to [0, 1], ascending.
        rule.nodes[n - 1 - i] = 0.5 * (x + 1.0);
        rule.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

bool inside_triangle(const Point& p, const Point& a, const Point& b, const Point& c, double tol)
{
    return cross(b - a, p - a) >= -tol && cross(c - b, p - b) >= -tol && cross(a - c, p - c) >= -tol;
}

} // namespace

const GaussLegendre& gauss_legendre(int n)
{
    constexpr int max_points = 64;
    if (n < 1 || n > max_points)
        throw InvalidParameter("Gauss-Legendre rule size out of range: " + std::to_string(n));
    static std::array<std::unique_ptr<GaussLegendre>, max_points + 1> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    if (!cache[n])
        cache[n] = std::make_unique<GaussLegendre>(compute_gauss_legendre(n));
    return *cache[n];
}

std::vector<Triangle> triangulate_polygon(std::span<const Point> polygon)
{
    std::vector<Triangle> triangles;
    std::vector<Point> poly(polygon.begin(), polygon.end());
    if (poly.size() < 3)
        return triangles;
    const double area = signed_area(poly);
    if (area < 0.0)
        std::reverse(poly.begin(), poly.end());

    double scale = 0.0;
    for (const auto& p : poly)
        scale = std::max(scale, (p - poly[0]).norm());
    const double tol = 1e-14 * scale * scale;

    std::vector<int> idx(poly.size());
    std::iota(idx.begin(), idx.end(), 0);
    int guard = 0;
    while (idx.size() > 3 && guard < 10000) {
        ++guard;
        const std::size_t n = idx.size();
        bool clipped = false;
        for (std::size_t i = 0; i < n; ++i) {
            const Point& a = poly[idx[(i + n - 1) % n]];
            const Point& b = poly[idx[i]];
            const Point& c = poly[idx[(i + 1) % n]];
            const double turn = cross(b - a, c - b);
            if (std::abs(turn) <= tol) {
                // Collinear (or repeated) vertex: removing it does not change the region.
                idx.erase(idx.begin() + static_cast<long>(i));
                clipped = true;
                break;
            }
            if (turn < 0.0)
                continue;
            bool ear = true;
            for (std::size_t j = 0; j < n && ear; ++j) {
                if (j == i || j == (i + n - 1) % n || j == (i + 1) % n)
                    continue;
                const Point& p = poly[idx[j]];
                if ((p - a).norm() == 0.0 || (p - b).norm() == 0.0 || (p - c).norm() == 0.0)
                    continue;
                if (inside_triangle(p, a, b, c, tol))
                    ear = false;
            }
            if (!ear)
                continue;
            triangles.push_back({a, b, c});
            idx.erase(idx.begin() + static_cast<long>(i));
            clipped = true;
            break;
        }
        if (!clipped)
            break;  // numerically degenerate remainder
    }
    if (idx.size() == 3) {
        const Triangle last{poly[idx[0]], poly[idx[1]], poly[idx[2]]};
        if (cross(last[1] - last[0], last[2] - last[0]) > tol)
            triangles.push_back(last);
    }
    return triangles;
}

void append_triangle_rule(const Triangle& tri, int order, QuadratureRule& rule)
{
    const int n = std::max(1, (order + 3) / 2);  // ceil((order + 2) / 2)
    const auto& gl = gauss_legendre(n);
    const Point& a = tri[0];
    const Point e1 = tri[1] - tri[0];
    const Point e2 = tri[2] - tri[1];
    const double jac = std::abs(cross(e1, tri[2] - tri[0]));
    for (int i = 0; i < n; ++i) {
        const double s = gl.nodes[i];
        for (int j = 0; j < n; ++j) {
            const double t = gl.nodes[j];
            rule.points.push_back(a + s * (e1 + t * e2));
            rule.weights.push_back(gl.weights[i] * gl.weights[j] * s * jac);
        }
    }
}

QuadratureRule cell_quadrature(std::span<const Point> polygon, int order, QuadratureTarget target)
{
    if (order < 0)
        throw InvalidParameter("quadrature order must be non-negative");
    QuadratureRule rule;
    rule.target = target;
    const auto triangles = triangulate_polygon(polygon);
    if (triangles.empty()) {
        log::warn("degenerate polygon passed to cell_quadrature; returning an empty rule");
        return rule;
    }
    for (const auto& tri : triangles)
        append_triangle_rule(tri, order, rule);
    return rule;
}

QuadratureRule segment_quadrature(std::span<const Point> polyline, int order, QuadratureTarget target)
{
    if (order < 0)
        throw InvalidParameter("quadrature order must be non-negative");
    QuadratureRule rule;
    rule.target = target;
    const int n = std::max(1, (order + 2) / 2);  // ceil((order + 1) / 2)
    const auto& gl = gauss_legendre(n);
    for (std::size_t s = 0; s + 1 < polyline.size(); ++s) {
        const Point& a = polyline[s];
        const Point& b = polyline[s + 1];
        const double len = (b - a).norm();
        if (len == 0.0)
            continue;
        for (int i = 0; i < n; ++i) {
            rule.points.push_back(a + gl.nodes[i] * (b - a));
            rule.weights.push_back(gl.weights[i] * len);
        }
    }
    return rule;
}

} // namespace pdg
