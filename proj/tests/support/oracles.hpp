#pragma once

// Reference computations shared by the unit tests. They use none of the
// library's quadrature or topology code.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "pdg/mesh.hpp"

namespace oracle {

using pdg::Point;

// Undirected edges of a cell list, with the number of cells using each.
inline std::vector<std::pair<std::pair<int, int>, int>> enumerate_edges(const pdg::PolygonalMesh& mesh)
{
    std::vector<std::pair<std::pair<int, int>, int>> out;
    std::set<std::pair<int, int>> seen;
    for (int k = 0; k < mesh.num_cells(); ++k) {
        const auto c = mesh.cell(k);
        for (std::size_t j = 0; j < c.size(); ++j) {
            const int a = std::min(c[j], c[(j + 1) % c.size()]);
            const int b = std::max(c[j], c[(j + 1) % c.size()]);
            if (seen.insert({a, b}).second)
                out.push_back({{a, b}, 0});
        }
    }
    for (auto& e : out)
        for (int k = 0; k < mesh.num_cells(); ++k) {
            const auto c = mesh.cell(k);
            for (std::size_t j = 0; j < c.size(); ++j) {
                const int a = std::min(c[j], c[(j + 1) % c.size()]);
                const int b = std::max(c[j], c[(j + 1) % c.size()]);
                if (a == e.first.first && b == e.first.second)
                    ++e.second;
            }
        }
    return out;
}

// Composite Simpson rule on [0, 1].
inline double simpson(const std::function<double(double)>& f, int intervals = 2000)
{
    const double h = 1.0 / intervals;
    double s = f(0.0) + f(1.0);
    for (int i = 1; i < intervals; ++i)
        s += (i % 2 ? 4.0 : 2.0) * f(i * h);
    return s * h / 3.0;
}

// Integral of x^a y^b over a counter-clockwise simple polygon by Green's
// theorem: the boundary integral of x^(a+1) y^b / (a+1) dy.
inline double monomial_integral(const std::vector<Point>& poly, int a, int b)
{
    double total = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point p = poly[i], q = poly[(i + 1) % poly.size()];
        const double dy = q.y() - p.y();
        total += simpson([&](double t) {
            const Point x = p + t * (q - p);
            return std::pow(x.x(), a + 1) * std::pow(x.y(), b) / (a + 1) * dy;
        });
    }
    return total;
}

inline double polygon_area(const std::vector<Point>& poly) { return monomial_integral(poly, 0, 0); }

// Random polynomial of total degree <= m with coefficients in [-1, 1].
struct RandomPolynomial {
    int degree = 1;
    std::vector<std::pair<std::pair<int, int>, double>> terms;

    RandomPolynomial(int m, std::mt19937& rng) : degree(m)
    {
        std::uniform_real_distribution<double> coef(-1.0, 1.0);
        for (int d = 0; d <= m; ++d)
            for (int j = 0; j <= d; ++j)
                terms.push_back({{d - j, j}, coef(rng)});
    }
    double operator()(const Point& x) const
    {
        double s = 0.0;
        for (const auto& [e, c] : terms)
            s += c * std::pow(x.x(), e.first) * std::pow(x.y(), e.second);
        return s;
    }
    Point gradient(const Point& x) const
    {
        Point g = Point::Zero();
        for (const auto& [e, c] : terms) {
            if (e.first > 0)
                g.x() += c * e.first * std::pow(x.x(), e.first - 1) * std::pow(x.y(), e.second);
            if (e.second > 0)
                g.y() += c * e.second * std::pow(x.x(), e.first) * std::pow(x.y(), e.second - 1);
        }
        return g;
    }
    double laplacian(const Point& x) const
    {
        double s = 0.0;
        for (const auto& [e, c] : terms) {
            if (e.first > 1)
                s += c * e.first * (e.first - 1) * std::pow(x.x(), e.first - 2) * std::pow(x.y(), e.second);
            if (e.second > 1)
                s += c * e.second * (e.second - 1) * std::pow(x.x(), e.first) * std::pow(x.y(), e.second - 2);
        }
        return s;
    }
};

// Unit squares [i, i+1] x [0, 1], i = 0..n-1, as quadrilateral cells.
inline pdg::PolygonalMesh square_strip(int n, double width = 1.0, double height = 1.0, double x0 = 0.0)
{
    std::vector<Point> nodes;
    for (int i = 0; i <= n; ++i) {
        nodes.emplace_back(x0 + i * width, 0.0);
        nodes.emplace_back(x0 + i * width, height);
    }
    std::vector<std::vector<int>> cells;
    for (int i = 0; i < n; ++i)
        cells.push_back({2 * i, 2 * i + 2, 2 * i + 3, 2 * i + 1});
    return pdg::PolygonalMesh(std::move(nodes), std::move(cells));
}

} // namespace oracle
