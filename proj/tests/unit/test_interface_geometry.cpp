#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pdg/benchmarks.hpp"
#include "pdg/errors.hpp"
#include "pdg/harness.hpp"
#include "pdg/interface_geometry.hpp"
#include "pdg/quadrature.hpp"

using namespace pdg;

namespace {

LevelSet circle(double r)
{
    return {[r](const Point& x) { return x.squaredNorm() - r * r; }, [](const Point& x) { return Point(2.0 * x); }};
}

Point right_normal(const Point& a, const Point& b)
{
    const Point d = b - a;
    return Point(d.y(), -d.x()).normalized();
}

} // namespace

TEST_CASE("cell classes agree with a scan of node signs")
{
    // No node of the h = 1/5 grid lies on the circle r = 1/2.
    const PolygonalMesh mesh = generate_triangular_mesh(Rectangle{}, 0.2);
    const LevelSet phi = circle(0.5);
    const CutTopology topo = classify(mesh, phi);
    int cut = 0;
    for (int k = 0; k < mesh.num_cells(); ++k) {
        int pos = 0, neg = 0;
        for (int v : mesh.cell(k))
            (phi(mesh.node(v)) > 0 ? pos : neg)++;
        const CutClass expected = pos && neg ? CutClass::Cut : (pos ? CutClass::Pure0 : CutClass::Pure1);
        CHECK(topo.cell_class(k) == expected);
        cut += expected == CutClass::Cut;
    }
    CHECK(topo.num_cut_cells() == cut);
    CHECK(topo.count(CutClass::Cut) == cut);
    CHECK(verify_assumptions(topo).empty());
}

TEST_CASE("sub-regions partition every cut cell and approximate the disc")
{
    const PolygonalMesh mesh = generate_triangular_mesh(Rectangle{}, 0.1);
    const CutTopology topo = classify(mesh, circle(0.5), {.n_sub = 16});
    double inside = 0.0;
    for (int k = 0; k < mesh.num_cells(); ++k) {
        const double a0 = topo.side_area(mesh, k, 0), a1 = topo.side_area(mesh, k, 1);
        CHECK(a0 + a1 == doctest::Approx(mesh.area(k)).epsilon(1e-12));
        inside += a1;
    }
    // Chords lie inside the convex disc, so the polygonal area is a lower bound.
    CHECK(inside <= std::numbers::pi / 4 + 1e-12);
    CHECK(inside == doctest::Approx(std::numbers::pi / 4).epsilon(1e-5));
}

TEST_CASE("interface normals point from Omega_1 into Omega_0")
{
    const PolygonalMesh mesh = generate_triangular_mesh(Rectangle{}, 0.2);
    const LevelSet phi = circle(0.5);
    const CutTopology topo = classify(mesh, phi);
    for (const auto& cut : topo.cut_cells()) {
        const auto& line = cut.geometry.interface;
        REQUIRE(line.size() >= 2);
        for (std::size_t s = 0; s + 1 < line.size(); ++s) {
            const Point mid = 0.5 * (line[s] + line[s + 1]);
            const Point n = right_normal(line[s], line[s + 1]);
            CHECK(phi(mid + 1e-3 * n) > 0.0);
            CHECK(phi(mid - 1e-3 * n) < 0.0);
            // The discrete normal follows grad phi closely.
            CHECK(n.dot(phi.gradient(mid).normalized()) > 0.99);
        }
        CHECK(signed_area(cut.geometry.region[0]) > 0.0);
        CHECK(signed_area(cut.geometry.region[1]) > 0.0);
    }
}

TEST_CASE("anchors are uncut touching cells of the right side")
{
    const PolygonalMesh mesh = generate_triangular_mesh(Rectangle{}, 0.1);
    const CutTopology topo = classify(mesh, circle(0.5));
    for (const auto& cut : topo.cut_cells()) {
        const auto touching = mesh.touching_cells(cut.cell);
        for (int side = 0; side < 2; ++side) {
            const int a = cut.anchor[side];
            CHECK(std::find(touching.begin(), touching.end(), a) != touching.end());
            CHECK(topo.cell_class(a) == (side == 0 ? CutClass::Pure0 : CutClass::Pure1));
            CHECK(cut.anchor_ring[side] == 1);
            // Nearest candidate by barycenter distance.
            const double d = (mesh.barycenter(a) - mesh.barycenter(cut.cell)).norm();
            for (int c : touching)
                if (topo.cell_class(c) == topo.cell_class(a))
                    CHECK((mesh.barycenter(c) - mesh.barycenter(cut.cell)).norm() >= d - 1e-15);
        }
    }
}

TEST_CASE("faces through two interface nodes are chords")
{
    // The circle passes through the grid nodes (0.3, -0.4) and (0.4, -0.3).
    const PolygonalMesh mesh = generate_triangular_mesh(Rectangle{}, 0.1);
    const CutTopology topo = classify(mesh, circle(0.5));
    CHECK(topo.violations().empty());
    double inside = 0.0;
    for (int k = 0; k < mesh.num_cells(); ++k)
        inside += topo.side_area(mesh, k, 1);
    CHECK(inside == doctest::Approx(std::numbers::pi / 4).epsilon(1e-3));
}

TEST_CASE("assumptions hold on the Example 1 meshes")
{
    const auto spec = get_benchmark("example1");
    for (double h : {1.0 / 5, 1.0 / 10, 1.0 / 20, 1.0 / 40}) {
        ClassifyOptions opts;
        opts.strict = false;
        const CutTopology topo = classify(generate_triangular_mesh(spec.domain, h), spec.level_set, opts);
        CHECK(verify_assumptions(topo).empty());
        CHECK(topo.relaxations().empty());
    }
}

TEST_CASE("an interface running along a face violates the single-crossing assumption")
{
    const PolygonalMesh mesh = generate_triangular_mesh(Rectangle{}, 0.5);
    const LevelSet line{[](const Point& x) { return x.y(); }, [](const Point&) { return Point(0, 1); }};
    CHECK_THROWS_WITH_AS(classify(mesh, line), doctest::Contains("refine mesh"), GeometryError);
    ClassifyOptions opts;
    opts.strict = false;
    const CutTopology topo = classify(mesh, line, opts);
    const auto report = verify_assumptions(topo);
    CHECK_FALSE(report.single_crossing.empty());
}

TEST_CASE("a face crossed twice is an error unless the excursion is dropped")
{
    // The dip of the parabola crosses the face y = 0, 0 < x < 0.5 twice.
    const PolygonalMesh mesh = generate_triangular_mesh(Rectangle{}, 0.5);
    const LevelSet dip{[](const Point& x) { return x.y() + 0.01 - 0.5 * (x.x() - 0.25) * (x.x() - 0.25); }, {}};
    CHECK_THROWS_WITH_AS(classify(mesh, dip), doctest::Contains("refine mesh"), GeometryError);
    ClassifyOptions opts;
    opts.drop_face_excursions = true;
    opts.strict = false;
    const CutTopology topo = classify(mesh, dip, opts);
    bool dropped = false;
    for (const auto& r : topo.relaxations())
        dropped |= r.assumption == Assumption::SingleCrossing;
    CHECK(dropped);
}

TEST_CASE("anchor search beyond Delta(K) is opt-in")
{
    const auto spec = get_benchmark("example2");
    const PolygonalMesh mesh = benchmark_mesh("voronoi_800.json");
    CHECK_THROWS_WITH_AS(classify(mesh, spec.level_set), doctest::Contains("no uncut neighbour"), GeometryError);
    ClassifyOptions opts;
    opts.anchor_rings = 2;
    const CutTopology topo = classify(mesh, spec.level_set, opts);
    CHECK_FALSE(topo.relaxations().empty());
    for (const auto& cut : topo.cut_cells())
        for (int side = 0; side < 2; ++side) {
            CHECK(cut.anchor[side] >= 0);
            CHECK(cut.anchor_ring[side] >= 1);
            CHECK(cut.anchor_ring[side] <= 2);
        }
}

TEST_CASE("segment roots and projections")
{
    const LevelSet phi = circle(0.5);
    const Point r = segment_root(Point(0, 0), Point(1, 0), phi);
    CHECK(r.x() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK_THROWS_AS(segment_root(Point(0.6, 0), Point(1, 0), phi), GeometryError);

    const LevelSet no_grad{phi.phi, {}};
    const Point s = segment_root(Point(0.1, 0.1), Point(0.9, 0.7), no_grad);
    CHECK(std::abs(no_grad(s)) < 1e-11);

    const Point p = project_to_interface(Point(0.3, 0.3), Point(1, 1), 0.5, phi);
    CHECK(p.norm() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p.x() == doctest::Approx(p.y()));
    CHECK_THROWS_AS(project_to_interface(Point(0, 0), Point(1, 0), 0.1, phi), GeometryError);
}

TEST_CASE("cut geometry with a vertex on the interface")
{
    // Square with one corner exactly on the line x + y = 1.
    const std::vector<Point> sq{Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)};
    const LevelSet diag{[](const Point& x) { return x.x() + x.y() - 1.0; }, {}};
    const auto geo = cut_cell_geometry(sq, diag, 4);
    CHECK(geo.area[0] == doctest::Approx(0.5));
    CHECK(geo.area[1] == doctest::Approx(0.5));
}

TEST_CASE("classification rejects bad options")
{
    const PolygonalMesh mesh = generate_triangular_mesh(Rectangle{}, 0.5);
    ClassifyOptions opts;
    opts.n_sub = 0;
    CHECK_THROWS_AS(classify(mesh, circle(0.5), opts), InvalidParameter);
    const LevelSet nan{[](const Point&) { return std::nan(""); }, {}};
    CHECK_THROWS_AS(classify(mesh, nan), GeometryError);
}
