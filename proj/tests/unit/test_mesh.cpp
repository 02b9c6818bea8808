#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "pdg/benchmarks.hpp"
#include "pdg/errors.hpp"
#include "pdg/harness.hpp"
#include "pdg/mesh.hpp"
#include "support/oracles.hpp"

using namespace pdg;

TEST_CASE("uniform triangulation counts match brute-force edge enumeration")
{
    const PolygonalMesh mesh = generate_triangular_mesh(Rectangle{}, 0.2);
    CHECK(mesh.num_cells() == 200);
    const auto edges = oracle::enumerate_edges(mesh);
    int interior = 0;
    for (const auto& e : edges)
        interior += e.second == 2;
    CHECK(mesh.num_faces() == static_cast<int>(edges.size()));
    CHECK(mesh.num_interior_faces() == interior);
    // 110 horizontal + 110 vertical + 100 diagonal edges, 40 on the boundary.
    CHECK(mesh.num_faces() == 320);
    CHECK(mesh.num_interior_faces() == 280);
}

TEST_CASE("cell count is 2 (W/h)(H/h) and h is the largest diameter")
{
    const Rectangle dom{0.0, 2.0, 0.0, 1.0};
    const PolygonalMesh mesh = generate_triangular_mesh(dom, 0.25);
    CHECK(mesh.num_cells() == 2 * 8 * 4);
    CHECK(mesh.h() == doctest::Approx(0.25 * std::sqrt(2.0)).epsilon(1e-14));
    double area = 0.0;
    for (int k = 0; k < mesh.num_cells(); ++k) {
        CHECK(signed_area(mesh.cell_polygon(k)) > 0.0);
        area += mesh.area(k);
    }
    CHECK(area == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("diagonals have positive slope")
{
    const PolygonalMesh mesh = generate_triangular_mesh(Rectangle{0.0, 1.0, 0.0, 1.0}, 1.0);
    REQUIRE(mesh.num_cells() == 2);
    for (const auto& f : mesh.faces()) {
        const Point d = mesh.node(f.nodes[1]) - mesh.node(f.nodes[0]);
        if (std::abs(d.x()) > 0 && std::abs(d.y()) > 0)
            CHECK(d.x() * d.y() > 0.0);
    }
}

TEST_CASE("face orientation follows cells[0] and normals point outward")
{
    const PolygonalMesh mesh = generate_triangular_mesh(Rectangle{}, 0.5);
    for (int f = 0; f < mesh.num_faces(); ++f) {
        const Face& face = mesh.face(f);
        const Point a = mesh.node(face.nodes[0]), b = mesh.node(face.nodes[1]);
        const Point n(b.y() - a.y(), a.x() - b.x());
        const Point mid = 0.5 * (a + b);
        CHECK(n.dot(mid - mesh.barycenter(face.cells[0])) > 0.0);
        if (!face.is_boundary())
            CHECK(n.dot(mid - mesh.barycenter(face.cells[1])) < 0.0);
        CHECK(face.length == doctest::Approx((b - a).norm()));
    }
}

TEST_CASE("clockwise input is reoriented")
{
    PolygonalMesh mesh({Point(0, 0), Point(1, 0), Point(0, 1)}, {{0, 2, 1}});
    CHECK(signed_area(mesh.cell_polygon(0)) == doctest::Approx(0.5));
    CHECK(mesh.barycenter(0).x() == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("touching cells are exactly the node-sharing cells")
{
    const PolygonalMesh mesh = generate_triangular_mesh(Rectangle{}, 0.25);
    for (int k = 0; k < mesh.num_cells(); ++k) {
        std::set<int> expected;
        const auto ck = mesh.cell(k);
        for (int j = 0; j < mesh.num_cells(); ++j) {
            if (j == k)
                continue;
            for (int v : mesh.cell(j))
                if (std::find(ck.begin(), ck.end(), v) != ck.end())
                    expected.insert(j);
        }
        const auto touching = mesh.touching_cells(k);
        CHECK(std::set<int>(touching.begin(), touching.end()) == expected);
    }
    // An interior triangle of this pattern touches twelve others.
    const int inner = mesh.num_cells() / 2 + 4;
    CHECK(mesh.touching_cells(inner).size() == 12);
}

TEST_CASE("regularity constants of the uniform mesh")
{
    const auto r = regularity_report(generate_triangular_mesh(Rectangle{}, 0.2));
    CHECK(r.rho_v == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(r.rho_s == doctest::Approx(1.0));
    CHECK(r.tau > 0.0);
}

TEST_CASE("invalid meshes are rejected")
{
    using Cells = std::vector<std::vector<int>>;
    const std::vector<Point> square{Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)};
    CHECK_THROWS_AS(PolygonalMesh(square, Cells{}), MeshError);
    CHECK_THROWS_AS(PolygonalMesh(square, Cells{{0, 1, 2}}), MeshError);                 // dangling node 3
    CHECK_THROWS_AS(PolygonalMesh(square, Cells{{0, 1, 2, 7}}), MeshError);              // out of range
    CHECK_THROWS_AS(PolygonalMesh(square, Cells{{0, 2, 1, 3}}), MeshError);              // bow tie
    CHECK_THROWS_AS(PolygonalMesh(square, Cells{{0, 1, 2}, {0, 1, 3}, {0, 2, 3}}), MeshError);  // overlap
    CHECK_THROWS_AS(generate_triangular_mesh(Rectangle{}, 0.0), InvalidParameter);
    CHECK_THROWS_AS(generate_triangular_mesh(Rectangle{}, 5.0), InvalidParameter);
}

TEST_CASE("json round trip and malformed files")
{
    const PolygonalMesh mesh = generate_triangular_mesh(Rectangle{}, 0.5);
    std::stringstream buf;
    write_mesh_json(mesh, buf);
    const PolygonalMesh back = read_mesh_json(buf);
    CHECK(back.num_cells() == mesh.num_cells());
    CHECK(back.num_faces() == mesh.num_faces());
    for (int i = 0; i < mesh.num_nodes(); ++i)
        CHECK((back.node(i) - mesh.node(i)).norm() == 0.0);

    std::istringstream bad_json("{\"nodes\": [[0, 0], [1, 0]");
    CHECK_THROWS_AS(read_mesh_json(bad_json), MeshError);
    std::istringstream bad_node("{\"nodes\": [[0, 0, 1]], \"cells\": []}");
    CHECK_THROWS_AS(read_mesh_json(bad_node), MeshError);
    std::istringstream missing("{\"cells\": [[0, 1, 2]]}");
    CHECK_THROWS_AS(read_mesh_json(missing), MeshError);
    CHECK_THROWS_AS(load_polygonal_mesh("/nonexistent/mesh.json"), MeshError);
}

TEST_CASE("voronoi fixtures are valid planar meshes")
{
    for (const char* file : {"voronoi_200.json", "voronoi_800.json"}) {
        const PolygonalMesh mesh = benchmark_mesh(file);
        // V - E + F = 1 for a triangulated disk without the outer face.
        CHECK(mesh.num_nodes() - mesh.num_faces() + mesh.num_cells() == 1);
        double area = 0.0;
        for (int k = 0; k < mesh.num_cells(); ++k)
            area += mesh.area(k);
        CHECK(area == doctest::Approx(4.0).epsilon(1e-12));
        const auto edges = oracle::enumerate_edges(mesh);
        CHECK(mesh.num_faces() == static_cast<int>(edges.size()));
    }
    CHECK(benchmark_mesh("voronoi_200.json").num_cells() == 200);
    CHECK(benchmark_mesh("voronoi_800.json").num_cells() == 800);
}

TEST_CASE("polygon helpers")
{
    const std::vector<Point> l_shape{Point(0, 0), Point(2, 0), Point(2, 1), Point(1, 1), Point(1, 2), Point(0, 2)};
    CHECK(signed_area(l_shape) == doctest::Approx(3.0));
    const Point c = polygon_centroid(l_shape);
    CHECK(c.x() == doctest::Approx(oracle::monomial_integral(l_shape, 1, 0) / 3.0));
    CHECK(c.y() == doctest::Approx(oracle::monomial_integral(l_shape, 0, 1) / 3.0));
    CHECK(polygon_diameter(l_shape) == doctest::Approx(std::sqrt(8.0)));
    CHECK(point_in_polygon(l_shape, Point(0.5, 1.5)));
    CHECK_FALSE(point_in_polygon(l_shape, Point(1.5, 1.5)));
    CHECK(is_simple_polygon(l_shape));
    CHECK(distance_to_segment(Point(0.5, 1.0), Point(0, 0), Point(1, 0)) == doctest::Approx(1.0));
    CHECK(distance_to_segment(Point(2.0, 0.0), Point(0, 0), Point(1, 0)) == doctest::Approx(1.0));
}
