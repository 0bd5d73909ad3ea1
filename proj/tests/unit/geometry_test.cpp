#include <doctest.h>

#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "symport/mesh_gen.hpp"

using namespace symport;

namespace {
const std::string kFixtures = SYMPORT_FIXTURE_DIR;
}

TEST_SUITE_BEGIN("geometry");

TEST_CASE("star fixture loads with five basis functions")
{
    TriMesh mesh = load_mesh(kFixtures + "/star.off");
    CHECK(mesh.n_vertices() == 8);
    CHECK(mesh.n_triangles() == 6);
    EdgeBasisSet basis = build_edge_basis(mesh);
    CHECK(basis.n_unknowns() == 5);
    // central edge is basis index 2 and lies on the x-axis
    const EdgeBasis& central = basis.edges[2];
    CHECK(mesh.vertices[static_cast<std::size_t>(central.v0)].y() == doctest::Approx(0.0));
    CHECK(mesh.vertices[static_cast<std::size_t>(central.v1)].y() == doctest::Approx(0.0));
}

TEST_CASE("empty and malformed files fail to parse")
{
    std::istringstream empty("");
    CHECK_THROWS_AS(parse_off(empty), ParseError);
    std::istringstream garbage("not-an-off\n1 2 3\n");
    CHECK_THROWS_AS(parse_off(garbage), ParseError);
    CHECK_THROWS_AS(load_mesh(kFixtures + "/no_such_file.off"), ParseError);
}

TEST_CASE("gmsh v2 reader")
{
    const char* msh =
        "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n"
        "$Nodes\n4\n1 0 0 0\n2 1 0 0\n3 1 1 0\n4 0 1 0\n$EndNodes\n"
        "$Elements\n3\n1 15 2 0 1 1\n2 2 2 0 1 1 2 3\n3 2 2 0 1 1 3 4\n$EndElements\n";
    std::istringstream in(msh);
    TriMesh mesh = parse_msh(in);
    CHECK(mesh.n_vertices() == 4);
    CHECK(mesh.n_triangles() == 2);  // the point element is skipped
    EdgeBasisSet basis = build_edge_basis(mesh);
    CHECK(basis.n_unknowns() == 1);
}

TEST_CASE("two triangles sharing an edge carry one basis function")
{
    TriMesh mesh;
    mesh.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}};
    mesh.triangles = {{0, 1, 2}, {1, 3, 2}};
    EdgeBasisSet basis = build_edge_basis(mesh);
    REQUIRE(basis.n_unknowns() == 1);
    CHECK(basis.edges[0].v0 == 1);
    CHECK(basis.edges[0].v1 == 2);
    CHECK(basis.edges[0].tri_plus == 0);
    CHECK(basis.edges[0].edge_length == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("rim basis count matches an independent edge census")
{
    TriMesh rim = load_mesh(kFixtures + "/rim.off");
    EdgeBasisSet basis = build_edge_basis(rim);
    CHECK(basis.n_unknowns() == oracles::count_interior_edges(rim));
    CHECK(basis.n_unknowns() > 100);
}

TEST_CASE("degenerate and non-manifold inputs are rejected")
{
    TriMesh repeated;
    repeated.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    repeated.triangles = {{0, 1, 1}};
    CHECK_THROWS_AS(repeated.validate(), DegenerateTriangle);

    TriMesh sliver;
    sliver.vertices = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
    sliver.triangles = {{0, 1, 2}};
    CHECK_THROWS_AS(sliver.validate(), DegenerateTriangle);

    TriMesh fan;  // three triangles on one edge
    fan.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}};
    fan.triangles = {{0, 1, 2}, {0, 1, 3}, {0, 1, 4}};
    CHECK_THROWS_AS(build_edge_basis(fan), NonManifoldEdge);

    TriMesh bad_index;
    bad_index.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    bad_index.triangles = {{0, 1, 7}};
    CHECK_THROWS_AS(bad_index.validate(), ParseError);
}

TEST_CASE("basis orientation follows the triangle-index convention")
{
    TriMesh rim = load_mesh(kFixtures + "/rim.off");
    EdgeBasisSet basis = build_edge_basis(rim);
    for (const EdgeBasis& e : basis.edges) {
        CHECK(e.tri_plus < e.tri_minus);
        CHECK(e.v0 < e.v1);
        CHECK(e.edge_length > 0.0);
    }
}

TEST_CASE("off writer round-trips")
{
    TriMesh star = make_star_mesh();
    std::ostringstream os;
    write_off(star, os);
    std::istringstream is(os.str());
    TriMesh again = parse_off(is);
    REQUIRE(again.n_vertices() == star.n_vertices());
    REQUIRE(again.n_triangles() == star.n_triangles());
    for (std::size_t v = 0; v < star.n_vertices(); ++v)
        CHECK((again.vertices[v] - star.vertices[v]).norm() == doctest::Approx(0.0));
}

TEST_CASE("mesh metrics")
{
    TriMesh rim = load_mesh(kFixtures + "/rim.off");
    CHECK(rim.characteristic_length() == doctest::Approx(2.0));
    CHECK(rim.circumsphere_radius() == doctest::Approx(std::sqrt(1.25)));
    CHECK(rim.center().norm() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_SUITE_END();
