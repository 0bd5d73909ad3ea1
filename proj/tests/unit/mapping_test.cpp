#include <doctest.h>

#include "oracles.hpp"
#include "symport/mesh_gen.hpp"

using namespace symport;

namespace {
const std::string kFixtures = SYMPORT_FIXTURE_DIR;

struct StarAction {
    TriMesh mesh = load_mesh(kFixtures + "/star.off");
    EdgeBasisSet basis = build_edge_basis(mesh);
    PointGroup group = PointGroup::build("C2v");
    MappingMatrices maps = build_mapping_matrices(basis, group);
};
}  // namespace

TEST_SUITE_BEGIN("mapping");

TEST_CASE("star mapping matrices are the published signed permutations")
{
    StarAction s;
    const MatrixXd ce = s.maps[0].to_dense();
    CHECK((ce - MatrixXd::Identity(5, 5)).norm() == 0.0);

    MatrixXd c2(5, 5), sxz(5, 5), syz(5, 5);
    c2 << 0, 0, 0, 0, -1,
          0, 0, 0, -1, 0,
          0, 0, -1, 0, 0,
          0, -1, 0, 0, 0,
          -1, 0, 0, 0, 0;
    sxz << 0, 0, 0, 1, 0,
           0, 0, 0, 0, 1,
           0, 0, -1, 0, 0,
           1, 0, 0, 0, 0,
           0, 1, 0, 0, 0;
    syz << 0, -1, 0, 0, 0,
           -1, 0, 0, 0, 0,
           0, 0, 1, 0, 0,
           0, 0, 0, 0, -1,
           0, 0, 0, -1, 0;
    CHECK((s.maps[s.group.op_index("C2z")].to_dense() - c2).norm() == 0.0);
    CHECK((s.maps[s.group.op_index("sigma_xz")].to_dense() - sxz).norm() == 0.0);
    CHECK((s.maps[s.group.op_index("sigma_yz")].to_dense() - syz).norm() == 0.0);
}

TEST_CASE("representation property holds exactly")
{
    StarAction s;
    for (int i = 0; i < s.group.order(); ++i) {
        for (int j = 0; j < s.group.order(); ++j) {
            const MappingMatrix prod = s.maps[static_cast<std::size_t>(i)].composed_with(
                s.maps[static_cast<std::size_t>(j)]);
            const MappingMatrix& expected = s.maps[static_cast<std::size_t>(s.group.compose(i, j))];
            CHECK(prod.perm == expected.perm);
            CHECK(prod.sign == expected.sign);
        }
    }
}

TEST_CASE("representation property on the rim and a C4v square")
{
    TriMesh rim = load_mesh(kFixtures + "/rim.off");
    EdgeBasisSet rb = build_edge_basis(rim);
    PointGroup c2v = PointGroup::build("C2v");
    MappingMatrices rmaps = build_mapping_matrices(rb, c2v);
    for (int i = 0; i < c2v.order(); ++i)
        for (int j = 0; j < c2v.order(); ++j) {
            const MappingMatrix prod = rmaps[static_cast<std::size_t>(i)].composed_with(
                rmaps[static_cast<std::size_t>(j)]);
            const MappingMatrix& expected = rmaps[static_cast<std::size_t>(c2v.compose(i, j))];
            CHECK(prod.perm == expected.perm);
            CHECK(prod.sign == expected.sign);
        }

    TriMesh sq = make_square_mesh(1.0, 3);
    EdgeBasisSet sb = build_edge_basis(sq);
    PointGroup c4v = PointGroup::build("C4v");
    MappingMatrices smaps = build_mapping_matrices(sb, c4v);
    for (int i = 0; i < c4v.order(); ++i)
        for (int j = 0; j < c4v.order(); ++j) {
            const MappingMatrix prod = smaps[static_cast<std::size_t>(i)].composed_with(
                smaps[static_cast<std::size_t>(j)]);
            const MappingMatrix& expected = smaps[static_cast<std::size_t>(c4v.compose(i, j))];
            CHECK(prod.perm == expected.perm);
            CHECK(prod.sign == expected.sign);
        }
}

TEST_CASE("broken symmetry is reported")
{
    TriMesh rim = load_mesh(kFixtures + "/rim.off");
    rim.vertices[10] += Vector3d(1e-3, 0, 0);
    EdgeBasisSet basis = build_edge_basis(rim);
    PointGroup group = PointGroup::build("C2v");
    CHECK_THROWS_AS(build_mapping_matrices(basis, group), SymmetryBroken);

    // a 2L x L plate is not fourfold symmetric
    TriMesh plate = load_mesh(kFixtures + "/plate.off");
    EdgeBasisSet pb = build_edge_basis(plate);
    CHECK_THROWS_AS(build_mapping_matrices(pb, PointGroup::build("C4v")), SymmetryBroken);
}

TEST_CASE("generator cell of the star")
{
    StarAction s;
    GeneratorCell cell = find_generator_cell(s.basis, s.group, s.maps);
    CHECK(cell.interior == std::vector<int>{0});
    CHECK(cell.boundary == std::vector<int>{2});
    CHECK(cell.replicated == std::vector<int>{1, 3, 4});
    // the central edge maps onto itself with a sign flip under sigma_xz
    const MappingMatrix& sxz = s.maps[static_cast<std::size_t>(s.group.op_index("sigma_xz"))];
    CHECK(sxz.perm[2] == 2);
    CHECK(sxz.sign[2] == -1);
}

TEST_CASE("orbits partition the basis")
{
    TriMesh rim = load_mesh(kFixtures + "/rim.off");
    EdgeBasisSet basis = build_edge_basis(rim);
    PointGroup group = PointGroup::build("C2v");
    MappingMatrices maps = build_mapping_matrices(basis, group);
    GeneratorCell cell = find_generator_cell(basis, group, maps);

    std::vector<int> seen(static_cast<std::size_t>(basis.n_unknowns()), 0);
    for (const auto& orbit : cell.orbits)
        for (int m : orbit) ++seen[static_cast<std::size_t>(m)];
    for (int c : seen) CHECK(c == 1);

    for (int rep : cell.interior)
        CHECK(cell.orbits[static_cast<std::size_t>(cell.orbit_of[static_cast<std::size_t>(rep)])].size() ==
              static_cast<std::size_t>(group.order()));
    for (int rep : cell.boundary)
        CHECK(cell.orbits[static_cast<std::size_t>(cell.orbit_of[static_cast<std::size_t>(rep)])].size() <
              static_cast<std::size_t>(group.order()));

    // plate positions on the reflection planes classify as boundary
    TriMesh plate = load_mesh(kFixtures + "/plate.off");
    EdgeBasisSet pb = build_edge_basis(plate);
    MappingMatrices pmaps = build_mapping_matrices(pb, group);
    GeneratorCell pcell = find_generator_cell(pb, group, pmaps);
    int on_plane_boundary = 0;
    for (int rep : pcell.boundary) {
        const EdgeBasis& e = pb.edges[static_cast<std::size_t>(rep)];
        const Vector3d mid = 0.5 * (plate.vertices[static_cast<std::size_t>(e.v0)] +
                                    plate.vertices[static_cast<std::size_t>(e.v1)]);
        if (std::abs(mid.x()) < 1e-12 || std::abs(mid.y()) < 1e-12) ++on_plane_boundary;
    }
    CHECK(on_plane_boundary == static_cast<int>(pcell.boundary.size()));
    CHECK(on_plane_boundary > 0);
}

TEST_CASE("trivial group: every index is its own orbit")
{
    StarAction s;
    PointGroup c1 = PointGroup::build("C1");
    MappingMatrices maps = build_mapping_matrices(s.basis, c1);
    GeneratorCell cell = find_generator_cell(s.basis, c1, maps);
    CHECK(cell.interior.size() == 5);
    CHECK(cell.boundary.empty());
    CHECK(cell.replicated.empty());
}

TEST_CASE("coordinate-list export")
{
    StarAction s;
    std::ostringstream os;
    s.maps[1].write_csv(os);
    const std::string text = os.str();
    CHECK(text.find("row,col,sign") == 0);
    CHECK(text.find("4,0,-1") != std::string::npos);  // basis 1 maps onto -basis 5
}

TEST_SUITE_END();
