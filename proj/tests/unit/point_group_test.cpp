#include <doctest.h>

#include "symport/point_group.hpp"

using namespace symport;

namespace {

const std::vector<std::string> kAllGroups = {"C1",  "Cs",  "C2",  "C3",  "C4",  "C5",  "C6", "C7",
                                             "C8",  "C2v", "C3v", "C4v", "C5v", "C6v", "C7v", "C8v"};

// closed forms per family, independent of the irrep list
void family_counts(const std::string& name, int& n_states, int& n_ports)
{
    if (name == "C1") {
        n_states = 1;
        n_ports = 1;
        return;
    }
    if (name == "Cs") {
        n_states = 2;
        n_ports = 2;
        return;
    }
    const int n = name[1] - '0';
    if (name.size() == 2) {  // Cn
        n_states = n;
        n_ports = n;
        return;
    }
    n_states = (n % 2 == 0) ? n + 2 : n + 1;  // Cnv
    n_ports = 2 * n;
}

}  // namespace

TEST_SUITE_BEGIN("point_group");

TEST_CASE("C2v structure and character table")
{
    PointGroup g = PointGroup::build("C2v");
    CHECK(g.order() == 4);
    CHECK(g.ops()[0].label == "E");
    CHECK(g.op_index("C2z") == 1);
    CHECK(g.op_index("sigma_xz") == 2);
    CHECK(g.op_index("sigma_yz") == 3);
    REQUIRE(g.irreps().size() == 4);

    const double table[4][4] = {
        {1, 1, 1, 1},    // A1
        {1, 1, -1, -1},  // A2
        {1, -1, 1, -1},  // B1
        {1, -1, -1, 1},  // B2
    };
    const char* names[4] = {"A1", "A2", "B1", "B2"};
    for (int a = 0; a < 4; ++a) {
        CHECK(g.irrep(a).label == names[a]);
        for (int k = 0; k < 4; ++k) {
            cplx chi = g.character(a, k);
            CHECK(chi.real() == doctest::Approx(table[a][k]).epsilon(1e-14));
            CHECK(chi.imag() == doctest::Approx(0.0).epsilon(1e-14));
        }
    }
}

TEST_CASE("character examples")
{
    PointGroup c2v = PointGroup::build("C2v");
    CHECK(c2v.character("A2", "sigma_xz").real() == doctest::Approx(-1.0));
    CHECK(c2v.character("B1", "C2z").real() == doctest::Approx(-1.0));

    // chi(E) equals the irrep dimension in every group
    for (const auto& name : kAllGroups) {
        PointGroup g = PointGroup::build(name);
        for (const auto& ir : g.irreps())
            CHECK(g.character(ir.label, "E").real() == doctest::Approx(ir.dimension));
    }
}

TEST_CASE("trivial and square groups")
{
    PointGroup c1 = PointGroup::build("C1");
    CHECK(c1.order() == 1);
    CHECK(c1.irreps().size() == 1);

    PointGroup c4v = PointGroup::build("C4v");
    CHECK(c4v.order() == 8);
    CHECK(c4v.irreps().size() == 5);
    int two_dim = 0;
    for (const auto& ir : c4v.irreps())
        if (ir.dimension == 2) ++two_dim;
    CHECK(two_dim == 1);
    CHECK(c4v.character("E", "C2z").real() == doctest::Approx(-2.0));
}

TEST_CASE("dual representation")
{
    PointGroup c2v = PointGroup::build("C2v");
    MatrixXcd d = c2v.dual_rep("B2", "sigma_yz");
    REQUIRE(d.rows() == 1);
    CHECK(d(0, 0).real() == doctest::Approx(1.0));

    PointGroup c4v = PointGroup::build("C4v");
    MatrixXcd de = c4v.dual_rep("E", "E");
    CHECK((de - MatrixXcd::Identity(2, 2)).norm() == doctest::Approx(0.0).epsilon(1e-14));

    MatrixXcd dc4 = c4v.dual_rep("E", "C4z");
    MatrixXcd rot(2, 2);
    rot << 0, -1, 1, 0;  // rotation by pi/2
    CHECK((dc4 - rot).norm() < 1e-12);

    // dual equals D itself for real orthogonal representations
    const int e_idx = c4v.irrep_index("E");
    for (int k = 0; k < c4v.order(); ++k)
        CHECK((c4v.dual_rep(e_idx, k) - c4v.irrep(e_idx).rep[static_cast<std::size_t>(k)]).norm() < 1e-12);
}

TEST_CASE("homomorphism for every supported group")
{
    for (const auto& name : kAllGroups) {
        PointGroup g = PointGroup::build(name);
        for (const auto& ir : g.irreps()) {
            for (int i = 0; i < g.order(); ++i) {
                for (int j = 0; j < g.order(); ++j) {
                    const int ij = g.compose(i, j);
                    const MatrixXcd lhs = ir.rep[static_cast<std::size_t>(ij)];
                    const MatrixXcd rhs =
                        ir.rep[static_cast<std::size_t>(i)] * ir.rep[static_cast<std::size_t>(j)];
                    CHECK((lhs - rhs).norm() <= 1e-12);
                }
            }
        }
    }
}

TEST_CASE("great orthogonality between distinct irreps")
{
    for (const auto& name : kAllGroups) {
        PointGroup g = PointGroup::build(name);
        const auto species = g.species();
        for (const Species& sa : species) {
            for (const Species& sb : species) {
                if (sa.irrep == sb.irrep) continue;
                cplx acc = 0.0;
                for (int k = 0; k < g.order(); ++k)
                    acc += std::conj(g.irrep(sa.irrep).rep[static_cast<std::size_t>(k)](sa.row, sa.row)) *
                           g.irrep(sb.irrep).rep[static_cast<std::size_t>(k)](sb.row, sb.row);
                CHECK(std::abs(acc) <= 1e-12);
            }
        }
    }
}

TEST_CASE("Burnside and state/port counts")
{
    for (const auto& name : kAllGroups) {
        PointGroup g = PointGroup::build(name);
        int burnside = 0;
        for (const auto& ir : g.irreps()) burnside += ir.dimension * ir.dimension;
        CHECK(burnside == g.order());

        int ns = 0, np = 0;
        family_counts(name, ns, np);
        CHECK(g.max_orthogonal_states() == ns);
        CHECK(g.min_ports() == np);
        CHECK(static_cast<int>(g.species().size()) == ns);
    }
    CHECK(PointGroup::build("C2v").max_orthogonal_states() == 4);
    CHECK(PointGroup::build("C2v").min_ports() == 4);
    CHECK(PointGroup::build("C4v").max_orthogonal_states() == 6);
    CHECK(PointGroup::build("C4v").min_ports() == 8);
    CHECK(PointGroup::build("C1").max_orthogonal_states() == 1);
    CHECK(PointGroup::build("C1").min_ports() == 1);
}

TEST_CASE("group closure")
{
    for (const auto& name : kAllGroups) {
        PointGroup g = PointGroup::build(name);
        for (int i = 0; i < g.order(); ++i) {
            for (int j = 0; j < g.order(); ++j) {
                const int k = g.compose(i, j);
                CHECK(k >= 0);
                CHECK(k < g.order());
                const Matrix3d prod = g.op(i).transform * g.op(j).transform;
                CHECK((prod - g.op(k).transform).norm() < 1e-12);
            }
            // orthogonality of every spatial transform
            const Matrix3d q = g.op(i).transform;
            CHECK((q.transpose() * q - Matrix3d::Identity()).norm() < 1e-12);
        }
    }
}

TEST_CASE("errors")
{
    CHECK_THROWS_AS(PointGroup::build("D4h"), UnsupportedGroup);
    CHECK_THROWS_AS(PointGroup::build("C9v"), UnsupportedGroup);
    CHECK_THROWS_AS(PointGroup::build("T"), UnsupportedGroup);
    CHECK_THROWS_AS(PointGroup::build(""), UnsupportedGroup);

    PointGroup g = PointGroup::build("C2v");
    CHECK_THROWS_AS(g.character("E5", "E"), UnknownIrrep);
    CHECK_THROWS_AS(g.character("A1", "C4z"), UnknownOp);
}

TEST_SUITE_END();
