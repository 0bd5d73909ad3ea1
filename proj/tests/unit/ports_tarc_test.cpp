#include <doctest.h>

#include "oracles.hpp"
#include "symport/mesh_gen.hpp"
#include "symport/ports_tarc.hpp"

using namespace symport;

namespace {
const std::string kFixtures = SYMPORT_FIXTURE_DIR;

struct RimScene {
    RimMesh rim = make_rim_mesh(1.0, 1);
    EdgeBasisSet basis = build_edge_basis(rim.mesh);
    PointGroup group = PointGroup::build("C2v");
    MappingMatrices maps = build_mapping_matrices(basis, group);
    SymmetryAdapter adapter = SymmetryAdapter::make(basis, group, maps);

    PortSite site(int label) const
    {
        for (const PortAnchor& a : rim.ladder)
            if (a.label == label) return {label, resolve_port_edge(basis, a.point)};
        throw std::runtime_error("no such ladder label");
    }
};
}  // namespace

TEST_SUITE_BEGIN("ports_tarc");

TEST_CASE("port replication counts")
{
    RimScene s;
    // one interior site replicates to four ports
    PortConfiguration one = build_port_configuration(s.basis, s.adapter, {s.site(8)});
    CHECK(one.n_ports() == 4);
    CHECK(one.n_sites() == 1);

    // a site on the reflection plane yields only two distinct ports
    PortConfiguration plane = build_port_configuration(s.basis, s.adapter, {s.site(1)});
    CHECK(plane.n_ports() == 2);

    // three interior sites give twelve ports
    PortConfiguration three =
        build_port_configuration(s.basis, s.adapter, {s.site(7), s.site(9), s.site(11)});
    CHECK(three.n_ports() == 12);

    // distinct sites must use distinct orbits
    CHECK_THROWS_AS(build_port_configuration(s.basis, s.adapter, {s.site(8), s.site(8)}), InvalidPosition);
    CHECK_THROWS_AS(build_port_configuration(s.basis, s.adapter, {}), InvalidPosition);

    // columns cover the full orbits and P^T P is diagonal
    MatrixXd gram = three.P.transpose() * three.P;
    CHECK((gram - MatrixXd(gram.diagonal().asDiagonal())).norm() == 0.0);
}

TEST_CASE("port voltage recovery on the star")
{
    TriMesh star = load_mesh(kFixtures + "/star.off");
    EdgeBasisSet basis = build_edge_basis(star);
    PointGroup group = PointGroup::build("C2v");
    MappingMatrices maps = build_mapping_matrices(basis, group);
    SymmetryAdapter adapter = SymmetryAdapter::make(basis, group, maps);

    // explicit unit columns on edges 1,2,4,5
    MatrixXd p = MatrixXd::Zero(5, 4);
    p(0, 0) = 1.0;
    p(1, 1) = 1.0;
    p(3, 2) = 1.0;
    p(4, 3) = 1.0;

    VectorXcd e1 = VectorXcd::Zero(5);
    e1(0) = 1.0;
    const SymmetryAdaptedExcitation a1 = adapter.adapt_vector(e1, {group.irrep_index("A1"), 0});
    const VectorXcd v = recover_port_voltages(p, a1.vector);
    CHECK(v(0).real() == doctest::Approx(0.25));
    CHECK(v(1).real() == doctest::Approx(-0.25));
    CHECK(v(2).real() == doctest::Approx(0.25));
    CHECK(v(3).real() == doctest::Approx(-0.25));

    // round trip
    CHECK((p.cast<cplx>() * v - a1.vector).norm() <= 1e-12);

    // zero stays zero
    CHECK(recover_port_voltages(p, VectorXcd::Zero(5)).norm() == 0.0);

    // a vector with support off the port edges is not representable
    VectorXcd off = a1.vector;
    off(2) = 1.0;
    CHECK_THROWS_AS(recover_port_voltages(p, off), NotInColumnSpace);
}

TEST_CASE("matched port gives vanishing reflection")
{
    TriMesh strip = make_strip_mesh(1.0, 0.02, 10);
    EdgeBasisSet basis = build_edge_basis(strip);
    PointGroup c1 = PointGroup::build("C1");
    MappingMatrices maps = build_mapping_matrices(basis, c1);
    SymmetryAdapter adapter = SymmetryAdapter::make(basis, c1, maps);
    const int feed = resolve_port_edge(basis, Vector3d(0.0, 0.0, 0.0));
    OperatorAssembler assembler(basis);

    // bisect the first series resonance Im z_in = 0
    auto zin = [&](double ka) {
        OperatorMatrix z = assembler.impedance(ka);
        ImpedanceFactorization zfac(z.m);
        const double l = basis.edges[static_cast<std::size_t>(feed)].edge_length;
        VectorXcd v = VectorXcd::Zero(basis.n_unknowns());
        v(feed) = l;
        return cplx(1.0 / (l * zfac.solve(v)(feed)));
    };
    double lo = 1.0, hi = 2.0;
    REQUIRE(zin(lo).imag() < 0.0);
    REQUIRE(zin(hi).imag() > 0.0);
    for (int it = 0; it < 40; ++it) {
        const double mid = 0.5 * (lo + hi);
        (zin(mid).imag() < 0.0 ? lo : hi) = mid;
    }
    const double ka_res = 0.5 * (lo + hi);
    const double r_res = zin(ka_res).real();

    OperatorMatrix z = assembler.impedance(ka_res);
    OperatorMatrix r0 = assembler.radiation(ka_res);
    ImpedanceFactorization zfac(z.m);
    PortConfiguration cfg = build_port_configuration(basis, adapter, {{1, feed}}, r_res);
    TarcContext ctx(cfg, zfac, r0);
    VectorXcd v = VectorXcd::Ones(1);
    CHECK(ctx.tarc(v) <= 1e-5);

    // grossly mismatched line: everything reflects
    PortConfiguration bad = build_port_configuration(basis, adapter, {{1, feed}}, 1e9);
    TarcContext bctx(bad, zfac, r0);
    CHECK(bctx.tarc(v) >= 0.9999);
}

TEST_CASE("tarc routes agree and scale invariance holds")
{
    RimScene s;
    const double ka = 2.7;
    OperatorAssembler assembler(s.basis);
    OperatorMatrix z = assembler.impedance(ka);
    OperatorMatrix r0 = assembler.radiation(ka);
    ImpedanceFactorization zfac(z.m);
    PortConfiguration cfg = build_port_configuration(s.basis, s.adapter, {s.site(7), s.site(11)});
    TarcContext ctx(cfg, zfac, r0);

    std::mt19937 rng(41);
    for (int trial = 0; trial < 25; ++trial) {
        const VectorXcd v = oracles::random_complex_vector(cfg.n_ports(), rng);
        const double t1 = ctx.tarc(v);
        const double t2 = ctx.tarc_power_balance(v, zfac, r0);
        CHECK(t1 == doctest::Approx(t2).epsilon(1e-10));
        CHECK(t1 >= 0.0);
        CHECK(t1 <= 1.0);

        const cplx scale(0.34, -2.1);
        CHECK(std::abs(ctx.tarc(scale * v) - t1) <= 1e-12);
    }
    CHECK_THROWS_AS(ctx.tarc(VectorXcd::Zero(cfg.n_ports())), ZeroExcitation);
}

TEST_CASE("optimal generator amplitudes")
{
    RimScene s;
    const double ka = 2.7;
    OperatorAssembler assembler(s.basis);
    OperatorMatrix z = assembler.impedance(ka);
    OperatorMatrix r0 = assembler.radiation(ka);
    ImpedanceFactorization zfac(z.m);

    // single site: the eigenproblem degenerates to the plain adapted TARC
    PortConfiguration one = build_port_configuration(s.basis, s.adapter, {s.site(9)});
    TarcContext ctx1(one, zfac, r0);
    for (const Species& sp : s.group.species()) {
        const auto k1 = ctx1.optimal_kappa(sp);
        REQUIRE(k1.has_value());
        const VectorXcd v = one.adapted_voltages(sp, 0);
        CHECK(k1->t_bound == doctest::Approx(ctx1.tarc(v)).epsilon(1e-12));
    }

    // two sites: the eigenvector beats random amplitudes
    PortConfiguration two = build_port_configuration(s.basis, s.adapter, {s.site(8), s.site(12)});
    TarcContext ctx2(two, zfac, r0);
    std::mt19937 rng(77);
    for (const Species& sp : s.group.species()) {
        const auto kr = ctx2.optimal_kappa(sp);
        REQUIRE(kr.has_value());
        CHECK(ctx2.tarc_of_kappa(sp, kr->kappa) == doctest::Approx(kr->t_bound).epsilon(1e-10));
        for (int draw = 0; draw < 100; ++draw) {
            const VectorXcd kappa = oracles::random_complex_vector(2, rng);
            CHECK(ctx2.tarc_of_kappa(sp, kappa) >= kr->t_bound - 1e-12);
        }
    }

    // a plane site alone cannot reach A1
    PortConfiguration plane = build_port_configuration(s.basis, s.adapter, {s.site(1)});
    TarcContext ctxp(plane, zfac, r0);
    CHECK_FALSE(ctxp.optimal_kappa({s.group.irrep_index("A1"), 0}).has_value());
    CHECK(ctxp.optimal_kappa({s.group.irrep_index("A2"), 0}).has_value());
}

TEST_CASE("constraint-set orthogonality at the port level")
{
    // port voltages of distinct species stay orthogonal under every
    // invariant operator pulled back to the ports
    RimScene s;
    const double ka = 3.3;
    OperatorAssembler assembler(s.basis);
    OperatorMatrix r0 = assembler.radiation(ka);
    OperatorMatrix x0 = assembler.reactance(ka);
    OperatorMatrix w = assembler.stored_energy(ka);
    const MatrixXcd z = r0.m + cplx(0, 1) * x0.m;
    ImpedanceFactorization zfac(z);
    const int n_u = s.basis.n_unknowns();
    const MatrixXcd eye = MatrixXcd::Identity(n_u, n_u);
    const MatrixXcd y = zfac.solve(eye);

    PortConfiguration cfg = build_port_configuration(s.basis, s.adapter, {s.site(9), s.site(13)});
    const MatrixXcd p = cfg.P.cast<cplx>();
    const std::vector<MatrixXcd> pullbacks = {
        p.adjoint() * p,                                // identity
        p.adjoint() * z * p,                            // Z
        p.adjoint() * (y.adjoint() * r0.m * y) * p,     // Y^H R0 Y
        p.adjoint() * (y.adjoint() * w.m * y) * p,      // Y^H W Y
    };
    for (const MatrixXcd& a : pullbacks) {
        for (const Species& sm : s.group.species()) {
            for (const Species& sn : s.group.species()) {
                if (sm == sn) continue;
                const VectorXcd vm = cfg.adapted_voltages(sm, 0) + cfg.adapted_voltages(sm, 1);
                const VectorXcd vn = cfg.adapted_voltages(sn, 0) + cfg.adapted_voltages(sn, 1);
                const double cross = std::abs((vm.adjoint() * a * vn).value());
                const double scale = vm.norm() * (a * vn).norm();
                CHECK(cross <= 1e-10 * scale);
            }
        }
    }
}

TEST_CASE("rms reduction")
{
    CHECK_THROWS_AS(tarc_rms({}), EmptySet);
    CHECK(tarc_rms({0.42}) == doctest::Approx(0.42));
    CHECK(tarc_rms({0.2, 0.4, 0.6, 0.8}) == doctest::Approx(std::sqrt(0.3)));
    CHECK(tarc_rms({0.0, 0.0}) == 0.0);
}

TEST_SUITE_END();
