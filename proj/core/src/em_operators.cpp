#include "symport/em_operators.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <istream>
#include <ostream>

#include "symport/errors.hpp"
#include "symport/quadrature.hpp"
#include "symport/threading.hpp"

namespace symport {

using constants::c0;
using constants::eps0;
using constants::eta0;
using constants::mu0;
using constants::pi;

FrequencyGrid FrequencyGrid::single(double ka, double radius)
{
    if (ka <= 0.0 || radius <= 0.0) throw ConfigError("frequency grid needs positive ka and radius");
    return {{ka}, radius};
}

FrequencyGrid FrequencyGrid::range(double ka_min, double ka_max, int count, double radius)
{
    if (count < 1 || ka_min <= 0.0 || ka_max < ka_min || radius <= 0.0)
        throw ConfigError("bad frequency range");
    FrequencyGrid g;
    g.radius = radius;
    if (count == 1) {
        g.ka.push_back(ka_min);
        return g;
    }
    for (int i = 0; i < count; ++i)
        g.ka.push_back(ka_min + (ka_max - ka_min) * static_cast<double>(i) / (count - 1));
    return g;
}

double FrequencyGrid::omega(std::size_t i) const
{
    return ka.at(i) / radius * c0;
}

struct OperatorAssembler::TriData {
    std::array<int, 3> iv{};
    Vector3d v[3];
    double area = 0.0;
    Vector3d centroid = Vector3d::Zero();
    double radius = 0.0;
    std::vector<Vector3d> pts2, pts5;
    std::vector<double> w2, w5;  // absolute weights (include area)
};

struct OperatorAssembler::HalfBasis {
    int basis = -1;
    double sc = 0.0;  // sign * l/(2A)
    double sd = 0.0;  // sign * l/A  (surface divergence)
    Vector3d free = Vector3d::Zero();
};

OperatorAssembler::~OperatorAssembler() = default;

OperatorAssembler::OperatorAssembler(const EdgeBasisSet& basis, AssemblyOptions opt)
    : basis_(basis), opt_(opt)
{
    const TriMesh& mesh = basis.mesh;
    radius_ = mesh.circumsphere_radius();
    center_ = mesh.center();

    const TriQuadRule& r2 = tri_rule_deg2();
    const TriQuadRule& r5 = tri_rule_deg5();
    tris_.resize(mesh.n_triangles());
    halves_.resize(mesh.n_triangles());
    for (std::size_t t = 0; t < mesh.n_triangles(); ++t) {
        TriData& td = tris_[t];
        td.iv = mesh.triangles[t];
        for (int i = 0; i < 3; ++i) td.v[i] = mesh.vertices[static_cast<std::size_t>(td.iv[static_cast<std::size_t>(i)])];
        td.area = mesh.triangle_area(static_cast<int>(t));
        td.centroid = mesh.triangle_centroid(static_cast<int>(t));
        for (int i = 0; i < 3; ++i) td.radius = std::max(td.radius, (td.v[i] - td.centroid).norm());
        auto fill = [&](const TriQuadRule& rule, std::vector<Vector3d>& pts, std::vector<double>& w) {
            for (std::size_t q = 0; q < rule.size(); ++q) {
                const auto& b = rule.bary[q];
                pts.push_back(b[0] * td.v[0] + b[1] * td.v[1] + b[2] * td.v[2]);
                w.push_back(rule.weights[q] * td.area);
            }
        };
        fill(r2, td.pts2, td.w2);
        fill(r5, td.pts5, td.w5);
    }
    for (std::size_t n = 0; n < basis.edges.size(); ++n) {
        const EdgeBasis& e = basis.edges[n];
        auto add = [&](int tri, int free, double sgn) {
            HalfBasis h;
            h.basis = static_cast<int>(n);
            double a = tris_[static_cast<std::size_t>(tri)].area;
            h.sc = sgn * e.edge_length / (2.0 * a);
            h.sd = sgn * e.edge_length / a;
            h.free = basis.mesh.vertices[static_cast<std::size_t>(free)];
            halves_[static_cast<std::size_t>(tri)].push_back(h);
        };
        add(e.tri_plus, e.free_plus, +1.0);
        add(e.tri_minus, e.free_minus, -1.0);
    }
}

// out = {S, Lv.x, Lv.y, Lv.z, Ls.x, Ls.y, Ls.z, Dsum} with kernel cos(kR)/R,
// the 1/R part integrated in closed form for nearby pairs.
void OperatorAssembler::pair_tensors(int s, int t, double k, double* out) const
{
    const TriData& ts = tris_[static_cast<std::size_t>(s)];
    const TriData& tt = tris_[static_cast<std::size_t>(t)];

    bool shares_vertex = false;
    for (int a : ts.iv)
        for (int b : tt.iv)
            if (a == b) shares_vertex = true;
    const double dist = (ts.centroid - tt.centroid).norm();
    const bool near = shares_vertex || dist < opt_.near_factor * (ts.radius + tt.radius);

    double S = 0.0, Dsum = 0.0;
    Vector3d Lv = Vector3d::Zero(), Ls = Vector3d::Zero();

    if (!near) {
        for (std::size_t p = 0; p < ts.pts2.size(); ++p) {
            const Vector3d& rp = ts.pts2[p];
            const double wp = ts.w2[p];
            for (std::size_t q = 0; q < tt.pts2.size(); ++q) {
                const Vector3d& rq = tt.pts2[q];
                const double r = (rp - rq).norm();
                const double ker = wp * tt.w2[q] * std::cos(k * r) / r;
                S += ker;
                Lv += ker * rp;
                Ls += ker * rq;
                Dsum += ker * rp.dot(rq);
            }
        }
    } else {
        const double tiny = 1e-14 * (ts.radius + tt.radius);
        // smooth remainder (cos(kR) - 1)/R
        for (std::size_t p = 0; p < ts.pts5.size(); ++p) {
            const Vector3d& rp = ts.pts5[p];
            const double wp = ts.w5[p];
            for (std::size_t q = 0; q < tt.pts5.size(); ++q) {
                const Vector3d& rq = tt.pts5[q];
                const double r = (rp - rq).norm();
                const double ker = r > tiny ? wp * tt.w5[q] * (std::cos(k * r) - 1.0) / r : 0.0;
                S += ker;
                Lv += ker * rp;
                Ls += ker * rq;
                Dsum += ker * rp.dot(rq);
            }
        }
        // Closed-form 1/R moments, averaged over both role assignments so
        // the value of a pair does not depend on which triangle carries the
        // outer quadrature (congruent pairs then assemble identically).
        double s_dir = 0.0, d_dir = 0.0;
        Vector3d outer_moment = Vector3d::Zero(), inner_moment = Vector3d::Zero();
        auto one_way = [&](const TriData& a, const TriData& b, Vector3d& la, Vector3d& lb) {
            for (std::size_t p = 0; p < a.pts5.size(); ++p) {
                const Vector3d& rp = a.pts5[p];
                const double wp = a.w5[p];
                const StaticPotentials sp = static_potentials(rp, b.v[0], b.v[1], b.v[2]);
                s_dir += wp * sp.i0;
                la += wp * sp.i0 * rp;
                lb += wp * sp.ir;
                d_dir += wp * rp.dot(sp.ir);
            }
        };
        one_way(ts, tt, outer_moment, inner_moment);
        if (s == t) {
            S += s_dir;
            Dsum += d_dir;
            Lv += 0.5 * (outer_moment + inner_moment);
            Ls += 0.5 * (outer_moment + inner_moment);
        } else {
            Vector3d outer_rev = Vector3d::Zero(), inner_rev = Vector3d::Zero();
            one_way(tt, ts, outer_rev, inner_rev);
            S += 0.5 * s_dir;
            Dsum += 0.5 * d_dir;
            Lv += 0.5 * (outer_moment + inner_rev);
            Ls += 0.5 * (inner_moment + outer_rev);
        }
    }

    if (s == t) {
        Vector3d mean = 0.5 * (Lv + Ls);
        Lv = mean;
        Ls = mean;
    }
    out[0] = S;
    out[1] = Lv.x();
    out[2] = Lv.y();
    out[3] = Lv.z();
    out[4] = Ls.x();
    out[5] = Ls.y();
    out[6] = Ls.z();
    out[7] = Dsum;
}

OperatorMatrix OperatorAssembler::reactance(double ka) const
{
    const int n_u = basis_.n_unknowns();
    const int n_t = static_cast<int>(tris_.size());
    const double k = wavenumber(ka);
    const double omega = k * c0;

    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(n_t) * (static_cast<std::size_t>(n_t) + 1) / 2);
    for (int s = 0; s < n_t; ++s)
        for (int t = s; t < n_t; ++t) pairs.emplace_back(s, t);

    std::vector<std::array<double, 8>> tensors(pairs.size());
    parallel_for(
        pairs.size(),
        [&](std::size_t i) { pair_tensors(pairs[i].first, pairs[i].second, k, tensors[i].data()); },
        opt_.threads);

    const double cv = omega * mu0 / (4.0 * pi);
    const double cs = 1.0 / (4.0 * pi * omega * eps0);

    MatrixXd x = MatrixXd::Zero(n_u, n_u);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto [s, t] = pairs[i];
        const auto& ten = tensors[i];
        const double S = ten[0], Dsum = ten[7];
        const Vector3d Lv(ten[1], ten[2], ten[3]);
        const Vector3d Ls(ten[4], ten[5], ten[6]);
        for (const HalfBasis& hm : halves_[static_cast<std::size_t>(s)]) {
            for (const HalfBasis& hn : halves_[static_cast<std::size_t>(t)]) {
                const double vterm =
                    Dsum - (Lv.dot(hn.free) + hm.free.dot(Ls)) + hm.free.dot(hn.free) * S;
                const double val = cv * hm.sc * hn.sc * vterm - cs * hm.sd * hn.sd * S;
                x(hm.basis, hn.basis) += val;
                if (s != t) {
                    const double vterm_r =
                        Dsum - (Ls.dot(hm.free) + hn.free.dot(Lv)) + hn.free.dot(hm.free) * S;
                    const double val_r = cv * hn.sc * hm.sc * vterm_r - cs * hn.sd * hm.sd * S;
                    x(hn.basis, hm.basis) += val_r;
                }
            }
        }
    }

    OperatorMatrix op;
    op.role = OperatorRole::X0;
    op.ka = ka;
    op.omega = omega;
    op.m = x.cast<cplx>();
    return op;
}

OperatorMatrix OperatorAssembler::radiation(double ka) const
{
    const int n_u = basis_.n_unknowns();
    const int n_t = static_cast<int>(tris_.size());
    const double k = wavenumber(ka);
    const double omega = k * c0;

    double r_max = radius_;
    const int band = static_cast<int>(std::ceil(2.0 * k * r_max)) + opt_.band_margin;
    SphereGrid grid = make_sphere_grid(band);

    const std::size_t chunk = 256;
    MatrixXcd acc = MatrixXcd::Zero(n_u, n_u);
    MatrixXcd block;  // 3*chunk x n_u transverse moments, weighted

    const std::size_t n_dirs = grid.size();
    for (std::size_t begin = 0; begin < n_dirs; begin += chunk) {
        const std::size_t end = std::min(n_dirs, begin + chunk);
        const std::size_t rows = 3 * (end - begin);
        block.resize(static_cast<Eigen::Index>(rows), n_u);

        parallel_for(
            end - begin,
            [&](std::size_t di) {
                const std::size_t d = begin + di;
                const Vector3d& kh = grid.dirs[d];
                const double sw = std::sqrt(grid.weights[d]);
                std::vector<cplx> s0(static_cast<std::size_t>(n_t));
                std::vector<Eigen::Vector3cd> s1(static_cast<std::size_t>(n_t));
                for (int t = 0; t < n_t; ++t) {
                    const TriData& td = tris_[static_cast<std::size_t>(t)];
                    cplx a0 = 0.0;
                    Eigen::Vector3cd a1 = Eigen::Vector3cd::Zero();
                    for (std::size_t p = 0; p < td.pts2.size(); ++p) {
                        const double phase = -k * kh.dot(td.pts2[p]);
                        const cplx e = td.w2[p] * cplx(std::cos(phase), std::sin(phase));
                        a0 += e;
                        a1 += td.pts2[p].cast<cplx>() * e;
                    }
                    s0[static_cast<std::size_t>(t)] = a0;
                    s1[static_cast<std::size_t>(t)] = a1;
                }
                Eigen::Index row = static_cast<Eigen::Index>(3 * di);
                block.middleRows(row, 3).setZero();
                for (int t = 0; t < n_t; ++t) {
                    for (const HalfBasis& h : halves_[static_cast<std::size_t>(t)]) {
                        Eigen::Vector3cd m =
                            h.sc * (s1[static_cast<std::size_t>(t)] -
                                    h.free.cast<cplx>() * s0[static_cast<std::size_t>(t)]);
                        block.block<3, 1>(row, h.basis) += m;
                    }
                }
                const Eigen::Vector3cd khc = kh.cast<cplx>();
                for (Eigen::Index c = 0; c < n_u; ++c) {
                    Eigen::Vector3cd m = block.block<3, 1>(row, c);
                    m -= khc * khc.dot(m);  // transverse part
                    block.block<3, 1>(row, c) = sw * m;
                }
            },
            opt_.threads);

        // Deterministic accumulation: chunks in order, fixed column blocks so
        // every entry sums in the same order regardless of the worker count.
        const Eigen::Index col_block = 128;
        std::size_t n_blocks = static_cast<std::size_t>((n_u + col_block - 1) / col_block);
        parallel_for(
            n_blocks,
            [&](std::size_t b) {
                Eigen::Index j0 = static_cast<Eigen::Index>(b) * col_block;
                Eigen::Index w = std::min<Eigen::Index>(col_block, n_u - j0);
                acc.middleCols(j0, w).noalias() +=
                    block.adjoint() * block.middleCols(j0, w);
            },
            opt_.threads);
    }

    MatrixXd r = acc.real();
    r = 0.5 * (r + r.transpose()).eval();
    r *= omega * mu0 * k / (16.0 * pi * pi);

    OperatorMatrix op;
    op.role = OperatorRole::R0;
    op.ka = ka;
    op.omega = omega;
    op.m = r.cast<cplx>();
    return op;
}

OperatorMatrix OperatorAssembler::impedance(double ka) const
{
    OperatorMatrix r0 = radiation(ka);
    OperatorMatrix x0 = reactance(ka);
    OperatorMatrix op;
    op.role = OperatorRole::Z0;
    op.ka = ka;
    op.omega = r0.omega;
    op.m = r0.m + cplx(0.0, 1.0) * x0.m;
    return op;
}

OperatorMatrix OperatorAssembler::loss(double rho) const
{
    if (rho < 0.0) throw NegativeResistivity("surface resistivity must be non-negative");
    const int n_u = basis_.n_unknowns();
    MatrixXd r = MatrixXd::Zero(n_u, n_u);
    for (std::size_t t = 0; t < tris_.size(); ++t) {
        const TriData& td = tris_[t];
        for (const HalfBasis& hm : halves_[t]) {
            for (const HalfBasis& hn : halves_[t]) {
                double acc = 0.0;
                for (std::size_t p = 0; p < td.pts2.size(); ++p)
                    acc += td.w2[p] * (td.pts2[p] - hm.free).dot(td.pts2[p] - hn.free);
                r(hm.basis, hn.basis) += rho * hm.sc * hn.sc * acc;
            }
        }
    }
    OperatorMatrix op;
    op.role = OperatorRole::Rrho;
    op.m = r.cast<cplx>();
    return op;
}

OperatorMatrix OperatorAssembler::stored_energy(double ka, double delta) const
{
    if (delta <= 0.0 || delta > 1e-2) throw ConfigError("stored-energy step must be in (0, 1e-2]");
    OperatorMatrix xp = reactance(ka * (1.0 + delta));
    OperatorMatrix xm = reactance(ka * (1.0 - delta));
    OperatorMatrix op;
    op.role = OperatorRole::W;
    op.ka = ka;
    op.omega = wavenumber(ka) * c0;
    op.m = (xp.m - xm.m) / (2.0 * delta);
    return op;
}

double OperatorAssembler::FarField::power(const std::vector<double>& weights, double eta) const
{
    if (weights.size() != f.size()) throw ConfigError("far-field power: weight count mismatch");
    double p = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        p += weights[i] * (std::norm(f[i][0]) + std::norm(f[i][1]));
    return p / (2.0 * eta);
}

OperatorAssembler::FarField OperatorAssembler::far_field(const VectorXcd& current, double ka,
                                                         const std::vector<Vector3d>& directions) const
{
    if (current.size() != basis_.n_unknowns()) throw ConfigError("far_field: current size mismatch");
    const double k = wavenumber(ka);
    const double omega = k * c0;
    const cplx amp = cplx(0.0, -1.0) * omega * mu0 / (4.0 * pi);
    const int n_t = static_cast<int>(tris_.size());

    FarField out;
    out.f.resize(directions.size());
    parallel_for(
        directions.size(),
        [&](std::size_t d) {
            const Vector3d& kh = directions[d];
            Eigen::Vector3cd total = Eigen::Vector3cd::Zero();
            for (int t = 0; t < n_t; ++t) {
                const TriData& td = tris_[static_cast<std::size_t>(t)];
                cplx a0 = 0.0;
                Eigen::Vector3cd a1 = Eigen::Vector3cd::Zero();
                for (std::size_t p = 0; p < td.pts2.size(); ++p) {
                    const double phase = -k * kh.dot(td.pts2[p]);
                    const cplx e = td.w2[p] * cplx(std::cos(phase), std::sin(phase));
                    a0 += e;
                    a1 += td.pts2[p].cast<cplx>() * e;
                }
                for (const HalfBasis& h : halves_[static_cast<std::size_t>(t)])
                    total += (current(h.basis) * h.sc) * (a1 - h.free.cast<cplx>() * a0);
            }
            const Eigen::Vector3cd khc = kh.cast<cplx>();
            total -= khc * khc.dot(total);
            total *= amp;
            const double ct = std::clamp(kh.z(), -1.0, 1.0);
            const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
            double cp = 1.0, sp = 0.0;
            if (st > 1e-14) {
                cp = kh.x() / st;
                sp = kh.y() / st;
            }
            const Eigen::Vector3cd theta_hat(cplx(ct * cp), cplx(ct * sp), cplx(-st));
            const Eigen::Vector3cd phi_hat(cplx(-sp), cplx(cp), cplx(0.0));
            out.f[d] = {theta_hat.dot(total), phi_hat.dot(total)};
        },
        opt_.threads);
    return out;
}

OperatorAssembler::FarField OperatorAssembler::far_field(
    const VectorXcd& current, double ka, const std::vector<std::array<double, 2>>& directions_theta_phi) const
{
    std::vector<Vector3d> dirs;
    dirs.reserve(directions_theta_phi.size());
    for (const auto& tp : directions_theta_phi) {
        const double st = std::sin(tp[0]), ct = std::cos(tp[0]);
        dirs.emplace_back(st * std::cos(tp[1]), st * std::sin(tp[1]), ct);
    }
    return far_field(current, ka, dirs);
}

ImpedanceFactorization::ImpedanceFactorization(const MatrixXcd& z, double cond_limit)
    : lu_(z), n_(static_cast<int>(z.rows()))
{
    const double anorm = z.cwiseAbs().colwise().sum().maxCoeff();

    // Hager 1-norm estimate of |Z^-1|; Z is complex symmetric, so the
    // adjoint solve is conj(solve(conj(x))).
    auto adjoint_solve = [&](const VectorXcd& x) { return lu_.solve(x.conjugate()).conjugate().eval(); };
    VectorXcd x = VectorXcd::Constant(n_, cplx(1.0 / n_, 0.0));
    double inv_norm = 0.0;
    for (int iter = 0; iter < 5; ++iter) {
        VectorXcd y = lu_.solve(x);
        const double ynorm = y.cwiseAbs().sum();
        if (!std::isfinite(ynorm)) {
            inv_norm = std::numeric_limits<double>::infinity();
            break;
        }
        inv_norm = std::max(inv_norm, ynorm);
        VectorXcd xi(n_);
        for (int i = 0; i < n_; ++i) {
            double a = std::abs(y(i));
            xi(i) = a > 0.0 ? y(i) / a : cplx(1.0, 0.0);
        }
        VectorXcd zv = adjoint_solve(xi);
        Eigen::Index j = 0;
        double zmax = zv.cwiseAbs().maxCoeff(&j);
        if (zmax <= std::real(zv.dot(x)) + 1e-16) break;
        x.setZero();
        x(j) = 1.0;
    }
    cond_ = anorm * inv_norm;
    if (!(cond_ < cond_limit))
        throw SingularMatrix("system matrix condition estimate " + std::to_string(cond_) +
                             " exceeds limit " + std::to_string(cond_limit));
}

VectorXcd ImpedanceFactorization::solve(const VectorXcd& rhs) const
{
    return lu_.solve(rhs);
}

MatrixXcd ImpedanceFactorization::solve(const MatrixXcd& rhs) const
{
    return lu_.solve(rhs);
}

CurrentSolution solve_currents(const OperatorMatrix& z, const VectorXcd& v)
{
    ImpedanceFactorization fac(z.m);
    return solve_currents(fac, z.m, v);
}

CurrentSolution solve_currents(const ImpedanceFactorization& zfac, const MatrixXcd& z, const VectorXcd& v)
{
    CurrentSolution sol;
    sol.excitation = v;
    sol.current = zfac.solve(v);
    const double vn = v.norm();
    if (vn > 0.0) {
        const double res = (z * sol.current - v).norm();
        if (res > 1e-8 * vn)
            throw SingularMatrix("linear solve residual " + std::to_string(res / vn) + " above 1e-8");
    }
    return sol;
}

double envelope_correlation(const VectorXcd& im, const VectorXcd& in, const OperatorMatrix& r0)
{
    const cplx cross = (im.adjoint() * r0.m * in).value();
    const double pm = std::real((im.adjoint() * r0.m * im).value());
    const double pn = std::real((in.adjoint() * r0.m * in).value());
    const double floor_p = 1e-30 * r0.m.cwiseAbs().maxCoeff();
    if (pm <= floor_p || pn <= floor_p)
        throw ZeroRadiatedPower("envelope correlation of a non-radiating state");
    return std::norm(cross) / (pm * pn);
}

namespace {
constexpr char kMagic[8] = {'S', 'P', 'O', 'P', 'M', 'A', 'T', '1'};
}

void dump_operator(const OperatorMatrix& op, std::ostream& os)
{
    os.write(kMagic, 8);
    const std::int64_t n = op.m.rows();
    const std::int32_t role = static_cast<std::int32_t>(op.role);
    os.write(reinterpret_cast<const char*>(&n), sizeof n);
    os.write(reinterpret_cast<const char*>(&role), sizeof role);
    os.write(reinterpret_cast<const char*>(&op.ka), sizeof op.ka);
    os.write(reinterpret_cast<const char*>(&op.omega), sizeof op.omega);
    for (Eigen::Index i = 0; i < op.m.rows(); ++i)
        for (Eigen::Index j = 0; j < op.m.cols(); ++j) {
            const cplx v = op.m(i, j);
            const double re = v.real(), im = v.imag();
            os.write(reinterpret_cast<const char*>(&re), sizeof re);
            os.write(reinterpret_cast<const char*>(&im), sizeof im);
        }
}

OperatorMatrix load_operator(std::istream& is)
{
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kMagic, 8) != 0) throw ParseError("operator dump: bad magic");
    std::int64_t n = 0;
    std::int32_t role = 0;
    OperatorMatrix op;
    is.read(reinterpret_cast<char*>(&n), sizeof n);
    is.read(reinterpret_cast<char*>(&role), sizeof role);
    is.read(reinterpret_cast<char*>(&op.ka), sizeof op.ka);
    is.read(reinterpret_cast<char*>(&op.omega), sizeof op.omega);
    if (!is || n < 0) throw ParseError("operator dump: bad header");
    op.role = static_cast<OperatorRole>(role);
    op.m.resize(n, n);
    for (std::int64_t i = 0; i < n; ++i)
        for (std::int64_t j = 0; j < n; ++j) {
            double re = 0.0, im = 0.0;
            is.read(reinterpret_cast<char*>(&re), sizeof re);
            is.read(reinterpret_cast<char*>(&im), sizeof im);
            op.m(i, j) = cplx(re, im);
        }
    if (!is) throw ParseError("operator dump: truncated payload");
    return op;
}

}  // namespace symport
