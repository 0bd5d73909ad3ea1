#include "symport/ports_tarc.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <set>

namespace symport {

int PortConfiguration::species_index(const Species& s) const
{
    for (std::size_t i = 0; i < species.size(); ++i)
        if (species[i] == s) return static_cast<int>(i);
    throw UnknownIrrep("species not present in port configuration");
}

VectorXcd PortConfiguration::adapted_voltages(const Species& s, int site) const
{
    return port_indexing[static_cast<std::size_t>(species_index(s))].col(site);
}

PortConfiguration build_port_configuration(const EdgeBasisSet& basis, const SymmetryAdapter& adapter,
                                           const std::vector<PortSite>& sites, double z0_line)
{
    if (sites.empty()) throw InvalidPosition("port configuration needs at least one site");
    const GeneratorCell& cell = adapter.generator();
    const int n_u = adapter.n_unknowns();

    PortConfiguration cfg;
    cfg.z0_line = z0_line;

    std::set<int> used_orbits;
    std::vector<int> rep_edges;
    for (const PortSite& s : sites) {
        if (s.edge < 0 || s.edge >= n_u) throw InvalidPosition("port edge index out of range");
        const int orbit = cell.orbit_of[static_cast<std::size_t>(s.edge)];
        if (!used_orbits.insert(orbit).second)
            throw InvalidPosition("two port sites share one symmetry orbit");
        PortSite norm = s;
        norm.edge = cell.orbits[static_cast<std::size_t>(orbit)].front();
        cfg.sites.push_back(norm);
        rep_edges.push_back(norm.edge);
    }

    for (std::size_t j = 0; j < cfg.sites.size(); ++j) {
        const int orbit = cell.orbit_of[static_cast<std::size_t>(cfg.sites[j].edge)];
        for (int e : cell.orbits[static_cast<std::size_t>(orbit)]) {
            cfg.port_edges.push_back(e);
            cfg.owner_site.push_back(static_cast<int>(j));
        }
    }

    const int n_p = static_cast<int>(cfg.port_edges.size());
    cfg.P = MatrixXd::Zero(n_u, n_p);
    for (int c = 0; c < n_p; ++c) {
        const int e = cfg.port_edges[static_cast<std::size_t>(c)];
        cfg.P(e, c) = basis.edges[static_cast<std::size_t>(e)].edge_length;
    }

    const int n_xi = cfg.n_sites();
    for (const Species& s : adapter.group().species()) {
        MatrixXcd p = MatrixXcd::Zero(n_p, n_xi);
        std::vector<bool> active(static_cast<std::size_t>(n_xi), false);
        for (int j = 0; j < n_xi; ++j) {
            VectorXcd v_full = VectorXcd::Zero(n_u);
            const int rep = cfg.sites[static_cast<std::size_t>(j)].edge;
            const int rep_col = [&] {
                for (int c = 0; c < n_p; ++c)
                    if (cfg.port_edges[static_cast<std::size_t>(c)] == rep &&
                        cfg.owner_site[static_cast<std::size_t>(c)] == j)
                        return c;
                throw Error("port bookkeeping failure");
            }();
            v_full = cfg.P.col(rep_col).cast<cplx>();
            SymmetryAdaptedExcitation adapted = adapter.adapt_vector(v_full, s);
            if (!adapted.collided) {
                p.col(j) = recover_port_voltages(cfg.P, adapted.vector);
                active[static_cast<std::size_t>(j)] = true;
            }
        }
        cfg.species.push_back(s);
        cfg.port_indexing.push_back(std::move(p));
        cfg.site_active.push_back(std::move(active));
    }
    return cfg;
}

VectorXcd recover_port_voltages(const MatrixXd& p, const VectorXcd& v_full)
{
    if (p.rows() != v_full.size()) throw ConfigError("recover_port_voltages: size mismatch");
    const MatrixXd gram = p.transpose() * p;
    const Eigen::LDLT<MatrixXd> ldlt(gram);
    const VectorXcd rhs = p.transpose().cast<cplx>() * v_full;
    const VectorXd rr = rhs.real(), ri = rhs.imag();
    const VectorXcd v = ldlt.solve(rr).cast<cplx>() + cplx(0.0, 1.0) * ldlt.solve(ri).cast<cplx>();
    const double vnorm = v_full.norm();
    if (vnorm > 0.0) {
        const double res = (p.cast<cplx>() * v - v_full).norm();
        if (res > 1e-10 * vnorm)
            throw NotInColumnSpace("excitation lies outside the port column space (residual " +
                                   std::to_string(res / vnorm) + ")");
    }
    return v;
}

TarcContext::TarcContext(const PortConfiguration& cfg, const ImpedanceFactorization& zfac,
                         const OperatorMatrix& r0)
    : cfg_(&cfg)
{
    const MatrixXcd p = cfg.P.cast<cplx>();
    w_ = zfac.solve(p);
    y_ = p.transpose() * w_;
    k_ = MatrixXcd::Identity(cfg.P.cols(), cfg.P.cols()) + cfg.z0_line * y_;
    g_ = 4.0 * cfg.z0_line * (w_.adjoint() * r0.m * w_);
    h_ = k_.adjoint() * k_;
}

double TarcContext::tarc(const VectorXcd& v) const
{
    if (v.size() != cfg_->P.cols()) throw ConfigError("tarc: port voltage size mismatch");
    const double denom = std::real((v.adjoint() * h_ * v).value());
    if (!(denom > 0.0) || v.norm() == 0.0) throw ZeroExcitation("tarc of a zero excitation");
    const double num = std::real((v.adjoint() * g_ * v).value());
    return std::sqrt(std::clamp(1.0 - num / denom, 0.0, 1.0));
}

double TarcContext::tarc_power_balance(const VectorXcd& v, const ImpedanceFactorization& zfac,
                                       const OperatorMatrix& r0) const
{
    if (v.norm() == 0.0) throw ZeroExcitation("tarc of a zero excitation");
    const double z0 = cfg_->z0_line;
    const VectorXcd v_full = cfg_->P.cast<cplx>() * v;
    const VectorXcd current = zfac.solve(v_full);
    const double p_rad = 0.5 * std::real((current.adjoint() * r0.m * current).value());
    const VectorXcd i_ports = cfg_->P.transpose().cast<cplx>() * current;
    const VectorXcd a = (v + z0 * i_ports) / (2.0 * std::sqrt(z0));
    const double p_in = 0.5 * a.squaredNorm();
    if (!(p_in > 0.0)) throw ZeroExcitation("no incident power");
    return std::sqrt(std::clamp(1.0 - p_rad / p_in, 0.0, 1.0));
}

std::optional<TarcContext::KappaResult> TarcContext::optimal_kappa(const Species& s) const
{
    const int si = cfg_->species_index(s);
    const MatrixXcd& p = cfg_->port_indexing[static_cast<std::size_t>(si)];
    const auto& active = cfg_->site_active[static_cast<std::size_t>(si)];

    std::vector<int> slots;
    for (int j = 0; j < cfg_->n_sites(); ++j)
        if (active[static_cast<std::size_t>(j)]) slots.push_back(j);
    if (slots.empty()) return std::nullopt;

    MatrixXcd pr(p.rows(), static_cast<Eigen::Index>(slots.size()));
    for (std::size_t c = 0; c < slots.size(); ++c) pr.col(static_cast<Eigen::Index>(c)) = p.col(slots[c]);

    const MatrixXcd a = pr.adjoint() * g_ * pr;
    const MatrixXcd b = pr.adjoint() * h_ * pr;

    const KappaSolution sol = kappa_from_forms(a, b);

    KappaResult out;
    out.active_slots = static_cast<int>(slots.size());
    out.lambda_max = sol.lambda_max;
    out.t_bound = sol.t_bound;
    out.kappa = VectorXcd::Zero(cfg_->n_sites());
    for (std::size_t c = 0; c < slots.size(); ++c) out.kappa(slots[c]) = sol.kappa(static_cast<Eigen::Index>(c));
    return out;
}

KappaSolution kappa_from_forms(const MatrixXcd& a, const MatrixXcd& b)
{
    KappaSolution out;
    VectorXcd kappa;
    if (a.rows() == 1) {
        const double num = std::real(a(0, 0)), den = std::real(b(0, 0));
        if (!(den > 0.0)) throw SingularB("degenerate single-port wave matrix");
        out.lambda_max = num / den;
        kappa = VectorXcd::Ones(1);
    } else {
        Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXcd> es(0.5 * (a + a.adjoint()),
                                                               0.5 * (b + b.adjoint()));
        if (es.info() != Eigen::Success) throw SingularB("port wave matrix is singular for this species");
        const Eigen::Index last = es.eigenvalues().size() - 1;  // ascending order
        out.lambda_max = es.eigenvalues()(last);
        kappa = es.eigenvectors().col(last);
    }
    out.t_bound = std::sqrt(std::clamp(1.0 - out.lambda_max, 0.0, 1.0));

    // deterministic phase: largest entry made real positive, unit norm
    Eigen::Index imax = 0;
    kappa.cwiseAbs().maxCoeff(&imax);
    const cplx piv = kappa(imax);
    if (std::abs(piv) > 0.0) kappa *= std::abs(piv) / piv / kappa.norm();
    out.kappa = kappa;
    return out;
}

double TarcContext::tarc_of_kappa(const Species& s, const VectorXcd& kappa) const
{
    const int si = cfg_->species_index(s);
    const VectorXcd v = cfg_->port_indexing[static_cast<std::size_t>(si)] * kappa;
    return tarc(v);
}

double tarc_rms(const std::vector<double>& values)
{
    if (values.empty()) throw EmptySet("tarc_rms of an empty set");
    double acc = 0.0;
    for (double t : values) acc += t * t;
    return std::sqrt(acc / static_cast<double>(values.size()));
}

}  // namespace symport
