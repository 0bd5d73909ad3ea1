#include "symport/symmetry_adapt.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace symport {

int AdaptedBasis::total_dim() const
{
    int n = 0;
    for (const auto& b : blocks) n += static_cast<int>(b.cols());
    return n;
}

MatrixXcd AdaptedBasis::full() const
{
    if (blocks.empty()) return {};
    const Eigen::Index rows = blocks.front().rows();
    MatrixXcd out(rows, total_dim());
    Eigen::Index c = 0;
    for (const auto& b : blocks) {
        out.middleCols(c, b.cols()) = b;
        c += b.cols();
    }
    return out;
}

const MatrixXcd& AdaptedBasis::block_of(const Species& s) const
{
    for (std::size_t i = 0; i < species.size(); ++i)
        if (species[i] == s) return blocks[i];
    throw UnknownIrrep("no adapted block for requested species");
}

SymmetryAdapter::SymmetryAdapter(const PointGroup& group, const MappingMatrices& maps, GeneratorCell cell)
    : group_(&group), maps_(&maps), cell_(std::move(cell))
{
    if (maps.size() != static_cast<std::size_t>(group.order()))
        throw ConfigError("mapping matrices do not match group order");
    n_u_ = maps.maps.empty() ? 0 : maps.maps.front().size();
}

SymmetryAdapter SymmetryAdapter::make(const EdgeBasisSet& basis, const PointGroup& group,
                                      const MappingMatrices& maps)
{
    return SymmetryAdapter(group, maps, find_generator_cell(basis, group, maps));
}

VectorXcd SymmetryAdapter::project(const VectorXcd& v, const Species& s) const
{
    const PointGroup& g = *group_;
    const Irrep& ir = g.irrep(s.irrep);
    if (s.row < 0 || s.row >= ir.dimension) throw UnknownIrrep("species row out of range");
    VectorXcd acc = VectorXcd::Zero(v.size());
    for (int k = 0; k < g.order(); ++k) {
        const cplx coeff = g.dual_rep(s.irrep, k)(s.row, s.row);
        if (coeff == cplx(0.0, 0.0)) continue;
        acc += coeff * (*maps_)[static_cast<std::size_t>(k)].apply(v);
    }
    return (static_cast<double>(ir.dimension) / g.order()) * acc;
}

SymmetryAdaptedExcitation SymmetryAdapter::adapt_vector(const VectorXcd& v, const Species& s) const
{
    if (v.size() != n_u_) throw ConfigError("excitation vector length mismatch");
    const double vnorm = v.norm();
    for (int rep : cell_.replicated) {
        if (std::abs(v(rep)) > 1e-14 * vnorm)
            throw SourceOutsideGenerator("excitation has support at replicated index " + std::to_string(rep));
    }
    SymmetryAdaptedExcitation out;
    out.species = s;
    out.vector = project(v, s);
    out.collided = out.vector.norm() <= 1e-12 * vnorm;
    if (out.collided) out.vector.setZero();
    return out;
}

std::vector<Species> SymmetryAdapter::realizable_species(int xi) const
{
    if (xi < 0 || xi >= n_u_) throw InvalidPosition("port index out of range");
    if (!cell_.in_generator(xi))
        throw InvalidPosition("port index " + std::to_string(xi) + " is not a generator-cell representative");
    VectorXcd e = VectorXcd::Zero(n_u_);
    e(xi) = 1.0;
    std::vector<Species> out;
    for (const Species& s : group_->species()) {
        if (project(e, s).norm() > 1e-12) out.push_back(s);
    }
    return out;
}

AdaptedBasis SymmetryAdapter::build_adapted_basis() const
{
    AdaptedBasis basis;
    for (const Species& s : group_->species()) {
        MatrixXcd cols(n_u_, n_u_);
        VectorXcd e = VectorXcd::Zero(n_u_);
        for (int n = 0; n < n_u_; ++n) {
            e(n) = 1.0;
            cols.col(n) = project(e, s);
            e(n) = 0.0;
        }
        Eigen::ColPivHouseholderQR<MatrixXcd> qr(cols);
        qr.setThreshold(1e-10);
        const Eigen::Index rank = qr.rank();
        basis.species.push_back(s);
        if (rank == 0) {
            basis.blocks.emplace_back(n_u_, 0);
            continue;
        }
        MatrixXcd q = qr.householderQ() * MatrixXcd::Identity(n_u_, rank);
        basis.blocks.push_back(std::move(q));
    }
    return basis;
}

BlockDiagonal block_diagonalize(const MatrixXcd& a, const AdaptedBasis& basis,
                                const MappingMatrices& maps, double invariance_tol)
{
    const double anorm = a.norm();
    for (const MappingMatrix& c : maps.maps) {
        const double dev = (c.congruence(a) - a).norm();
        if (dev > invariance_tol * anorm)
            throw NotInvariant("operator is not invariant under the group (relative deviation " +
                               std::to_string(dev / anorm) + ")");
    }

    BlockDiagonal out;
    out.species = basis.species;
    MatrixXcd gamma = basis.full();
    MatrixXcd congr = gamma.adjoint() * a * gamma;

    Eigen::Index offset = 0;
    for (const auto& b : basis.blocks) {
        out.blocks.push_back(congr.block(offset, offset, b.cols(), b.cols()));
        congr.block(offset, offset, b.cols(), b.cols()).setZero();
        offset += b.cols();
    }
    out.off_block_residual = anorm > 0.0 ? congr.norm() / anorm : 0.0;
    return out;
}

namespace {

/// Symmetric-definite pencil X v = lambda R v with a possibly singular PSD
/// R: the non-radiating subspace null(R) is deflated by restricting to the
/// orthogonal complement of X*null(R), where all finite eigenpairs live.
struct PencilResult {
    VectorXd eigenvalues;
    MatrixXcd vectors;
};

PencilResult solve_pencil(const MatrixXcd& x, const MatrixXcd& r, double null_tol)
{
    const Eigen::Index n = x.rows();
    PencilResult out;
    if (n == 0) return out;

    Eigen::SelfAdjointEigenSolver<MatrixXcd> res(r);
    const VectorXd rev = res.eigenvalues();
    const double rmax = rev.cwiseAbs().maxCoeff();
    if (rmax <= 0.0) return out;  // nothing radiates

    std::vector<Eigen::Index> null_idx, keep_idx;
    for (Eigen::Index i = 0; i < n; ++i)
        (rev(i) <= null_tol * rmax ? null_idx : keep_idx).push_back(i);

    MatrixXcd basis;  // subspace containing all finite eigenvectors
    if (null_idx.empty()) {
        basis = MatrixXcd::Identity(n, n);
    } else {
        MatrixXcd nullspace(n, static_cast<Eigen::Index>(null_idx.size()));
        for (std::size_t i = 0; i < null_idx.size(); ++i)
            nullspace.col(static_cast<Eigen::Index>(i)) = res.eigenvectors().col(null_idx[i]);
        MatrixXcd xn = x * nullspace;
        Eigen::HouseholderQR<MatrixXcd> qr(xn);
        MatrixXcd q = qr.householderQ();
        basis = q.rightCols(n - static_cast<Eigen::Index>(null_idx.size()));
    }

    const MatrixXcd xr = (basis.adjoint() * x * basis).eval();
    const MatrixXcd rr = (basis.adjoint() * r * basis).eval();

    // R restricted to the deflated subspace is positive definite; whiten it.
    Eigen::SelfAdjointEigenSolver<MatrixXcd> rres(0.5 * (rr + rr.adjoint()));
    const VectorXd rrev = rres.eigenvalues();
    const double rrmax = rrev.cwiseAbs().maxCoeff();
    std::vector<Eigen::Index> pos;
    for (Eigen::Index i = 0; i < rrev.size(); ++i)
        if (rrev(i) > null_tol * rrmax) pos.push_back(i);
    MatrixXcd s(basis.cols(), static_cast<Eigen::Index>(pos.size()));
    for (std::size_t i = 0; i < pos.size(); ++i)
        s.col(static_cast<Eigen::Index>(i)) =
            rres.eigenvectors().col(pos[i]) / std::sqrt(rrev(pos[i]));

    const MatrixXcd core = (s.adjoint() * xr * s).eval();
    Eigen::SelfAdjointEigenSolver<MatrixXcd> ces(0.5 * (core + core.adjoint()));

    out.eigenvalues = ces.eigenvalues();
    out.vectors = basis * (s * ces.eigenvectors());
    return out;
}

}  // namespace

std::vector<CharacteristicModeSet> characteristic_modes(const OperatorMatrix& r0,
                                                        const OperatorMatrix& x0,
                                                        const AdaptedBasis* basis, ModesOptions opt)
{
    std::vector<CharacteristicModeSet> out;

    auto finalize = [&](std::optional<Species> sp, const MatrixXcd& gamma, const MatrixXcd& xb,
                        const MatrixXcd& rb) {
        PencilResult pr = solve_pencil(xb, rb, opt.null_tol);
        if (pr.eigenvalues.size() == 0) return;

        // normalize to unit radiated power and keep only eigenpairs whose
        // full-pencil residual survives the tolerance; near the deflated
        // non-radiating subspace the large-|lambda| pairs lose accuracy and
        // are not reported
        struct Mode {
            double lambda;
            VectorXcd reduced;
            VectorXcd full;
        };
        std::vector<Mode> modes;
        for (Eigen::Index i = 0; i < pr.eigenvalues.size(); ++i) {
            VectorXcd v = pr.vectors.col(i);
            const double p = std::real((v.adjoint() * rb * v).value());
            if (!(p > 0.0)) continue;
            v *= std::sqrt(2.0 / p);
            VectorXcd full = gamma.cols() > 0 ? VectorXcd(gamma * v) : v;
            const VectorXcd lhs = x0.m * full;
            const double res = (lhs - pr.eigenvalues(i) * (r0.m * full)).norm();
            if (res > opt.residual_tol * lhs.norm()) continue;
            modes.push_back({pr.eigenvalues(i), std::move(v), std::move(full)});
        }
        if (modes.empty()) return;

        // order by modal significance, |lambda| ascending
        std::sort(modes.begin(), modes.end(),
                  [](const Mode& a, const Mode& b) { return std::abs(a.lambda) < std::abs(b.lambda); });
        std::size_t keep = modes.size();
        if (opt.max_modes > 0) keep = std::min<std::size_t>(keep, static_cast<std::size_t>(opt.max_modes));

        CharacteristicModeSet set;
        set.species = sp;
        set.eigenvalues.resize(static_cast<Eigen::Index>(keep));
        set.reduced.resize(modes.front().reduced.size(), static_cast<Eigen::Index>(keep));
        set.currents.resize(modes.front().full.size(), static_cast<Eigen::Index>(keep));
        for (std::size_t i = 0; i < keep; ++i) {
            set.eigenvalues(static_cast<Eigen::Index>(i)) = modes[i].lambda;
            set.reduced.col(static_cast<Eigen::Index>(i)) = modes[i].reduced;
            set.currents.col(static_cast<Eigen::Index>(i)) = modes[i].full;
        }
        out.push_back(std::move(set));
    };

    if (basis == nullptr) {
        finalize(std::nullopt, MatrixXcd(), x0.m, r0.m);
        return out;
    }

    for (std::size_t i = 0; i < basis->species.size(); ++i) {
        const MatrixXcd& gamma = basis->blocks[i];
        if (gamma.cols() == 0) continue;
        MatrixXcd xb = gamma.adjoint() * x0.m * gamma;
        MatrixXcd rb = gamma.adjoint() * r0.m * gamma;
        finalize(basis->species[i], gamma, xb, rb);
    }
    return out;
}

double OrthogonalityReport::worst_cross() const
{
    double w = 0.0;
    for (const auto& e : entries) w = std::max(w, e.max_cross);
    return w;
}

OrthogonalityReport orthogonality_check(const std::vector<SymmetryAdaptedExcitation>& states,
                                        const std::vector<std::pair<std::string, MatrixXcd>>& operators)
{
    OrthogonalityReport report;
    const int n = static_cast<int>(states.size());
    for (const auto& st : states) report.species.push_back(st.species);

    for (const auto& [name, a] : operators) {
        OrthogonalityReport::Entry entry;
        entry.op_name = name;
        entry.magnitude.resize(n, n);
        entry.normalized.resize(n, n);
        std::vector<VectorXcd> av(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) av[static_cast<std::size_t>(j)] = a * states[static_cast<std::size_t>(j)].vector;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const cplx q = states[static_cast<std::size_t>(i)].vector.dot(av[static_cast<std::size_t>(j)]);
                entry.magnitude(i, j) = std::abs(q);
                const double scale =
                    states[static_cast<std::size_t>(i)].vector.norm() * av[static_cast<std::size_t>(j)].norm();
                entry.normalized(i, j) = scale > 0.0 ? std::abs(q) / scale : 0.0;
                if (!(states[static_cast<std::size_t>(i)].species == states[static_cast<std::size_t>(j)].species))
                    entry.max_cross = std::max(entry.max_cross, entry.normalized(i, j));
            }
        }
        report.entries.push_back(std::move(entry));
    }
    return report;
}

}  // namespace symport
