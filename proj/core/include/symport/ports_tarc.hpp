#pragma once

#include <optional>
#include <vector>

#include "symport/em_operators.hpp"
#include "symport/symmetry_adapt.hpp"

namespace symport {

/// One generator-cell port position: a user-facing ladder label and the
/// basis function (interior edge) carrying the delta gap.
struct PortSite {
    int label = 0;  // position id, e.g. the ladder number xi
    int edge = -1;  // generator-cell basis index
};

/// Symmetric port set: each generator site replicated over its group orbit,
/// one column of P per distinct port. A column is the unit-voltage delta-gap
/// footprint edge_length * e_edge, so P^T P stays diagonal and port
/// voltages/currents are the physical gap quantities.
struct PortConfiguration {
    MatrixXd P;                      // N_u x N_p
    std::vector<int> port_edges;     // basis index per column
    std::vector<int> owner_site;     // generator slot per column
    std::vector<PortSite> sites;     // the N_xi generator positions (edges normalized to orbit reps)
    double z0_line = 50.0;

    std::vector<Species> species;             // aligned with the group's species list
    std::vector<MatrixXcd> port_indexing;     // p^(alpha,i): N_p x N_xi, v = p * kappa
    std::vector<std::vector<bool>> site_active;  // per species: generator slots that survive adaptation

    int n_ports() const { return static_cast<int>(P.cols()); }
    int n_sites() const { return static_cast<int>(sites.size()); }
    int species_index(const Species& s) const;

    /// Full port-voltage pattern of one species / generator slot.
    VectorXcd adapted_voltages(const Species& s, int site) const;
};

/// Replicates the given generator sites over the group. Site edges may be
/// any orbit member; they are normalized to the orbit representative.
/// Distinct sites must live on distinct orbits.
PortConfiguration build_port_configuration(const EdgeBasisSet& basis, const SymmetryAdapter& adapter,
                                           const std::vector<PortSite>& sites, double z0_line = 50.0);

/// Least-squares port voltages v = (P^H P)^-1 P^H V. Throws NotInColumnSpace
/// when the residual of P v against V exceeds 1e-10 relative.
VectorXcd recover_port_voltages(const MatrixXd& p, const VectorXcd& v_full);

struct TarcResult {
    std::optional<Species> species;
    double ka = 0.0;
    double t = 0.0;
    VectorXcd port_voltages;
};

/// Largest-eigenvalue solution of A kappa = lambda B kappa for Hermitian A
/// and positive-definite B; kappa is unit-norm with its largest entry made
/// real positive. Throws SingularB when B is not definite.
struct KappaSolution {
    VectorXcd kappa;
    double lambda_max = 0.0;
    double t_bound = 1.0;
};

KappaSolution kappa_from_forms(const MatrixXcd& a, const MatrixXcd& b);

/// Per-frequency TARC evaluator: caches the port-column solves W = Z^-1 P,
/// the port admittance y = P^T W and the wave matrix k = I + Z0 y.
class TarcContext {
public:
    TarcContext(const PortConfiguration& cfg, const ImpedanceFactorization& zfac,
                const OperatorMatrix& r0);

    const PortConfiguration& config() const { return *cfg_; }
    const MatrixXcd& port_admittance() const { return y_; }
    const MatrixXcd& wave_matrix() const { return k_; }
    const MatrixXcd& solved_columns() const { return w_; }

    /// t(v) from the reflection-form quadratic ratio.
    double tarc(const VectorXcd& v) const;

    /// Same quantity from radiated versus incident power with a fresh
    /// current solve; the independent route used for cross-checks.
    double tarc_power_balance(const VectorXcd& v, const ImpedanceFactorization& zfac,
                              const OperatorMatrix& r0) const;

    struct KappaResult {
        VectorXcd kappa;       // N_xi, zeros on collided slots
        double t_bound = 1.0;
        double lambda_max = 0.0;
        int active_slots = 0;
    };

    /// Generator-port amplitudes minimizing TARC for one species via the
    /// generalized eigenproblem on the reduced quadratic forms. Returns
    /// nullopt when the species is not realizable from any site.
    std::optional<KappaResult> optimal_kappa(const Species& s) const;

    double tarc_of_kappa(const Species& s, const VectorXcd& kappa) const;

private:
    const PortConfiguration* cfg_;
    MatrixXcd w_;  // Z^-1 P
    MatrixXcd y_;  // P^T Z^-1 P
    MatrixXcd k_;  // I + z0 y
    MatrixXcd g_;  // 4 z0 W^H R0 W
    MatrixXcd h_;  // k^H k
};

/// sqrt(mean of squares); throws EmptySet on an empty collection.
double tarc_rms(const std::vector<double>& values);

}  // namespace symport
