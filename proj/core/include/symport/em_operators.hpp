#pragma once

#include <Eigen/LU>
#include <iosfwd>
#include <memory>
#include <vector>

#include "symport/mesh.hpp"
#include "symport/types.hpp"

namespace symport {

enum class OperatorRole { Z0, R0, X0, Rrho, W, Y, custom };

/// Dense frequency-domain operator in the edge basis.
struct OperatorMatrix {
    OperatorRole role = OperatorRole::custom;
    MatrixXcd m;
    double ka = 0.0;     // electrical size the operator was assembled at
    double omega = 0.0;  // rad/s

    int size() const { return static_cast<int>(m.rows()); }
    MatrixXd real_part() const { return m.real(); }
};

/// Electrical-size samples shared by sweeps; radius is the circumscribing
/// sphere radius used to convert ka to rad/s.
struct FrequencyGrid {
    std::vector<double> ka;
    double radius = 0.0;

    static FrequencyGrid single(double ka, double radius);
    static FrequencyGrid range(double ka_min, double ka_max, int count, double radius);
    double omega(std::size_t i) const;
};

struct AssemblyOptions {
    int threads = 0;
    double near_factor = 1.5;  // centroid-distance multiplier turning on singularity extraction
    int band_margin = 30;      // extra spherical-harmonic orders in the radiation grid
};

/// Assembles the MoM operators of one edge-basis set. The reactive part
/// comes from a pairwise Galerkin quadrature of the cos(kR)/R kernel with
/// the 1/R term extracted and integrated in closed form near the diagonal.
/// The radiation part is accumulated as a Gram matrix of transverse
/// radiation moments over an exact spherical quadrature, which keeps it
/// positive semi-definite by construction and consistent with far fields.
class OperatorAssembler {
public:
    explicit OperatorAssembler(const EdgeBasisSet& basis, AssemblyOptions opt = {});
    ~OperatorAssembler();
    OperatorAssembler(const OperatorAssembler&) = delete;
    OperatorAssembler& operator=(const OperatorAssembler&) = delete;

    const EdgeBasisSet& basis() const { return basis_; }
    double radius() const { return radius_; }
    double wavenumber(double ka) const { return ka / radius_; }

    OperatorMatrix radiation(double ka) const;      // R0
    OperatorMatrix reactance(double ka) const;      // X0
    OperatorMatrix impedance(double ka) const;      // Z0 = R0 + j X0
    OperatorMatrix loss(double rho) const;          // thin-sheet ohmic part
    OperatorMatrix stored_energy(double ka, double delta = 1e-3) const;  // omega dX0/domega

    /// Complex far-field vector (theta, phi components) of a current vector,
    /// one entry pair per direction; E(r) ~ exp(-jkr)/r * F.
    struct FarField {
        std::vector<std::array<cplx, 2>> f;
        double power(const std::vector<double>& weights, double eta = constants::eta0) const;
    };
    FarField far_field(const VectorXcd& current, double ka,
                       const std::vector<std::array<double, 2>>& directions_theta_phi) const;
    FarField far_field(const VectorXcd& current, double ka, const std::vector<Vector3d>& directions) const;

private:
    struct TriData;
    struct HalfBasis;

    void pair_tensors(int s, int t, double k, double* out) const;  // {S, Lv xyz, Ls xyz, Dsum}

    const EdgeBasisSet& basis_;
    AssemblyOptions opt_;
    double radius_ = 0.0;
    Vector3d center_ = Vector3d::Zero();
    std::vector<TriData> tris_;
    std::vector<std::vector<HalfBasis>> halves_;  // per triangle
};

/// Cached LU factorization of a system matrix Z = Z0 + Rrho at one
/// frequency. Throws SingularMatrix when the 1-norm condition estimate
/// exceeds 1e12.
class ImpedanceFactorization {
public:
    explicit ImpedanceFactorization(const MatrixXcd& z, double cond_limit = 1e12);

    VectorXcd solve(const VectorXcd& rhs) const;
    MatrixXcd solve(const MatrixXcd& rhs) const;
    double condition_estimate() const { return cond_; }
    int size() const { return n_; }

private:
    Eigen::PartialPivLU<MatrixXcd> lu_;
    double cond_ = 0.0;
    int n_ = 0;
};

struct CurrentSolution {
    VectorXcd current;
    VectorXcd excitation;
};

/// Solves Z I = V and verifies the residual to 1e-8 * |V|.
CurrentSolution solve_currents(const OperatorMatrix& z, const VectorXcd& v);
CurrentSolution solve_currents(const ImpedanceFactorization& zfac, const MatrixXcd& z, const VectorXcd& v);

/// Envelope correlation coefficient |Im^H R0 In|^2 / (Pm * Pn) in [0, 1].
double envelope_correlation(const VectorXcd& im, const VectorXcd& in, const OperatorMatrix& r0);

/// Binary operator dump: 8-byte magic "SPOPMAT1", int64 N, int32 role,
/// float64 ka, float64 omega, then N*N row-major complex<double>.
void dump_operator(const OperatorMatrix& op, std::ostream& os);
OperatorMatrix load_operator(std::istream& is);

}  // namespace symport
