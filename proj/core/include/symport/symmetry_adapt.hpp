#pragma once

#include <optional>
#include <string>
#include <vector>

#include "symport/em_operators.hpp"
#include "symport/mapping.hpp"
#include "symport/point_group.hpp"

namespace symport {

/// Symmetry-adapted basis: one column block per species, orthonormal
/// columns, the union spanning the whole space.
struct AdaptedBasis {
    std::vector<Species> species;
    std::vector<MatrixXcd> blocks;

    int total_dim() const;
    MatrixXcd full() const;
    const MatrixXcd& block_of(const Species& s) const;
};

/// Excitation vector projected onto one species, together with collision
/// bookkeeping (a projector that annihilates its source).
struct SymmetryAdaptedExcitation {
    Species species;
    VectorXcd vector;
    bool collided = false;
};

/// Applies the species projectors (g^a / g) sum_R dual_ii(R) C(R) of one
/// group action to excitation vectors.
class SymmetryAdapter {
public:
    SymmetryAdapter(const PointGroup& group, const MappingMatrices& maps, GeneratorCell cell);
    static SymmetryAdapter make(const EdgeBasisSet& basis, const PointGroup& group,
                                const MappingMatrices& maps);

    const PointGroup& group() const { return *group_; }
    const MappingMatrices& maps() const { return *maps_; }
    const GeneratorCell& generator() const { return cell_; }
    int n_unknowns() const { return n_u_; }

    /// Raw projector; accepts any vector (projectors are idempotent).
    VectorXcd project(const VectorXcd& v, const Species& s) const;

    /// Adapts a source supported in the generator cell. Throws
    /// SourceOutsideGenerator when v has entries on replicated indices.
    /// The result is flagged collided when the projector returns zero.
    SymmetryAdaptedExcitation adapt_vector(const VectorXcd& v, const Species& s) const;

    /// Species reachable from a unit port at generator index xi.
    std::vector<Species> realizable_species(int xi) const;

    /// Projects every canonical unit vector and orthonormalizes per species
    /// by pivoted QR (drop tolerance 1e-10).
    AdaptedBasis build_adapted_basis() const;

private:
    const PointGroup* group_;
    const MappingMatrices* maps_;
    GeneratorCell cell_;
    int n_u_ = 0;
};

/// Per-species congruence blocks of an invariant operator.
struct BlockDiagonal {
    std::vector<Species> species;
    std::vector<MatrixXcd> blocks;
    double off_block_residual = 0.0;  // relative Frobenius norm outside the blocks
};

/// Throws NotInvariant unless C(R)^T A C(R) = A for every R (relative
/// tolerance `invariance_tol`).
BlockDiagonal block_diagonalize(const MatrixXcd& a, const AdaptedBasis& basis,
                                const MappingMatrices& maps, double invariance_tol = 1e-8);

/// Characteristic modes X0 I = lambda R0 I, unit radiated power each.
struct CharacteristicModeSet {
    std::optional<Species> species;
    VectorXd eigenvalues;
    MatrixXcd currents;  // full-length columns
    MatrixXcd reduced;   // per-block eigenvectors (empty for a full-space solve)
};

struct ModesOptions {
    int max_modes = 0;          // 0 = all numerically valid modes
    double null_tol = 1e-9;     // relative R0-eigenvalue cut for the non-radiating subspace
    double residual_tol = 1e-8;
};

/// basis == nullptr solves the full-size pencil; otherwise one set per
/// species with a non-empty block.
std::vector<CharacteristicModeSet> characteristic_modes(const OperatorMatrix& r0,
                                                        const OperatorMatrix& x0,
                                                        const AdaptedBasis* basis,
                                                        ModesOptions opt = {});

/// Pairwise quadratic forms |Vm^H A Vn| for a list of states and operators.
struct OrthogonalityReport {
    struct Entry {
        std::string op_name;
        MatrixXd magnitude;       // |Vm^H A Vn|
        MatrixXd normalized;      // magnitude / (|Vm| * |A Vn|)
        double max_cross = 0.0;   // largest normalized cross-species entry
    };
    std::vector<Species> species;
    std::vector<Entry> entries;

    double worst_cross() const;
};

OrthogonalityReport orthogonality_check(const std::vector<SymmetryAdaptedExcitation>& states,
                                        const std::vector<std::pair<std::string, MatrixXcd>>& operators);

}  // namespace symport
