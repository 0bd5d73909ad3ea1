#pragma once

#include <iosfwd>
#include <vector>

#include "symport/mesh.hpp"
#include "symport/point_group.hpp"

namespace symport {

/// Signed permutation C(R): basis n maps onto sign[n] * basis perm[n] under
/// the symmetry operation R. Stored in permutation form so products and
/// congruences stay exact integer arithmetic.
struct MappingMatrix {
    int op = 0;  // index into the owning group's op list
    std::vector<int> perm;
    std::vector<int> sign;  // +1 / -1

    int size() const { return static_cast<int>(perm.size()); }
    bool is_identity() const;

    /// this(other(x)): apply `other` first.
    MappingMatrix composed_with(const MappingMatrix& other) const;

    /// Dense matrix with entries in {-1, 0, +1}; M(perm[n], n) = sign[n].
    MatrixXd to_dense() const;

    /// Applies the signed permutation to a vector (image = C v).
    VectorXcd apply(const VectorXcd& v) const;
    VectorXd apply(const VectorXd& v) const;

    /// Congruence C^T A C without forming the dense matrix.
    MatrixXcd congruence(const MatrixXcd& a) const;

    /// Coordinate-list export, one line per nonzero: row,col,sign (0-based).
    void write_csv(std::ostream& os) const;
};

/// C(R) for every operation of the group, aligned with group.ops().
struct MappingMatrices {
    std::vector<MappingMatrix> maps;

    const MappingMatrix& operator[](std::size_t k) const { return maps[k]; }
    std::size_t size() const { return maps.size(); }
};

/// Builds the signed permutation induced by op on the edge basis. Every
/// transformed vertex must land on a mesh vertex within tol (absolute,
/// meters), otherwise SymmetryBroken is thrown. The sign is -1 when the
/// plus triangle of a basis function maps onto the minus triangle of its
/// image.
MappingMatrix build_mapping_matrix(const EdgeBasisSet& basis, const PointGroup& group, int op_index,
                                   double tol);

/// All mapping matrices with the default tolerance 1e-6 * characteristic
/// length (or an explicit absolute tolerance).
MappingMatrices build_mapping_matrices(const EdgeBasisSet& basis, const PointGroup& group,
                                       double tol = -1.0);

/// Partition of basis indices by their behaviour under the group action.
struct GeneratorCell {
    std::vector<int> interior;    // orbit representatives with full-size orbits
    std::vector<int> boundary;    // representatives fixed by some non-identity op
    std::vector<int> replicated;  // non-representative orbit members
    std::vector<std::vector<int>> orbits;   // every orbit, ascending indices
    std::vector<int> orbit_of;              // basis index -> orbit number

    bool in_generator(int n) const;  // interior or boundary representative
};

GeneratorCell find_generator_cell(const EdgeBasisSet& basis, const PointGroup& group,
                                  const MappingMatrices& maps);

}  // namespace symport
