#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "symport/errors.hpp"
#include "symport/types.hpp"

namespace symport {

/// One spatial symmetry operation with its orthogonal 3x3 transform.
struct SymmetryOp {
    enum class Kind { identity, rotation, reflection, inversion };

    Kind kind = Kind::identity;
    Vector3d axis = Vector3d::UnitZ();  // rotation axis, or plane normal for reflections
    double angle = 0.0;                 // radians, rotations only
    std::string label = "E";
    Matrix3d transform = Matrix3d::Identity();
};

/// Irreducible representation: one matrix D(R) per group operation, aligned
/// with PointGroup::ops ordering. Entries are real for every C_nv-family
/// group; the rotation-only groups C_n (n >= 3) require genuinely complex
/// one-dimensional irreps.
struct Irrep {
    std::string label;
    int dimension = 1;
    std::vector<MatrixXcd> rep;  // rep[k] = D(ops[k])

    bool is_real() const;
};

/// Finite point group of the C_n / C_nv families (principal axis along z,
/// first mirror plane fixing the x-axis). Immutable after construction.
class PointGroup {
public:
    PointGroup() = default;  // empty; assign from build()

    /// Builds a group from its Schoenflies label. Supported: C1, Cs, Cn and
    /// Cnv for 2 <= n <= 8. Throws UnsupportedGroup otherwise.
    static PointGroup build(const std::string& schoenflies);

    const std::string& name() const { return name_; }
    int order() const { return static_cast<int>(ops_.size()); }

    const std::vector<SymmetryOp>& ops() const { return ops_; }
    const SymmetryOp& op(int k) const { return ops_.at(static_cast<std::size_t>(k)); }
    int op_index(const std::string& label) const;  // throws UnknownOp

    const std::vector<Irrep>& irreps() const { return irreps_; }
    const Irrep& irrep(int a) const { return irreps_.at(static_cast<std::size_t>(a)); }
    int irrep_index(const std::string& label) const;  // throws UnknownIrrep

    /// Index of ops[i] * ops[j] (apply j first).
    int compose(int i, int j) const { return cayley_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
    int inverse(int i) const;

    /// chi^(alpha)(R) = trace D^(alpha)(R).
    cplx character(const std::string& irrep_label, const std::string& op_label) const;
    cplx character(int irrep, int op) const;

    /// Contragredient representation (D^-1)^T; equals D itself whenever D is
    /// real orthogonal.
    MatrixXcd dual_rep(int irrep, int op) const;
    MatrixXcd dual_rep(const std::string& irrep_label, const std::string& op_label) const;

    /// Number of mutually orthogonal states a structure of this symmetry
    /// supports: sum of irrep dimensions.
    int max_orthogonal_states() const;

    /// Number of ports needed to excite all of them: the group order.
    int min_ports() const;

    std::vector<Species> species() const;
    std::string species_label(const Species& s) const;

    /// Character table as CSV (rows = irreps, columns = operations).
    void write_character_table_csv(std::ostream& os) const;

private:
    void build_cayley();

    std::string name_;
    std::vector<SymmetryOp> ops_;
    std::vector<Irrep> irreps_;
    std::vector<std::vector<int>> cayley_;
};

}  // namespace symport
