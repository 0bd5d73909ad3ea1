#include "symport/point_group.hpp"

#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

namespace symport {

using constants::pi;

bool Irrep::is_real() const
{
    for (const auto& m : rep)
        if (m.imag().cwiseAbs().maxCoeff() > 0.0) return false;
    return true;
}

namespace {

Matrix3d rotation_z(double angle)
{
    Matrix3d m = Matrix3d::Identity();
    double c = std::cos(angle), s = std::sin(angle);
    // exact entries for the quarter-turn family keep meshes bitwise symmetric
    if (std::abs(c) < 1e-15) c = 0.0;
    if (std::abs(s) < 1e-15) s = 0.0;
    if (std::abs(c - 1.0) < 1e-15) c = 1.0;
    if (std::abs(c + 1.0) < 1e-15) c = -1.0;
    if (std::abs(s - 1.0) < 1e-15) s = 1.0;
    if (std::abs(s + 1.0) < 1e-15) s = -1.0;
    m(0, 0) = c;
    m(0, 1) = -s;
    m(1, 0) = s;
    m(1, 1) = c;
    return m;
}

Matrix3d reflection_vertical(double plane_angle)
{
    // plane contains z and the in-plane direction (cos a, sin a, 0)
    double c = std::cos(2.0 * plane_angle), s = std::sin(2.0 * plane_angle);
    if (std::abs(c) < 1e-15) c = 0.0;
    if (std::abs(s) < 1e-15) s = 0.0;
    if (std::abs(c - 1.0) < 1e-15) c = 1.0;
    if (std::abs(c + 1.0) < 1e-15) c = -1.0;
    Matrix3d m = Matrix3d::Identity();
    m(0, 0) = c;
    m(0, 1) = s;
    m(1, 0) = s;
    m(1, 1) = -c;
    return m;
}

std::string rotation_label(int m, int n)
{
    int g = std::gcd(m, n);
    int nr = n / g, mr = m / g;
    std::string s = "C" + std::to_string(nr) + "z";
    if (mr != 1) s += "^" + std::to_string(mr);
    return s;
}

std::string reflection_label(int j, int n)
{
    double deg = 180.0 * j / n;
    if (j == 0) return "sigma_xz";
    if (2 * j == n) return "sigma_yz";
    std::ostringstream os;
    os << "sigma_" << deg;
    return os.str();
}

MatrixXcd one_dim(cplx v)
{
    MatrixXcd m(1, 1);
    m(0, 0) = v;
    return m;
}

double snap_unit(double v)
{
    if (std::abs(v) < 1e-15) return 0.0;
    if (std::abs(v - 1.0) < 1e-15) return 1.0;
    if (std::abs(v + 1.0) < 1e-15) return -1.0;
    return v;
}

MatrixXcd rot2(double angle)
{
    MatrixXcd m(2, 2);
    const double c = snap_unit(std::cos(angle)), s = snap_unit(std::sin(angle));
    m << c, -s, s, c;
    return m;
}

MatrixXcd refl2(double line_angle)
{
    MatrixXcd m(2, 2);
    const double c = snap_unit(std::cos(2.0 * line_angle)), s = snap_unit(std::sin(2.0 * line_angle));
    m << c, s, s, -c;
    return m;
}

struct ParsedName {
    int n = 1;
    bool has_mirrors = false;
};

ParsedName parse_schoenflies(const std::string& name)
{
    std::string s = name;
    if (s == "Cs" || s == "cs" || s == "CS") return {1, true};
    if (s.size() < 2 || (s[0] != 'C' && s[0] != 'c'))
        throw UnsupportedGroup("unsupported point group '" + name + "'");
    std::size_t i = 1;
    if (!std::isdigit(static_cast<unsigned char>(s[i])))
        throw UnsupportedGroup("unsupported point group '" + name + "'");
    int n = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
        n = 10 * n + (s[i] - '0');
        ++i;
    }
    bool mirrors = false;
    if (i < s.size()) {
        if ((s[i] == 'v' || s[i] == 'V') && i + 1 == s.size())
            mirrors = true;
        else
            throw UnsupportedGroup("unsupported point group '" + name + "'");
    }
    if (n < 1 || n > 8) throw UnsupportedGroup("unsupported point group '" + name + "' (n must be 1..8)");
    if (n == 1 && mirrors) return {1, true};  // C1v == Cs
    return {n, mirrors};
}

}  // namespace

PointGroup PointGroup::build(const std::string& schoenflies)
{
    ParsedName p = parse_schoenflies(schoenflies);
    const int n = p.n;

    PointGroup g;
    g.name_ = schoenflies;

    // identity, rotations by increasing angle, then mirrors by plane angle
    SymmetryOp e;
    g.ops_.push_back(e);
    for (int m = 1; m < n; ++m) {
        SymmetryOp op;
        op.kind = SymmetryOp::Kind::rotation;
        op.angle = 2.0 * pi * m / n;
        op.axis = Vector3d::UnitZ();
        op.label = rotation_label(m, n);
        op.transform = rotation_z(op.angle);
        g.ops_.push_back(op);
    }
    if (p.has_mirrors) {
        for (int j = 0; j < n; ++j) {
            double plane_angle = pi * j / n;
            SymmetryOp op;
            op.kind = SymmetryOp::Kind::reflection;
            op.axis = Vector3d(-std::sin(plane_angle), std::cos(plane_angle), 0.0);  // plane normal
            op.label = reflection_label(j, n);
            op.transform = reflection_vertical(plane_angle);
            g.ops_.push_back(op);
        }
    }

    const int order = static_cast<int>(g.ops_.size());
    auto rep_of = [&](auto&& on_rotation, auto&& on_reflection) {
        std::vector<MatrixXcd> rep(static_cast<std::size_t>(order));
        int k = 0;
        rep[static_cast<std::size_t>(k++)] = on_rotation(0);
        for (int m = 1; m < n; ++m) rep[static_cast<std::size_t>(k++)] = on_rotation(m);
        if (p.has_mirrors)
            for (int j = 0; j < n; ++j) rep[static_cast<std::size_t>(k++)] = on_reflection(j);
        return rep;
    };

    if (!p.has_mirrors) {
        // cyclic group C_n
        g.irreps_.push_back({"A", 1,
                             rep_of([&](int) { return one_dim(1.0); }, [&](int) { return one_dim(1.0); })});
        if (n % 2 == 0 && n >= 2) {
            g.irreps_.push_back({"B", 1,
                                 rep_of([&](int m) { return one_dim(m % 2 == 0 ? 1.0 : -1.0); },
                                        [&](int) { return one_dim(1.0); })});
        }
        for (int k = 1; 2 * k < n; ++k) {
            auto fwd = [&](int m) { return one_dim(std::exp(cplx(0.0, -2.0 * pi * k * m / n))); };
            auto bwd = [&](int m) { return one_dim(std::exp(cplx(0.0, 2.0 * pi * k * m / n))); };
            std::string base = (n >= 5) ? "E" + std::to_string(k) : "E";
            g.irreps_.push_back({base + "a", 1, rep_of(fwd, [&](int) { return one_dim(1.0); })});
            g.irreps_.push_back({base + "b", 1, rep_of(bwd, [&](int) { return one_dim(1.0); })});
        }
    } else if (n == 1) {
        // Cs = {E, sigma}
        g.irreps_.push_back({"A'", 1, rep_of([&](int) { return one_dim(1.0); }, [&](int) { return one_dim(1.0); })});
        g.irreps_.push_back(
            {"A''", 1, rep_of([&](int) { return one_dim(1.0); }, [&](int) { return one_dim(-1.0); })});
    } else {
        // C_nv
        g.irreps_.push_back(
            {"A1", 1, rep_of([&](int) { return one_dim(1.0); }, [&](int) { return one_dim(1.0); })});
        g.irreps_.push_back(
            {"A2", 1, rep_of([&](int) { return one_dim(1.0); }, [&](int) { return one_dim(-1.0); })});
        if (n % 2 == 0) {
            g.irreps_.push_back({"B1", 1,
                                 rep_of([&](int m) { return one_dim(m % 2 == 0 ? 1.0 : -1.0); },
                                        [&](int j) { return one_dim(j % 2 == 0 ? 1.0 : -1.0); })});
            g.irreps_.push_back({"B2", 1,
                                 rep_of([&](int m) { return one_dim(m % 2 == 0 ? 1.0 : -1.0); },
                                        [&](int j) { return one_dim(j % 2 == 0 ? -1.0 : 1.0); })});
        }
        int n_pairs = (n % 2 == 0) ? n / 2 - 1 : (n - 1) / 2;
        for (int k = 1; k <= n_pairs; ++k) {
            std::string label = (n_pairs == 1) ? "E" : "E" + std::to_string(k);
            g.irreps_.push_back({label, 2,
                                 rep_of([&, k](int m) { return rot2(2.0 * pi * k * m / n); },
                                        [&, k](int j) { return refl2(k * pi * j / n); })});
        }
    }

    g.build_cayley();
    return g;
}

void PointGroup::build_cayley()
{
    const int g = order();
    cayley_.assign(static_cast<std::size_t>(g), std::vector<int>(static_cast<std::size_t>(g), -1));
    for (int i = 0; i < g; ++i) {
        for (int j = 0; j < g; ++j) {
            Matrix3d prod = ops_[static_cast<std::size_t>(i)].transform * ops_[static_cast<std::size_t>(j)].transform;
            int found = -1;
            for (int k = 0; k < g; ++k) {
                if ((prod - ops_[static_cast<std::size_t>(k)].transform).cwiseAbs().maxCoeff() < 1e-9) {
                    found = k;
                    break;
                }
            }
            if (found < 0) throw Error("point group is not closed under composition");
            cayley_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = found;
        }
    }
}

int PointGroup::inverse(int i) const
{
    for (int j = 0; j < order(); ++j)
        if (compose(i, j) == 0) return j;
    throw Error("no inverse found");  // unreachable for a valid group
}

int PointGroup::op_index(const std::string& label) const
{
    for (int k = 0; k < order(); ++k)
        if (ops_[static_cast<std::size_t>(k)].label == label) return k;
    throw UnknownOp("unknown symmetry operation '" + label + "' in group " + name_);
}

int PointGroup::irrep_index(const std::string& label) const
{
    for (std::size_t a = 0; a < irreps_.size(); ++a)
        if (irreps_[a].label == label) return static_cast<int>(a);
    throw UnknownIrrep("unknown irrep '" + label + "' in group " + name_);
}

cplx PointGroup::character(int irrep, int op) const
{
    return irreps_.at(static_cast<std::size_t>(irrep)).rep.at(static_cast<std::size_t>(op)).trace();
}

cplx PointGroup::character(const std::string& irrep_label, const std::string& op_label) const
{
    return character(irrep_index(irrep_label), op_index(op_label));
}

MatrixXcd PointGroup::dual_rep(int irrep, int op) const
{
    const MatrixXcd& d = irreps_.at(static_cast<std::size_t>(irrep)).rep.at(static_cast<std::size_t>(op));
    return d.inverse().transpose();
}

MatrixXcd PointGroup::dual_rep(const std::string& irrep_label, const std::string& op_label) const
{
    return dual_rep(irrep_index(irrep_label), op_index(op_label));
}

int PointGroup::max_orthogonal_states() const
{
    int n = 0;
    for (const auto& ir : irreps_) n += ir.dimension;
    return n;
}

int PointGroup::min_ports() const
{
    return order();
}

std::vector<Species> PointGroup::species() const
{
    std::vector<Species> out;
    for (int a = 0; a < static_cast<int>(irreps_.size()); ++a)
        for (int i = 0; i < irreps_[static_cast<std::size_t>(a)].dimension; ++i) out.push_back({a, i});
    return out;
}

std::string PointGroup::species_label(const Species& s) const
{
    const Irrep& ir = irreps_.at(static_cast<std::size_t>(s.irrep));
    if (ir.dimension == 1) return ir.label;
    return ir.label + "(" + std::to_string(s.row + 1) + ")";
}

void PointGroup::write_character_table_csv(std::ostream& os) const
{
    os << name_;
    for (const auto& op : ops_) os << "," << op.label;
    os << "\n";
    for (std::size_t a = 0; a < irreps_.size(); ++a) {
        os << irreps_[a].label;
        for (int k = 0; k < order(); ++k) {
            cplx c = character(static_cast<int>(a), k);
            os << ",";
            if (std::abs(c.imag()) < 1e-14)
                os << c.real();
            else
                os << c.real() << (c.imag() >= 0 ? "+" : "") << c.imag() << "j";
        }
        os << "\n";
    }
}

}  // namespace symport
