#include "symport/mapping.hpp"

#include <algorithm>
#include <map>
#include <ostream>

namespace symport {

bool MappingMatrix::is_identity() const
{
    for (int n = 0; n < size(); ++n)
        if (perm[static_cast<std::size_t>(n)] != n || sign[static_cast<std::size_t>(n)] != 1) return false;
    return true;
}

MappingMatrix MappingMatrix::composed_with(const MappingMatrix& other) const
{
    MappingMatrix out;
    out.perm.resize(perm.size());
    out.sign.resize(sign.size());
    for (std::size_t n = 0; n < perm.size(); ++n) {
        int mid = other.perm[n];
        out.perm[n] = perm[static_cast<std::size_t>(mid)];
        out.sign[n] = other.sign[n] * sign[static_cast<std::size_t>(mid)];
    }
    return out;
}

MatrixXd MappingMatrix::to_dense() const
{
    MatrixXd m = MatrixXd::Zero(size(), size());
    for (int n = 0; n < size(); ++n) m(perm[static_cast<std::size_t>(n)], n) = sign[static_cast<std::size_t>(n)];
    return m;
}

VectorXcd MappingMatrix::apply(const VectorXcd& v) const
{
    VectorXcd out = VectorXcd::Zero(v.size());
    for (int n = 0; n < size(); ++n)
        out(perm[static_cast<std::size_t>(n)]) = static_cast<double>(sign[static_cast<std::size_t>(n)]) * v(n);
    return out;
}

VectorXd MappingMatrix::apply(const VectorXd& v) const
{
    VectorXd out = VectorXd::Zero(v.size());
    for (int n = 0; n < size(); ++n)
        out(perm[static_cast<std::size_t>(n)]) = static_cast<double>(sign[static_cast<std::size_t>(n)]) * v(n);
    return out;
}

MatrixXcd MappingMatrix::congruence(const MatrixXcd& a) const
{
    const int n = size();
    MatrixXcd out(n, n);
    for (int j = 0; j < n; ++j) {
        int pj = perm[static_cast<std::size_t>(j)];
        double sj = sign[static_cast<std::size_t>(j)];
        for (int i = 0; i < n; ++i) {
            int pi = perm[static_cast<std::size_t>(i)];
            double si = sign[static_cast<std::size_t>(i)];
            out(i, j) = si * sj * a(pi, pj);
        }
    }
    return out;
}

void MappingMatrix::write_csv(std::ostream& os) const
{
    os << "row,col,sign\n";
    for (int n = 0; n < size(); ++n)
        os << perm[static_cast<std::size_t>(n)] << "," << n << "," << sign[static_cast<std::size_t>(n)] << "\n";
}

namespace {

struct VertexLocator {
    const std::vector<Vector3d>& verts;
    double cell;
    std::map<std::array<long, 3>, std::vector<int>> grid;

    VertexLocator(const std::vector<Vector3d>& v, double tol) : verts(v), cell(tol * 4.0)
    {
        for (std::size_t i = 0; i < verts.size(); ++i) grid[key(verts[i])].push_back(static_cast<int>(i));
    }

    std::array<long, 3> key(const Vector3d& p) const
    {
        return {static_cast<long>(std::floor(p.x() / cell)), static_cast<long>(std::floor(p.y() / cell)),
                static_cast<long>(std::floor(p.z() / cell))};
    }

    int find(const Vector3d& p, double tol) const
    {
        std::array<long, 3> k = key(p);
        int best = -1;
        double best_d = tol;
        for (long dx = -1; dx <= 1; ++dx)
            for (long dy = -1; dy <= 1; ++dy)
                for (long dz = -1; dz <= 1; ++dz) {
                    auto it = grid.find({k[0] + dx, k[1] + dy, k[2] + dz});
                    if (it == grid.end()) continue;
                    for (int i : it->second) {
                        double d = (verts[static_cast<std::size_t>(i)] - p).norm();
                        if (d <= best_d) {
                            best_d = d;
                            best = i;
                        }
                    }
                }
        return best;
    }
};

}  // namespace

MappingMatrix build_mapping_matrix(const EdgeBasisSet& basis, const PointGroup& group, int op_index,
                                   double tol)
{
    if (!(tol > 0.0)) throw ConfigError("vertex matching tolerance must be positive");
    const TriMesh& mesh = basis.mesh;
    const Matrix3d& q = group.op(op_index).transform;
    const std::string& op_label = group.op(op_index).label;

    VertexLocator locator(mesh.vertices, tol);
    std::vector<int> vmap(mesh.vertices.size(), -1);
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
        int image = locator.find(q * mesh.vertices[v], tol);
        if (image < 0)
            throw SymmetryBroken("operation " + op_label + " maps vertex " + std::to_string(v) +
                                 " outside the mesh (tol " + std::to_string(tol) + ")");
        vmap[v] = image;
    }

    std::map<std::array<int, 3>, int> tri_lookup;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        std::array<int, 3> k = mesh.triangles[t];
        std::sort(k.begin(), k.end());
        tri_lookup[k] = static_cast<int>(t);
    }
    std::vector<int> tmap(mesh.triangles.size(), -1);
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        std::array<int, 3> k;
        for (int i = 0; i < 3; ++i)
            k[static_cast<std::size_t>(i)] = vmap[static_cast<std::size_t>(mesh.triangles[t][static_cast<std::size_t>(i)])];
        std::sort(k.begin(), k.end());
        auto it = tri_lookup.find(k);
        if (it == tri_lookup.end())
            throw SymmetryBroken("operation " + op_label + " maps triangle " + std::to_string(t) +
                                 " onto no mesh triangle");
        tmap[t] = it->second;
    }

    std::map<std::pair<int, int>, int> edge_lookup;
    for (std::size_t n = 0; n < basis.edges.size(); ++n)
        edge_lookup[{basis.edges[n].v0, basis.edges[n].v1}] = static_cast<int>(n);

    MappingMatrix out;
    out.op = op_index;
    out.perm.resize(basis.edges.size());
    out.sign.resize(basis.edges.size());
    for (std::size_t n = 0; n < basis.edges.size(); ++n) {
        const EdgeBasis& e = basis.edges[n];
        int a = vmap[static_cast<std::size_t>(e.v0)];
        int b = vmap[static_cast<std::size_t>(e.v1)];
        if (a > b) std::swap(a, b);
        auto it = edge_lookup.find({a, b});
        if (it == edge_lookup.end())
            throw SymmetryBroken("operation " + op_label + " maps basis edge " + std::to_string(n) +
                                 " onto no interior edge");
        int m = it->second;
        const EdgeBasis& img = basis.edges[static_cast<std::size_t>(m)];
        int mapped_plus = tmap[static_cast<std::size_t>(e.tri_plus)];
        int s;
        if (mapped_plus == img.tri_plus)
            s = +1;
        else if (mapped_plus == img.tri_minus)
            s = -1;
        else
            throw SymmetryBroken("operation " + op_label + " breaks triangle pairing of basis " +
                                 std::to_string(n));
        out.perm[n] = m;
        out.sign[n] = s;
    }
    return out;
}

MappingMatrices build_mapping_matrices(const EdgeBasisSet& basis, const PointGroup& group, double tol)
{
    if (tol <= 0.0) tol = 1e-6 * basis.mesh.characteristic_length();
    MappingMatrices all;
    all.maps.reserve(static_cast<std::size_t>(group.order()));
    for (int k = 0; k < group.order(); ++k) all.maps.push_back(build_mapping_matrix(basis, group, k, tol));
    return all;
}

bool GeneratorCell::in_generator(int n) const
{
    return std::binary_search(interior.begin(), interior.end(), n) ||
           std::binary_search(boundary.begin(), boundary.end(), n);
}

GeneratorCell find_generator_cell(const EdgeBasisSet& basis, const PointGroup& group,
                                  const MappingMatrices& maps)
{
    const int n_u = basis.n_unknowns();
    const int g = group.order();
    GeneratorCell cell;
    cell.orbit_of.assign(static_cast<std::size_t>(n_u), -1);

    for (int n = 0; n < n_u; ++n) {
        if (cell.orbit_of[static_cast<std::size_t>(n)] >= 0) continue;
        std::vector<int> orbit;
        bool stabilized = false;
        for (int k = 0; k < g; ++k) {
            int image = maps[static_cast<std::size_t>(k)].perm[static_cast<std::size_t>(n)];
            if (k != 0 && image == n) stabilized = true;
            orbit.push_back(image);
        }
        std::sort(orbit.begin(), orbit.end());
        orbit.erase(std::unique(orbit.begin(), orbit.end()), orbit.end());
        int id = static_cast<int>(cell.orbits.size());
        for (int m : orbit) cell.orbit_of[static_cast<std::size_t>(m)] = id;
        int rep = orbit.front();
        (stabilized ? cell.boundary : cell.interior).push_back(rep);
        for (int m : orbit)
            if (m != rep) cell.replicated.push_back(m);
        cell.orbits.push_back(std::move(orbit));
    }
    std::sort(cell.interior.begin(), cell.interior.end());
    std::sort(cell.boundary.begin(), cell.boundary.end());
    std::sort(cell.replicated.begin(), cell.replicated.end());
    return cell;
}

}  // namespace symport
