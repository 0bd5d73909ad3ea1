#include "symport/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace symport {

double TriMesh::characteristic_length() const
{
    if (vertices.empty()) return 0.0;
    Vector3d lo = vertices.front(), hi = vertices.front();
    for (const auto& v : vertices) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
    return (hi - lo).maxCoeff();
}

Vector3d TriMesh::center() const
{
    if (vertices.empty()) return Vector3d::Zero();
    Vector3d lo = vertices.front(), hi = vertices.front();
    for (const auto& v : vertices) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
    return 0.5 * (lo + hi);
}

double TriMesh::circumsphere_radius() const
{
    Vector3d c = center();
    double r = 0.0;
    for (const auto& v : vertices) r = std::max(r, (v - c).norm());
    return r;
}

double TriMesh::triangle_area(int t) const
{
    const auto& tri = triangles.at(static_cast<std::size_t>(t));
    const Vector3d& a = vertices[static_cast<std::size_t>(tri[0])];
    const Vector3d& b = vertices[static_cast<std::size_t>(tri[1])];
    const Vector3d& c = vertices[static_cast<std::size_t>(tri[2])];
    return 0.5 * (b - a).cross(c - a).norm();
}

Vector3d TriMesh::triangle_centroid(int t) const
{
    const auto& tri = triangles.at(static_cast<std::size_t>(t));
    return (vertices[static_cast<std::size_t>(tri[0])] + vertices[static_cast<std::size_t>(tri[1])] +
            vertices[static_cast<std::size_t>(tri[2])]) /
           3.0;
}

void TriMesh::validate() const
{
    const double L = characteristic_length();
    const double min_area = 1e-12 * L * L;
    const int nv = static_cast<int>(vertices.size());
    for (std::size_t t = 0; t < triangles.size(); ++t) {
        const auto& tri = triangles[t];
        for (int k : tri)
            if (k < 0 || k >= nv) throw ParseError("triangle " + std::to_string(t) + " references missing vertex");
        if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
            throw DegenerateTriangle("triangle " + std::to_string(t) + " repeats a vertex");
        if (triangle_area(static_cast<int>(t)) <= min_area)
            throw DegenerateTriangle("triangle " + std::to_string(t) + " has vanishing area");
    }
}

namespace {

std::string next_token_line(std::istream& in)
{
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r\n") != std::string::npos) return line;
    }
    return {};
}

}  // namespace

TriMesh parse_off(std::istream& in)
{
    std::string header = next_token_line(in);
    {
        std::istringstream ls(header);
        std::string tag;
        ls >> tag;
        if (tag != "OFF") throw ParseError("not an OFF file (missing OFF header)");
    }
    std::string counts = next_token_line(in);
    std::istringstream cs(counts);
    long nv = -1, nf = -1, ne = 0;
    cs >> nv >> nf >> ne;
    if (nv <= 0 || nf < 0) throw ParseError("OFF: bad vertex/face counts");

    TriMesh mesh;
    mesh.vertices.reserve(static_cast<std::size_t>(nv));
    for (long i = 0; i < nv; ++i) {
        std::istringstream ls(next_token_line(in));
        Vector3d v;
        if (!(ls >> v.x() >> v.y() >> v.z())) throw ParseError("OFF: bad vertex line " + std::to_string(i));
        mesh.vertices.push_back(v);
    }
    mesh.triangles.reserve(static_cast<std::size_t>(nf));
    for (long i = 0; i < nf; ++i) {
        std::istringstream ls(next_token_line(in));
        int n = 0;
        if (!(ls >> n) || n != 3) throw ParseError("OFF: only triangle faces are supported");
        std::array<int, 3> t{};
        if (!(ls >> t[0] >> t[1] >> t[2])) throw ParseError("OFF: bad face line " + std::to_string(i));
        mesh.triangles.push_back(t);
    }
    mesh.validate();
    return mesh;
}

TriMesh parse_msh(std::istream& in)
{
    TriMesh mesh;
    std::string line;
    std::map<long, int> node_id_to_index;
    bool saw_nodes = false, saw_elements = false;
    while (std::getline(in, line)) {
        if (line.rfind("$MeshFormat", 0) == 0) {
            std::getline(in, line);
            std::istringstream ls(line);
            double version = 0;
            ls >> version;
            if (version < 2.0 || version >= 3.0) throw ParseError("msh: only ASCII format 2.x is supported");
            std::getline(in, line);  // $EndMeshFormat
        } else if (line.rfind("$Nodes", 0) == 0) {
            saw_nodes = true;
            std::getline(in, line);
            long n = std::stol(line);
            for (long i = 0; i < n; ++i) {
                std::getline(in, line);
                std::istringstream ls(line);
                long id;
                Vector3d v;
                if (!(ls >> id >> v.x() >> v.y() >> v.z())) throw ParseError("msh: bad node line");
                node_id_to_index[id] = static_cast<int>(mesh.vertices.size());
                mesh.vertices.push_back(v);
            }
        } else if (line.rfind("$Elements", 0) == 0) {
            saw_elements = true;
            std::getline(in, line);
            long n = std::stol(line);
            for (long i = 0; i < n; ++i) {
                std::getline(in, line);
                std::istringstream ls(line);
                long id = 0;
                int type = 0, ntags = 0;
                if (!(ls >> id >> type >> ntags)) throw ParseError("msh: bad element line");
                long tag;
                for (int k = 0; k < ntags; ++k) ls >> tag;
                if (type != 2) continue;  // keep triangles, skip points/lines/quads
                std::array<long, 3> ids{};
                if (!(ls >> ids[0] >> ids[1] >> ids[2])) throw ParseError("msh: bad triangle element");
                std::array<int, 3> t{};
                for (int k = 0; k < 3; ++k) {
                    auto it = node_id_to_index.find(ids[static_cast<std::size_t>(k)]);
                    if (it == node_id_to_index.end()) throw ParseError("msh: element references missing node");
                    t[static_cast<std::size_t>(k)] = it->second;
                }
                mesh.triangles.push_back(t);
            }
        }
    }
    if (!saw_nodes || !saw_elements) throw ParseError("msh: missing $Nodes or $Elements section");
    mesh.validate();
    return mesh;
}

TriMesh load_mesh(const std::string& path, MeshFormat fmt)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open mesh file '" + path + "'");
    if (fmt == MeshFormat::auto_detect) {
        if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".off") == 0)
            fmt = MeshFormat::off;
        else if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".msh") == 0)
            fmt = MeshFormat::msh;
        else
            throw ParseError("cannot infer mesh format of '" + path + "' (expected .off or .msh)");
    }
    try {
        return fmt == MeshFormat::off ? parse_off(in) : parse_msh(in);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void write_off(const TriMesh& mesh, std::ostream& out)
{
    out << "OFF\n" << mesh.vertices.size() << " " << mesh.triangles.size() << " 0\n";
    out.precision(17);
    for (const auto& v : mesh.vertices) out << v.x() << " " << v.y() << " " << v.z() << "\n";
    for (const auto& t : mesh.triangles) out << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
}

void save_mesh(const TriMesh& mesh, const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write mesh file '" + path + "'");
    write_off(mesh, out);
}

EdgeBasisSet build_edge_basis(const TriMesh& mesh)
{
    mesh.validate();
    std::map<std::pair<int, int>, std::vector<int>> incident;  // sorted pair -> triangles
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        for (int k = 0; k < 3; ++k) {
            int a = tri[static_cast<std::size_t>(k)];
            int b = tri[static_cast<std::size_t>((k + 1) % 3)];
            if (a > b) std::swap(a, b);
            incident[{a, b}].push_back(static_cast<int>(t));
        }
    }

    EdgeBasisSet set;
    set.mesh = mesh;
    for (const auto& [edge, tris] : incident) {
        if (tris.size() > 2)
            throw NonManifoldEdge("edge (" + std::to_string(edge.first) + "," + std::to_string(edge.second) +
                                  ") is shared by " + std::to_string(tris.size()) + " triangles");
        if (tris.size() != 2) continue;  // boundary edge, carries no basis function

        EdgeBasis eb;
        eb.v0 = edge.first;
        eb.v1 = edge.second;
        eb.tri_plus = std::min(tris[0], tris[1]);
        eb.tri_minus = std::max(tris[0], tris[1]);
        auto free_vertex = [&](int t) {
            for (int v : mesh.triangles[static_cast<std::size_t>(t)])
                if (v != eb.v0 && v != eb.v1) return v;
            throw Error("degenerate incidence");  // validated earlier
        };
        eb.free_plus = free_vertex(eb.tri_plus);
        eb.free_minus = free_vertex(eb.tri_minus);
        eb.edge_length = (mesh.vertices[static_cast<std::size_t>(eb.v1)] -
                          mesh.vertices[static_cast<std::size_t>(eb.v0)])
                             .norm();
        set.edges.push_back(eb);
    }
    return set;
}

}  // namespace symport
