#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "symport/errors.hpp"
#include "symport/types.hpp"

namespace symport {

enum class MeshFormat { off, msh, auto_detect };

/// Flat triangle surface mesh, coordinates in meters.
struct TriMesh {
    std::vector<Vector3d> vertices;
    std::vector<std::array<int, 3>> triangles;

    std::size_t n_vertices() const { return vertices.size(); }
    std::size_t n_triangles() const { return triangles.size(); }

    /// Largest bounding-box extent; the scale used for tolerances.
    double characteristic_length() const;

    /// Center of the bounding box.
    Vector3d center() const;

    /// Radius of the sphere around center() enclosing all vertices.
    double circumsphere_radius() const;

    double triangle_area(int t) const;
    Vector3d triangle_centroid(int t) const;

    /// Throws DegenerateTriangle when any triangle has area below
    /// 1e-12 * L^2 or repeats a vertex.
    void validate() const;
};

/// Reads a mesh from disk. OFF and Gmsh ASCII v2 (triangle elements) are
/// understood; auto_detect picks by file extension (.off / .msh).
TriMesh load_mesh(const std::string& path, MeshFormat fmt = MeshFormat::auto_detect);

TriMesh parse_off(std::istream& in);
TriMesh parse_msh(std::istream& in);

void write_off(const TriMesh& mesh, std::ostream& out);
void save_mesh(const TriMesh& mesh, const std::string& path);

/// One RWG-style basis function living on the interior edge (v0, v1).
struct EdgeBasis {
    int v0 = -1, v1 = -1;            // shared edge, v0 < v1
    int tri_plus = -1, tri_minus = -1;
    int free_plus = -1, free_minus = -1;  // opposite vertices
    double edge_length = 0.0;
};

/// All RWG basis functions of a mesh. Basis index order is the lexicographic
/// order of the (v0, v1) vertex pairs; the plus triangle is the incident
/// triangle with the smaller index. Both conventions are load-bearing: they
/// make every derived artifact reproducible from the mesh file alone.
struct EdgeBasisSet {
    TriMesh mesh;
    std::vector<EdgeBasis> edges;

    int n_unknowns() const { return static_cast<int>(edges.size()); }
};

/// Builds one basis function per interior (two-triangle) edge. Throws
/// NonManifoldEdge when an edge has more than two incident triangles.
EdgeBasisSet build_edge_basis(const TriMesh& mesh);

}  // namespace symport
