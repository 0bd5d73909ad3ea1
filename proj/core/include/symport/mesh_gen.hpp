#pragma once

#include <vector>

#include "symport/mesh.hpp"

namespace symport {

/// Five-basis-function star: two central triangles sharing an edge on the
/// x-axis plus four diagonal arms. C2v-symmetric; triangle and vertex
/// ordering are chosen so the edge-basis numbering and orientations come
/// out as 1..5 with the central edge third.
TriMesh make_star_mesh(double half_span = 1.0);

/// Numbered delta-gap position: ladder label and the anchor point (midpoint
/// of the carrying edge).
struct PortAnchor {
    int label = 0;
    Vector3d point = Vector3d::Zero();
};

/// Rectangular rim (frame) of outer size 2L x L and strip width L/10 in the
/// z = 0 plane, centered at the origin; C2v-symmetric by quadrant
/// replication. One element across the strip width so every transverse edge
/// carries a single basis function usable as a full-width delta gap.
///
/// `refine` subdivides along the strip; refine = 1 gives one element per
/// ladder step. The 15-position ladder runs from the short-side crossing of
/// the xz-plane (label 1) along the quarter frame to the long-side crossing
/// of the yz-plane (label 15).
struct RimMesh {
    TriMesh mesh;
    std::vector<PortAnchor> ladder;
};

RimMesh make_rim_mesh(double length = 1.0, int refine = 2);

/// Solid rectangular plate 2L x L (quadrant-replicated grid), C2v-symmetric.
TriMesh make_plate_mesh(double length = 1.0, int nx = 8, int ny = 4);

/// Square plate with crossed (union-jack) cells; C4v-symmetric.
TriMesh make_square_mesh(double side = 1.0, int n = 4);

/// Thin straight strip along x, n cells long and one cell wide. A mesh with
/// a clean center feed edge for dipole-style checks.
TriMesh make_strip_mesh(double length = 1.0, double width = 0.02, int n = 10);

/// Nearest basis function whose edge midpoint lies within tol of the anchor.
int resolve_port_edge(const EdgeBasisSet& basis, const Vector3d& anchor, double tol = -1.0);

void write_ports_csv(const std::vector<PortAnchor>& anchors, std::ostream& os);
std::vector<PortAnchor> read_ports_csv(std::istream& is);

}  // namespace symport
