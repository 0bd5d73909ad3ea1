#pragma once

#include <vector>

#include "symport/types.hpp"

namespace symport {

/// Symmetric quadrature rule on the reference triangle, barycentric points
/// and weights summing to one.
struct TriQuadRule {
    std::vector<std::array<double, 3>> bary;
    std::vector<double> weights;

    std::size_t size() const { return weights.size(); }
};

const TriQuadRule& tri_rule_deg2();  // 3 points
const TriQuadRule& tri_rule_deg5();  // 7 points

/// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Quadrature grid over the unit sphere: Gauss-Legendre in cos(theta) times
/// a uniform azimuthal grid. Integrates spherical harmonics up to degree
/// `band` exactly; weights sum to 4*pi.
struct SphereGrid {
    std::vector<Vector3d> dirs;
    std::vector<double> weights;

    std::size_t size() const { return dirs.size(); }
};

SphereGrid make_sphere_grid(int band);

/// Closed-form static-kernel moments over a flat triangle:
///   i0  = Int 1/R dS'
///   ir  = Int r'/R dS'
/// with R = |r - r'|. Valid for any observation point, including points on
/// the triangle itself.
struct StaticPotentials {
    double i0 = 0.0;
    Vector3d ir = Vector3d::Zero();
};

StaticPotentials static_potentials(const Vector3d& r, const Vector3d& p0, const Vector3d& p1,
                                   const Vector3d& p2);

}  // namespace symport
