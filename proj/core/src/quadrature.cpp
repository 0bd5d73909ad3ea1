#include "symport/quadrature.hpp"

#include <cmath>

namespace symport {

using constants::pi;

const TriQuadRule& tri_rule_deg2()
{
    static const TriQuadRule rule = [] {
        TriQuadRule r;
        const double a = 2.0 / 3.0, b = 1.0 / 6.0;
        r.bary = {{a, b, b}, {b, a, b}, {b, b, a}};
        r.weights = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
        return r;
    }();
    return rule;
}

const TriQuadRule& tri_rule_deg5()
{
    static const TriQuadRule rule = [] {
        TriQuadRule r;
        const double s = std::sqrt(15.0);
        const double a1 = (6.0 - s) / 21.0, w1 = (155.0 - s) / 1200.0;
        const double a2 = (6.0 + s) / 21.0, w2 = (155.0 + s) / 1200.0;
        r.bary = {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0},
                  {1.0 - 2.0 * a1, a1, a1},
                  {a1, 1.0 - 2.0 * a1, a1},
                  {a1, a1, 1.0 - 2.0 * a1},
                  {1.0 - 2.0 * a2, a2, a2},
                  {a2, 1.0 - 2.0 * a2, a2},
                  {a2, a2, 1.0 - 2.0 * a2}};
        r.weights = {9.0 / 40.0, w1, w1, w1, w2, w2, w2};
        return r;
    }();
    return rule;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights)
{
    nodes.assign(static_cast<std::size_t>(n), 0.0);
    weights.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[static_cast<std::size_t>(i)] = -x;
        nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[static_cast<std::size_t>(i)] = w;
        weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
}

SphereGrid make_sphere_grid(int band)
{
    if (band < 0) band = 0;
    int n_theta = (band + 2) / 2 + 1;
    int n_phi = band + 2;
    n_phi += n_phi % 2;  // even azimuthal count

    std::vector<double> x, w;
    gauss_legendre(n_theta, x, w);

    SphereGrid grid;
    grid.dirs.reserve(static_cast<std::size_t>(n_theta * n_phi));
    grid.weights.reserve(static_cast<std::size_t>(n_theta * n_phi));
    const double wphi = 2.0 * pi / n_phi;
    for (int i = 0; i < n_theta; ++i) {
        double ct = x[static_cast<std::size_t>(i)];
        double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
        for (int j = 0; j < n_phi; ++j) {
            double phi = wphi * j;
            grid.dirs.emplace_back(st * std::cos(phi), st * std::sin(phi), ct);
            grid.weights.push_back(w[static_cast<std::size_t>(i)] * wphi);
        }
    }
    return grid;
}

StaticPotentials static_potentials(const Vector3d& r, const Vector3d& p0, const Vector3d& p1,
                                   const Vector3d& p2)
{
    const Vector3d verts[3] = {p0, p1, p2};
    Vector3d normal = (p1 - p0).cross(p2 - p0);
    const double two_area = normal.norm();
    const double scale = std::max({(p1 - p0).norm(), (p2 - p1).norm(), (p0 - p2).norm()});
    normal /= two_area;

    const double w0 = (r - p0).dot(normal);
    const double u = std::abs(w0);
    const Vector3d rho = r - w0 * normal;

    double i0 = 0.0;
    double beta_sum = 0.0;
    Vector3d iedge = Vector3d::Zero();
    const double tiny2 = 1e-28 * scale * scale;

    for (int e = 0; e < 3; ++e) {
        const Vector3d& a = verts[e];
        const Vector3d& b = verts[(e + 1) % 3];
        Vector3d s_hat = b - a;
        const double len = s_hat.norm();
        s_hat /= len;
        const Vector3d m_hat = s_hat.cross(normal);

        const double t0 = (a - rho).dot(m_hat);
        const double s_minus = (a - rho).dot(s_hat);
        const double s_plus = (b - rho).dot(s_hat);
        const double r_minus = (r - a).norm();
        const double r_plus = (r - b).norm();
        const double r02 = t0 * t0 + w0 * w0;

        double f2 = 0.0;
        if (r02 > tiny2) {
            if (s_plus > 0.0 || s_minus > 0.0)
                f2 = std::log((r_plus + s_plus) / (r_minus + s_minus));
            else
                f2 = std::log((r_minus - s_minus) / (r_plus - s_plus));
            i0 += t0 * f2;
            beta_sum += std::atan(t0 * s_plus / (r02 + u * r_plus)) -
                        std::atan(t0 * s_minus / (r02 + u * r_minus));
        }
        iedge += m_hat * (r02 * f2 + s_plus * r_plus - s_minus * r_minus);
    }

    StaticPotentials out;
    out.i0 = i0 - u * beta_sum;
    out.ir = 0.5 * iedge + rho * out.i0;
    return out;
}

}  // namespace symport
