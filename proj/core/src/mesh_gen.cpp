#include "symport/mesh_gen.hpp"

#include <cmath>
#include <map>
#include <ostream>
#include <sstream>

namespace symport {

TriMesh make_star_mesh(double half_span)
{
    const double s = half_span;
    TriMesh m;
    // ordering fixes the basis numbering (1..5, central edge third) and the
    // plus-triangle assignment of every edge
    m.vertices = {
        {0.0, s, 0.0},     // 0: top of the center pair
        {s, 0.0, 0.0},     // 1: right end of the central edge
        {-s, 0.0, 0.0},    // 2: left end of the central edge
        {0.0, -s, 0.0},    // 3: bottom of the center pair
        {1.2 * s, 1.2 * s, 0.0},    // 4: arm +x+y
        {1.2 * s, -1.2 * s, 0.0},   // 5: arm +x-y
        {-1.2 * s, 1.2 * s, 0.0},   // 6: arm -x+y
        {-1.2 * s, -1.2 * s, 0.0},  // 7: arm -x-y
    };
    m.triangles = {
        {1, 0, 4},  // arm on edge (0,1)
        {1, 3, 5},  // arm on edge (1,3)
        {2, 1, 0},  // central upper
        {2, 1, 3},  // central lower
        {2, 0, 6},  // arm on edge (0,2)
        {2, 3, 7},  // arm on edge (2,3)
    };
    m.validate();
    return m;
}

namespace {

struct MeshBuilder {
    std::map<std::array<double, 3>, int> index;
    TriMesh mesh;

    int vertex(double x, double y, double z = 0.0)
    {
        // normalize signed zeros so mirrored seam vertices dedupe exactly
        if (x == 0.0) x = 0.0;
        if (y == 0.0) y = 0.0;
        if (z == 0.0) z = 0.0;
        auto [it, inserted] = index.try_emplace({x, y, z}, static_cast<int>(mesh.vertices.size()));
        if (inserted) mesh.vertices.emplace_back(x, y, z);
        return it->second;
    }

    void quad(double x0, double y0, double x1, double y1)
    {
        const int a = vertex(x0, y0);
        const int b = vertex(x1, y0);
        const int c = vertex(x1, y1);
        const int d = vertex(x0, y1);
        mesh.triangles.push_back({a, b, c});
        mesh.triangles.push_back({a, c, d});
    }

    /// Replicates every triangle built so far through sign flips of x/y.
    void replicate_c2v()
    {
        const std::size_t n = mesh.triangles.size();
        auto add_mirrored = [&](double sx, double sy) {
            for (std::size_t t = 0; t < n; ++t) {
                const auto tri = mesh.triangles[t];
                std::array<int, 3> img{};
                for (int k = 0; k < 3; ++k) {
                    const Vector3d& v = mesh.vertices[static_cast<std::size_t>(tri[static_cast<std::size_t>(k)])];
                    img[static_cast<std::size_t>(k)] = vertex(sx * v.x(), sy * v.y(), v.z());
                }
                mesh.triangles.push_back(img);
            }
        };
        add_mirrored(-1.0, 1.0);
        add_mirrored(1.0, -1.0);
        add_mirrored(-1.0, -1.0);
    }
};

}  // namespace

namespace {

/// n+1 samples of [a, b] with bitwise-exact endpoints, so neighbouring
/// patches that share a junction coordinate dedupe their seam vertices.
std::vector<double> exact_grid(double a, double b, int n)
{
    std::vector<double> g(static_cast<std::size_t>(n) + 1);
    g.front() = a;
    g.back() = b;
    for (int i = 1; i < n; ++i) g[static_cast<std::size_t>(i)] = a + (b - a) * i / n;
    return g;
}

}  // namespace

RimMesh make_rim_mesh(double length, int refine)
{
    if (refine < 1) throw ConfigError("rim refine must be >= 1");
    const double L = length;
    const double w = L / 10.0;
    const double hy = L / 2.0;           // half of the short dimension
    const int ns = 4 * refine;           // short-strip cells (length 0.4 L)
    const int nt = 9 * refine;           // long-strip cells (length 0.9 L)
    const double x_in = L - w;           // inner x of the right strip
    const double y_in = hy - w;          // inner y of the top strip

    MeshBuilder b;
    const std::vector<double> ys = exact_grid(0.0, y_in, ns);
    for (int j = 0; j < ns; ++j)
        b.quad(x_in, ys[static_cast<std::size_t>(j)], L, ys[static_cast<std::size_t>(j + 1)]);
    // corner block
    b.quad(x_in, y_in, L, hy);
    // top horizontal strip, x in [0, L-w]
    const std::vector<double> xs = exact_grid(0.0, x_in, nt);
    for (int i = 0; i < nt; ++i)
        b.quad(xs[static_cast<std::size_t>(i)], y_in, xs[static_cast<std::size_t>(i + 1)], hy);
    b.replicate_c2v();
    b.mesh.validate();

    RimMesh out;
    out.mesh = std::move(b.mesh);
    for (int xi = 1; xi <= 5; ++xi)
        out.ladder.push_back({xi, Vector3d(L - 0.5 * w, 0.1 * L * (xi - 1), 0.0)});
    for (int xi = 6; xi <= 15; ++xi)
        out.ladder.push_back({xi, Vector3d(0.9 * L - 0.1 * L * (xi - 6), hy - 0.5 * w, 0.0)});
    return out;
}

TriMesh make_plate_mesh(double length, int nx, int ny)
{
    if (nx < 1 || ny < 1) throw ConfigError("plate grid must be at least 1x1");
    const double L = length;
    MeshBuilder b;
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            const double x0 = L * i / nx, x1 = L * (i + 1) / nx;
            const double y0 = 0.5 * L * j / ny, y1 = 0.5 * L * (j + 1) / ny;
            b.quad(x0, y0, x1, y1);
        }
    }
    b.replicate_c2v();
    b.mesh.validate();
    return b.mesh;
}

TriMesh make_square_mesh(double side, int n)
{
    if (n < 1) throw ConfigError("square grid must be at least 1x1");
    MeshBuilder b;
    const double h = side / n;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double x0 = -0.5 * side + h * i, x1 = -0.5 * side + h * (i + 1);
            const double y0 = -0.5 * side + h * j, y1 = -0.5 * side + h * (j + 1);
            const int a = b.vertex(x0, y0), c = b.vertex(x1, y0);
            const int d = b.vertex(x1, y1), e = b.vertex(x0, y1);
            const int m = b.vertex(0.5 * (x0 + x1), 0.5 * (y0 + y1));
            b.mesh.triangles.push_back({a, c, m});
            b.mesh.triangles.push_back({c, d, m});
            b.mesh.triangles.push_back({d, e, m});
            b.mesh.triangles.push_back({e, a, m});
        }
    }
    b.mesh.validate();
    return b.mesh;
}

TriMesh make_strip_mesh(double length, double width, int n)
{
    if (n < 2 || n % 2 != 0) throw ConfigError("strip cell count must be even and >= 2");
    MeshBuilder b;
    for (int i = 0; i < n; ++i) {
        const double x0 = -0.5 * length + length * i / n;
        const double x1 = -0.5 * length + length * (i + 1) / n;
        b.quad(x0, -0.5 * width, x1, 0.5 * width);
    }
    b.mesh.validate();
    return b.mesh;
}

int resolve_port_edge(const EdgeBasisSet& basis, const Vector3d& anchor, double tol)
{
    if (tol <= 0.0) tol = 1e-6 * basis.mesh.characteristic_length();
    int best = -1;
    double best_d = tol;
    for (std::size_t n = 0; n < basis.edges.size(); ++n) {
        const EdgeBasis& e = basis.edges[n];
        const Vector3d mid = 0.5 * (basis.mesh.vertices[static_cast<std::size_t>(e.v0)] +
                                    basis.mesh.vertices[static_cast<std::size_t>(e.v1)]);
        const double d = (mid - anchor).norm();
        if (d <= best_d) {
            best_d = d;
            best = static_cast<int>(n);
        }
    }
    if (best < 0) {
        std::ostringstream os;
        os << "no basis edge near (" << anchor.x() << ", " << anchor.y() << ", " << anchor.z() << ")";
        throw InvalidPosition(os.str());
    }
    return best;
}

void write_ports_csv(const std::vector<PortAnchor>& anchors, std::ostream& os)
{
    os << "label,x,y,z\n";
    os.precision(17);
    for (const auto& a : anchors)
        os << a.label << "," << a.point.x() << "," << a.point.y() << "," << a.point.z() << "\n";
}

std::vector<PortAnchor> read_ports_csv(std::istream& is)
{
    std::vector<PortAnchor> out;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("label", 0) == 0) continue;
        }
        std::istringstream ls(line);
        PortAnchor a;
        char comma;
        if (!(ls >> a.label >> comma >> a.point.x() >> comma >> a.point.y() >> comma >> a.point.z()))
            throw ParseError("ports csv: bad line '" + line + "'");
        out.push_back(a);
    }
    if (out.empty()) throw ParseError("ports csv: no entries");
    return out;
}

}  // namespace symport
