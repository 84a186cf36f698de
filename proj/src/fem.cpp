#include "fracpow/fem.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fracpow {

std::array<std::array<double, 3>, 3> element_stiffness(const StructuredMesh& mesh,
                                                       int t, double a0) {
    const auto& tri = mesh.triangles[t];
    const auto& p0 = mesh.vertices[tri[0]];
    const auto& p1 = mesh.vertices[tri[1]];
    const auto& p2 = mesh.vertices[tri[2]];
    const double area = triangle_area(mesh, t);
    // Barycentric gradients: grad l_i = rot(p_{i+1} - p_{i+2}) / (2 area).
    const double bx[3] = {p1[1] - p2[1], p2[1] - p0[1], p0[1] - p1[1]};
    const double by[3] = {p2[0] - p1[0], p0[0] - p2[0], p1[0] - p0[0]};
    std::array<std::array<double, 3>, 3> k{};
    const double scale = a0 / (4.0 * area);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            k[i][j] = scale * (bx[i] * bx[j] + by[i] * by[j]);
    return k;
}

std::array<std::array<double, 3>, 3> element_mass(const StructuredMesh& mesh, int t) {
    const double area = triangle_area(mesh, t);
    std::array<std::array<double, 3>, 3> m{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            m[i][j] = area / 12.0 * (i == j ? 2.0 : 1.0);
    return m;
}

SparseOperatorPair assemble(const StructuredMesh& mesh, double a0) {
    if (!(a0 > 0.0)) throw std::invalid_argument("assemble: coefficient must be positive");
    std::vector<Triplet> ka, km;
    ka.reserve(9 * mesh.num_triangles());
    km.reserve(9 * mesh.num_triangles());
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto ke = element_stiffness(mesh, t, a0);
        const auto me = element_mass(mesh, t);
        const auto& tri = mesh.triangles[t];
        for (int i = 0; i < 3; ++i) {
            const int di = mesh.interior_index[tri[i]];
            if (di < 0) continue;
            for (int j = 0; j < 3; ++j) {
                const int dj = mesh.interior_index[tri[j]];
                if (dj < 0) continue;
                ka.push_back({di, dj, ke[i][j]});
                km.push_back({di, dj, me[i][j]});
            }
        }
    }
    SparseOperatorPair pair;
    pair.mesh_n = mesh.n;
    pair.stiffness = SparseMatrix::from_triplets(mesh.num_interior(), std::move(ka));
    pair.mass = SparseMatrix::from_triplets(mesh.num_interior(), std::move(km));
    return pair;
}

std::vector<double> load_vector(const StructuredMesh& mesh, const PointFunction& f) {
    const TriangleQuadrature& q = triangle_quadrature();
    std::vector<double> b(mesh.num_interior(), 0.0);
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto& tri = mesh.triangles[t];
        const auto& p0 = mesh.vertices[tri[0]];
        const auto& p1 = mesh.vertices[tri[1]];
        const auto& p2 = mesh.vertices[tri[2]];
        const double area = triangle_area(mesh, t);
        for (int k = 0; k < q.npoints; ++k) {
            const auto& w = q.bary[k];
            const double x = w[0] * p0[0] + w[1] * p1[0] + w[2] * p2[0];
            const double y = w[0] * p0[1] + w[1] * p1[1] + w[2] * p2[1];
            const double fv = area * q.weights[k] * f(x, y);
            for (int i = 0; i < 3; ++i) {
                const int di = mesh.interior_index[tri[i]];
                if (di >= 0) b[di] += fv * w[i];
            }
        }
    }
    return b;
}

Field l2_project(const StructuredMesh& mesh, const SparseOperatorPair& pair,
                 const PointFunction& f, const SolverConfig& config) {
    const std::vector<double> b = load_vector(mesh, f);
    return Field{mesh.n, cg_solve(pair.mass, b, config)};
}

Field shifted_solve(const SparseOperatorPair& pair, double t, const Field& f,
                    ResolventFamily family, const SolverConfig& config,
                    CgStats* stats) {
    if (!(t >= 0.0)) throw std::invalid_argument("shifted_solve: t must be >= 0");
    if (static_cast<int>(f.values.size()) != pair.mass.rows())
        throw std::invalid_argument("shifted_solve: field size mismatch");
    std::vector<double> rhs = pair.mass.multiply(f.values);
    SparseMatrix op;
    if (family == ResolventFamily::T1) {
        if (t <= 1.0) {
            op = SparseMatrix::combine(1.0, pair.mass, t * t, pair.stiffness);
        } else {
            // Equivalent scaled system; keeps t^2 out of the matrix when t
            // is huge (exponential nodes).
            const double s2 = 1.0 / (t * t);
            op = SparseMatrix::combine(s2, pair.mass, 1.0, pair.stiffness);
            for (double& v : rhs) v *= s2;
        }
    } else {
        op = SparseMatrix::combine(t * t, pair.mass, 1.0, pair.stiffness);
    }
    return Field{f.mesh_n, cg_solve(op, rhs, config, stats)};
}

double m_inner(const SparseOperatorPair& pair, const Field& f, const Field& g) {
    const std::vector<double> mg = pair.mass.multiply(g.values);
    double s = 0.0;
    for (std::size_t i = 0; i < mg.size(); ++i) s += f.values[i] * mg[i];
    return s;
}

double l2_norm(const SparseOperatorPair& pair, const Field& f) {
    return std::sqrt(m_inner(pair, f, f));
}

namespace {

template <typename ExactAt>
double l2_error_impl(const StructuredMesh& mesh, const Field& f, ExactAt&& exact_at) {
    const TriangleQuadrature& q = triangle_quadrature();
    double sum = 0.0;
    std::size_t idx = 0;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto& tri = mesh.triangles[t];
        const double area = triangle_area(mesh, t);
        double c[3];
        for (int i = 0; i < 3; ++i) {
            const int di = mesh.interior_index[tri[i]];
            c[i] = di >= 0 ? f.values[di] : 0.0;
        }
        for (int k = 0; k < q.npoints; ++k, ++idx) {
            const auto& w = q.bary[k];
            const double uh = w[0] * c[0] + w[1] * c[1] + w[2] * c[2];
            const double d = uh - exact_at(t, k, idx);
            sum += area * q.weights[k] * d * d;
        }
    }
    return std::sqrt(sum);
}

}  // namespace

double l2_error(const StructuredMesh& mesh, const Field& f, const PointFunction& exact) {
    const TriangleQuadrature& q = triangle_quadrature();
    return l2_error_impl(mesh, f, [&](int t, int k, std::size_t) {
        const auto& tri = mesh.triangles[t];
        const auto& p0 = mesh.vertices[tri[0]];
        const auto& p1 = mesh.vertices[tri[1]];
        const auto& p2 = mesh.vertices[tri[2]];
        const auto& w = q.bary[k];
        return exact(w[0] * p0[0] + w[1] * p1[0] + w[2] * p2[0],
                     w[0] * p0[1] + w[1] * p1[1] + w[2] * p2[1]);
    });
}

double l2_error_tabulated(const StructuredMesh& mesh, const Field& f,
                          std::span<const double> exact_at_quad) {
    if (exact_at_quad.size() !=
        static_cast<std::size_t>(mesh.num_triangles()) * TriangleQuadrature::npoints)
        throw std::invalid_argument("l2_error_tabulated: table size mismatch");
    return l2_error_impl(mesh, f,
                         [&](int, int, std::size_t idx) { return exact_at_quad[idx]; });
}

void write_field(const std::string& path, const StructuredMesh& mesh, const Field& f) {
    if (f.mesh_n != mesh.n || static_cast<int>(f.values.size()) != mesh.num_interior())
        throw std::invalid_argument("write_field: field/mesh mismatch");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_field: cannot open " + path);
    char line[128];
    for (int v = 0; v < mesh.num_vertices(); ++v) {
        const int dof = mesh.interior_index[v];
        const double value = dof >= 0 ? f.values[dof] : 0.0;
        std::snprintf(line, sizeof line, "%.17g %.17g %.17g\n",
                      mesh.vertices[v][0], mesh.vertices[v][1], value);
        out << line;
    }
    if (!out) throw std::runtime_error("write_field: write failed for " + path);
}

Field read_field(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_field: cannot open " + path);
    std::vector<double> values;
    double x, y, v;
    while (in >> x >> y >> v) values.push_back(v);
    const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(values.size()))));
    if (side < 3 || static_cast<std::size_t>(side) * side != values.size())
        throw std::runtime_error("read_field: not a square vertex grid: " + path);
    const int n = side - 1;
    Field f;
    f.mesh_n = n;
    f.values.reserve(static_cast<std::size_t>(n - 1) * (n - 1));
    for (int j = 1; j < n; ++j)
        for (int i = 1; i < n; ++i)
            f.values.push_back(values[static_cast<std::size_t>(j) * side + i]);
    return f;
}

}  // namespace fracpow
