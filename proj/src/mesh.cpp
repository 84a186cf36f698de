#include "fracpow/mesh.hpp"

#include <cmath>
#include <stdexcept>

namespace fracpow {

StructuredMesh build_mesh(int n) {
    if (n < 2) throw std::invalid_argument("mesh needs n >= 2 (no interior dof otherwise)");
    StructuredMesh mesh;
    mesh.n = n;
    mesh.h = std::sqrt(2.0) / n;
    mesh.rho_shape = 1.0;

    const int side = n + 1;
    mesh.vertices.resize(static_cast<std::size_t>(side) * side);
    mesh.interior_index.assign(mesh.vertices.size(), -1);
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            const int id = j * side + i;
            mesh.vertices[id] = {static_cast<double>(i) / n,
                                 static_cast<double>(j) / n};
            if (i > 0 && i < n && j > 0 && j < n) {
                mesh.interior_index[id] = static_cast<int>(mesh.interior_vertex.size());
                mesh.interior_vertex.push_back(id);
            }
        }
    }

    mesh.triangles.reserve(2 * static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int a = j * side + i;
            const int b = j * side + i + 1;
            const int c = (j + 1) * side + i + 1;
            const int d = (j + 1) * side + i;
            mesh.triangles.push_back({a, b, c});  // split along the a-c diagonal
            mesh.triangles.push_back({a, c, d});
        }
    }
    return mesh;
}

double triangle_area(const StructuredMesh& mesh, int t) {
    const auto& tri = mesh.triangles[t];
    const auto& p0 = mesh.vertices[tri[0]];
    const auto& p1 = mesh.vertices[tri[1]];
    const auto& p2 = mesh.vertices[tri[2]];
    return 0.5 * ((p1[0] - p0[0]) * (p2[1] - p0[1]) -
                  (p2[0] - p0[0]) * (p1[1] - p0[1]));
}

const TriangleQuadrature& triangle_quadrature() {
    // Degree-4 symmetric rule, two orbits of three points.
    static const TriangleQuadrature rule = [] {
        TriangleQuadrature q;
        const double a = 0.445948490915964886318329253883254;
        const double wa = 0.223381589678011471811203136894619;
        const double b = 0.091576213509770743459571463402202;
        const double wb = 0.109951743655321884626088099184682;
        q.bary = {{{1.0 - 2.0 * a, a, a},
                   {a, 1.0 - 2.0 * a, a},
                   {a, a, 1.0 - 2.0 * a},
                   {1.0 - 2.0 * b, b, b},
                   {b, 1.0 - 2.0 * b, b},
                   {b, b, 1.0 - 2.0 * b}}};
        q.weights = {wa, wa, wa, wb, wb, wb};
        return q;
    }();
    return rule;
}

std::vector<std::array<double, 2>> quadrature_points(const StructuredMesh& mesh) {
    const TriangleQuadrature& q = triangle_quadrature();
    std::vector<std::array<double, 2>> points;
    points.reserve(static_cast<std::size_t>(mesh.num_triangles()) * q.npoints);
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto& tri = mesh.triangles[t];
        const auto& p0 = mesh.vertices[tri[0]];
        const auto& p1 = mesh.vertices[tri[1]];
        const auto& p2 = mesh.vertices[tri[2]];
        for (int k = 0; k < q.npoints; ++k) {
            const auto& w = q.bary[k];
            points.push_back({w[0] * p0[0] + w[1] * p1[0] + w[2] * p2[0],
                              w[0] * p0[1] + w[1] * p1[1] + w[2] * p2[1]});
        }
    }
    return points;
}

}  // namespace fracpow
