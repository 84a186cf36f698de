#pragma once

#include <array>
#include <vector>

namespace fracpow {

/// Uniform triangulation of the unit square: n x n squares, each split along
/// the (lower-left, upper-right) diagonal.  Homogeneous Dirichlet boundary;
/// only interior vertices carry degrees of freedom.
struct StructuredMesh {
    int n = 0;                                 // squares per side
    std::vector<std::array<double, 2>> vertices;  // (n+1)^2, row-major in y
    std::vector<std::array<int, 3>> triangles;    // 2 n^2, positive orientation
    std::vector<int> interior_index;   // vertex id -> dof id, -1 on boundary
    std::vector<int> interior_vertex;  // dof id -> vertex id
    double h = 0.0;                    // triangle diameter, sqrt(2)/n
    double rho_shape = 1.0;            // quasi-uniformity ratio

    int num_vertices() const { return static_cast<int>(vertices.size()); }
    int num_triangles() const { return static_cast<int>(triangles.size()); }
    int num_interior() const { return static_cast<int>(interior_vertex.size()); }
};

StructuredMesh build_mesh(int n);

/// Signed area of triangle t (positive for all triangles of build_mesh).
double triangle_area(const StructuredMesh& mesh, int t);

/// The 6-point degree-4 symmetric triangle rule in barycentric coordinates;
/// weights sum to 1 (scale by the triangle area).
struct TriangleQuadrature {
    static constexpr int npoints = 6;
    std::array<std::array<double, 3>, 6> bary;
    std::array<double, 6> weights;
};
const TriangleQuadrature& triangle_quadrature();

/// Physical quadrature points, 6 per triangle, triangle-major order.
std::vector<std::array<double, 2>> quadrature_points(const StructuredMesh& mesh);

}  // namespace fracpow
