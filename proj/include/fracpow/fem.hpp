#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fracpow/cg.hpp"
#include "fracpow/mesh.hpp"
#include "fracpow/sparse.hpp"

namespace fracpow {

/// Stiffness and mass matrices restricted to interior dofs.  Both are
/// assembled over the same pattern, so shifted combinations are cheap.
struct SparseOperatorPair {
    int mesh_n = 0;
    SparseMatrix stiffness;  // a0 * grad-grad
    SparseMatrix mass;
};

/// Nodal coefficients over the interior vertices of a mesh.
struct Field {
    int mesh_n = 0;
    std::vector<double> values;
};

/// Element matrices of the P1 triangle (vertices of triangle t).
std::array<std::array<double, 3>, 3> element_stiffness(const StructuredMesh& mesh,
                                                       int t, double a0);
std::array<std::array<double, 3>, 3> element_mass(const StructuredMesh& mesh, int t);

SparseOperatorPair assemble(const StructuredMesh& mesh, double a0);

using PointFunction = std::function<double(double, double)>;

/// L2 projection onto the finite element space: solves M c = b with
/// b_i = int f phi_i (6-point element rule).
Field l2_project(const StructuredMesh& mesh, const SparseOperatorPair& pair,
                 const PointFunction& f, const SolverConfig& config = {});

/// Load vector b_i = int f phi_i (exposed for tests).
std::vector<double> load_vector(const StructuredMesh& mesh, const PointFunction& f);

enum class ResolventFamily { T1, T2 };

/// T1: (M + t^2 A) u = M f.  T2: (t^2 M + A) u = M f, equal to
/// t^-2 T1(1/t) without forming 1/t.  For t > 1 the T1 system is solved in
/// the equivalent scaled form (t^-2 M + A) u = t^-2 M f.
Field shifted_solve(const SparseOperatorPair& pair, double t, const Field& f,
                    ResolventFamily family, const SolverConfig& config = {},
                    CgStats* stats = nullptr);

/// sqrt(f' M f)
double l2_norm(const SparseOperatorPair& pair, const Field& f);
double m_inner(const SparseOperatorPair& pair, const Field& f, const Field& g);

/// || f_h - exact ||_L2 by the 6-point element rule.
double l2_error(const StructuredMesh& mesh, const Field& f,
                const PointFunction& exact);
/// Same, with the exact solution pre-evaluated at quadrature_points(mesh).
double l2_error_tabulated(const StructuredMesh& mesh, const Field& f,
                          std::span<const double> exact_at_quad);

/// Plain-text export "x y value" per vertex (boundary zeros included),
/// row-major by vertex id, full double round-trip precision.
void write_field(const std::string& path, const StructuredMesh& mesh,
                 const Field& f);
Field read_field(const std::string& path);

}  // namespace fracpow
