#pragma once

#include <utility>

#include "fracpow/fem.hpp"
#include "fracpow/parallel.hpp"
#include "fracpow/scalar_quad.hpp"

namespace fracpow {

struct ApplyReport {
    int nsys_executed = 0;
    int max_cg_iterations = 0;
    double wall_seconds = 0.0;
    SchemeKind kind = SchemeKind::Rectangle;
    double beta = 0.0;
};

/// Discrete fractional inverse: combines the scheme's nodes with independent
/// resolvent solves.  Node solves run in a parallel pool; contributions are
/// reduced in ascending node order regardless of thread count, so results
/// are bit-identical across thread counts.  A failing node solve aborts
/// with that node's t in the message.
std::pair<Field, ApplyReport> apply_frac_inverse(const SparseOperatorPair& pair,
                                                 const QuadratureScheme& scheme,
                                                 const Field& f,
                                                 const SolverConfig& config = {},
                                                 int threads = 0);

namespace reference {
/// Plain sequential loop over the nodes; the testing reference for the
/// parallel kernel (bit-identical results).
std::pair<Field, ApplyReport> apply_frac_inverse_serial(
    const SparseOperatorPair& pair, const QuadratureScheme& scheme,
    const Field& f, const SolverConfig& config = {});
}  // namespace reference

}  // namespace fracpow
