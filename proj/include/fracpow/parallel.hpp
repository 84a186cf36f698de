#pragma once

namespace fracpow {

/// Thread count for the parallel kernels: explicit request if > 0, else the
/// FRACPOW_THREADS environment variable, else the OpenMP default.
int resolve_threads(int requested);

}  // namespace fracpow
