// Thread-count policy for the OpenMP kernels.
#pragma once

namespace confforge {

// Number of threads the parallel kernels use: the OpenMP default,
// capped by the CONFFORGE_THREADS environment variable when it is set
// to a positive integer. An explicit per-call override wins over both.
int effective_threads();

}  // namespace confforge
