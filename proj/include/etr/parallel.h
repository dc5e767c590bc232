#pragma once

namespace etr {

// Which implementation of a kernel to run. Both produce identical results;
// the serial path is the reference the parallel one is tested against.
enum class Execution { kSerial, kParallel };

// OpenMP thread count, capped by the RELAX_THREADS environment variable when
// it holds a positive integer.
int ThreadCount();

}  // namespace etr
