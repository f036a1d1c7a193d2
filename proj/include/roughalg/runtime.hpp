#pragma once

namespace roughalg::runtime {

// Worker budget for parallel scans, read from ROUGHALG_THREADS on each call.
// Unset: the hardware concurrency, at least 1. A positive integer: that
// value. Anything else was meant as a limit but is unusable, so degrade to 1
// rather than risk oversubscription.
int thread_cap();

}  // namespace roughalg::runtime
