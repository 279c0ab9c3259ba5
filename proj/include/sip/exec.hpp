#pragma once

namespace sip {

/// Selects between the OpenMP kernel and its serial reference. Both paths
/// draw the same per-index random streams and reduce in index order, so
/// they return identical results.
enum class Exec { serial, parallel };

/// Number of OpenMP threads the parallel path will use (1 without OpenMP).
int max_threads();
/// Sets the OpenMP thread count; n <= 0 leaves the runtime default.
void set_threads(int n);

}  // namespace sip
