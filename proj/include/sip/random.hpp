#pragma once

#include "sip/space.hpp"

#include <cstdint>
#include <random>

namespace sip {

using Rng = std::mt19937_64;

/// Independent generator for sample `index` of a run seeded with `seed`
/// (splitmix64 mixing). Lets samples be drawn in any order or in parallel.
Rng sample_rng(std::uint64_t seed, std::uint64_t index);

/// Direction uniform on the Euclidean unit sphere, rescaled to unit norm in
/// `space`.
Vector random_unit_vector(const Space& space, Rng& rng);

/// Draw from the log-uniform distribution on [lo, hi].
double log_uniform(Rng& rng, double lo, double hi);

/// Random unit direction times a log-uniform magnitude in [lo, hi].
Vector random_vector(const Space& space, Rng& rng, double lo = 1e-2, double hi = 1e2);

/// Unit vector whose coordinates all have magnitude in [floor, 1] before
/// normalization, i.e. bounded away from the coordinate hyperplanes.
Vector random_dense_unit_vector(const Space& space, Rng& rng, double floor = 0.2);

}  // namespace sip
