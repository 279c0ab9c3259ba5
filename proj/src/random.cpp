#include "sip/random.hpp"

#include <cmath>

namespace sip {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng sample_rng(std::uint64_t seed, std::uint64_t index) {
  return Rng(splitmix64(splitmix64(seed) ^ (index * 0xD1B54A32D192ED03ULL + 1)));
}

Vector random_unit_vector(const Space& space, Rng& rng) {
  std::normal_distribution<double> normal;
  Vector v = Vector::zero(space.dim());
  double n = 0.0;
  while (n == 0.0) {
    for (int i = 0; i < space.dim(); ++i) v[i] = normal(rng);
    n = space.norm(v);
  }
  return v / n;
}

double log_uniform(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

Vector random_vector(const Space& space, Rng& rng, double lo, double hi) {
  Vector v = random_unit_vector(space, rng);
  return v * log_uniform(rng, lo, hi);
}

Vector random_dense_unit_vector(const Space& space, Rng& rng, double floor) {
  std::uniform_real_distribution<double> mag(floor, 1.0);
  std::bernoulli_distribution sign;
  Vector v = Vector::zero(space.dim());
  for (int i = 0; i < space.dim(); ++i) v[i] = sign(rng) ? mag(rng) : -mag(rng);
  return v / space.norm(v);
}

}  // namespace sip
