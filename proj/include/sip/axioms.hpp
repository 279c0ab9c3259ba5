#pragma once

#include "sip/exec.hpp"
#include "sip/space.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sip {

/// Randomized check of the semi-inner product axioms and of the duality map
/// identities over a family of spaces.
struct AxiomSuiteConfig {
  std::vector<double> p_list{1.2, 1.5, 2.0, 3.0, 4.0, 7.0};
  std::vector<int> dims{1, 2, 3, 5, 10};
  /// Total number of random triples, cycled over (p, dim) combinations.
  int samples = 10000;
  std::uint64_t seed = 0;
  /// Relative tolerance for the four axioms.
  double axiom_tolerance = 1e-9;
  /// Relative tolerance for isometry, Riesz consistency and round trip.
  double identity_tolerance = 1e-10;
  Exec exec = Exec::parallel;

  void validate() const;
};

/// One random case: vectors x, y, z and scalars a, b, lambda in the space
/// (dim, p). Coordinates are zeroed at random so that sparse vectors (where
/// the p < 2 formulas are singular) are exercised.
struct AxiomSample {
  double p = 2.0;
  int dim = 1;
  Vector x, y, z;
  double a = 0.0, b = 0.0, lambda = 0.0;
};

enum class Check { linearity, positivity, cauchy_schwarz, homogeneity, isometry, riesz, round_trip };
inline constexpr std::size_t kCheckCount = 7;
std::string to_string(Check c);

/// Relative violation of every check on one sample, indexed by Check.
std::array<double, kCheckCount> axiom_violations(const AxiomSample& s);

AxiomSample axiom_sample(const AxiomSuiteConfig& config, std::uint64_t index);

struct AxiomSuiteReport {
  std::array<double, kCheckCount> max_violation{};
  std::array<double, kCheckCount> tolerance{};
  int samples = 0;
  bool passed = true;
  /// Most severe failing sample (largest violation / tolerance), if any.
  std::optional<AxiomSample> offending;
  std::optional<Check> offending_check;
};

AxiomSuiteReport run_axiom_suite(const AxiomSuiteConfig& config);

}  // namespace sip
