#pragma once

#include <random>
#include <string>
#include <vector>

#include "polyosc/transition.hpp"

namespace polyosc {

struct VerifyOptions {
  int N = 2;
  double tol = 1e-8;          // applied to every check
  unsigned long long seed = 12345;
  int pairs = 200;            // random state pairs for the telescoping check
  int points = 20;            // random evaluation points per direction
  double quad_tol = 1e-11;    // oracle quadrature target
  bool with_oracle = true;    // quadrature cross-check can be skipped
};

struct CheckResult {
  std::string name;
  double deviation = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::string detail;  // offending states, if any
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool pass = true;
};

/// Runs the verification battery on one configuration: W orthogonality,
/// entrywise agreement with the quadrature oracle, K-telescoping identity
/// on random state pairs, and the two-way pointwise expansion at random
/// interior points. Deterministic for a fixed options struct.
VerifyReport run_verification(const Tree& t, const ModelParams& p,
                              const VerifyOptions& opt);

/// Portable uniform draw in [0,1): top 53 bits of a mt19937_64 step.
double uniform01(std::mt19937_64& rng);

}  // namespace polyosc
