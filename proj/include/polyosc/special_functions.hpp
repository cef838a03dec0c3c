#pragma once

#include <functional>
#include <stdexcept>

namespace polyosc {

/// Thrown when an iterative numerical scheme fails to reach its target.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SignedLogGamma {
  double log_abs;
  int sign;  // sign of Gamma(x), +1 or -1
};

/// log|Gamma(x)| with the sign tracked separately so products of Gamma
/// factors at negative non-integer arguments stay well defined.
/// Throws std::domain_error at the poles (x a nonpositive integer, within
/// 1e-12) and for non-finite x.
SignedLogGamma log_gamma_signed(double x);

/// Generalized Laguerre polynomial L_n^nu(x), forward three-term recurrence.
double laguerre(int n, double nu, double x);

/// Jacobi polynomial P_n^(alpha,beta)(x), forward three-term recurrence.
double jacobi(int n, double alpha, double beta, double x);

/// Tanh-sinh quadrature of f over the finite interval [lo, hi] to absolute
/// accuracy tol. Node placement is endpoint-clustered, so integrable
/// algebraic endpoint singularities (exponent > -1) are handled without
/// special casing. Throws ConvergenceError if successive level refinements
/// fail to stabilize within max_levels halvings.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double tol = 1e-11, int max_levels = 12);

}  // namespace polyosc
