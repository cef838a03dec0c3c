#include "polyosc/special_functions.hpp"

#include <cmath>
#include <vector>

namespace polyosc {

SignedLogGamma log_gamma_signed(double x) {
  if (!std::isfinite(x))
    throw std::domain_error("log_gamma_signed: non-finite argument");
  if (x <= 0.0 && std::abs(x - std::round(x)) <= 1e-12)
    throw std::domain_error("log_gamma_signed: pole at nonpositive integer");
#if defined(__GLIBC__)
  int unused;
  double la = ::lgamma_r(x, &unused);
#else
  double la = std::lgamma(x);
#endif
  int sign = 1;
  if (x < 0.0) {
    // Gamma alternates sign between consecutive negative integers:
    // negative on (-1,0), positive on (-2,-1), ...
    auto m = static_cast<long long>(std::floor(x));
    if (m % 2 != 0) sign = -1;
  }
  return {la, sign};
}

double laguerre(int n, double nu, double x) {
  if (n < 0) throw std::invalid_argument("laguerre: negative degree");
  double p0 = 1.0;
  if (n == 0) return p0;
  double p1 = 1.0 + nu - x;
  for (int k = 1; k < n; ++k) {
    double p2 = ((2 * k + 1 + nu - x) * p1 - (k + nu) * p0) / (k + 1);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

double jacobi(int n, double alpha, double beta, double x) {
  if (n < 0) throw std::invalid_argument("jacobi: negative degree");
  double p0 = 1.0;
  if (n == 0) return p0;
  double p1 = 0.5 * (alpha + beta + 2.0) * x + 0.5 * (alpha - beta);
  for (int k = 2; k <= n; ++k) {
    double s = 2 * k + alpha + beta;
    double c1 = 2.0 * k * (k + alpha + beta) * (s - 2);
    double c2 = (s - 1) * (alpha * alpha - beta * beta);
    double c3 = (s - 2) * (s - 1) * s;
    double c4 = 2.0 * (k + alpha - 1) * (k + beta - 1) * s;
    double p2 = ((c2 + c3 * x) * p1 - c4 * p0) / c1;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

namespace {

// One symmetric node pair of the tanh-sinh rule at parameter t > 0, mapped
// to [lo, hi]. zeta is the distance from the nearer endpoint in the unit
// parametrization; it underflows to 0 once the node is indistinguishable
// from the endpoint, at which point the pair contributes nothing.
double node_pair(const std::function<double(double)>& f, double lo, double hi,
                 double t) {
  const double w = 0.5 * M_PI * std::sinh(t);
  const double zeta = 1.0 / (1.0 + std::exp(2.0 * w));
  const double dudt = 0.5 * M_PI * std::cosh(t) * 4.0 * zeta * (1.0 - zeta);
  if (zeta == 0.0 || dudt == 0.0) return 0.0;
  double vm = f(lo + (hi - lo) * zeta);
  double vp = f(hi - (hi - lo) * zeta);
  // Endpoint singularities may overflow right at the cluster tail; those
  // nodes carry negligible weight and are dropped.
  if (!std::isfinite(vm)) vm = 0.0;
  if (!std::isfinite(vp)) vp = 0.0;
  return dudt * (vm + vp);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double tol, int max_levels) {
  if (!(std::isfinite(lo) && std::isfinite(hi)))
    throw std::invalid_argument("integrate: non-finite interval");
  if (lo == hi) return 0.0;
  if (lo > hi) return -integrate(f, hi, lo, tol, max_levels);

  const double scale = 0.5 * (hi - lo);
  const double t_max = 6.8;  // beyond this zeta underflows for doubles

  // level 0: h = 1
  double h = 1.0;
  double sum = 0.5 * M_PI * f(0.5 * (lo + hi));
  if (!std::isfinite(sum)) sum = 0.0;
  {
    double comp = 0.0;
    int tiny_run = 0;
    for (int j = 1; j * h <= t_max; ++j) {
      double term = node_pair(f, lo, hi, j * h);
      double y = term - comp;
      double tmp = sum + y;
      comp = (tmp - sum) - y;
      sum = tmp;
      tiny_run = (std::abs(term) <= 1e-18 * std::abs(sum)) ? tiny_run + 1 : 0;
      if (tiny_run >= 2) break;
    }
  }
  double estimate = scale * h * sum;

  for (int level = 1; level <= max_levels; ++level) {
    h *= 0.5;
    double add = 0.0, comp = 0.0;
    int tiny_run = 0;
    for (int j = 1; j * h <= t_max; j += 2) {  // odd multiples only
      double term = node_pair(f, lo, hi, j * h);
      double y = term - comp;
      double tmp = add + y;
      comp = (tmp - add) - y;
      add = tmp;
      tiny_run = (std::abs(term) <= 1e-18 * (std::abs(sum) + std::abs(add)))
                     ? tiny_run + 1
                     : 0;
      if (tiny_run >= 2) break;
    }
    sum += add;
    double next = scale * h * sum;
    double delta = std::abs(next - estimate);
    estimate = next;
    if (delta <= tol || delta <= 1e-15 * std::abs(estimate)) return estimate;
  }
  throw ConvergenceError("integrate: tanh-sinh failed to stabilize to " +
                         std::to_string(tol));
}

}  // namespace polyosc
