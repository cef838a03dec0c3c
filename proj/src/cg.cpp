#include "polyosc/cg.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "polyosc/bases.hpp"
#include "polyosc/special_functions.hpp"

namespace polyosc {

namespace {

constexpr double kIntTol = 1e-9;

bool near_integer(double x) { return std::abs(x - std::round(x)) <= kIntTol; }

long long as_integer(double x, const char* what) {
  if (!near_integer(x))
    throw std::invalid_argument(std::string("cg: ") + what + " = " +
                                std::to_string(x) +
                                " is not integer-valued");
  return std::llround(x);
}

// log Gamma with pole reported instead of thrown
bool lg_or_pole(double x, double& log_abs, int& sign) {
  if (x <= 0.0 && std::abs(x - std::round(x)) <= 1e-12) return false;
  SignedLogGamma g = log_gamma_signed(x);
  log_abs = g.log_abs;
  sign = g.sign;
  return true;
}

}  // namespace

double cg_continued(const CGArgs& g) {
  if (std::abs(g.gamma - g.alpha - g.beta) > kIntTol) return 0.0;
  const long long m_r = as_integer(g.a - g.alpha, "a - alpha");
  const long long m_s = as_integer(g.b - g.beta, "b - beta");
  const long long q = as_integer(g.c - g.gamma, "c - gamma");
  const long long m_d = as_integer(g.a + g.b - g.c, "a + b - c");
  if (m_r < 0 || m_s < 0 || q < 0 || m_d < 0) return 0.0;

  // prefactor, all under one square root; (2c+1)Gamma(c+gamma+1) is folded
  // to Gamma(c+gamma+2) at q = 0 where the two factors are 0 * inf
  double logp = 0.0;
  int psign = 1;
  auto mul = [&](double arg, double weight) {
    double la;
    int s;
    if (!lg_or_pole(arg, la, s))
      throw std::invalid_argument("cg: prefactor Gamma pole at argument " +
                                  std::to_string(arg));
    logp += weight * la;
    if (s < 0) psign = -psign;
  };
  mul(m_d + 1, 1.0);
  mul(g.a - g.b + g.c + 1, 1.0);
  mul(-g.a + g.b + g.c + 1, 1.0);
  mul(g.a + g.b + g.c + 2, -1.0);
  mul(g.a + g.alpha + 1, 1.0);
  mul(m_r + 1, 1.0);
  mul(g.b + g.beta + 1, 1.0);
  mul(m_s + 1, 1.0);
  mul(q + 1, 1.0);
  if (q == 0)
    mul(g.c + g.gamma + 2, 1.0);
  else {
    logp += std::log(2.0 * g.c + 1.0);
    mul(g.c + g.gamma + 1, 1.0);
  }
  if (psign < 0)
    throw std::invalid_argument("cg: negative prefactor under square root");
  logp *= 0.5;

  const long long zmax = std::min(m_d, m_r);
  double sum = 0.0, comp = 0.0;
  for (long long z = 0; z <= zmax; ++z) {
    double logd = 0.0;
    int dsign = 1;
    bool pole = false;
    const double den[6] = {static_cast<double>(z + 1),
                           static_cast<double>(m_d - z + 1),
                           static_cast<double>(m_r - z + 1),
                           g.b + g.beta - z + 1,
                           g.c - g.b + g.alpha + z + 1,
                           g.c - g.a - g.beta + z + 1};
    for (double arg : den) {
      double la;
      int s;
      if (!lg_or_pole(arg, la, s)) {
        pole = true;  // term is an exact zero
        break;
      }
      logd += la;
      if (s < 0) dsign = -dsign;
    }
    if (pole) continue;
    double term = dsign * std::exp(logp - logd);
    if (z % 2 != 0) term = -term;
    double y = term - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

double cell_k_constant(double N_s, double l_s, int v_s, double N_r, double l_r,
                       int v_r, double l) {
  const double num =
      log_gamma_signed(0.5 * (N_s - l_s) + 1).log_abs +
      log_gamma_signed(0.5 * (N_s + l_s + v_s + 1)).log_abs +
      log_gamma_signed(0.5 * (N_r - l_r) + 1).log_abs +
      log_gamma_signed(0.5 * (N_r + l_r + v_r + 1)).log_abs;
  const double den =
      log_gamma_signed(0.5 * (N_s + N_r + l + v_s + v_r) + 1).log_abs +
      log_gamma_signed(0.5 * (N_s + N_r - l) + 1).log_abs;
  return std::exp(0.5 * (num - den));
}

double cg_from_integral(double N_s, double l_s, int v_s, double N_r,
                        double l_r, int v_r, double l, double quad_tol) {
  const long long q = as_integer(0.5 * (l - l_s - l_r), "q");
  if (q < 0) throw std::invalid_argument("cg_from_integral: negative q");
  auto integrand = [&](double th) {
    return std::pow(std::cos(th), N_s + v_s) *
           std::pow(std::sin(th), N_r + v_r) *
           cell_function(static_cast<int>(q), l_s, v_s, l_r, v_r, th);
  };
  const double F = integrate(integrand, 0.0, M_PI / 2, quad_tol);
  const double K = cell_k_constant(N_s, l_s, v_s, N_r, l_r, v_r, l);
  const long long e = q + as_integer(0.5 * (l - l_s - N_r), "(l-l_s-N_r)/2");
  const double phase = (e % 2 != 0) ? -1.0 : 1.0;
  return std::sqrt(2.0) * phase * F / K;
}

}  // namespace polyosc
