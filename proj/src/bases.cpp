#include "polyosc/bases.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "polyosc/special_functions.hpp"

namespace polyosc {

void validate_params(const ModelParams& p) {
  if (p.k.empty()) throw std::invalid_argument("params: empty k list");
  if (p.k.size() != p.sign.size())
    throw std::invalid_argument("params: k and sign lists differ in length");
  if (!(p.omega > 0.0) || !std::isfinite(p.omega))
    throw std::invalid_argument("params: omega must be positive");
  for (size_t i = 0; i < p.k.size(); ++i) {
    if (!(p.k[i] > 0.0) || !std::isfinite(p.k[i]))
      throw std::invalid_argument("params: k" + std::to_string(i + 1) +
                                  " must be positive");
    if (p.sign[i] != 1 && p.sign[i] != -1)
      throw std::invalid_argument("params: sign" + std::to_string(i + 1) +
                                  " must be +1 or -1");
    if (p.k[i] > 0.5 && p.sign[i] == -1)
      throw std::invalid_argument(
          "params: sign" + std::to_string(i + 1) +
          " = -1 requires k <= 1/2 (non-normalizable branch)");
  }
}

int CartesianState::total() const {
  return std::accumulate(n.begin(), n.end(), 0);
}

int HypersphericalState::total() const {
  return n_r + std::accumulate(q.begin(), q.end(), 0);
}

double energy(const ModelParams& p, int N) {
  double ks = 0.0;
  for (int i = 0; i < p.dimension(); ++i) ks += p.nu(i);
  return p.omega * (2.0 * N + p.dimension() + ks);
}

double cartesian_wavefunction(const ModelParams& p, const CartesianState& s,
                              std::span<const double> x) {
  const int D = p.dimension();
  if (static_cast<int>(s.n.size()) != D ||
      static_cast<int>(x.size()) != D)
    throw std::invalid_argument("cartesian_wavefunction: size mismatch");
  double val = 1.0;
  for (int i = 0; i < D; ++i) {
    if (s.n[i] < 0)
      throw std::invalid_argument("cartesian_wavefunction: negative n");
    if (x[i] < 0.0)
      throw std::domain_error("cartesian_wavefunction: x outside orthant");
    const double nu = p.nu(i);
    const double t = p.omega * x[i] * x[i];
    const double lognorm =
        0.5 * (0.5 * std::log(p.omega) + log_gamma_signed(s.n[i] + 1).log_abs -
               log_gamma_signed(s.n[i] + nu + 1).log_abs);
    const double e = 0.5 * (0.5 + nu);  // exponent of t
    if (t == 0.0) {
      // boundary: t^e -> 0 for e > 0, 1 in the degenerate e = 0 branch
      val *= (e > 0.0) ? 0.0 : std::exp(lognorm) * laguerre(s.n[i], nu, 0.0);
      continue;
    }
    val *= std::exp(lognorm - 0.5 * t + e * std::log(t)) *
           laguerre(s.n[i], nu, t);
  }
  return val;
}

namespace {

// per-slot (l, N-tilde) accumulation up the tree
void momenta_rec(const Tree& t, const ModelParams& p,
                 const HypersphericalState& s, int id, std::vector<double>& l) {
  const TreeNode& n = t.node(id);
  if (n.is_leaf()) {
    l[id] = 0.5 + p.nu(n.leaf - 1);
    return;
  }
  momenta_rec(t, p, s, n.left, l);
  momenta_rec(t, p, s, n.right, l);
  l[id] = 2.0 * s.q[n.angle - 1] + l[n.left] + l[n.right];
}

}  // namespace

std::vector<double> node_momenta(const Tree& t, const ModelParams& p,
                                 const HypersphericalState& s) {
  if (p.dimension() != t.dimension())
    throw std::invalid_argument("node_momenta: tree/params dimension mismatch");
  if (static_cast<int>(s.q.size()) != t.dimension() - 1)
    throw std::invalid_argument("node_momenta: expected " +
                                std::to_string(t.dimension() - 1) +
                                " q values");
  for (int q : s.q)
    if (q < 0) throw std::invalid_argument("node_momenta: negative q");
  if (s.n_r < 0) throw std::invalid_argument("node_momenta: negative n_r");
  std::vector<double> l(t.node_count(), 0.0);
  momenta_rec(t, p, s, t.root(), l);
  return l;
}

double hypermomentum(const Tree& t, const ModelParams& p,
                     const HypersphericalState& s) {
  return node_momenta(t, p, s)[t.root()];
}

double cell_norm_constant(int q, double alpha_r, double alpha_s) {
  const double X = alpha_r + alpha_s;
  double log_n2;
  if (q == 0) {
    log_n2 = std::log(2.0) + log_gamma_signed(X + 2).log_abs -
             log_gamma_signed(alpha_r + 1).log_abs -
             log_gamma_signed(alpha_s + 1).log_abs;
  } else {
    log_n2 = std::log(2.0 * (2 * q + X + 1)) +
             log_gamma_signed(q + 1).log_abs +
             log_gamma_signed(q + X + 1).log_abs -
             log_gamma_signed(q + alpha_r + 1).log_abs -
             log_gamma_signed(q + alpha_s + 1).log_abs;
  }
  return std::exp(0.5 * log_n2);
}

double cell_function(int q, double l_s, int v_s, double l_r, int v_r,
                     double theta) {
  const double a_r = l_r + 0.5 * (v_r - 1);
  const double a_s = l_s + 0.5 * (v_s - 1);
  const double c = std::cos(theta), s = std::sin(theta);
  return cell_norm_constant(q, a_r, a_s) * std::pow(c, l_s) *
         std::pow(s, l_r) * jacobi(q, a_r, a_s, std::cos(2.0 * theta));
}

double angular_function(const Tree& t, const ModelParams& p,
                        const HypersphericalState& s,
                        std::span<const double> theta) {
  if (static_cast<int>(theta.size()) != t.dimension() - 1)
    throw std::invalid_argument("angular_function: expected " +
                                std::to_string(t.dimension() - 1) + " angles");
  for (double th : theta)
    if (!(th >= 0.0 && th <= M_PI / 2 + 1e-15))
      throw std::domain_error("angular_function: angle outside [0, pi/2]");
  auto l = node_momenta(t, p, s);
  double val = 1.0;
  for (int id : t.internal_preorder()) {
    const TreeNode& n = t.node(id);
    val *= cell_function(s.q[n.angle - 1], l[n.left], t.node(n.left).v,
                         l[n.right], t.node(n.right).v, theta[n.angle - 1]);
  }
  return val;
}

double radial_function(const ModelParams& p, double l, int n_r, double r) {
  if (n_r < 0) throw std::invalid_argument("radial_function: negative n_r");
  if (r < 0.0) throw std::domain_error("radial_function: r < 0");
  const int D = p.dimension();
  const double t = p.omega * r * r;
  const double lognorm =
      0.5 * (std::log(2.0) + (l + 0.5 * D) * std::log(p.omega) +
             log_gamma_signed(n_r + 1).log_abs -
             log_gamma_signed(n_r + l + 0.5 * D).log_abs);
  const double nu = l + 0.5 * (D - 2);
  if (r == 0.0)
    return (l > 0.0) ? 0.0 : std::exp(lognorm) * laguerre(n_r, nu, 0.0);
  return std::exp(lognorm - 0.5 * t + l * std::log(r)) * laguerre(n_r, nu, t);
}

double hyperspherical_wavefunction(const Tree& t, const ModelParams& p,
                                   const HypersphericalState& s, double r,
                                   std::span<const double> theta) {
  const double l = hypermomentum(t, p, s);
  return radial_function(p, l, s.n_r, r) * angular_function(t, p, s, theta);
}

namespace {
void compositions(int D, int N, std::vector<int>& cur,
                  std::vector<CartesianState>& out) {
  if (static_cast<int>(cur.size()) == D - 1) {
    cur.push_back(N - std::accumulate(cur.begin(), cur.end(), 0));
    out.push_back({cur});
    cur.pop_back();
    return;
  }
  int used = std::accumulate(cur.begin(), cur.end(), 0);
  for (int v = 0; v <= N - used; ++v) {
    cur.push_back(v);
    compositions(D, N, cur, out);
    cur.pop_back();
  }
}
}  // namespace

std::vector<CartesianState> enumerate_cartesian(int D, int N) {
  if (D < 1 || N < 0)
    throw std::invalid_argument("enumerate_cartesian: need D >= 1, N >= 0");
  std::vector<CartesianState> out;
  std::vector<int> cur;
  compositions(D, N, cur, out);
  return out;
}

std::vector<HypersphericalState> enumerate_hyperspherical(const Tree& t,
                                                          int N) {
  if (N < 0)
    throw std::invalid_argument("enumerate_hyperspherical: N >= 0 required");
  const int D = t.dimension();
  std::vector<HypersphericalState> out;
  // descending lexicographic in (n_r, q): generate ascending, then reverse
  std::vector<int> key(D);  // (n_r, q_1..q_{D-1})
  std::vector<std::vector<int>> keys;
  std::vector<int> cur;
  for (const CartesianState& c : enumerate_cartesian(D, N)) {
    // reuse the composition enumerator: c.n is ascending lexicographic
    keys.push_back(c.n);
  }
  std::sort(keys.begin(), keys.end(),
            [](const auto& a, const auto& b) { return a > b; });
  for (const auto& kk : keys) {
    HypersphericalState h;
    h.n_r = kk[0];
    h.q.assign(kk.begin() + 1, kk.end());
    out.push_back(std::move(h));
  }
  return out;
}

}  // namespace polyosc
