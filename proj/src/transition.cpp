#include "polyosc/transition.hpp"

#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

#include "polyosc/special_functions.hpp"

namespace polyosc {

namespace {

// (l, v, N-tilde) of every slot for one (cart, hyp) pair
struct SlotData {
  std::vector<double> l;
  std::vector<double> N;
};

SlotData slot_data(const Tree& t, const ModelParams& p,
                   const CartesianState& cart, const HypersphericalState& hyp) {
  SlotData sd;
  sd.l = node_momenta(t, p, hyp);
  sd.N.assign(t.node_count(), 0.0);
  // post-order accumulation of N-tilde
  struct Rec {
    const Tree& t;
    const ModelParams& p;
    const CartesianState& c;
    SlotData& sd;
    double run(int id) {
      const TreeNode& n = t.node(id);
      if (n.is_leaf()) {
        int i = n.leaf - 1;
        return sd.N[id] = 2.0 * c.n[i] + p.nu(i) + 0.5;
      }
      return sd.N[id] = run(n.left) + run(n.right);
    }
  } rec{t, p, cart, sd};
  rec.run(t.root());
  return sd;
}

int phase_sign(long long e) { return (e % 2 != 0) ? -1 : 1; }

}  // namespace

std::vector<CellData> collect_cell_data(const Tree& t, const ModelParams& p,
                                        const CartesianState& cart,
                                        const HypersphericalState& hyp) {
  if (static_cast<int>(cart.n.size()) != t.dimension())
    throw std::invalid_argument("collect_cell_data: cartesian state size");
  for (int n : cart.n)
    if (n < 0) throw std::invalid_argument("collect_cell_data: negative n");
  if (cart.total() != hyp.total())
    throw std::invalid_argument(
        "collect_cell_data: states belong to different levels (N = " +
        std::to_string(cart.total()) + " vs " + std::to_string(hyp.total()) +
        ")");
  SlotData sd = slot_data(t, p, cart, hyp);
  std::vector<CellData> cells;
  cells.reserve(t.internal_preorder().size());
  for (int id : t.internal_preorder()) {
    const TreeNode& n = t.node(id);
    CellData c;
    c.node = id;
    c.angle = n.angle;
    c.type = t.cell_type(id);
    c.l_s = sd.l[n.left];
    c.l_r = sd.l[n.right];
    c.v_s = t.node(n.left).v;
    c.v_r = t.node(n.right).v;
    c.N_s = sd.N[n.left];
    c.N_r = sd.N[n.right];
    c.q = hyp.q[n.angle - 1];
    c.l = sd.l[id];
    cells.push_back(c);
  }
  return cells;
}

CGArgs cell_cg_args(const CellData& c) {
  CGArgs g;
  g.a = 0.25 * (c.l_s - c.l_r + c.N_s + c.N_r + c.v_s - 1);
  g.b = 0.25 * (c.l_r - c.l_s + c.N_s + c.N_r + c.v_r - 1);
  g.alpha = 0.25 * (c.l_r + c.l_s + c.N_s - c.N_r + c.v_s - 1);
  g.beta = 0.25 * (c.l_r + c.l_s + c.N_r - c.N_s + c.v_r - 1);
  g.c = 0.5 * (c.l + 0.5 * (c.v_s - 1) + 0.5 * (c.v_r - 1));
  g.gamma = 0.5 * (c.l_s + c.l_r + 0.5 * (c.v_s - 1) + 0.5 * (c.v_r - 1));
  return g;
}

double cell_coefficient(const CellData& c) {
  CGArgs g = cell_cg_args(c);
  long long e = std::llround(g.c - g.a - g.beta);  // = q - m_r, exact integer
  return phase_sign(e) * cg_continued(g);
}

double transition_coefficient(const Tree& t, const ModelParams& p,
                              const CartesianState& cart,
                              const HypersphericalState& hyp) {
  double w = 1.0;
  for (const CellData& c : collect_cell_data(t, p, cart, hyp)) {
    w *= cell_coefficient(c);
    if (w == 0.0) break;
  }
  return w;
}

bool selection_rules_hold(const Tree& t, const ModelParams& p,
                          const CartesianState& cart,
                          const HypersphericalState& hyp) {
  for (const CellData& c : collect_cell_data(t, p, cart, hyp)) {
    // N_s + N_r - l = 2 (sum of n below - sum of q below), exact integer
    if (std::llround(c.N_s + c.N_r - c.l) < 0) return false;
  }
  return true;
}

int max_threads() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("POLYOSC_THREADS")) {
    char* end = nullptr;
    long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1 && cap < static_cast<long>(hw))
      hw = static_cast<unsigned>(cap);
  }
  return static_cast<int>(hw);
}

TransitionMatrix transition_matrix(const Tree& t, const ModelParams& p,
                                   int N) {
  validate_params(p);
  if (p.dimension() != t.dimension())
    throw std::invalid_argument("transition_matrix: dimension mismatch");
  TransitionMatrix W;
  W.N = N;
  W.rows = enumerate_cartesian(t.dimension(), N);
  W.cols = enumerate_hyperspherical(t, N);
  const auto nr = static_cast<Eigen::Index>(W.rows.size());
  const auto nc = static_cast<Eigen::Index>(W.cols.size());
  W.values.resize(nr, nc);

  auto fill_rows = [&](Eigen::Index lo, Eigen::Index hi) {
    for (Eigen::Index i = lo; i < hi; ++i)
      for (Eigen::Index j = 0; j < nc; ++j)
        W.values(i, j) = transition_coefficient(t, p, W.rows[i], W.cols[j]);
  };

  const int workers = std::min<int>(max_threads(), static_cast<int>(nr));
  if (workers <= 1 || nr * nc < 64) {
    fill_rows(0, nr);
    return W;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const Eigen::Index chunk = (nr + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    Eigen::Index lo = w * chunk;
    Eigen::Index hi = std::min(nr, lo + chunk);
    if (lo < hi) pool.emplace_back(fill_rows, lo, hi);
  }
  for (auto& th : pool) th.join();
  return W;
}

double oracle_transition(const Tree& t, const ModelParams& p,
                         const CartesianState& cart,
                         const HypersphericalState& hyp, double quad_tol) {
  auto cells = collect_cell_data(t, p, cart, hyp);
  const int D = t.dimension();
  const int N = cart.total();
  const int n_r = hyp.n_r;
  const double l = cells.front().l;  // root momentum

  double logM = 2.0 * D * std::log(2.0) +
                log_gamma_signed(n_r + 1).log_abs +
                log_gamma_signed(n_r + l + 0.5 * D).log_abs;
  for (int i = 0; i < D; ++i)
    logM -= log_gamma_signed(cart.n[i] + 1).log_abs +
            log_gamma_signed(cart.n[i] + p.nu(i) + 1).log_abs;
  double M = phase_sign(N - n_r) * std::exp(0.5 * logM) / std::sqrt(2.0);

  double val = M;
  for (const CellData& c : cells) {
    double rho;
    switch (c.type) {
      case CellType::LeafLeaf: rho = 0.5; break;
      case CellType::TreeTree: rho = 1.0; break;
      default: rho = 1.0 / std::sqrt(2.0); break;
    }
    auto integrand = [&](double th) {
      return std::pow(std::cos(th), c.N_s + c.v_s) *
             std::pow(std::sin(th), c.N_r + c.v_r) *
             cell_function(c.q, c.l_s, c.v_s, c.l_r, c.v_r, th);
    };
    val *= rho * integrate(integrand, 0.0, M_PI / 2, quad_tol);
  }
  return val;
}

std::pair<double, double> k_telescoping_check(const Tree& t,
                                              const ModelParams& p,
                                              const CartesianState& cart,
                                              const HypersphericalState& hyp) {
  auto cells = collect_cell_data(t, p, cart, hyp);
  double lhs = 1.0;
  for (const CellData& c : cells)
    lhs *= cell_k_constant(c.N_s, c.l_s, c.v_s, c.N_r, c.l_r, c.v_r, c.l);
  const int D = t.dimension();
  const double l = cells.front().l;
  double logr = 0.0;
  for (int i = 0; i < D; ++i)
    logr += log_gamma_signed(cart.n[i] + 1).log_abs +
            log_gamma_signed(cart.n[i] + p.nu(i) + 1).log_abs;
  logr -= log_gamma_signed(hyp.n_r + l + 0.5 * D).log_abs +
          log_gamma_signed(hyp.n_r + 1).log_abs;
  return {lhs, std::exp(0.5 * logr)};
}

std::pair<double, double> expand_pointwise(const Tree& t, const ModelParams& p,
                                           const CartesianState& cart,
                                           double r,
                                           std::span<const double> theta) {
  const int D = t.dimension();
  auto xt = t.angles_to_unit_vector(theta);
  std::vector<double> x(xt.size());
  for (size_t i = 0; i < x.size(); ++i) x[i] = r * xt[i];
  const double lhs =
      std::exp2(0.5 * D) * cartesian_wavefunction(p, cart, x);
  double rhs = 0.0;
  for (const HypersphericalState& h :
       enumerate_hyperspherical(t, cart.total()))
    rhs += transition_coefficient(t, p, cart, h) *
           hyperspherical_wavefunction(t, p, h, r, theta);
  return {lhs, rhs};
}

std::pair<double, double> expand_pointwise_inverse(
    const Tree& t, const ModelParams& p, const HypersphericalState& hyp,
    double r, std::span<const double> theta) {
  const int D = t.dimension();
  const double lhs = hyperspherical_wavefunction(t, p, hyp, r, theta);
  auto xt = t.angles_to_unit_vector(theta);
  std::vector<double> x(xt.size());
  for (size_t i = 0; i < x.size(); ++i) x[i] = r * xt[i];
  double rhs = 0.0;
  for (const CartesianState& c : enumerate_cartesian(D, hyp.total()))
    rhs += transition_coefficient(t, p, c, hyp) * std::exp2(0.5 * D) *
           cartesian_wavefunction(p, c, x);
  return {lhs, rhs};
}

double orthogonality_defect(const TransitionMatrix& W) {
  Eigen::MatrixXd G = W.values * W.values.transpose();
  G.diagonal().array() -= 1.0;
  return G.cwiseAbs().maxCoeff();
}

}  // namespace polyosc
