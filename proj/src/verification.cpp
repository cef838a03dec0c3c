#include "polyosc/verification.hpp"

#include <cmath>

#include "polyosc/serialize.hpp"

namespace polyosc {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

VerifyReport run_verification(const Tree& t, const ModelParams& p,
                              const VerifyOptions& opt) {
  validate_params(p);
  VerifyReport rep;
  std::mt19937_64 rng(opt.seed);
  TransitionMatrix W = transition_matrix(t, p, opt.N);
  const auto nrows = W.values.rows();
  const auto ncols = W.values.cols();

  {
    CheckResult c{"orthogonality", orthogonality_defect(W), opt.tol, false, ""};
    c.pass = c.deviation <= c.tol;
    rep.checks.push_back(c);
  }

  if (opt.with_oracle) {
    CheckResult c{"oracle", 0.0, opt.tol, false, ""};
    for (Eigen::Index i = 0; i < nrows; ++i)
      for (Eigen::Index j = 0; j < ncols; ++j) {
        double dev = std::abs(W.values(i, j) -
                              oracle_transition(t, p, W.rows[i], W.cols[j],
                                                opt.quad_tol));
        if (dev > c.deviation) {
          c.deviation = dev;
          c.detail = state_label(W.rows[i]) + " x " + state_label(W.cols[j]);
        }
      }
    c.pass = c.deviation <= c.tol;
    rep.checks.push_back(c);
  }

  {
    CheckResult c{"telescoping", 0.0, opt.tol, false, ""};
    for (int trial = 0; trial < opt.pairs; ++trial) {
      // the K product is only defined on selection-rule-valid pairs; the
      // all-radial column is always valid, so this terminates
      Eigen::Index i, j;
      do {
        i = static_cast<Eigen::Index>(uniform01(rng) * nrows);
        j = static_cast<Eigen::Index>(uniform01(rng) * ncols);
      } while (!selection_rules_hold(t, p, W.rows[i], W.cols[j]));
      auto [lhs, rhs] = k_telescoping_check(t, p, W.rows[i], W.cols[j]);
      double dev = std::abs(lhs - rhs) / std::abs(rhs);
      if (dev > c.deviation) {
        c.deviation = dev;
        c.detail = state_label(W.rows[i]) + " x " + state_label(W.cols[j]);
      }
    }
    c.pass = c.deviation <= c.tol;
    rep.checks.push_back(c);
  }

  {
    CheckResult c{"pointwise", 0.0, opt.tol, false, ""};
    double scale = 0.0, worst = 0.0;
    std::string worst_at;
    for (int trial = 0; trial < opt.points; ++trial) {
      double r = 0.3 + 1.5 * uniform01(rng);
      std::vector<double> th(t.dimension() - 1);
      for (double& v : th)
        v = 0.1 + (M_PI / 2 - 0.2) * uniform01(rng);
      const auto i = static_cast<Eigen::Index>(uniform01(rng) * nrows);
      auto [lhs, rhs] = expand_pointwise(t, p, W.rows[i], r, th);
      if (std::abs(lhs) > scale) scale = std::abs(lhs);
      if (std::abs(lhs - rhs) > worst) {
        worst = std::abs(lhs - rhs);
        worst_at = state_label(W.rows[i]);
      }
      const auto j = static_cast<Eigen::Index>(uniform01(rng) * ncols);
      auto [lhs2, rhs2] = expand_pointwise_inverse(t, p, W.cols[j], r, th);
      if (std::abs(lhs2) > scale) scale = std::abs(lhs2);
      if (std::abs(lhs2 - rhs2) > worst) {
        worst = std::abs(lhs2 - rhs2);
        worst_at = state_label(W.cols[j]);
      }
    }
    c.deviation = (scale > 0.0) ? worst / scale : worst;
    c.detail = worst_at;
    c.pass = c.deviation <= c.tol;
    rep.checks.push_back(c);
  }

  for (const CheckResult& c : rep.checks) rep.pass = rep.pass && c.pass;
  return rep;
}

}  // namespace polyosc
