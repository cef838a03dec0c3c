#pragma once

#include <span>
#include <vector>

#include "polyosc/tree.hpp"

namespace polyosc {

/// Oscillator with frequency omega and per-axis centrifugal strengths k_i;
/// the potential term (k_i^2 - 1/4)/x_i^2 admits two boundary branches,
/// selected by sign_i = +-1 through the leaf momentum l_i = 1/2 + sign_i k_i.
/// The - branch is only normalizable for k_i <= 1/2.
struct ModelParams {
  double omega = 1.0;
  std::vector<double> k;
  std::vector<int> sign;  // one of {-1, +1} per axis

  int dimension() const { return static_cast<int>(k.size()); }
  double nu(int axis) const { return sign[axis] * k[axis]; }  // 0-based axis
};

/// Throws std::invalid_argument on any violated constraint.
void validate_params(const ModelParams& p);

struct CartesianState {
  std::vector<int> n;
  int total() const;
};

struct HypersphericalState {
  int n_r = 0;
  std::vector<int> q;  // per angle, pre-order (q[j-1] belongs to t_j)
  int total() const;
};

/// E = omega (2N + D + sum_i sign_i k_i); shared by every level-N state of
/// both bases.
double energy(const ModelParams& p, int N);

/// Product of the D one-dimensional singular-oscillator factors; each factor
/// integrates to 1/2 on x_i > 0, so the product carries norm 2^-D over the
/// positive orthant. x_i < 0 is a domain error.
double cartesian_wavefunction(const ModelParams& p, const CartesianState& s,
                              std::span<const double> x);

/// Momentum l_v of every tree slot: leaves carry 1/2 + sign_i k_i, internal
/// nodes 2 q_v + l_left + l_right. Indexed by tree node id.
std::vector<double> node_momenta(const Tree& t, const ModelParams& p,
                                 const HypersphericalState& s);

/// Root momentum (hypermomentum) of the state.
double hypermomentum(const Tree& t, const ModelParams& p,
                     const HypersphericalState& s);

/// Product over internal nodes of the normalized cell functions
/// N_q cos^{l_s}th sin^{l_r}th P_q^{(a_r,a_s)}(cos 2th); unit-normalized on
/// the orthant th_j in [0, pi/2] against the measure prod cos^{v_s}sin^{v_r}.
double angular_function(const Tree& t, const ModelParams& p,
                        const HypersphericalState& s,
                        std::span<const double> theta);

/// Radial factor, unit-normalized against r^{D-1} dr on r > 0.
double radial_function(const ModelParams& p, double l, int n_r, double r);

/// radial_function times angular_function at (r, theta).
double hyperspherical_wavefunction(const Tree& t, const ModelParams& p,
                                   const HypersphericalState& s, double r,
                                   std::span<const double> theta);

/// All level-N states, ascending lexicographic in (n_1..n_D).
std::vector<CartesianState> enumerate_cartesian(int D, int N);

/// All level-N states, descending lexicographic in (n_r, q_1..q_{D-1}).
std::vector<HypersphericalState> enumerate_hyperspherical(const Tree& t, int N);

/// Normalization constant of the generic cell function: N_q such that
/// N_q^2 int_0^{pi/2} cos^{2l_s+v_s} sin^{2l_r+v_r} P_q(cos 2th)^2 dth = 1.
/// Written with the (X+1)Gamma(X+1) = Gamma(X+2) fold at q = 0 so the
/// Chebyshev-like limit a_r = a_s = -1/2 stays finite.
double cell_norm_constant(int q, double alpha_r, double alpha_s);

/// The normalized cell function itself.
double cell_function(int q, double l_s, int v_s, double l_r, int v_r,
                     double theta);

}  // namespace polyosc
