#pragma once

#include <Eigen/Dense>
#include <span>
#include <utility>
#include <vector>

#include "polyosc/bases.hpp"
#include "polyosc/cg.hpp"
#include "polyosc/tree.hpp"

namespace polyosc {

/// Everything one coupling cell contributes to a matrix element: child
/// momenta and subtree sizes, accumulated principal numbers N_s/N_r built
/// from the Cartesian side (leaf n-tilde = 2n_i + sign_i k_i + 1/2), and the
/// cell momentum l = 2q + l_s + l_r from the hyperspherical side.
struct CellData {
  int node = -1;   // tree slot
  int angle = 0;   // pre-order angle index
  CellType type = CellType::LeafLeaf;
  double l_s = 0, l_r = 0;
  int v_s = 0, v_r = 0;
  double N_s = 0, N_r = 0;
  double l = 0;
  int q = 0;
};

/// Cells in pre-order (root first). Throws std::invalid_argument when the
/// two states belong to different levels.
std::vector<CellData> collect_cell_data(const Tree& t, const ModelParams& p,
                                        const CartesianState& cart,
                                        const HypersphericalState& hyp);

/// Continued-CG argument set of one cell. Guarantees gamma = alpha + beta,
/// a - alpha = (N_r - l_r)/2, b - beta = (N_s - l_s)/2, c - gamma = q.
CGArgs cell_cg_args(const CellData& cell);

/// (-1)^{c - a - beta} times the continued coefficient; the product of these
/// over all cells is the full matrix element.
double cell_coefficient(const CellData& cell);

/// <cartesian | hyperspherical> overlap, exact product formula.
double transition_coefficient(const Tree& t, const ModelParams& p,
                              const CartesianState& cart,
                              const HypersphericalState& hyp);

/// True when every cell has a nonnegative quantum excess (N_s + N_r - l)/2,
/// i.e. the Cartesian quanta under each node cover the angular quanta q
/// spent there. Pairs failing this have a vanishing matrix element, and
/// their per-cell K product is an indeterminate 0 * inf (Gamma poles), so
/// k_telescoping_check is only defined on pairs passing here.
bool selection_rules_hold(const Tree& t, const ModelParams& p,
                          const CartesianState& cart,
                          const HypersphericalState& hyp);

struct TransitionMatrix {
  int N = 0;
  std::vector<CartesianState> rows;
  std::vector<HypersphericalState> cols;
  Eigen::MatrixXd values;
};

/// Full level-N matrix; rows ascending lexicographic in n, columns
/// descending lexicographic in (n_r, q). Entry assembly parallelizes over
/// rows, capped by the POLYOSC_THREADS environment variable; results are
/// bit-identical regardless of thread count.
TransitionMatrix transition_matrix(const Tree& t, const ModelParams& p, int N);

/// Literal quadrature assembly of the same element: the global M factor
/// times, per cell, the reduction prefactor (1/2 leaf-leaf, 1/sqrt2 mixed,
/// 1 subtree-subtree) times the one-dimensional angular integral.
double oracle_transition(const Tree& t, const ModelParams& p,
                         const CartesianState& cart,
                         const HypersphericalState& hyp,
                         double quad_tol = 1e-11);

/// (product of per-cell K constants, closed telescoped form); the two agree
/// analytically, so their relative difference probes accumulated roundoff.
/// Requires selection_rules_hold for the pair; otherwise a K factor sits on
/// a Gamma pole and this throws std::domain_error.
std::pair<double, double> k_telescoping_check(const Tree& t,
                                              const ModelParams& p,
                                              const CartesianState& cart,
                                              const HypersphericalState& hyp);

/// Pointwise expansion of one orthant-normalized Cartesian state in the
/// hyperspherical basis at the point (r, theta): returns (direct value,
/// basis expansion). The two agree to roundoff for every valid point.
std::pair<double, double> expand_pointwise(const Tree& t, const ModelParams& p,
                                           const CartesianState& cart,
                                           double r,
                                           std::span<const double> theta);

/// Same check in the other direction: a hyperspherical state expanded in
/// the orthant-normalized Cartesian functions.
std::pair<double, double> expand_pointwise_inverse(
    const Tree& t, const ModelParams& p, const HypersphericalState& hyp,
    double r, std::span<const double> theta);

/// max_ij |W W^T - I|
double orthogonality_defect(const TransitionMatrix& W);

/// Worker count used for matrix assembly (respects POLYOSC_THREADS).
int max_threads();

}  // namespace polyosc
