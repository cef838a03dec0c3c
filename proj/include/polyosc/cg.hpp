#pragma once

namespace polyosc {

/// SU(2) Clebsch-Gordan argument set <a alpha; b beta | c gamma>, with the
/// entries allowed off the usual (half-)integer grid. The differences
/// a - alpha, b - beta, c - gamma and a + b - c must stay nonnegative
/// integers for the coefficient to be nonzero.
struct CGArgs {
  double a, alpha, b, beta, c, gamma;
};

/// Analytically-continued coefficient by the single-sum Racah form with
/// factorials promoted to Gamma functions. Selection-rule violations
/// (gamma != alpha + beta, or any of the four integer differences negative)
/// return exactly 0; integer-structure violations (differences off the
/// integer grid by more than 1e-9) throw std::invalid_argument. Terms whose
/// denominator Gamma sits on a pole vanish and are skipped; the surviving
/// terms are accumulated with compensated summation.
double cg_continued(const CGArgs& g);

/// The constant K relating the reduced two-body matrix element of a cell to
/// its CG coefficient. Cell scalars: accumulated principal numbers N_s, N_r,
/// child momenta l_s, l_r, child internal-node counts v_s, v_r, and the cell
/// momentum l = 2q + l_s + l_r.
double cell_k_constant(double N_s, double l_s, int v_s, double N_r, double l_r,
                       int v_r, double l);

/// Independent reconstruction of the same coefficient from the cell's
/// one-dimensional angular integral (tanh-sinh quadrature), inverted through
/// K and the (-1)^{q + (l - l_s - N_r)/2} phase.
double cg_from_integral(double N_s, double l_s, int v_s, double N_r,
                        double l_r, int v_r, double l,
                        double quad_tol = 1e-11);

}  // namespace polyosc
