#pragma once

#include "dladmm/energy.hpp"

namespace dladmm {

enum class SweepDirection { backward, forward };

struct BacktrackResult {
  Matrix new_value;
  double accepted_coeff = 0.0;
  int trials = 0;
};

struct FistaResult {
  Matrix z;
  int iters = 0;
  double grad_inf_norm = 0.0;
  bool converged = false;
};

inline constexpr int kBacktrackTrialCap = 60;

// Majorization step on a[l] (activation index). Expands at the value
// currently stored in the state (the previous iterate for the backward
// sweep, the bar value for the forward sweep), grows the curvature by
// `growth` until phi(candidate) <= Q(candidate), and writes the accepted
// value back into the state.
BacktrackResult update_a_backtrack(NetState& s, const Matrix& x,
                                   const Activation& act, int l, double nu,
                                   double rho, double t0, double growth);

// Same scheme for W[l], with the regularizer folded in through its prox.
BacktrackResult update_W_backtrack(NetState& s, const Matrix& x, int l,
                                   double nu, double rho, double t0,
                                   double growth, const RegularizerSpec& reg);

// Closed-form b step: one gradient step with the exact batch Lipschitz
// constant (nu*N below the top layer, rho*N at the top). Writes into state.
Vector update_b_closed(NetState& s, const Matrix& x, int l, double nu,
                       double rho);

// Exact elementwise minimizer of (nu/2)(z-c)^2 + (nu/2)(a-f(z))^2 for ReLU
// and leaky ReLU. Writes into state.
Matrix update_z_hidden(NetState& s, const Matrix& x, const Activation& act,
                       int l);

// Scalar version, exposed for the grid-search oracle tests.
double z_hidden_scalar(double c, double a, double slope);

// Monotone FISTA on R(z;y) + <u, z-c> + (rho/2)|z-c|^2 with fixed step
// 1/(H+rho), warm-started at the current z_L. Never returns an iterate
// worse than the warm start. Writes into state.
FistaResult update_z_output_fista(NetState& s, const Matrix& x,
                                  const Matrix& y, const RiskSpec& risk,
                                  double rho, int max_iters, double tol);

void dual_update(Matrix& u, const Matrix& r, double rho);

}  // namespace dladmm
