#pragma once

#include "dladmm/net_state.hpp"

namespace dladmm {

struct EnergyBreakdown {
  double risk = 0.0;
  double regularizer_total = 0.0;
  double nu_penalty = 0.0;
  double dual_term = 0.0;
  double rho_penalty = 0.0;
  double total = 0.0;
};

// Summed (not averaged) softmax cross-entropy over sample columns.
double risk_value(const Matrix& zL, const Matrix& y);

// softmax(zL) - y, column by column.
Matrix risk_grad(const Matrix& zL, const Matrix& y);

// The smooth penalty-plus-dual part of the augmented Lagrangian:
// (nu/2) sum_{l<L} (|z_l - W_l a_{l-1} - b_l|^2 + |a_l - f(z_l)|^2)
//   + <u, r> + (rho/2)|r|^2,   r = z_L - W_L a_{L-1} - b_L.
double phi_value(const NetState& s, const Matrix& x, const Activation& act,
                 double nu, double rho);

// Output-layer residual z_L - W_L a_{L-1} - b_L.
Matrix residual(const NetState& s, const Matrix& x);

double regularizer_value(const Matrix& W, const RegularizerSpec& spec);

// Closed-form minimizer of (theta/2)|w - v|^2 + Omega(w), elementwise.
Matrix prox_regularizer(const Matrix& v, double theta,
                        const RegularizerSpec& spec);

EnergyBreakdown lagrangian_value(const NetState& s, const Dataset& data,
                                 const Activation& act, const RiskSpec& risk,
                                 const Hyperparams& hyper, double rho);

// Problem-2 objective F (no dual or rho terms).
double objective_value(const NetState& s, const Dataset& data,
                       const Activation& act, const Hyperparams& hyper);

// Block gradients of phi, evaluated at the current (possibly mixed) state.
// l is the 0-based layer index; grad_phi_a takes the activation index
// (0..L-2, i.e. the output of layer l).
Matrix grad_phi_a(const NetState& s, const Matrix& x, const Activation& act,
                  int l, double nu, double rho);
Vector grad_phi_b(const NetState& s, const Matrix& x, int l, double nu,
                  double rho);
Matrix grad_phi_W(const NetState& s, const Matrix& x, int l, double nu,
                  double rho);

// risk_grad + u + rho * (z_L - W_L a_{L-1} - b_L); the gradient of R + phi
// in z_L.
Matrix grad_output_z(const NetState& s, const Matrix& x, const Matrix& y,
                     double rho);

// Partial phi: only the terms that depend on the given block. Used by the
// backtracking loops so a trial costs one layer, not the whole net.
double phi_terms_for_a(const NetState& s, const Matrix& x,
                       const Activation& act, int l, double nu, double rho);
double phi_terms_for_link(const NetState& s, const Matrix& x, int l, double nu,
                          double rho);  // the z_l = W_l a + b_l term (W and b)

}  // namespace dladmm
