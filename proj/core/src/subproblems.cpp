#include "dladmm/subproblems.hpp"

namespace dladmm {

namespace {

double quad_model(double phi_p, const Matrix& grad, const Matrix& cand,
                  const Matrix& p, double coeff) {
  const Matrix d = cand - p;
  return phi_p + grad.cwiseProduct(d).sum() + 0.5 * coeff * d.squaredNorm();
}

}  // namespace

BacktrackResult update_a_backtrack(NetState& s, const Matrix& x,
                                   const Activation& act, int l, double nu,
                                   double rho, double t0, double growth) {
  const Matrix p = s.a[l];
  const Matrix g = grad_phi_a(s, x, act, l, nu, rho);
  if (!g.allFinite())
    throw Error(ErrorKind::numeric, "non-finite gradient in a-update");
  const double phi_p = phi_terms_for_a(s, x, act, l, nu, rho);

  BacktrackResult res;
  double t = t0;
  for (int trial = 0; trial <= kBacktrackTrialCap; ++trial) {
    s.a[l] = p - g / t;
    const double phi_c = phi_terms_for_a(s, x, act, l, nu, rho);
    if (phi_c <= quad_model(phi_p, g, s.a[l], p, t)) {
      res.new_value = s.a[l];
      res.accepted_coeff = t;
      res.trials = trial;
      return res;
    }
    t *= growth;
  }
  throw Error(ErrorKind::numeric, "a-update backtracking exceeded trial cap");
}

BacktrackResult update_W_backtrack(NetState& s, const Matrix& x, int l,
                                   double nu, double rho, double t0,
                                   double growth, const RegularizerSpec& reg) {
  const Matrix p = s.W[l];
  const Matrix g = grad_phi_W(s, x, l, nu, rho);
  if (!g.allFinite())
    throw Error(ErrorKind::numeric, "non-finite gradient in W-update");
  const double phi_p = phi_terms_for_link(s, x, l, nu, rho);

  BacktrackResult res;
  double alpha = t0;
  for (int trial = 0; trial <= kBacktrackTrialCap; ++trial) {
    s.W[l] = prox_regularizer(p - g / alpha, alpha, reg);
    const double phi_c = phi_terms_for_link(s, x, l, nu, rho);
    if (phi_c <= quad_model(phi_p, g, s.W[l], p, alpha)) {
      res.new_value = s.W[l];
      res.accepted_coeff = alpha;
      res.trials = trial;
      return res;
    }
    alpha *= growth;
  }
  throw Error(ErrorKind::numeric, "W-update backtracking exceeded trial cap");
}

Vector update_b_closed(NetState& s, const Matrix& x, int l, double nu,
                       double rho) {
  const Eigen::Index N = s.z[l].cols();
  const Vector g = grad_phi_b(s, x, l, nu, rho);
  const double lip = (l == s.num_layers() - 1 ? rho : nu) * double(N);
  s.b[l] -= g / lip;
  return s.b[l];
}

double z_hidden_scalar(double c, double a, double slope) {
  // Negative branch: f(z) = slope*z, unconstrained minimizer of
  // (z-c)^2 + (a - slope*z)^2, clamped to z <= 0.
  const double cand1 =
      std::min((c + slope * a) / (1.0 + slope * slope), 0.0);
  const double f1 = slope * cand1;
  const double v1 = (cand1 - c) * (cand1 - c) + (a - f1) * (a - f1);
  // Nonnegative branch: f(z) = z.
  const double cand2 = std::max((c + a) / 2.0, 0.0);
  const double v2 = (cand2 - c) * (cand2 - c) + (a - cand2) * (a - cand2);
  return v1 < v2 ? cand1 : cand2;  // ties go to the f(z)=z branch
}

Matrix update_z_hidden(NetState& s, const Matrix& x, const Activation& act,
                       int l) {
  if (l < 0 || l >= s.num_layers() - 1)
    throw Error(ErrorKind::config, "update_z_hidden: layer out of range");
  const Matrix& in = s.layer_input(x, l);
  const Eigen::Index N = in.cols();
  const Matrix c = s.W[l] * in + s.b[l].replicate(1, N);
  const double slope = act.slope();
  Matrix& z = s.z[l];
  for (Eigen::Index j = 0; j < N; ++j)
    for (Eigen::Index i = 0; i < z.rows(); ++i)
      z(i, j) = z_hidden_scalar(c(i, j), s.a[l](i, j), slope);
  return z;
}

FistaResult update_z_output_fista(NetState& s, const Matrix& x,
                                  const Matrix& y, const RiskSpec& risk,
                                  double rho, int max_iters, double tol) {
  const int L = s.num_layers();
  const Matrix& in = s.layer_input(x, L - 1);
  const Matrix c = s.W[L - 1] * in + s.b[L - 1].replicate(1, in.cols());

  auto objective = [&](const Matrix& z) {
    const Matrix d = z - c;
    return risk_value(z, y) + s.u.cwiseProduct(d).sum() +
           0.5 * rho * d.squaredNorm();
  };
  auto gradient = [&](const Matrix& z) -> Matrix {
    return risk_grad(z, y) + s.u + rho * (z - c);
  };

  const double step = 1.0 / (risk.lipschitz_H + rho);
  Matrix xk = s.z[L - 1];
  double fx = objective(xk);
  Matrix yk = xk;
  Matrix xprev = xk;
  double tk = 1.0;

  FistaResult res;
  res.grad_inf_norm = gradient(xk).cwiseAbs().maxCoeff();
  for (int it = 0; it < max_iters; ++it) {
    if (res.grad_inf_norm <= tol) {
      res.converged = true;
      break;
    }
    const Matrix cand = yk - step * gradient(yk);
    const double fc = objective(cand);
    xprev = xk;
    if (fc <= fx) {  // monotone variant: never accept an increase
      xk = cand;
      fx = fc;
    }
    const double tk1 = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
    yk = xk + (tk / tk1) * (cand - xk) + ((tk - 1.0) / tk1) * (xk - xprev);
    tk = tk1;
    res.iters = it + 1;
    res.grad_inf_norm = gradient(xk).cwiseAbs().maxCoeff();
  }
  res.converged = res.grad_inf_norm <= tol;
  res.z = xk;
  s.z[L - 1] = xk;
  return res;
}

void dual_update(Matrix& u, const Matrix& r, double rho) {
  if (u.rows() != r.rows() || u.cols() != r.cols())
    throw Error(ErrorKind::config, "dual_update: shape mismatch");
  u += rho * r;
}

}  // namespace dladmm
