#include "dladmm/energy.hpp"

namespace dladmm {

namespace {

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw Error(ErrorKind::numeric, std::string("non-finite input in ") + what);
}

// z_l - W_l a_{l-1} - b_l for layer l.
Matrix link_residual(const NetState& s, const Matrix& x, int l) {
  const Matrix& in = s.layer_input(x, l);
  return s.z[l] - s.W[l] * in - s.b[l].replicate(1, in.cols());
}

}  // namespace

double risk_value(const Matrix& zL, const Matrix& y) {
  require_finite(zL, "risk_value");
  double total = 0.0;
  for (Eigen::Index j = 0; j < zL.cols(); ++j) {
    const auto col = zL.col(j);
    const double m = col.maxCoeff();
    const double lse = m + std::log((col.array() - m).exp().sum());
    total += lse - col.dot(y.col(j));
  }
  return total;
}

Matrix risk_grad(const Matrix& zL, const Matrix& y) {
  require_finite(zL, "risk_grad");
  Matrix g(zL.rows(), zL.cols());
  for (Eigen::Index j = 0; j < zL.cols(); ++j) {
    const auto col = zL.col(j);
    const double m = col.maxCoeff();
    Vector e = (col.array() - m).exp();
    g.col(j) = e / e.sum() - y.col(j);
  }
  return g;
}

Matrix residual(const NetState& s, const Matrix& x) {
  return link_residual(s, x, s.num_layers() - 1);
}

double phi_value(const NetState& s, const Matrix& x, const Activation& act,
                 double nu, double rho) {
  const int L = s.num_layers();
  double v = 0.0;
  for (int l = 0; l < L - 1; ++l) {
    v += 0.5 * nu * link_residual(s, x, l).squaredNorm();
    v += 0.5 * nu * (s.a[l] - act.apply(s.z[l])).squaredNorm();
  }
  const Matrix r = link_residual(s, x, L - 1);
  v += s.u.cwiseProduct(r).sum();
  v += 0.5 * rho * r.squaredNorm();
  if (!std::isfinite(v)) throw Error(ErrorKind::numeric, "non-finite phi_value");
  return v;
}

double regularizer_value(const Matrix& W, const RegularizerSpec& spec) {
  switch (spec.kind) {
    case RegularizerKind::none:
      return 0.0;
    case RegularizerKind::l1:
      return spec.lambda * W.cwiseAbs().sum();
    case RegularizerKind::l2:
      return spec.lambda * W.squaredNorm();
  }
  return 0.0;
}

Matrix prox_regularizer(const Matrix& v, double theta,
                        const RegularizerSpec& spec) {
  if (spec.lambda < 0.0) throw Error(ErrorKind::config, "lambda must be >= 0");
  if (theta <= 0.0) throw Error(ErrorKind::config, "prox weight must be > 0");
  switch (spec.kind) {
    case RegularizerKind::none:
      return v;
    case RegularizerKind::l1: {
      const double thr = spec.lambda / theta;
      return v.unaryExpr([thr](double w) {
        if (w > thr) return w - thr;
        if (w < -thr) return w + thr;
        return 0.0;
      });
    }
    case RegularizerKind::l2:
      return v * (theta / (theta + 2.0 * spec.lambda));
  }
  return v;
}

EnergyBreakdown lagrangian_value(const NetState& s, const Dataset& data,
                                 const Activation& act, const RiskSpec&,
                                 const Hyperparams& hyper, double rho) {
  const int L = s.num_layers();
  EnergyBreakdown e;
  e.risk = risk_value(s.z[L - 1], data.y);
  for (int l = 0; l < L; ++l)
    e.regularizer_total += regularizer_value(s.W[l], hyper.regularizer);
  for (int l = 0; l < L - 1; ++l) {
    e.nu_penalty += 0.5 * hyper.nu * link_residual(s, data.x, l).squaredNorm();
    e.nu_penalty += 0.5 * hyper.nu * (s.a[l] - act.apply(s.z[l])).squaredNorm();
  }
  const Matrix r = link_residual(s, data.x, L - 1);
  e.dual_term = s.u.cwiseProduct(r).sum();
  e.rho_penalty = 0.5 * rho * r.squaredNorm();
  e.total = e.risk + e.regularizer_total + e.nu_penalty + e.dual_term + e.rho_penalty;
  if (!std::isfinite(e.total))
    throw Error(ErrorKind::numeric, "non-finite Lagrangian");
  return e;
}

double objective_value(const NetState& s, const Dataset& data,
                       const Activation& act, const Hyperparams& hyper) {
  const int L = s.num_layers();
  double v = risk_value(s.z[L - 1], data.y);
  for (int l = 0; l < L; ++l)
    v += regularizer_value(s.W[l], hyper.regularizer);
  for (int l = 0; l < L - 1; ++l) {
    v += 0.5 * hyper.nu * link_residual(s, data.x, l).squaredNorm();
    v += 0.5 * hyper.nu * (s.a[l] - act.apply(s.z[l])).squaredNorm();
  }
  return v;
}

Matrix grad_phi_a(const NetState& s, const Matrix& x, const Activation& act,
                  int l, double nu, double rho) {
  const int L = s.num_layers();
  if (l < 0 || l >= L - 1)
    throw Error(ErrorKind::config, "grad_phi_a: activation index out of range");
  const int up = l + 1;  // layer fed by a[l]
  Matrix g = nu * (s.a[l] - act.apply(s.z[l]));
  const Eigen::Index N = s.a[l].cols();
  Matrix pre = s.W[up] * s.a[l] + s.b[up].replicate(1, N) - s.z[up];
  if (up == L - 1)
    g.noalias() += s.W[up].transpose() * (rho * pre - s.u);
  else
    g.noalias() += nu * (s.W[up].transpose() * pre);
  return g;
}

Vector grad_phi_b(const NetState& s, const Matrix& x, int l, double nu,
                  double rho) {
  const int L = s.num_layers();
  if (l < 0 || l >= L)
    throw Error(ErrorKind::config, "grad_phi_b: layer out of range");
  const Matrix& in = s.layer_input(x, l);
  Matrix pre = s.W[l] * in + s.b[l].replicate(1, in.cols()) - s.z[l];
  if (l == L - 1) return (rho * pre - s.u).rowwise().sum();
  return nu * pre.rowwise().sum();
}

Matrix grad_phi_W(const NetState& s, const Matrix& x, int l, double nu,
                  double rho) {
  const int L = s.num_layers();
  if (l < 0 || l >= L)
    throw Error(ErrorKind::config, "grad_phi_W: layer out of range");
  const Matrix& in = s.layer_input(x, l);
  Matrix pre = s.W[l] * in + s.b[l].replicate(1, in.cols()) - s.z[l];
  if (l == L - 1) return (rho * pre - s.u) * in.transpose();
  return nu * (pre * in.transpose());
}

Matrix grad_output_z(const NetState& s, const Matrix& x, const Matrix& y,
                     double rho) {
  const int L = s.num_layers();
  return risk_grad(s.z[L - 1], y) + s.u + rho * residual(s, x);
}

double phi_terms_for_a(const NetState& s, const Matrix& x,
                       const Activation& act, int l, double nu, double rho) {
  const int L = s.num_layers();
  const int up = l + 1;
  double v = 0.5 * nu * (s.a[l] - act.apply(s.z[l])).squaredNorm();
  const Matrix r = link_residual(s, x, up);
  if (up == L - 1)
    v += s.u.cwiseProduct(r).sum() + 0.5 * rho * r.squaredNorm();
  else
    v += 0.5 * nu * r.squaredNorm();
  return v;
}

double phi_terms_for_link(const NetState& s, const Matrix& x, int l, double nu,
                          double rho) {
  const int L = s.num_layers();
  const Matrix r = link_residual(s, x, l);
  if (l == L - 1)
    return s.u.cwiseProduct(r).sum() + 0.5 * rho * r.squaredNorm();
  return 0.5 * nu * r.squaredNorm();
}

}  // namespace dladmm
