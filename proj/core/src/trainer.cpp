#include "dladmm/trainer.hpp"

#include <chrono>

namespace dladmm {

namespace {

constexpr double kWarmStartFloor = 1e-3;

double fista_tol_or_default(const Hyperparams& h, Eigen::Index nL,
                            Eigen::Index N) {
  if (h.fista_tol > 0.0) return h.fista_tol;
  return 1e-8 * std::sqrt(double(nL) * double(N));
}

}  // namespace

double lemma2_check(const NetState& s, const Matrix& y) {
  const int L = s.num_layers();
  return (risk_grad(s.z[L - 1], y) + s.u).cwiseAbs().maxCoeff();
}

std::vector<double> ck_sequence(const std::vector<IterationRecord>& history) {
  if (history.empty())
    throw Error(ErrorKind::config, "ck_sequence: empty history");
  std::vector<double> out;
  out.reserve(history.size());
  double running = history.front().ck_term;
  for (const auto& rec : history) {
    running = std::min(running, rec.ck_term);
    out.push_back(running);
  }
  return out;
}

DescentDiagnostics descent_diagnostics(const IterationRecord& prev,
                                       const IterationRecord& cur,
                                       const Hyperparams& hyper,
                                       const RiskSpec& risk) {
  const double H = risk.lipschitz_H;
  const double rho = cur.rho_used;
  DescentDiagnostics d;
  d.C1 = rho / 2.0 - H / 2.0 - H * H / rho;
  d.rho_threshold_ok = rho > 2.0 * H;
  double c2 = std::min(hyper.nu / 2.0, d.C1);
  for (double v : cur.tau_bar) c2 = std::min(c2, v);
  for (double v : cur.tau) c2 = std::min(c2, v);
  for (double v : cur.theta_bar) c2 = std::min(c2, v);
  for (double v : cur.theta) c2 = std::min(c2, v);
  d.C2_empirical = c2;
  d.descent_gap = prev.lagrangian - cur.lagrangian;
  d.inequality_ok = d.descent_gap >= d.C2_empirical * cur.ck_term - 1e-6;
  return d;
}

Trainer::Trainer(Architecture arch, Hyperparams hyper, RiskSpec risk)
    : arch_(std::move(arch)), hyper_(std::move(hyper)), risk_(risk) {
  arch_.validate();
  hyper_.validate();
  const int L = arch_.num_layers();
  const double t0 = hyper_.t0 > 0.0 ? hyper_.t0 : hyper_.nu;
  tau_bar_.assign(L - 1, t0);
  tau_.assign(L - 1, t0);
  theta_bar_.assign(L, t0);
  theta_.assign(L, t0);
}

double Trainer::warm_start(std::vector<double>& store, int l) const {
  return std::max(store[l], kWarmStartFloor);
}

IterationRecord Trainer::iterate(NetState& s, const Dataset& train,
                                 const Dataset* test, int iter_index) {
  const auto start = std::chrono::steady_clock::now();
  const int L = arch_.num_layers();
  const Matrix& x = train.x;
  const Matrix& y = train.y;
  const double nu = hyper_.nu;
  const double rho = hyper_.rho_schedule.rho_at(hyper_.rho0, iter_index);
  const double ftol =
      fista_tol_or_default(hyper_, arch_.num_classes(), train.num_samples());

  // Start-of-iteration snapshot for the Theorem-3 summand.
  const std::vector<Matrix> W_prev = s.W;
  const std::vector<Vector> b_prev = s.b;
  const std::vector<Matrix> a_prev = s.a;
  const Matrix zL_prev = s.z[L - 1];

  IterationRecord rec;
  rec.iter = iter_index;
  rec.rho_used = rho;
  rec.tau_bar.assign(L - 1, 0.0);
  rec.tau.assign(L - 1, 0.0);
  rec.theta_bar.assign(L, 0.0);
  rec.theta.assign(L, 0.0);

  auto run = [&](const char* block, auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::numeric)
        throw Error(ErrorKind::numeric,
                    std::string(block) + ": " + e.what() +
                        " (iteration " + std::to_string(iter_index) + ")");
      throw;
    }
  };

  // Backward sweep, layer L-1 down to 0 (a -> z -> b, then W).
  for (int l = L - 1; l >= 0; --l) {
    if (l < L - 1) {
      run("a_bar", [&] {
        auto r = update_a_backtrack(s, x, arch_.activation, l, nu, rho,
                                    warm_start(tau_bar_, l), hyper_.eta_bar);
        tau_bar_[l] = rec.tau_bar[l] = r.accepted_coeff;
      });
      run("z_bar", [&] { update_z_hidden(s, x, arch_.activation, l); });
      run("b_bar", [&] { update_b_closed(s, x, l, nu, rho); });
    } else {
      run("z_bar_L", [&] {
        update_z_output_fista(s, x, y, risk_, rho, hyper_.fista_max_iters, ftol);
      });
      run("b_bar_L", [&] { update_b_closed(s, x, l, nu, rho); });
    }
    run("W_bar", [&] {
      auto r = update_W_backtrack(s, x, l, nu, rho, warm_start(theta_bar_, l),
                                  hyper_.gamma_bar, hyper_.regularizer);
      theta_bar_[l] = rec.theta_bar[l] = r.accepted_coeff;
    });
  }

  // Bar snapshot for the Theorem-3 summand.
  const std::vector<Matrix> W_bar = s.W;
  const std::vector<Vector> b_bar = s.b;
  const std::vector<Matrix> a_bar = s.a;
  const Matrix zL_bar = s.z[L - 1];

  // Forward sweep, layer 0 up to L-1 (W -> b -> z -> a).
  for (int l = 0; l < L; ++l) {
    run("W", [&] {
      auto r = update_W_backtrack(s, x, l, nu, rho, warm_start(theta_, l),
                                  hyper_.gamma, hyper_.regularizer);
      theta_[l] = rec.theta[l] = r.accepted_coeff;
    });
    if (l < L - 1) {
      run("b", [&] { update_b_closed(s, x, l, nu, rho); });
      run("z", [&] { update_z_hidden(s, x, arch_.activation, l); });
      run("a", [&] {
        auto r = update_a_backtrack(s, x, arch_.activation, l, nu, rho,
                                    warm_start(tau_, l), hyper_.eta);
        tau_[l] = rec.tau[l] = r.accepted_coeff;
      });
    } else {
      run("b_L", [&] { update_b_closed(s, x, l, nu, rho); });
      run("z_L", [&] {
        update_z_output_fista(s, x, y, risk_, rho, hyper_.fista_max_iters, ftol);
      });
      const Matrix r = residual(s, x);
      dual_update(s.u, r, rho);
      rec.residual_norm = r.norm();
    }
  }

  if (!s.all_finite())
    throw Error(ErrorKind::numeric, "state became non-finite after iteration " +
                                        std::to_string(iter_index));

  double ck = 0.0;
  for (int l = 0; l < L; ++l) {
    ck += (W_bar[l] - W_prev[l]).squaredNorm() + (s.W[l] - W_bar[l]).squaredNorm();
    ck += (b_bar[l] - b_prev[l]).squaredNorm() + (s.b[l] - b_bar[l]).squaredNorm();
  }
  for (int l = 0; l < L - 1; ++l)
    ck += (a_bar[l] - a_prev[l]).squaredNorm() + (s.a[l] - a_bar[l]).squaredNorm();
  ck += (zL_bar - zL_prev).squaredNorm() + (s.z[L - 1] - zL_bar).squaredNorm();
  rec.ck_term = ck;

  rec.lagrangian =
      lagrangian_value(s, train, arch_.activation, risk_, hyper_, rho).total;
  rec.objective_F = objective_value(s, train, arch_.activation, hyper_);
  rec.lemma2 = lemma2_check(s, y);
  rec.train_accuracy = accuracy(s.W, s.b, arch_, train);
  rec.test_accuracy = test ? accuracy(s.W, s.b, arch_, *test) : 0.0;

  rec.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  return rec;
}

std::vector<IterationRecord> Trainer::train(NetState& s, const Dataset& train,
                                            const Dataset* test) {
  std::vector<IterationRecord> history;
  history.reserve(hyper_.max_iters);
  double prev_lagrangian = 0.0;
  double prev_rho = 0.0;
  for (int k = 0; k < hyper_.max_iters; ++k) {
    IterationRecord rec = iterate(s, train, test, k);
    if (k == 0 || rec.rho_used != prev_rho) {
      rec.descent_ok = true;  // L_rho changes meaning when rho changes
    } else {
      rec.descent_ok = rec.lagrangian <=
                       prev_lagrangian + 1e-9 * std::abs(prev_lagrangian);
    }
    prev_lagrangian = rec.lagrangian;
    prev_rho = rec.rho_used;
    history.push_back(std::move(rec));
  }
  return history;
}

std::vector<IterationRecord> train(const Architecture& arch,
                                   const Hyperparams& hyper,
                                   const RiskSpec& risk, const Dataset& train,
                                   const Dataset* test, NetState* out_state) {
  NetState s = init_state(arch, train, hyper);
  Trainer t(arch, hyper, risk);
  auto history = t.train(s, train, test);
  if (out_state) *out_state = std::move(s);
  return history;
}

}  // namespace dladmm
