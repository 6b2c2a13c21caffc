#pragma once

#include <optional>

#include "dladmm/subproblems.hpp"

namespace dladmm {

struct IterationRecord {
  int iter = 0;
  double objective_F = 0.0;
  double lagrangian = 0.0;
  double residual_norm = 0.0;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  bool descent_ok = true;
  double ck_term = 0.0;
  double lemma2 = 0.0;
  std::vector<double> tau_bar, tau;      // accepted a-step coefficients
  std::vector<double> theta_bar, theta;  // accepted W-step coefficients
  double wall_ms = 0.0;
  double rho_used = 0.0;
};

struct DescentDiagnostics {
  double C1 = 0.0;  // rho/2 - H/2 - H^2/rho
  bool rho_threshold_ok = false;
  double C2_empirical = 0.0;
  double descent_gap = 0.0;
  bool inequality_ok = false;
};

// ||risk_grad(z_L) + u||_inf; zero at an exact output-layer solve.
double lemma2_check(const NetState& s, const Matrix& y);

// Running minimum of ck_term over the history.
std::vector<double> ck_sequence(const std::vector<IterationRecord>& history);

DescentDiagnostics descent_diagnostics(const IterationRecord& prev,
                                       const IterationRecord& cur,
                                       const Hyperparams& hyper,
                                       const RiskSpec& risk);

// Runs the backward/forward sweeps of one dlADMM iteration, updating the
// state in place and recording diagnostics.
class Trainer {
 public:
  Trainer(Architecture arch, Hyperparams hyper, RiskSpec risk);

  IterationRecord iterate(NetState& s, const Dataset& train,
                          const Dataset* test, int iter_index);

  std::vector<IterationRecord> train(NetState& s, const Dataset& train,
                                     const Dataset* test = nullptr);

  const Architecture& arch() const { return arch_; }
  const Hyperparams& hyper() const { return hyper_; }

 private:
  double warm_start(std::vector<double>& store, int l) const;

  Architecture arch_;
  Hyperparams hyper_;
  RiskSpec risk_;
  // Per-layer warm starts for the backtracking coefficients.
  std::vector<double> tau_bar_, tau_, theta_bar_, theta_;
};

// Convenience wrapper: init_state + train.
std::vector<IterationRecord> train(const Architecture& arch,
                                   const Hyperparams& hyper,
                                   const RiskSpec& risk, const Dataset& train,
                                   const Dataset* test, NetState* out_state);

}  // namespace dladmm
