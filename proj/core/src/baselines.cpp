#include "dladmm/baselines.hpp"

#include <chrono>

namespace dladmm {

namespace {

Matrix activation_deriv(const Matrix& z, const Activation& act) {
  const double s = act.slope();
  return z.unaryExpr([s](double v) { return v > 0.0 ? 1.0 : s; });
}

}  // namespace

double feedforward_loss(const std::vector<Matrix>& W,
                        const std::vector<Vector>& b, const Architecture& arch,
                        const Matrix& x, const Matrix& y) {
  const int L = static_cast<int>(W.size());
  Matrix h = x;
  for (int l = 0; l < L; ++l) {
    Matrix lin = W[l] * h + b[l].replicate(1, h.cols());
    h = (l < L - 1) ? arch.activation.apply(lin) : std::move(lin);
  }
  return risk_value(h, y);
}

Gradients backprop_grads(const std::vector<Matrix>& W,
                         const std::vector<Vector>& b,
                         const Architecture& arch, const Matrix& x,
                         const Matrix& y) {
  const int L = static_cast<int>(W.size());
  const Eigen::Index N = x.cols();
  if (x.rows() != arch.input_dim())
    throw Error(ErrorKind::data, "backprop_grads: input shape mismatch");

  std::vector<Matrix> pre(L), post(L);
  Matrix h = x;
  for (int l = 0; l < L; ++l) {
    pre[l] = W[l] * h + b[l].replicate(1, N);
    post[l] = (l < L - 1) ? arch.activation.apply(pre[l]) : pre[l];
    h = post[l];
  }

  Gradients g;
  g.dW.resize(L);
  g.db.resize(L);
  Matrix delta = risk_grad(pre[L - 1], y);
  for (int l = L - 1; l >= 0; --l) {
    const Matrix& in = (l == 0) ? x : post[l - 1];
    g.dW[l] = delta * in.transpose();
    g.db[l] = delta.rowwise().sum();
    if (l > 0)
      delta = (W[l].transpose() * delta)
                  .cwiseProduct(activation_deriv(pre[l - 1], arch.activation));
  }
  return g;
}

FirstOrderOptimizer::FirstOrderOptimizer(OptimizerSpec spec,
                                         const std::vector<Matrix>& W,
                                         const std::vector<Vector>& b)
    : spec_(spec) {
  spec_.validate();
  const size_t L = W.size();
  mW_.resize(L);
  vW_.resize(L);
  mb_.resize(L);
  vb_.resize(L);
  dxW_.resize(L);
  dxb_.resize(L);
  for (size_t l = 0; l < L; ++l) {
    mW_[l] = Matrix::Zero(W[l].rows(), W[l].cols());
    vW_[l] = mW_[l];
    dxW_[l] = mW_[l];
    mb_[l] = Vector::Zero(b[l].size());
    vb_[l] = mb_[l];
    dxb_[l] = mb_[l];
  }
}

void FirstOrderOptimizer::step(std::vector<Matrix>& W, std::vector<Vector>& b,
                               const Gradients& grads) {
  const size_t L = W.size();
  ++t_;
  for (size_t l = 0; l < L; ++l) {
    auto apply = [&](auto& param, const auto& grad, auto& m, auto& v, auto& dx) {
      switch (spec_.kind) {
        case OptimizerKind::sgd:
          param -= spec_.lr * grad;
          break;
        case OptimizerKind::adagrad:
          v.array() += grad.array().square();
          param.array() -= spec_.lr * grad.array() / (v.array().sqrt() + spec_.eps);
          break;
        case OptimizerKind::adadelta: {
          v.array() = spec_.decay * v.array() +
                      (1.0 - spec_.decay) * grad.array().square();
          auto update = (dx.array() + spec_.eps).sqrt() /
                        (v.array() + spec_.eps).sqrt() * grad.array();
          dx.array() = spec_.decay * dx.array() +
                       (1.0 - spec_.decay) * update.square();
          param.array() -= spec_.lr * update;
          break;
        }
        case OptimizerKind::adam: {
          m = spec_.beta1 * m + (1.0 - spec_.beta1) * grad;
          v.array() = spec_.beta2 * v.array() +
                      (1.0 - spec_.beta2) * grad.array().square();
          const double mc = 1.0 - std::pow(spec_.beta1, t_);
          const double vc = 1.0 - std::pow(spec_.beta2, t_);
          param.array() -= spec_.lr * (m.array() / mc) /
                           ((v.array() / vc).sqrt() + spec_.eps);
          break;
        }
      }
    };
    apply(W[l], grads.dW[l], mW_[l], vW_[l], dxW_[l]);
    apply(b[l], grads.db[l], mb_[l], vb_[l], dxb_[l]);
  }
}

std::vector<IterationRecord> train_baseline(const Architecture& arch,
                                            const Hyperparams& hyper,
                                            const OptimizerSpec& spec,
                                            const Dataset& train,
                                            const Dataset* test,
                                            NetState* out_state) {
  arch.validate();
  NetState s = init_state(arch, train, hyper);
  FirstOrderOptimizer opt(spec, s.W, s.b);
  const double nan = std::numeric_limits<double>::quiet_NaN();

  std::vector<IterationRecord> history;
  history.reserve(hyper.max_iters);
  for (int k = 0; k < hyper.max_iters; ++k) {
    const auto start = std::chrono::steady_clock::now();
    Gradients g = backprop_grads(s.W, s.b, arch, train.x, train.y);
    opt.step(s.W, s.b, g);
    for (const auto& w : s.W)
      if (!w.allFinite())
        throw Error(ErrorKind::numeric,
                    "baseline weights non-finite at epoch " + std::to_string(k));

    IterationRecord rec;
    rec.iter = k;
    rec.objective_F = feedforward_loss(s.W, s.b, arch, train.x, train.y);
    rec.lagrangian = nan;
    rec.residual_norm = nan;
    rec.ck_term = nan;
    rec.lemma2 = nan;
    rec.rho_used = nan;
    rec.train_accuracy = accuracy(s.W, s.b, arch, train);
    rec.test_accuracy = test ? accuracy(s.W, s.b, arch, *test) : 0.0;
    rec.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    history.push_back(std::move(rec));
  }
  if (out_state) *out_state = std::move(s);
  return history;
}

}  // namespace dladmm
