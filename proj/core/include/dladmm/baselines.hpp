#pragma once

#include "dladmm/trainer.hpp"

namespace dladmm {

enum class OptimizerKind { sgd, adagrad, adadelta, adam };

struct OptimizerSpec {
  OptimizerKind kind = OptimizerKind::adam;
  double lr = 1e-3;
  double eps = 1e-8;
  double beta1 = 0.9;    // adam
  double beta2 = 0.999;  // adam
  double decay = 0.95;   // adadelta

  void validate() const {
    if (lr <= 0.0 && kind != OptimizerKind::adadelta)
      throw Error(ErrorKind::config, "learning rate must be > 0");
    if (eps <= 0.0) throw Error(ErrorKind::config, "eps must be > 0");
    if (beta1 <= 0.0 || beta1 >= 1.0 || beta2 <= 0.0 || beta2 >= 1.0)
      throw Error(ErrorKind::config, "adam betas must be in (0,1)");
    if (decay <= 0.0 || decay >= 1.0)
      throw Error(ErrorKind::config, "adadelta decay must be in (0,1)");
  }
};

struct Gradients {
  std::vector<Matrix> dW;
  std::vector<Vector> db;
};

// Exact gradients of summed softmax cross-entropy of the plain feed-forward
// network (no auxiliary variables).
Gradients backprop_grads(const std::vector<Matrix>& W,
                         const std::vector<Vector>& b,
                         const Architecture& arch, const Matrix& x,
                         const Matrix& y);

// Full-batch loss of the plain network.
double feedforward_loss(const std::vector<Matrix>& W,
                        const std::vector<Vector>& b, const Architecture& arch,
                        const Matrix& x, const Matrix& y);

class FirstOrderOptimizer {
 public:
  FirstOrderOptimizer(OptimizerSpec spec, const std::vector<Matrix>& W,
                      const std::vector<Vector>& b);

  void step(std::vector<Matrix>& W, std::vector<Vector>& b,
            const Gradients& grads);

 private:
  OptimizerSpec spec_;
  int t_ = 0;
  std::vector<Matrix> mW_, vW_;
  std::vector<Vector> mb_, vb_;
  std::vector<Matrix> dxW_;  // adadelta accumulated update
  std::vector<Vector> dxb_;
};

// Full-batch first-order training; same record schema as the dlADMM trainer
// (lagrangian/residual/ck fields are NaN).
std::vector<IterationRecord> train_baseline(const Architecture& arch,
                                            const Hyperparams& hyper,
                                            const OptimizerSpec& spec,
                                            const Dataset& train,
                                            const Dataset* test,
                                            NetState* out_state);

}  // namespace dladmm
