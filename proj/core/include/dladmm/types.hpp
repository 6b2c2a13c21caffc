#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "dladmm/error.hpp"

namespace dladmm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class ActivationKind { relu, leaky_relu };

struct Activation {
  ActivationKind kind = ActivationKind::relu;
  double leaky_slope = 0.01;  // only used by leaky_relu, must be in (0,1)

  double slope() const {
    return kind == ActivationKind::relu ? 0.0 : leaky_slope;
  }
  Matrix apply(const Matrix& z) const {
    const double s = slope();
    return z.unaryExpr([s](double v) { return v > 0.0 ? v : s * v; });
  }
};

// Network topology. layer_dims holds n_0..n_L; layer l (0-based, 0..L-1)
// maps an n_l input to an n_{l+1} output. The activation applies to all
// layers except the last.
struct Architecture {
  std::vector<int> layer_dims;
  Activation activation;

  int num_layers() const { return static_cast<int>(layer_dims.size()) - 1; }
  int input_dim() const { return layer_dims.front(); }
  int num_classes() const { return layer_dims.back(); }

  void validate() const {
    if (layer_dims.size() < 3)
      throw Error(ErrorKind::config, "architecture needs at least 2 layers");
    for (int d : layer_dims)
      if (d < 1) throw Error(ErrorKind::config, "layer dimension must be >= 1");
    if (activation.kind == ActivationKind::leaky_relu &&
        (activation.leaky_slope <= 0.0 || activation.leaky_slope >= 1.0))
      throw Error(ErrorKind::config, "leaky slope must be in (0,1)");
  }
};

enum class RegularizerKind { none, l1, l2 };

struct RegularizerSpec {
  RegularizerKind kind = RegularizerKind::none;
  double lambda = 0.0;
};

enum class RhoScheduleKind { fixed, geometric };

struct RhoSchedule {
  RhoScheduleKind kind = RhoScheduleKind::fixed;
  double factor = 10.0;
  int every_k_iters = 100;
  double cap = std::numeric_limits<double>::infinity();

  double rho_at(double rho0, int iter) const {
    if (kind == RhoScheduleKind::fixed) return rho0;
    double r = rho0;
    for (int i = every_k_iters; i <= iter; i += every_k_iters) r *= factor;
    return std::min(r, cap);
  }
};

struct Hyperparams {
  double nu = 1e-6;
  double rho0 = 1e-6;
  RhoSchedule rho_schedule;
  double eta_bar = 2.0;   // backward a-step growth
  double eta = 2.0;       // forward a-step growth
  double gamma_bar = 2.0; // backward W-step growth
  double gamma = 2.0;     // forward W-step growth
  double t0 = 0.0;        // 0 means "use nu" on the first iteration
  RegularizerSpec regularizer;
  int fista_max_iters = 100;
  double fista_tol = 0.0;  // 0 means the 1e-8*sqrt(n_L*N) default
  int max_iters = 200;
  std::uint64_t seed = 1;

  void validate() const {
    if (nu <= 0.0) throw Error(ErrorKind::config, "nu must be > 0");
    if (rho0 <= 0.0) throw Error(ErrorKind::config, "rho0 must be > 0");
    if (eta_bar <= 1.0 || eta <= 1.0 || gamma_bar <= 1.0 || gamma <= 1.0)
      throw Error(ErrorKind::config, "backtracking growth factors must be > 1");
    if (regularizer.lambda < 0.0)
      throw Error(ErrorKind::config, "regularizer lambda must be >= 0");
    if (fista_max_iters < 1)
      throw Error(ErrorKind::config, "fista_max_iters must be >= 1");
    if (fista_tol < 0.0) throw Error(ErrorKind::config, "fista_tol must be >= 0");
    if (max_iters < 1) throw Error(ErrorKind::config, "max_iters must be >= 1");
  }
};

enum class RiskKind { softmax_cross_entropy };

struct RiskSpec {
  RiskKind kind = RiskKind::softmax_cross_entropy;
  // Upper bound on the Lipschitz constant of the risk gradient. For summed
  // softmax cross-entropy the gradient is column-separable with per-column
  // constant <= 1, so 1 is a safe bound.
  double lipschitz_H = 1.0;
};

// Samples are matrix columns: x is n_0 x N, y is n_L x N one-hot.
struct Dataset {
  Matrix x;
  Matrix y;
  std::string name;

  Eigen::Index num_samples() const { return x.cols(); }
};

}  // namespace dladmm
