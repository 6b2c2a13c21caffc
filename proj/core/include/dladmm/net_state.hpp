#pragma once

#include <vector>

#include "dladmm/types.hpp"

namespace dladmm {

// Full optimizer state. Layer l (0..L-1) holds W[l] (n_{l+1} x n_l),
// b[l] (n_{l+1}), z[l] (n_{l+1} x N); a[l] exists for l < L-1 and is the
// activated output of layer l. u is the dual for the output-layer constraint.
struct NetState {
  std::vector<Matrix> W;
  std::vector<Vector> b;
  std::vector<Matrix> z;
  std::vector<Matrix> a;
  Matrix u;

  int num_layers() const { return static_cast<int>(W.size()); }

  // Input to layer l: x for l == 0, else a[l-1].
  const Matrix& layer_input(const Matrix& x, int l) const {
    return l == 0 ? x : a[l - 1];
  }

  bool all_finite() const;
};

// W ~ N(0, 1/n_{l-1}) with a seeded generator, b = 0, z and a by exact
// forward propagation, u = 0. All penalty terms start at zero this way.
NetState init_state(const Architecture& arch, const Dataset& data,
                    const Hyperparams& hyper);

// Argmax of the final linear output per sample, ties toward the lowest index.
Eigen::VectorXi forward_inference(const std::vector<Matrix>& W,
                                  const std::vector<Vector>& b,
                                  const Architecture& arch, const Matrix& x);

double accuracy(const std::vector<Matrix>& W, const std::vector<Vector>& b,
                const Architecture& arch, const Dataset& data);

}  // namespace dladmm
