#include "dladmm/net_state.hpp"

#include <random>

namespace dladmm {

bool NetState::all_finite() const {
  auto ok = [](const Matrix& m) { return m.allFinite(); };
  for (const auto& m : W)
    if (!ok(m)) return false;
  for (const auto& v : b)
    if (!v.allFinite()) return false;
  for (const auto& m : z)
    if (!ok(m)) return false;
  for (const auto& m : a)
    if (!ok(m)) return false;
  return u.allFinite();
}

NetState init_state(const Architecture& arch, const Dataset& data,
                    const Hyperparams& hyper) {
  arch.validate();
  const int L = arch.num_layers();
  const Eigen::Index N = data.num_samples();
  if (data.x.rows() != arch.input_dim())
    throw Error(ErrorKind::data, "dataset feature count does not match architecture");
  if (data.y.rows() != arch.num_classes())
    throw Error(ErrorKind::data, "dataset class count does not match architecture");
  if (data.y.cols() != N)
    throw Error(ErrorKind::data, "x/y sample counts differ");

  std::mt19937_64 rng(hyper.seed);
  NetState s;
  s.W.resize(L);
  s.b.resize(L);
  s.z.resize(L);
  s.a.resize(L - 1);
  for (int l = 0; l < L; ++l) {
    const int rows = arch.layer_dims[l + 1];
    const int cols = arch.layer_dims[l];
    std::normal_distribution<double> dist(0.0, 1.0 / std::sqrt(double(cols)));
    s.W[l].resize(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) s.W[l](i, j) = dist(rng);
    s.b[l] = Vector::Zero(rows);
  }
  for (int l = 0; l < L; ++l) {
    const Matrix& in = s.layer_input(data.x, l);
    s.z[l] = s.W[l] * in + s.b[l].replicate(1, N);
    if (l < L - 1) s.a[l] = arch.activation.apply(s.z[l]);
  }
  s.u = Matrix::Zero(arch.num_classes(), N);
  return s;
}

Eigen::VectorXi forward_inference(const std::vector<Matrix>& W,
                                  const std::vector<Vector>& b,
                                  const Architecture& arch, const Matrix& x) {
  const int L = static_cast<int>(W.size());
  if (x.rows() != arch.input_dim())
    throw Error(ErrorKind::data, "input feature count does not match architecture");
  Matrix h = x;
  for (int l = 0; l < L; ++l) {
    Matrix lin = W[l] * h + b[l].replicate(1, h.cols());
    h = (l < L - 1) ? arch.activation.apply(lin) : std::move(lin);
  }
  Eigen::VectorXi pred(h.cols());
  for (Eigen::Index j = 0; j < h.cols(); ++j) {
    int best = 0;
    for (Eigen::Index i = 1; i < h.rows(); ++i)
      if (h(i, j) > h(best, j)) best = static_cast<int>(i);
    pred(j) = best;
  }
  return pred;
}

double accuracy(const std::vector<Matrix>& W, const std::vector<Vector>& b,
                const Architecture& arch, const Dataset& data) {
  Eigen::VectorXi pred = forward_inference(W, b, arch, data.x);
  Eigen::Index hits = 0;
  for (Eigen::Index j = 0; j < pred.size(); ++j) {
    Eigen::Index truth;
    data.y.col(j).maxCoeff(&truth);
    if (pred(j) == truth) ++hits;
  }
  return double(hits) / double(pred.size());
}

}  // namespace dladmm
