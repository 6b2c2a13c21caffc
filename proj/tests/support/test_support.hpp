#pragma once

// Helpers shared by the unit and acceptance suites: finite-difference
// oracles, random tiny problem instances, slow reference solvers for the
// subproblems, and synthetic IDX fixtures shaped like MNIST for when the
// real files are not on disk.

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>

#include "dladmm/data.hpp"
#include "dladmm/energy.hpp"

namespace testsup {

using dladmm::Activation;
using dladmm::Architecture;
using dladmm::Dataset;
using dladmm::Matrix;
using dladmm::NetState;
using dladmm::Vector;

inline double rel_err(const Matrix& got, const Matrix& want) {
  return (got - want).norm() / std::max(1.0, want.norm());
}

// Central finite differences of a scalar functional over every entry of m.
// m is mutated in place during evaluation and restored afterwards.
inline Matrix fd_grad(Matrix& m, const std::function<double()>& f,
                      double h = 1e-6) {
  Matrix g(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double saved = m(i, j);
      m(i, j) = saved + h;
      const double fp = f();
      m(i, j) = saved - h;
      const double fm = f();
      m(i, j) = saved;
      g(i, j) = (fp - fm) / (2.0 * h);
    }
  }
  return g;
}

inline Vector fd_grad_vec(Vector& v, const std::function<double()>& f,
                          double h = 1e-6) {
  Matrix m = v;
  Vector g(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double saved = v(i);
    v(i) = saved + h;
    const double fp = f();
    v(i) = saved - h;
    const double fm = f();
    v(i) = saved;
    g(i) = (fp - fm) / (2.0 * h);
  }
  return g;
}

struct TinyProblem {
  Architecture arch;
  Dataset data;
  NetState state;
};

// Random small instance: <= 4 units per layer, <= 5 samples, fully random
// (not forward-consistent) state so all coupling terms are active.
inline TinyProblem random_tiny(std::mt19937_64& rng, bool leaky = false) {
  std::uniform_int_distribution<int> dim(1, 4);
  std::uniform_int_distribution<int> nlayers(2, 3);
  std::uniform_int_distribution<int> nsamp(1, 5);
  std::normal_distribution<double> gauss(0.0, 1.0);

  TinyProblem p;
  const int L = nlayers(rng);
  p.arch.layer_dims.resize(L + 1);
  for (int& d : p.arch.layer_dims) d = dim(rng);
  if (leaky) {
    p.arch.activation.kind = dladmm::ActivationKind::leaky_relu;
    p.arch.activation.leaky_slope = 0.1;
  }

  const int N = nsamp(rng);
  auto randm = [&](Eigen::Index r, Eigen::Index c) {
    Matrix m(r, c);
    for (Eigen::Index j = 0; j < c; ++j)
      for (Eigen::Index i = 0; i < r; ++i) m(i, j) = gauss(rng);
    return m;
  };

  p.data.x = randm(p.arch.layer_dims[0], N);
  p.data.y = Matrix::Zero(p.arch.layer_dims[L], N);
  std::uniform_int_distribution<int> cls(0, p.arch.layer_dims[L] - 1);
  for (int j = 0; j < N; ++j) p.data.y(cls(rng), j) = 1.0;

  for (int l = 0; l < L; ++l) {
    const int rows = p.arch.layer_dims[l + 1];
    const int cols = p.arch.layer_dims[l];
    p.state.W.push_back(randm(rows, cols));
    p.state.b.push_back(randm(rows, 1));
    p.state.z.push_back(randm(rows, N));
    if (l < L - 1) p.state.a.push_back(randm(rows, N));
  }
  p.state.u = randm(p.arch.layer_dims[L], N);
  return p;
}

// Reference minimizer of (z-c)^2 + (a-f(z))^2 by two-stage grid refinement.
inline double z_hidden_grid_oracle(double c, double a, double slope) {
  auto obj = [&](double z) {
    const double fz = z > 0.0 ? z : slope * z;
    return (z - c) * (z - c) + (a - fz) * (a - fz);
  };
  double lo = -(std::abs(c) + std::abs(a) + 1.0);
  double hi = -lo;
  double best = 0.0, best_obj = obj(0.0);
  for (int stage = 0; stage < 5; ++stage) {
    const double step = (hi - lo) / 4000.0;
    for (int i = 0; i <= 4000; ++i) {
      const double z = lo + step * i;
      const double o = obj(z);
      if (o < best_obj) {
        best_obj = o;
        best = z;
      }
    }
    lo = best - 2.0 * step;
    hi = best + 2.0 * step;
  }
  return best;
}

// Long-run plain gradient descent on R(z;y) + <u, z-c> + (rho/2)|z-c|^2.
inline Matrix fista_gd_oracle(const Matrix& z0, const Matrix& y,
                              const Matrix& u, const Matrix& c, double rho,
                              int iters = 200000) {
  const double step = 1.0 / (1.0 + rho);
  Matrix z = z0;
  for (int k = 0; k < iters; ++k) {
    const Matrix g = dladmm::risk_grad(z, y) + u + rho * (z - c);
    z -= step * g;
    if (g.cwiseAbs().maxCoeff() < 1e-13) break;
  }
  return z;
}

inline double output_z_objective(const Matrix& z, const Matrix& y,
                                 const Matrix& u, const Matrix& c, double rho) {
  return dladmm::risk_value(z, y) + (u.array() * (z - c).array()).sum() +
         0.5 * rho * (z - c).squaredNorm();
}

// MNIST-shaped synthetic fixtures: 28x28 images in 10 classes, each class
// lighting up a distinct pair of rows, bright enough to be near separable.
inline void write_synthetic_mnist(const std::string& images_path,
                                  const std::string& labels_path, int n,
                                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> cls(0, 9);
  std::uniform_int_distribution<int> bright(170, 255);
  std::uniform_int_distribution<int> dark(0, 30);

  dladmm::IdxTensor images, labels;
  images.dims = {std::size_t(n), 28, 28};
  images.data.resize(std::size_t(n) * 784);
  labels.dims = {std::size_t(n)};
  labels.data.resize(n);

  for (int i = 0; i < n; ++i) {
    const int c = cls(rng);
    labels.data[i] = std::uint8_t(c);
    std::uint8_t* img = images.data.data() + std::size_t(i) * 784;
    for (int r = 0; r < 28; ++r) {
      const bool on = r == 4 + 2 * c || r == 5 + 2 * c;
      for (int col = 0; col < 28; ++col)
        img[r * 28 + col] = std::uint8_t(on ? bright(rng) : dark(rng));
    }
  }
  dladmm::write_idx(images_path, images);
  dladmm::write_idx(labels_path, labels);
}

struct DataPaths {
  std::string train_images, train_labels, test_images, test_labels;
  bool real = false;  // true when the actual MNIST files were found
};

inline bool exists_any(const std::filesystem::path& dir, const char* stem,
                       std::string& out) {
  namespace fs = std::filesystem;
  for (const char* suffix : {"", ".gz"}) {
    fs::path p = dir / (std::string(stem) + suffix);
    if (fs::exists(p)) {
      out = p.string();
      return true;
    }
  }
  return false;
}

inline bool find_mnist(DataPaths& out) {
  namespace fs = std::filesystem;
  std::vector<fs::path> dirs;
  if (const char* env = std::getenv("DLADMM_MNIST_DIR")) dirs.push_back(env);
  dirs.push_back("data");
  dirs.push_back("../data");
  dirs.push_back("../../data");
  for (const auto& dir : dirs) {
    if (exists_any(dir, "train-images-idx3-ubyte", out.train_images) &&
        exists_any(dir, "train-labels-idx1-ubyte", out.train_labels) &&
        exists_any(dir, "t10k-images-idx3-ubyte", out.test_images) &&
        exists_any(dir, "t10k-labels-idx1-ubyte", out.test_labels)) {
      out.real = true;
      return true;
    }
  }
  return false;
}

// Real MNIST when present, otherwise deterministic synthetic fixtures
// written under `dir` (reused across calls).
inline DataPaths ensure_dataset(const std::string& dir, int train_n = 12000,
                                int test_n = 2000) {
  DataPaths paths;
  if (find_mnist(paths)) return paths;

  namespace fs = std::filesystem;
  fs::create_directories(dir);
  paths.train_images = dir + "/train-images-idx3-ubyte";
  paths.train_labels = dir + "/train-labels-idx1-ubyte";
  paths.test_images = dir + "/t10k-images-idx3-ubyte";
  paths.test_labels = dir + "/t10k-labels-idx1-ubyte";
  if (!fs::exists(paths.train_images) || !fs::exists(paths.train_labels))
    write_synthetic_mnist(paths.train_images, paths.train_labels, train_n, 7);
  if (!fs::exists(paths.test_images) || !fs::exists(paths.test_labels))
    write_synthetic_mnist(paths.test_images, paths.test_labels, test_n, 8);
  return paths;
}

}  // namespace testsup
