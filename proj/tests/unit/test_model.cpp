#include <doctest.h>

#include "dladmm/energy.hpp"
#include "support/test_support.hpp"

using namespace dladmm;

namespace {

Dataset small_dataset(int n_in, int n_out, int N, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Dataset d;
  d.x.resize(n_in, N);
  for (Eigen::Index j = 0; j < N; ++j)
    for (Eigen::Index i = 0; i < n_in; ++i) d.x(i, j) = gauss(rng);
  d.y = Matrix::Zero(n_out, N);
  for (int j = 0; j < N; ++j) d.y(j % n_out, j) = 1.0;
  return d;
}

}  // namespace

TEST_CASE("activation applies relu and leaky relu elementwise") {
  Matrix z(2, 2);
  z << -1.0, 2.0, 0.0, -3.0;

  Activation relu;
  Matrix r = relu.apply(z);
  CHECK(r(0, 0) == 0.0);
  CHECK(r(0, 1) == 2.0);
  CHECK(r(1, 0) == 0.0);
  CHECK(r(1, 1) == 0.0);

  Activation leaky{ActivationKind::leaky_relu, 0.1};
  Matrix l = leaky.apply(z);
  CHECK(l(0, 0) == doctest::Approx(-0.1));
  CHECK(l(1, 1) == doctest::Approx(-0.3));
  CHECK(leaky.slope() == 0.1);
  CHECK(relu.slope() == 0.0);
}

TEST_CASE("architecture validation rejects bad shapes") {
  Architecture a;
  a.layer_dims = {784, 100};
  CHECK_THROWS_AS(a.validate(), Error);
  a.layer_dims = {784, 0, 10};
  CHECK_THROWS_AS(a.validate(), Error);
  a.layer_dims = {784, 100, 10};
  CHECK_NOTHROW(a.validate());
  a.activation.kind = ActivationKind::leaky_relu;
  a.activation.leaky_slope = 1.5;
  CHECK_THROWS_AS(a.validate(), Error);
}

TEST_CASE("rho schedule: fixed, geometric growth, cap") {
  RhoSchedule fixed;
  CHECK(fixed.rho_at(1e-6, 0) == 1e-6);
  CHECK(fixed.rho_at(1e-6, 500) == 1e-6);

  RhoSchedule geo{RhoScheduleKind::geometric, 10.0, 100, 1.0};
  CHECK(geo.rho_at(1e-6, 0) == 1e-6);
  CHECK(geo.rho_at(1e-6, 99) == 1e-6);
  CHECK(geo.rho_at(1e-6, 100) == doctest::Approx(1e-5));
  CHECK(geo.rho_at(1e-6, 199) == doctest::Approx(1e-5));
  CHECK(geo.rho_at(1e-6, 200) == doctest::Approx(1e-4));
  CHECK(geo.rho_at(1e-6, 100000) == 1.0);  // cap
}

TEST_CASE("hyperparameter validation") {
  Hyperparams h;
  CHECK_NOTHROW(h.validate());
  h.nu = 0.0;
  CHECK_THROWS_AS(h.validate(), Error);
  h = Hyperparams{};
  h.eta = 1.0;
  CHECK_THROWS_AS(h.validate(), Error);
  h = Hyperparams{};
  h.max_iters = 0;
  CHECK_THROWS_AS(h.validate(), Error);
}

TEST_CASE("init_state is forward-consistent: zero phi and zero residual") {
  Architecture arch;
  arch.layer_dims = {6, 4, 3};
  Dataset d = small_dataset(6, 3, 5, 3);
  Hyperparams h;

  NetState s = init_state(arch, d, h);
  REQUIRE(s.num_layers() == 2);
  CHECK(s.W[0].rows() == 4);
  CHECK(s.W[0].cols() == 6);
  CHECK(s.z[1].cols() == 5);
  CHECK(s.u.isZero());
  CHECK(s.b[0].isZero());

  CHECK(phi_value(s, d.x, arch.activation, h.nu, h.rho0) == 0.0);
  CHECK(residual(s, d.x).norm() == 0.0);
  CHECK(s.all_finite());
}

TEST_CASE("init_state is seed-deterministic and seed-sensitive") {
  Architecture arch;
  arch.layer_dims = {6, 4, 3};
  Dataset d = small_dataset(6, 3, 5, 3);
  Hyperparams h;

  NetState s1 = init_state(arch, d, h);
  NetState s2 = init_state(arch, d, h);
  CHECK(s1.W[0] == s2.W[0]);
  CHECK(s1.W[1] == s2.W[1]);

  h.seed = 2;
  NetState s3 = init_state(arch, d, h);
  CHECK(s1.W[0] != s3.W[0]);
}

TEST_CASE("init_state rejects mismatched input dimension") {
  Architecture arch;
  arch.layer_dims = {6, 4, 3};
  Dataset d = small_dataset(5, 3, 4, 3);  // 5 features, arch wants 6
  CHECK_THROWS_AS(init_state(arch, d, Hyperparams{}), Error);
}

TEST_CASE("forward_inference breaks argmax ties toward the lowest index") {
  Architecture arch;
  arch.layer_dims = {2, 2, 3};
  std::vector<Matrix> W{Matrix::Zero(2, 2), Matrix::Zero(3, 2)};
  std::vector<Vector> b{Vector::Zero(2), Vector::Zero(3)};
  Matrix x = Matrix::Ones(2, 1);
  // All logits equal -> class 0.
  Eigen::VectorXi pred = forward_inference(W, b, arch, x);
  CHECK(pred(0) == 0);

  b[1](2) = 1.0;  // now class 2 wins
  pred = forward_inference(W, b, arch, x);
  CHECK(pred(0) == 2);
}

TEST_CASE("accuracy counts argmax matches against one-hot labels") {
  Architecture arch;
  arch.layer_dims = {2, 2, 2};
  std::vector<Matrix> W{Matrix::Identity(2, 2), Matrix::Identity(2, 2)};
  std::vector<Vector> b{Vector::Zero(2), Vector::Zero(2)};
  Dataset d;
  d.x.resize(2, 2);
  d.x << 3.0, 0.0, 0.0, 3.0;  // sample 0 -> class 0, sample 1 -> class 1
  d.y = Matrix::Zero(2, 2);
  d.y(0, 0) = 1.0;
  d.y(0, 1) = 1.0;  // second label wrong on purpose
  CHECK(accuracy(W, b, arch, d) == doctest::Approx(0.5));
}
