#include <doctest.h>

#include "dladmm/trainer.hpp"
#include "support/test_support.hpp"

using namespace dladmm;

namespace {

Dataset blob_dataset(int n_in, int n_out, int N, std::uint64_t seed) {
  // Linearly separable blobs: class c gets a bump on feature c.
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 0.1);
  Dataset d;
  d.x.resize(n_in, N);
  d.y = Matrix::Zero(n_out, N);
  for (int j = 0; j < N; ++j) {
    const int c = j % n_out;
    for (int i = 0; i < n_in; ++i) d.x(i, j) = noise(rng) + (i == c ? 1.0 : 0.0);
    d.y(c, j) = 1.0;
  }
  return d;
}

}  // namespace

TEST_CASE("ck_sequence is the running minimum and rejects empty input") {
  std::vector<IterationRecord> h(4);
  h[0].ck_term = 5.0;
  h[1].ck_term = 7.0;
  h[2].ck_term = 2.0;
  h[3].ck_term = 3.0;
  auto c = ck_sequence(h);
  CHECK(c == std::vector<double>{5.0, 5.0, 2.0, 2.0});
  CHECK_THROWS_AS(ck_sequence({}), Error);
}

TEST_CASE("train with healthy rho: lagrangian non-increasing, lemma2 small") {
  Architecture arch;
  arch.layer_dims = {8, 6, 6, 4};
  Dataset data = blob_dataset(8, 4, 40, 31);
  Hyperparams h;
  h.nu = 1e-3;
  h.rho0 = 4.0;  // > 2H
  h.max_iters = 15;
  h.fista_max_iters = 500;

  NetState state;
  auto history = train(arch, h, RiskSpec{}, data, nullptr, &state);
  REQUIRE(history.size() == 15);
  for (std::size_t k = 1; k < history.size(); ++k) {
    CHECK(history[k].descent_ok);
    CHECK(history[k].lagrangian <=
          history[k - 1].lagrangian + 1e-9 * std::abs(history[k - 1].lagrangian));
  }
  for (const auto& rec : history) CHECK(rec.lemma2 < 1e-4);
  auto cks = ck_sequence(history);
  for (std::size_t k = 1; k < cks.size(); ++k) CHECK(cks[k] <= cks[k - 1]);
  CHECK(state.all_finite());
}

TEST_CASE("descent diagnostics wire up Property-2 quantities") {
  IterationRecord prev, cur;
  prev.lagrangian = 10.0;
  cur.lagrangian = 9.0;
  cur.rho_used = 4.0;
  cur.ck_term = 1.0;
  cur.tau = {0.5};
  cur.theta = {2.0, 3.0};
  Hyperparams h;
  h.nu = 0.8;
  RiskSpec risk;  // H = 1

  auto d = descent_diagnostics(prev, cur, h, risk);
  CHECK(d.C1 == doctest::Approx(4.0 / 2.0 - 0.5 - 1.0 / 4.0));
  CHECK(d.rho_threshold_ok);
  CHECK(d.C2_empirical == doctest::Approx(0.4));  // nu/2 is the smallest
  CHECK(d.descent_gap == doctest::Approx(1.0));
  CHECK(d.inequality_ok);

  cur.rho_used = 1.0;
  d = descent_diagnostics(prev, cur, h, risk);
  CHECK_FALSE(d.rho_threshold_ok);
}

TEST_CASE("training histories are deterministic for a fixed seed") {
  Architecture arch;
  arch.layer_dims = {8, 6, 4};
  Dataset data = blob_dataset(8, 4, 30, 32);
  Hyperparams h;
  h.rho0 = 1.0;
  h.max_iters = 5;

  NetState s1, s2;
  auto h1 = train(arch, h, RiskSpec{}, data, nullptr, &s1);
  auto h2 = train(arch, h, RiskSpec{}, data, nullptr, &s2);
  REQUIRE(h1.size() == h2.size());
  for (std::size_t k = 0; k < h1.size(); ++k) {
    CHECK(h1[k].lagrangian == h2[k].lagrangian);
    CHECK(h1[k].objective_F == h2[k].objective_F);
    CHECK(h1[k].residual_norm == h2[k].residual_norm);
    CHECK(h1[k].ck_term == h2[k].ck_term);
    CHECK(h1[k].tau == h2[k].tau);
    CHECK(h1[k].theta == h2[k].theta);
  }
  for (int l = 0; l < s1.num_layers(); ++l) {
    CHECK(s1.W[l] == s2.W[l]);
    CHECK(s1.b[l] == s2.b[l]);
  }
}

TEST_CASE("rho schedule feeds through to rho_used and resets descent_ok") {
  Architecture arch;
  arch.layer_dims = {8, 6, 4};
  Dataset data = blob_dataset(8, 4, 30, 33);
  Hyperparams h;
  h.rho0 = 0.5;
  h.rho_schedule = RhoSchedule{RhoScheduleKind::geometric, 10.0, 3,
                               std::numeric_limits<double>::infinity()};
  h.max_iters = 7;

  auto history = train(arch, h, RiskSpec{}, data, nullptr, nullptr);
  CHECK(history[0].rho_used == 0.5);
  CHECK(history[2].rho_used == 0.5);
  CHECK(history[3].rho_used == doctest::Approx(5.0));
  CHECK(history[6].rho_used == doctest::Approx(50.0));
  CHECK(history[3].descent_ok);  // forced on the switch iteration
}

TEST_CASE("lemma2_check is zero when the dual exactly cancels the risk grad") {
  std::mt19937_64 rng(34);
  auto p = testsup::random_tiny(rng);
  p.state.u = -risk_grad(p.state.z.back(), p.data.y);
  CHECK(lemma2_check(p.state, p.data.y) == 0.0);
}

TEST_CASE("record coefficient vectors have one slot per layer") {
  Architecture arch;
  arch.layer_dims = {8, 6, 6, 4};
  Dataset data = blob_dataset(8, 4, 20, 35);
  Hyperparams h;
  h.rho0 = 1.0;
  h.max_iters = 1;
  auto history = train(arch, h, RiskSpec{}, data, nullptr, nullptr);
  REQUIRE(history.size() == 1);
  CHECK(history[0].tau_bar.size() == 2);
  CHECK(history[0].tau.size() == 2);
  CHECK(history[0].theta_bar.size() == 3);
  CHECK(history[0].theta.size() == 3);
  for (double v : history[0].theta) CHECK(v > 0.0);
}
