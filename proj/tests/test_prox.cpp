#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "helpers.hpp"
#include "sonata/error.hpp"
#include "sonata/prox.hpp"

using namespace sonata;

namespace {

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index k = 0;
  for (double x : xs) v(k++) = x;
  return v;
}

double abs_fn(double y) { return std::abs(y); }
double interval_indicator(double y) {
  return std::abs(y) <= 1.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

}  // namespace

TEST_CASE("soft_threshold") {
  CHECK(soft_threshold(vec({3}), 1) == vec({2}));
  CHECK(soft_threshold(vec({0.5, -0.2}), 1) == vec({0, 0}));
  CHECK(soft_threshold(vec({-4, 2, 0}), 1.5).isApprox(vec({-2.5, 0.5, 0})));
}

TEST_CASE("soft_threshold agrees with the brute-force oracle on the documented case") {
  const Vec closed = soft_threshold(vec({-4, 2, 0}), 1.5);
  for (int k = 0; k < 3; ++k) {
    const double v = vec({-4, 2, 0})(k);
    const double brute =
        brute_force_prox_1d([](double y) { return 1.5 * std::abs(y); }, v, 1.0, 1e-4, 1.5);
    CHECK(std::abs(brute - closed(k)) <= 1e-4);
  }
}

TEST_CASE("project_unit_ball") {
  CHECK(project_unit_ball(vec({0.3, 0.4})) == vec({0.3, 0.4}));
  CHECK(project_unit_ball(vec({3, 4})).isApprox(vec({0.6, 0.8}), 1e-15));
  CHECK(project_unit_ball(Vec::Zero(5)) == Vec::Zero(5));
}

TEST_CASE("prox_zero is the identity") {
  CHECK(prox_zero(vec({1, 2})) == vec({1, 2}));
  CHECK(prox_zero(Vec(0)).size() == 0);
  CHECK(prox_zero(vec({-7})) == vec({-7}));
}

TEST_CASE("brute_force_prox_1d reference cases") {
  CHECK(std::abs(brute_force_prox_1d(abs_fn, 3.0, 1.0, 1e-4) - 2.0) <= 1e-4);
  CHECK(std::abs(brute_force_prox_1d([](double) { return 0.0; }, 5.0, 1.0, 1e-4, 0.0) - 5.0) <= 1e-4);
  CHECK(std::abs(brute_force_prox_1d(interval_indicator, 2.0, 1.0, 1e-4) - 1.0) <= 1e-4);
}

TEST_CASE("brute_force_prox_1d reports a minimizer on the window edge") {
  // Slope 50 pulls the minimizer 50 away; the window only reaches 10.
  try {
    brute_force_prox_1d([](double y) { return 50.0 * std::abs(y); }, 100.0, 1.0, 1e-2, 1.0);
    FAIL("expected GridTooCoarse");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::GridTooCoarse);
  }
}

TEST_CASE("closed-form 1-D prox matches the brute-force oracle on random inputs") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> val(-5.0, 5.0);
  std::uniform_real_distribution<double> pos(0.05, 2.0);
  const double grid = 1e-4;
  for (int trial = 0; trial < 100; ++trial) {
    const double v = val(rng);
    const double step = pos(rng);
    const double lambda = pos(rng);
    const double closed_l1 = soft_threshold(vec({v}), step * lambda)(0);
    const double brute_l1 =
        brute_force_prox_1d([lambda](double y) { return lambda * std::abs(y); }, v, step, grid, lambda);
    CHECK(std::abs(closed_l1 - brute_l1) <= grid);

    const double closed_ball = project_unit_ball(vec({v}))(0);
    // Projection can move v by |v| - 1, far beyond step * slope.
    const double brute_ball =
        brute_force_prox_1d(interval_indicator, v, step, grid, (std::abs(v) + 1.0) / step);
    CHECK(std::abs(closed_ball - brute_ball) <= grid);
  }
}

TEST_CASE("prox operators are non-expansive") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> pos(0.01, 3.0);
  const ProxOp ops[] = {l1_prox(0.7), unit_ball_prox(), zero_prox()};
  for (const auto& op : ops) {
    for (int trial = 0; trial < 100; ++trial) {
      const Vec u = testsupport::random_vec(rng, 6, 2.0);
      const Vec v = testsupport::random_vec(rng, 6, 2.0);
      const double step = pos(rng);
      CHECK((op.evaluate(u, step) - op.evaluate(v, step)).norm() <= (u - v).norm() + 1e-12);
    }
  }
}

TEST_CASE("minimizers of r are fixed points for every step") {
  const ProxOp l1 = l1_prox(2.0);
  const ProxOp ball = unit_ball_prox();
  std::mt19937_64 rng(13);
  for (double step : {1e-6, 0.1, 1.0, 100.0}) {
    CHECK(l1.evaluate(Vec::Zero(4), step) == Vec::Zero(4));
    const Vec inside = 0.5 * testsupport::random_vec(rng, 4).normalized();
    CHECK(ball.evaluate(inside, step) == inside);
  }
}

TEST_CASE("prox approaches the identity on dom r as the step shrinks") {
  const ProxOp l1 = l1_prox(1.0);
  const Vec v = vec({0.3, -2.0, 1.5});
  double prev = std::numeric_limits<double>::infinity();
  for (double step : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const double gap = (l1.evaluate(v, step) - v).norm();
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(prev <= 1e-3);
}

TEST_CASE("r values and subdifferential membership") {
  const ProxOp l1 = l1_prox(0.5);
  CHECK(l1.value(vec({1, -2})) == doctest::Approx(1.5));
  CHECK(l1.contains_subgradient(vec({1, 0}), vec({0.5, -0.3}), 1e-12));
  CHECK_FALSE(l1.contains_subgradient(vec({1, 0}), vec({0.4, 0.0}), 1e-12));
  CHECK_FALSE(l1.contains_subgradient(vec({0, 0}), vec({0.0, 0.6}), 1e-12));
  // Minimal-norm element of grad + dr at a kink.
  CHECK(l1.min_norm_subgradient(vec({0, 2}), vec({0.2, 1.0})).isApprox(vec({0.0, 1.5})));
  CHECK(l1.min_norm_subgradient(vec({0}), vec({-0.8})).isApprox(vec({-0.3})));

  const ProxOp ball = unit_ball_prox();
  CHECK(ball.value(vec({0.6, 0.8})) == 0.0);
  CHECK(std::isinf(ball.value(vec({2, 0}))));
  CHECK(ball.contains_subgradient(vec({0.6, 0.8}), vec({1.2, 1.6}), 1e-12));
  CHECK_FALSE(ball.contains_subgradient(vec({0.6, 0.8}), vec({-1.2, -1.6}), 1e-12));
  CHECK_FALSE(ball.contains_subgradient(vec({0.1, 0.1}), vec({0.1, 0.0}), 1e-12));
  // Outward gradient on the sphere is cancelled by the normal cone.
  CHECK(ball.min_norm_subgradient(vec({1, 0}), vec({-3, 1})).isApprox(vec({0, 1})));

  CHECK_THROWS_AS(l1_prox(0.0), Error);
}
