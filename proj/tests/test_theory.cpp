#include <doctest.h>

#include <cmath>

#include "scenarios.hpp"
#include "sonata/error.hpp"
#include "sonata/theory.hpp"

using namespace sonata;

namespace {

TheoryInputs base_inputs() {
  TheoryInputs in;
  in.L = 2.0;
  in.L_mx = 3.0;
  in.w_mx = 4.0;
  in.rho = 0.1;
  in.xi = 2.0;
  in.gamma = 1.1 * (1.0 / 4.0 + 2.0 * 4.0 / 9.0) / (1.0 - 0.05);
  in.alpha = 0.05;
  in.dim = 10;
  in.theta = 0.5;
  in.kappa = 1.0;
  return in;
}

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Errc::Io;
}

}  // namespace

TEST_CASE("zero rho simplifies c2 and c3") {
  TheoryInputs in = base_inputs();
  in.rho = 0.0;
  const TheoryConstants c = constants(in);
  CHECK(c.c2 == doctest::Approx(1.0 / in.alpha - in.L / 2.0 - in.xi / 2.0));
  CHECK(c.c3 == doctest::Approx(in.gamma - c.c1));
  CHECK(c.rho_condition_ok);
}

TEST_CASE("dual-path evaluation") {
  CHECK(testsupport::theory_dual_path_max_rel_error(100, 2024) <= 1e-14);
}

TEST_CASE("strongly convex reduction of the condition number") {
  // theta = 1/2 and kappa = sqrt(mu): L / kappa^(1/theta) = L / mu.
  const double L = 8.0;
  const double mu = 0.5;
  const double kappa = std::sqrt(mu);
  CHECK(L / std::pow(kappa, 1.0 / 0.5) == doctest::Approx(L / mu));
}

TEST_CASE("kappa-dependent fields") {
  TheoryInputs in = base_inputs();
  in.kappa.reset();
  const TheoryConstants no_kappa = constants(in);
  CHECK(no_kappa.c5);
  CHECK(!no_kappa.c6);
  CHECK(!no_kappa.omega);
  in.theta.reset();
  const TheoryConstants bare = constants(in);
  CHECK(!bare.c5);
  CHECK(!bare.tau);
}

TEST_CASE("omega grows with kappa and never exceeds omega prime") {
  TheoryInputs in = base_inputs();
  in.sanitize = true;
  double prev = 0.0;
  for (double kappa : {0.01, 0.1, 0.5, 1.0, 2.0, 10.0, 100.0}) {
    in.kappa = kappa;
    const TheoryConstants c = constants(in);
    REQUIRE(c.omega);
    CHECK(*c.omega > prev);
    prev = *c.omega;
    CHECK(*c.omega <= c.omega_prime);
    CHECK(*c.tau > 0.0);
    CHECK(*c.tau < 1.0);
  }
}

TEST_CASE("c4 is nonnegative whenever c2 > 0") {
  // The first branch of the max is 14 gamma rho^2 L_mx^2 / c2 >= 0, so the
  // -1/xi term can only pull the second branch down.
  TheoryInputs in = base_inputs();
  in.rho = 0.0;
  in.xi = 0.01;
  in.gamma = 1.1 * (1.0 / (2.0 * in.xi) + in.L * in.w_mx / (in.L_mx * in.L_mx));
  in.alpha = 0.001;
  const TheoryConstants c = constants(in);
  CHECK((5.0 * in.gamma * 0.0 + c.c1 - 1.0 / in.xi) / c.c3 < 0.0);
  CHECK(c.c4 == 0.0);
  CHECK(!c.c4_negative);
  CHECK(std::isinf(c.omega_prime));
  CHECK(c.tau_prime == 0.0);

  // Outside the regime the unclamped value does go negative; sanitize clamps it.
  in = base_inputs();
  in.alpha = 10.0;
  in.rho = 0.2;
  const TheoryConstants raw = evaluate_constants(in);
  REQUIRE(raw.c2 < 0.0);
  CHECK(raw.c4 < 0.0);
  CHECK(raw.c4_negative);
  in.sanitize = true;
  CHECK(evaluate_constants(in).c4 == 0.0);
}

TEST_CASE("regime and input validation") {
  TheoryInputs in = base_inputs();
  in.alpha = 10.0;
  CHECK(code_of([&] { constants(in); }) == Errc::InvalidRegime);
  in = base_inputs();
  in.gamma = 1e-3;
  CHECK(code_of([&] { constants(in); }) == Errc::InvalidRegime);
  in = base_inputs();
  in.rho = 1.0;
  CHECK(code_of([&] { constants(in); }) == Errc::BadHyper);
  in = base_inputs();
  in.kappa = -1.0;
  CHECK(code_of([&] { constants(in); }) == Errc::BadHyper);
  in = base_inputs();
  in.rho = 0.5;
  CHECK_FALSE(evaluate_constants(in).rho_condition_ok);
}

TEST_CASE("iteration predictions") {
  CHECK(predicted_iterations(0.9, 1e-6) == 132);
  CHECK(predicted_iterations(0.9, 1.0) == 0);
  CHECK(predicted_iterations(0.5, 0.25) == 2);
  CHECK(code_of([] { predicted_iterations(1.0, 0.1); }) == Errc::BadHyper);

  TheoryInputs in = base_inputs();
  const TheoryConstants c = constants(in);
  CHECK(predicted_complexity(c, 1e-6) == predicted_iterations(*c.tau, 1e-6));
  in.theta = 0.75;
  const TheoryConstants sub = constants(in);
  CHECK(code_of([&] { predicted_complexity(sub, 1e-6); }) == Errc::RegimeNotApplicable);
  in = base_inputs();
  in.kappa.reset();
  const TheoryConstants nok = constants(in);
  CHECK(code_of([&] { predicted_complexity(nok, 1e-6); }) == Errc::RegimeNotApplicable);
}

TEST_CASE("corollary threshold") {
  CHECK(corollary_rho_threshold(1.0, 1.0, 1.0) == doctest::Approx(1.0 / std::sqrt(68.0)));
  CHECK(corollary_rho_threshold(1.0, 1.0, 1.0) == doctest::Approx(0.1213).epsilon(1e-3));
  // As w_mx -> 0 with L = L_mx the second term tends to 1/sqrt(26) < 1/sqrt(5).
  CHECK(corollary_rho_threshold(1.0, 1.0, 1e-9) == doctest::Approx(1.0 / std::sqrt(26.0)));
  CHECK(corollary_rho_threshold(10.0, 1.0, 1.0) == doctest::Approx(1.0 / std::sqrt(5.0)));
}

TEST_CASE("sublinear exponent") {
  CHECK(predicted_sublinear_exponent(0.75) == doctest::Approx(0.5));
  CHECK(predicted_sublinear_exponent(2.0 / 3.0) == doctest::Approx(1.0));
  CHECK(predicted_sublinear_exponent(0.5 + 1e-9) > 1e8);
  CHECK(code_of([] { predicted_sublinear_exponent(0.5); }) == Errc::ExponentUnbounded);
  CHECK(code_of([] { predicted_sublinear_exponent(0.3); }) == Errc::ExponentUnbounded);
}

TEST_CASE("tune output lies in the valid regime") {
  const auto s = testsupport::tune_sweep(100, 123);
  CHECK(s.problems == 100);
  CHECK(s.failures == 0);
}
