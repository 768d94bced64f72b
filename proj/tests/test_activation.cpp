#include <doctest.h>

#include <cmath>
#include <random>

#include "pmorkit/activation.hpp"

using namespace pmk;

namespace {

ActivationParams default_params() { return ActivationParams{}; }

}  // namespace

TEST_SUITE("activation") {

TEST_CASE("sigmoid pair values") {
  CHECK(sigmoid_up(0.0, 0.005) == doctest::Approx(0.5));
  CHECK(sigmoid_down(0.0, 0.005) == doctest::Approx(0.5));
  CHECK(sigmoid_up(1e3, 0.005) == doctest::Approx(1.0).epsilon(1e-12));
  // dt = gamma: 0.5*(1 + tanh(1))
  CHECK(sigmoid_up(0.005, 0.005) ==
        doctest::Approx(0.5 * (1.0 + std::tanh(1.0))).epsilon(1e-15));
  CHECK(0.5 * (1.0 + std::tanh(1.0)) == doctest::Approx(0.8808).epsilon(1e-4));
}

TEST_CASE("activation rate saturates at the configured rates") {
  ActivationParams p = default_params();
  CHECK(activation_rate(0.0, p) == doctest::Approx(p.alpha_min).epsilon(1e-9));
  // Mid-systole with a window much wider than gamma.
  const double mid = 0.5 * (p.t_sys + p.t_dias);
  CHECK(activation_rate(mid, p) == doctest::Approx(p.alpha_max).epsilon(1e-9));
  CHECK(activation_rate(10.0, p) == doctest::Approx(p.alpha_min).epsilon(1e-9));
  for (double t = 0.0; t < 1.0; t += 0.01) {
    const double u = activation_rate(t, p);
    CHECK(u >= p.alpha_min - 1e-12);
    CHECK(u <= p.alpha_max + 1e-12);
  }
}

TEST_CASE("activation rate is shift invariant") {
  ActivationParams p = default_params();
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int i = 0; i < 50; ++i) {
    const double t = dist(rng) + 2.0;
    const double shift = dist(rng);
    ActivationParams shifted = p;
    shifted.t_sys += shift;
    shifted.t_dias += shift;
    CHECK(activation_rate(t, p) == activation_rate(t + shift, shifted));
  }
}

TEST_CASE("active stress follows the closed-form response to constant rates") {
  ActivationParams p = default_params();
  p.sigma = 280.0;
  // Force u(t) ~ a > 0 by putting t deep inside a huge systole window.
  p.t_sys = -1e6;
  p.t_dias = 1e6;
  p.alpha_max = 10.0;
  const double a = p.alpha_max;
  const double t_end = 3.0 / a;
  const int steps = 3000;
  double tau = 0.0;
  for (int i = 0; i < steps; ++i)
    tau = step_active_stress(tau, i * t_end / steps, (i + 1) * t_end / steps, p,
                             0.5);
  // tau(t) = sigma (1 - exp(-a t)); at t = 3/a the factor is 0.95021...
  CHECK(tau / p.sigma ==
        doctest::Approx(1.0 - std::exp(-3.0)).epsilon(1e-5));
  CHECK(1.0 - std::exp(-3.0) == doctest::Approx(0.9502).epsilon(1e-4));

  SUBCASE("negative rate decays toward zero") {
    ActivationParams decay = p;
    decay.t_sys = 1e6 - 1.0;  // u = alpha_min everywhere relevant
    decay.t_dias = 1e6;
    decay.alpha_min = -5.0;
    double tau2 = 200.0;
    const double horizon = 1.0;
    for (int i = 0; i < steps; ++i)
      tau2 = step_active_stress(tau2, i * horizon / steps,
                                (i + 1) * horizon / steps, decay, 0.5);
    CHECK(tau2 == doctest::Approx(200.0 * std::exp(-5.0)).epsilon(1e-4));
  }
}

TEST_CASE("zero rate leaves the stress unchanged") {
  ActivationParams p = default_params();
  p.gamma = 1e-9;  // effectively hard switching so u == alpha_min exactly
  p.alpha_min = -0.0;
  // alpha_min = -0 makes |u| = 0 and the source term zero.
  const double tau = step_active_stress(42.0, 0.0, 0.01, p, 0.5);
  CHECK(tau == doctest::Approx(42.0));
}

TEST_CASE("stress stays within [0, sigma] for the admissible trajectory") {
  ActivationParams p = default_params();
  const double dt = 1e-3;
  double tau = 0.0;
  for (int i = 0; i < 800; ++i) {
    tau = step_active_stress(tau, i * dt, (i + 1) * dt, p, 0.5);
    CHECK(tau >= -1e-9 * p.sigma);
    CHECK(tau <= p.sigma * (1.0 + 1e-9));
  }
  // After a full cycle the stress has decayed far from the bound.
  CHECK(tau < 0.5 * p.sigma);
}

}  // TEST_SUITE
