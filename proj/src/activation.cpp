#include "pmorkit/activation.hpp"

#include <cmath>

#include "pmorkit/errors.hpp"

namespace pmk {

void ActivationParams::validate() const {
  if (!(sigma > 0.0)) fail(ErrorCode::invalid_config, "activation: sigma must be > 0");
  if (!(gamma > 0.0)) fail(ErrorCode::invalid_config, "activation: gamma must be > 0");
  if (!(t_sys < t_dias))
    fail(ErrorCode::invalid_config, "activation: t_sys must precede t_dias");
  if (!(alpha_max > 0.0))
    fail(ErrorCode::invalid_config, "activation: alpha_max must be > 0");
  if (!(alpha_min < 0.0))
    fail(ErrorCode::invalid_config, "activation: alpha_min must be < 0");
}

// Logistic form of 0.5*(1 +- tanh(dt/gamma)): identical values, but the
// small tail keeps full relative accuracy, which the valve resistances need
// (the open-valve flow amplifies any absolute error of the tail).
double sigmoid_up(double dt, double gamma) {
  return 1.0 / (1.0 + std::exp(-2.0 * dt / gamma));
}

double sigmoid_down(double dt, double gamma) {
  return 1.0 / (1.0 + std::exp(2.0 * dt / gamma));
}

double activation_rate(double t, const ActivationParams& p) {
  const double f = sigmoid_up(t - p.t_sys, p.gamma) * sigmoid_down(t - p.t_dias, p.gamma);
  return p.alpha_max * f + p.alpha_min * (1.0 - f);
}

double step_active_stress(double tau0, double t0, double t1,
                          const ActivationParams& p, double theta) {
  const double dt = t1 - t0;
  const double u0 = activation_rate(t0, p);
  const double u1 = activation_rate(t1, p);
  const double rhs0 = -std::abs(u0) * tau0 + p.sigma * std::max(u0, 0.0);
  const double src1 = p.sigma * std::max(u1, 0.0);
  // (tau1 - tau0)/dt = theta*(-|u1| tau1 + src1) + (1-theta)*rhs0
  return (tau0 + dt * (theta * src1 + (1.0 - theta) * rhs0)) /
         (1.0 + dt * theta * std::abs(u1));
}

}  // namespace pmk
