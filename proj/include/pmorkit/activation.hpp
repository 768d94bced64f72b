#pragma once

namespace pmk {

/// Parameters of the prescribed myofiber activation rate u(t) and of the
/// active-stress upper bound sigma. Units: kPa for sigma, 1/s for rates,
/// s for times.
struct ActivationParams {
  double sigma = 280.0;      // contractility, upper bound of active stress
  double alpha_max = 10.0;   // activation rate during systole
  double alpha_min = -30.0;  // deactivation rate outside systole
  double t_sys = 0.25;       // onset of systole
  double t_dias = 0.50;      // onset of diastole
  double gamma = 0.005;      // sigmoid steepness

  void validate() const;
};

/// Ascending sigmoid 0.5*(1 + tanh(dt/gamma)) in (0,1).
double sigmoid_up(double dt, double gamma);
/// Descending sigmoid 0.5*(1 - tanh(dt/gamma)) in (0,1).
double sigmoid_down(double dt, double gamma);

/// Activation rate u(t) = alpha_max*f + alpha_min*(1-f), where the systole
/// indicator f = S+(t - t_sys) * S-(t - t_dias).
double activation_rate(double t, const ActivationParams& p);

/// Advance the active-stress ODE  tau' = -|u| tau + sigma max(u, 0)  from t0
/// to t1 with the one-step-theta rule (theta shared with the windkessel
/// discretization). Keeps tau inside [0, sigma] for theta >= 1/2.
double step_active_stress(double tau0, double t0, double t1,
                          const ActivationParams& p, double theta);

}  // namespace pmk
