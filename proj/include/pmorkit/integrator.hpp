#pragma once

#include "pmorkit/errors.hpp"

namespace pmk {

/// Generalized-alpha coefficients derived from the spectral radius at the
/// high-frequency limit. Second-order accurate for any rho_inf in [0, 1].
struct GenAlpha {
  double alpha_m = 0.0;
  double alpha_f = 0.0;
  double beta = 0.25;
  double gamma = 0.5;

  static GenAlpha from_rho_inf(double rho_inf) {
    if (!(rho_inf >= 0.0 && rho_inf <= 1.0))
      fail(ErrorCode::invalid_config, "integrator: rho_inf must be in [0,1]");
    GenAlpha g;
    g.alpha_m = (2.0 * rho_inf - 1.0) / (rho_inf + 1.0);
    g.alpha_f = rho_inf / (rho_inf + 1.0);
    g.beta = 0.25 * (1.0 - g.alpha_m + g.alpha_f) * (1.0 - g.alpha_m + g.alpha_f);
    g.gamma = 0.5 - g.alpha_m + g.alpha_f;
    return g;
  }
};

/// Newmark kinematics expressed with the end-of-step displacement as the
/// primary unknown.
struct NewmarkUpdate {
  double beta;
  double gamma;
  double dt;

  // a_{n+1}(d_{n+1}) and v_{n+1}(a_{n+1})
  template <class Vec>
  Vec acceleration(const Vec& d_new, const Vec& d_old, const Vec& v_old,
                   const Vec& a_old) const {
    return (d_new - d_old - dt * v_old) / (beta * dt * dt) -
           (0.5 - beta) / beta * a_old;
  }
  template <class Vec>
  Vec velocity(const Vec& a_new, const Vec& v_old, const Vec& a_old) const {
    return v_old + dt * ((1.0 - gamma) * a_old + gamma * a_new);
  }

  double da_dd() const { return 1.0 / (beta * dt * dt); }
  double dv_dd() const { return gamma / (beta * dt); }
};

struct TimeIntegrator {
  double dt = 1e-3;
  double t_end = 0.8;
  double rho_inf = 0.8;
  double theta = 0.5;  // windkessel / active-stress blending

  void validate() const {
    if (!(dt > 0.0) || !(t_end > 0.0))
      fail(ErrorCode::invalid_config, "integrator: dt and t_end must be > 0");
    if (!(theta >= 0.5 && theta <= 1.0))
      fail(ErrorCode::invalid_config, "integrator: theta must be in [0.5,1]");
    GenAlpha::from_rho_inf(rho_inf);
  }
  GenAlpha gen_alpha() const { return GenAlpha::from_rho_inf(rho_inf); }
  int steps() const { return static_cast<int>(std::llround(t_end / dt)); }
};

struct SolverTolerances {
  double tol_s_res = 1e-6;   // structural residual, inf-norm [mN]
  double tol_s_inc = 1e-8;   // displacement increment, inf-norm [mm]
  double tol_0d_res = 1e-8;  // windkessel residual, 2-norm [mm^3/s]
  double tol_0d_inc = 1e-8;  // windkessel increment, 2-norm
  int max_newton = 25;

  void validate() const {
    if (!(tol_s_res > 0 && tol_s_inc > 0 && tol_0d_res > 0 && tol_0d_inc > 0))
      fail(ErrorCode::invalid_config, "tolerances must be > 0");
    if (max_newton < 1)
      fail(ErrorCode::invalid_config, "max_newton must be >= 1");
  }
};

}  // namespace pmk
