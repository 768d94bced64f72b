#include "pmorkit/windkessel.hpp"

#include <cmath>

#include "pmorkit/activation.hpp"
#include "pmorkit/errors.hpp"

namespace pmk {

void AtrialParams::validate() const {
  if (!(cycle > 0.0) || !(gamma > 0.0) || !(t_on < t_off))
    fail(ErrorCode::invalid_config, "atrial: bad pulse definition");
}

void WindkesselParams::validate() const {
  if (!(C_p > 0.0 && C_d > 0.0 && R_p > 0.0 && R_d > 0.0 && L_p > 0.0))
    fail(ErrorCode::invalid_config, "windkessel: circuit constants must be > 0");
  if (!(R_min > 0.0) || !(R_min < R_max))
    fail(ErrorCode::invalid_config, "windkessel: need 0 < R_min < R_max");
  if (!(k_valve > 0.0))
    fail(ErrorCode::invalid_config, "windkessel: k_valve must be > 0");
  atrial.validate();
}

double valve_resistance(double p_up, double p_down, const WindkesselParams& wk) {
  return wk.R_min +
         (wk.R_max - wk.R_min) * sigmoid_up(p_down - p_up, wk.k_valve);
}

double atrial_pressure(double t, const WindkesselParams& wk) {
  const AtrialParams& at = wk.atrial;
  const double tc = t - at.cycle * std::floor(t / at.cycle);
  return at.p_base + at.p_pulse * sigmoid_up(tc - at.t_on, at.gamma) *
                         sigmoid_down(tc - at.t_off, at.gamma);
}

namespace {

struct BlendedCircuit {
  WkState p;     // theta-blended unknowns
  double p_at;   // atrial pressure at the blended time
  double r_av;   // atrioventricular valve resistance
  double r_sl;   // semilunar valve resistance
};

BlendedCircuit blend(const WkState& p_new, const WkState& p_old, double dt,
                     double t_old, double theta, const WindkesselParams& wk) {
  BlendedCircuit b;
  b.p = theta * p_new + (1.0 - theta) * p_old;
  b.p_at = atrial_pressure(t_old + theta * dt, wk);
  b.r_av = valve_resistance(b.p_at, b.p(0), wk);
  b.r_sl = valve_resistance(b.p(0), b.p(1), wk);
  return b;
}

// d/dx of the valve sigmoid with respect to (p_down - p_up).
double valve_slope(double p_up, double p_down, const WindkesselParams& wk) {
  const double t = std::tanh((p_down - p_up) / wk.k_valve);
  return (wk.R_max - wk.R_min) * 0.5 * (1.0 - t * t) / wk.k_valve;
}

}  // namespace

WkState wk_residual(const WkState& p_new, const WkState& p_old, double vol_new,
                    double vol_old, double dt, double t_old, double theta,
                    const WindkesselParams& wk) {
  if (!(dt > 0.0)) fail(ErrorCode::invalid_input, "wk_residual: dt must be > 0");
  const BlendedCircuit b = blend(p_new, p_old, dt, t_old, theta, wk);
  const double vdot = (vol_new - vol_old) / dt;

  WkState r;
  r(0) = (b.p(0) - b.p_at) / b.r_av + (b.p(0) - b.p(1)) / b.r_sl + vdot;
  r(1) = b.p(3) - (b.p(0) - b.p(1)) / b.r_sl +
         wk.C_p * (p_new(1) - p_old(1)) / dt;
  r(2) = b.p(3) + (b.p(2) - b.p(1)) / wk.R_p +
         (wk.L_p / wk.R_p) * (p_new(3) - p_old(3)) / dt;
  r(3) = (b.p(2) - wk.p_ref) / wk.R_d - b.p(3) +
         wk.C_d * (p_new(2) - p_old(2)) / dt;
  return r;
}

WkLinearization wk_jacobian(const WkState& p_new, const WkState& p_old,
                            double dt, double t_old, double theta,
                            const WindkesselParams& wk) {
  const BlendedCircuit b = blend(p_new, p_old, dt, t_old, theta, wk);

  // Valve flows differentiated wrt the blended pressures.
  const double q_av = (b.p(0) - b.p_at) / b.r_av;
  const double q_sl = (b.p(0) - b.p(1)) / b.r_sl;
  const double drav_dpv = valve_slope(b.p_at, b.p(0), wk);
  const double drsl_dpv = -valve_slope(b.p(0), b.p(1), wk);
  const double drsl_dpp = valve_slope(b.p(0), b.p(1), wk);

  const double dqav_dpv = 1.0 / b.r_av - q_av / b.r_av * drav_dpv;
  const double dqsl_dpv = 1.0 / b.r_sl - q_sl / b.r_sl * drsl_dpv;
  const double dqsl_dpp = -1.0 / b.r_sl - q_sl / b.r_sl * drsl_dpp;

  Eigen::Matrix4d j = Eigen::Matrix4d::Zero();
  // Row 0: q_av + q_sl + vdot
  j(0, 0) = dqav_dpv + dqsl_dpv;
  j(0, 1) = dqsl_dpp;
  // Row 1: q_p - q_sl + C_p dp_p/dt
  j(1, 0) = -dqsl_dpv;
  j(1, 1) = -dqsl_dpp;
  j(1, 3) = 1.0;
  // Row 2: q_p + (p_d - p_p)/R_p + (L_p/R_p) dq_p/dt
  j(2, 1) = -1.0 / wk.R_p;
  j(2, 2) = 1.0 / wk.R_p;
  j(2, 3) = 1.0;
  // Row 3: (p_d - p_ref)/R_d - q_p + C_d dp_d/dt
  j(3, 2) = 1.0 / wk.R_d;
  j(3, 3) = -1.0;

  // Chain rule to the end-of-step unknowns, then the backward differences.
  j *= theta;
  j(1, 1) += wk.C_p / dt;
  j(2, 3) += wk.L_p / (wk.R_p * dt);
  j(3, 2) += wk.C_d / dt;

  return {j, 1.0 / dt};
}

}  // namespace pmk
