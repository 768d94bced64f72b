#pragma once

#include <Eigen/Dense>

namespace pmk {

/// Prescribed atrial pressure pulse, periodically extended over one cycle.
struct AtrialParams {
  double p_base = 1.0;   // kPa
  double p_pulse = 0.6;  // kPa
  double t_on = 0.06;    // s
  double t_off = 0.18;   // s
  double cycle = 0.8;    // s
  double gamma = 0.005;  // sigmoid steepness, s

  void validate() const;
};

/// Four-element windkessel circuit with smooth diode-like valve resistances.
/// Units: mm^3/kPa compliances, kPa s/mm^3 resistances, kPa s^2/mm^3
/// inertance.
struct WindkesselParams {
  double C_p = 30.0;
  double C_d = 600.0;
  double R_p = 4e-4;
  double R_d = 6e-3;
  double L_p = 1e-5;
  double R_min = 5e-5;   // open valve
  double R_max = 100.0;  // closed valve
  double k_valve = 0.1;  // valve sigmoid pressure scale, kPa
  double p_ref = 1.0;    // venous pressure, kPa
  AtrialParams atrial;

  void validate() const;
};

/// Circuit unknowns [p_v, p_p, p_d, q_p]: ventricular, proximal and distal
/// aortic pressures plus the inertance flux.
using WkState = Eigen::Vector4d;

/// Smooth valve law R_min + (R_max - R_min) * S(p_down - p_up); opens
/// (-> R_min) for positive forward pressure drop p_up - p_down.
double valve_resistance(double p_up, double p_down, const WindkesselParams& wk);

double atrial_pressure(double t, const WindkesselParams& wk);

/// One-step-theta residual of the circuit ODEs between two time levels.
/// Time derivatives are backward differences; algebraic terms, valve states,
/// and the prescribed atrial pressure are evaluated at the theta-blended
/// state/time. The volume rate couples the structure through
/// (v_new - v_old)/dt. Residual entries are flows [mm^3/s].
WkState wk_residual(const WkState& p_new, const WkState& p_old, double vol_new,
                    double vol_old, double dt, double t_old, double theta,
                    const WindkesselParams& wk);

struct WkLinearization {
  Eigen::Matrix4d d_res_dp;  // wrt p_new
  double d_res0_dvol_new;    // = 1/dt; chain to dV/dd happens in the solver
};

WkLinearization wk_jacobian(const WkState& p_new, const WkState& p_old,
                            double dt, double t_old, double theta,
                            const WindkesselParams& wk);

}  // namespace pmk
