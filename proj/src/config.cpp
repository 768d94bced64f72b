#include "pmorkit/config.hpp"

#include <fstream>
#include <json.hpp>

#include "pmorkit/errors.hpp"

namespace pmk {

using nlohmann::json;

namespace {

json scenario_to_json(const ExperimentConfig& c) {
  json j;
  j["mesh"] = {{"node_count", c.mesh_nodes},
               {"radius", c.mesh_radius},
               {"node_mass", c.mesh_node_mass},
               {"marked_count", c.mesh_marked_count}};
  j["material"] = {{"k_lin", c.material.k_lin},   {"k_cub", c.material.k_cub},
                   {"c_visc", c.material.c_visc}, {"k_v", c.material.k_v},
                   {"c_v", c.material.c_v},       {"rho_scale", c.material.rho_scale}};
  j["activation"] = {{"sigma", c.activation.sigma},
                     {"alpha_max", c.activation.alpha_max},
                     {"alpha_min", c.activation.alpha_min},
                     {"t_sys", c.activation.t_sys},
                     {"t_dias", c.activation.t_dias},
                     {"gamma", c.activation.gamma}};
  j["windkessel"] = {{"C_p", c.windkessel.C_p},
                     {"C_d", c.windkessel.C_d},
                     {"R_p", c.windkessel.R_p},
                     {"R_d", c.windkessel.R_d},
                     {"L_p", c.windkessel.L_p},
                     {"R_min", c.windkessel.R_min},
                     {"R_max", c.windkessel.R_max},
                     {"k_valve", c.windkessel.k_valve},
                     {"p_ref", c.windkessel.p_ref},
                     {"atrial",
                      {{"p_base", c.windkessel.atrial.p_base},
                       {"p_pulse", c.windkessel.atrial.p_pulse},
                       {"t_on", c.windkessel.atrial.t_on},
                       {"t_off", c.windkessel.atrial.t_off},
                       {"cycle", c.windkessel.atrial.cycle},
                       {"gamma", c.windkessel.atrial.gamma}}}};
  j["integrator"] = {{"dt", c.integrator.dt},
                     {"t_end", c.integrator.t_end},
                     {"rho_inf", c.integrator.rho_inf},
                     {"theta", c.integrator.theta}};
  j["tolerances"] = {{"tol_s_res", c.tolerances.tol_s_res},
                     {"tol_s_inc", c.tolerances.tol_s_inc},
                     {"tol_0d_res", c.tolerances.tol_0d_res},
                     {"tol_0d_inc", c.tolerances.tol_0d_inc},
                     {"max_newton", c.tolerances.max_newton}};
  return j;
}

template <class T>
void get_if(const json& j, const char* key, T& into) {
  if (j.contains(key)) into = j.at(key).get<T>();
}

}  // namespace

ChamberScenario ExperimentConfig::scenario() const {
  ChamberScenario s;
  s.mesh = ChamberMesh::make_ring(mesh_nodes, mesh_radius, mesh_node_mass,
                                  material.rho_scale, mesh_marked_count);
  s.material = material;
  s.activation = activation;
  s.windkessel = windkessel;
  s.integrator = integrator;
  s.tolerances = tolerances;
  return s;
}

void ExperimentConfig::validate() const {
  scenario().validate();
  if (pod.q < 1) fail(ErrorCode::invalid_config, "pod.q must be >= 1");
  if (pod.stride < 1) fail(ErrorCode::invalid_config, "pod.stride must be >= 1");
  if (pmor.q < 1) fail(ErrorCode::invalid_config, "pmor.q must be >= 1");
  if (invana.parameters.empty() ||
      invana.parameters.size() != invana.initial.size() ||
      invana.parameters.size() != invana.truth.size())
    fail(ErrorCode::invalid_config, "invana parameter lists inconsistent");
  if (!(invana.sample_every > 0.0))
    fail(ErrorCode::invalid_config, "invana.sample_every must be > 0");
}

std::string ExperimentConfig::to_json() const {
  json j = scenario_to_json(*this);
  j["pod"] = {{"q", pod.q}, {"eps_pod", pod.eps_pod}, {"stride", pod.stride}};
  j["pmor"] = {{"method", pmor.method},
               {"parameter", pmor.parameter},
               {"q", pmor.q}};
  j["invana"] = {{"parameters", invana.parameters},
                 {"initial", invana.initial},
                 {"truth", invana.truth},
                 {"sample_every", invana.sample_every},
                 {"fd_step", invana.lm.fd_step},
                 {"lambda0", invana.lm.lambda0},
                 {"tol_grad", invana.lm.tol_grad},
                 {"tol_inc", invana.lm.tol_inc},
                 {"s_rel", invana.lm.s_rel},
                 {"max_iters", invana.lm.max_iterations},
                 {"q", invana.lm.q},
                 {"gradients", invana.lm.rom_gradients ? "prom" : "fom"}};
  j["seed"] = seed;
  j["output_dir"] = output_dir;
  return j.dump(2);
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::invalid_config, std::string("config parse error: ") + e.what());
  }
  ExperimentConfig c;
  try {
    if (j.contains("mesh")) {
      const json& m = j["mesh"];
      get_if(m, "node_count", c.mesh_nodes);
      get_if(m, "radius", c.mesh_radius);
      get_if(m, "node_mass", c.mesh_node_mass);
      get_if(m, "marked_count", c.mesh_marked_count);
    }
    if (j.contains("material")) {
      const json& m = j["material"];
      get_if(m, "k_lin", c.material.k_lin);
      get_if(m, "k_cub", c.material.k_cub);
      get_if(m, "c_visc", c.material.c_visc);
      get_if(m, "k_v", c.material.k_v);
      get_if(m, "c_v", c.material.c_v);
      get_if(m, "rho_scale", c.material.rho_scale);
    }
    if (j.contains("activation")) {
      const json& a = j["activation"];
      get_if(a, "sigma", c.activation.sigma);
      get_if(a, "alpha_max", c.activation.alpha_max);
      get_if(a, "alpha_min", c.activation.alpha_min);
      get_if(a, "t_sys", c.activation.t_sys);
      get_if(a, "t_dias", c.activation.t_dias);
      get_if(a, "gamma", c.activation.gamma);
    }
    if (j.contains("windkessel")) {
      const json& w = j["windkessel"];
      get_if(w, "C_p", c.windkessel.C_p);
      get_if(w, "C_d", c.windkessel.C_d);
      get_if(w, "R_p", c.windkessel.R_p);
      get_if(w, "R_d", c.windkessel.R_d);
      get_if(w, "L_p", c.windkessel.L_p);
      get_if(w, "R_min", c.windkessel.R_min);
      get_if(w, "R_max", c.windkessel.R_max);
      get_if(w, "k_valve", c.windkessel.k_valve);
      get_if(w, "p_ref", c.windkessel.p_ref);
      if (w.contains("atrial")) {
        const json& at = w["atrial"];
        get_if(at, "p_base", c.windkessel.atrial.p_base);
        get_if(at, "p_pulse", c.windkessel.atrial.p_pulse);
        get_if(at, "t_on", c.windkessel.atrial.t_on);
        get_if(at, "t_off", c.windkessel.atrial.t_off);
        get_if(at, "cycle", c.windkessel.atrial.cycle);
        get_if(at, "gamma", c.windkessel.atrial.gamma);
      }
    }
    if (j.contains("integrator")) {
      const json& t = j["integrator"];
      get_if(t, "dt", c.integrator.dt);
      get_if(t, "t_end", c.integrator.t_end);
      get_if(t, "rho_inf", c.integrator.rho_inf);
      get_if(t, "theta", c.integrator.theta);
    }
    if (j.contains("tolerances")) {
      const json& t = j["tolerances"];
      get_if(t, "tol_s_res", c.tolerances.tol_s_res);
      get_if(t, "tol_s_inc", c.tolerances.tol_s_inc);
      get_if(t, "tol_0d_res", c.tolerances.tol_0d_res);
      get_if(t, "tol_0d_inc", c.tolerances.tol_0d_inc);
      get_if(t, "max_newton", c.tolerances.max_newton);
    }
    if (j.contains("pod")) {
      const json& p = j["pod"];
      get_if(p, "q", c.pod.q);
      get_if(p, "eps_pod", c.pod.eps_pod);
      get_if(p, "stride", c.pod.stride);
    }
    if (j.contains("pmor")) {
      const json& p = j["pmor"];
      get_if(p, "method", c.pmor.method);
      get_if(p, "parameter", c.pmor.parameter);
      get_if(p, "q", c.pmor.q);
    }
    if (j.contains("invana")) {
      const json& v = j["invana"];
      get_if(v, "parameters", c.invana.parameters);
      get_if(v, "initial", c.invana.initial);
      get_if(v, "truth", c.invana.truth);
      get_if(v, "sample_every", c.invana.sample_every);
      get_if(v, "fd_step", c.invana.lm.fd_step);
      get_if(v, "lambda0", c.invana.lm.lambda0);
      get_if(v, "tol_grad", c.invana.lm.tol_grad);
      get_if(v, "tol_inc", c.invana.lm.tol_inc);
      get_if(v, "s_rel", c.invana.lm.s_rel);
      get_if(v, "max_iters", c.invana.lm.max_iterations);
      get_if(v, "q", c.invana.lm.q);
      std::string grads;
      get_if(v, "gradients", grads);
      if (!grads.empty()) c.invana.lm.rom_gradients = grads != "fom";
    }
    get_if(j, "seed", c.seed);
    get_if(j, "output_dir", c.output_dir);
  } catch (const json::exception& e) {
    fail(ErrorCode::invalid_config, std::string("config field error: ") + e.what());
  }
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io_error, "cannot open config: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return from_json(text);
}

void ExperimentConfig::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io_error, "cannot write config: " + path);
  out << to_json() << '\n';
}

ActivationParams ExperimentConfig::activation_with(
    const std::vector<std::string>& names, const Vector& physical) const {
  ActivationParams act = activation;
  if (static_cast<Eigen::Index>(names.size()) != physical.size())
    fail(ErrorCode::invalid_config, "activation_with: size mismatch");
  for (size_t i = 0; i < names.size(); ++i) {
    const double value = physical(static_cast<Eigen::Index>(i));
    if (names[i] == "sigma")
      act.sigma = value;
    else if (names[i] == "alpha_max")
      act.alpha_max = value;
    else if (names[i] == "alpha_min")
      act.alpha_min = value;
    else if (names[i] == "t_sys")
      act.t_sys = value;
    else if (names[i] == "t_dias")
      act.t_dias = value;
    else if (names[i] == "gamma")
      act.gamma = value;
    else
      fail(ErrorCode::invalid_config,
           "activation_with: unknown parameter " + names[i]);
  }
  return act;
}

}  // namespace pmk
