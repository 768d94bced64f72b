#pragma once

#include <string>
#include <vector>

#include "pmorkit/coupled_solver.hpp"
#include "pmorkit/inverse.hpp"

namespace pmk {

struct PodConfig {
  int q = 30;
  double eps_pod = 0.0;  // 0 disables RIC-based order selection
  int stride = 1;        // snapshot subsampling for experimentation
};

struct PmorConfig {
  std::string method = "cos";  // cos | cob | direct | grassmann | all
  std::string parameter = "sigma";
  int q = 30;
};

struct InvanaConfig {
  std::vector<std::string> parameters{"sigma", "alpha_max", "alpha_min",
                                      "t_sys", "t_dias"};
  std::vector<double> initial{200.0, 15.0, -15.0, 0.35, 0.60};
  std::vector<double> truth{280.0, 10.0, -30.0, 0.246, 0.502};
  double sample_every = 0.01;  // s between volume-curve samples
  LmSettings lm;
};

/// Whole-experiment configuration; round-trips losslessly through JSON.
struct ExperimentConfig {
  // scenario
  int mesh_nodes = 100;
  double mesh_radius = 25.0;       // mm
  double mesh_node_mass = 0.17;    // g
  int mesh_marked_count = 10;
  ChamberMaterial material;
  ActivationParams activation;
  WindkesselParams windkessel;
  TimeIntegrator integrator;
  SolverTolerances tolerances;

  PodConfig pod;
  PmorConfig pmor;
  InvanaConfig invana;
  long seed = 20240101;
  std::string output_dir = "out";

  ChamberScenario scenario() const;
  void validate() const;

  std::string to_json() const;
  static ExperimentConfig from_json(const std::string& text);
  static ExperimentConfig load(const std::string& path);
  void save(const std::string& path) const;

  /// Activation parameters with the named entries overridden by physical
  /// values (used by parametric sweeps and the inverse analysis).
  ActivationParams activation_with(const std::vector<std::string>& names,
                                   const Vector& physical) const;
};

}  // namespace pmk
