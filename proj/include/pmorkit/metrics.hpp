#pragma once

#include <vector>

#include "pmorkit/chamber.hpp"
#include "pmorkit/coupled_solver.hpp"

namespace pmk {

/// Largest per-node displacement error (Euclidean, mm) over all nodes and
/// time steps between two trajectories on the same grid.
double eps_inf_inf(const Trajectory& a, const Trajectory& b);

/// (max V - min V) / max V of a cavity volume curve.
double ejection_fraction(const std::vector<double>& volume_curve);

/// Per-step mean over the marked nodes of the displacement component along
/// the inward reference radial direction (basal-plane descent analogue).
std::vector<double> marked_displacement(const Trajectory& traj,
                                        const ChamberMesh& mesh);

/// Same metric from raw reference positions and a marked index set; the
/// trajectory variant forwards here.
std::vector<double> marked_displacement(const std::vector<Vector>& displacements,
                                        const Matrix& ref_pos,
                                        const std::vector<int>& marked);

struct ScalarOutputs {
  double ef = 0.0;
  double p_v_max = 0.0;
  double marked_disp_max = 0.0;
  double v_min = 0.0;
  double v_max = 0.0;
};

ScalarOutputs scalar_outputs(const Trajectory& traj, const ChamberMesh& mesh);

}  // namespace pmk
