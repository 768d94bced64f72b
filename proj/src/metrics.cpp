#include "pmorkit/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "pmorkit/errors.hpp"

namespace pmk {

double eps_inf_inf(const Trajectory& a, const Trajectory& b) {
  if (a.times.size() != b.times.size())
    fail(ErrorCode::incompatible_trajectories,
         "eps_inf_inf: different step counts");
  if (!a.states.empty() && !b.states.empty() &&
      a.states[0].d.size() != b.states[0].d.size())
    fail(ErrorCode::incompatible_trajectories,
         "eps_inf_inf: different state dimensions");
  double worst = 0.0;
  for (size_t j = 0; j < a.times.size(); ++j) {
    if (std::abs(a.times[j] - b.times[j]) > 1e-12)
      fail(ErrorCode::incompatible_trajectories,
           "eps_inf_inf: time grids differ");
    const Vector& da = a.states[j].d;
    const Vector& db = b.states[j].d;
    for (Eigen::Index node = 0; node < da.size() / 2; ++node) {
      const double ex = da(2 * node) - db(2 * node);
      const double ey = da(2 * node + 1) - db(2 * node + 1);
      worst = std::max(worst, std::hypot(ex, ey));
    }
  }
  return worst;
}

double ejection_fraction(const std::vector<double>& volume_curve) {
  if (volume_curve.empty())
    fail(ErrorCode::invalid_volume, "ejection_fraction: empty volume curve");
  const auto [min_it, max_it] =
      std::minmax_element(volume_curve.begin(), volume_curve.end());
  if (!(*max_it > 0.0))
    fail(ErrorCode::invalid_volume, "ejection_fraction: max volume <= 0");
  return (*max_it - *min_it) / *max_it;
}

std::vector<double> marked_displacement(const std::vector<Vector>& displacements,
                                        const Matrix& ref_pos,
                                        const std::vector<int>& marked) {
  if (marked.empty())
    fail(ErrorCode::invalid_config, "marked_displacement: empty marked set");
  std::vector<double> series;
  series.reserve(displacements.size());
  for (const Vector& d : displacements) {
    double sum = 0.0;
    for (int node : marked) {
      const Eigen::Vector2d inward = -ref_pos.col(node).normalized();
      sum += d(2 * node) * inward.x() + d(2 * node + 1) * inward.y();
    }
    series.push_back(sum / static_cast<double>(marked.size()));
  }
  return series;
}

std::vector<double> marked_displacement(const Trajectory& traj,
                                        const ChamberMesh& mesh) {
  std::vector<Vector> d;
  d.reserve(traj.states.size());
  for (const State& s : traj.states) d.push_back(s.d);
  return marked_displacement(d, mesh.ref_pos, mesh.marked_nodes);
}

ScalarOutputs scalar_outputs(const Trajectory& traj, const ChamberMesh& mesh) {
  ScalarOutputs out;
  out.ef = ejection_fraction(traj.volumes);
  const auto [vmin, vmax] =
      std::minmax_element(traj.volumes.begin(), traj.volumes.end());
  out.v_min = *vmin;
  out.v_max = *vmax;
  out.p_v_max = 0.0;
  for (const State& s : traj.states) out.p_v_max = std::max(out.p_v_max, s.p(0));
  const auto series = marked_displacement(traj, mesh);
  out.marked_disp_max = *std::max_element(series.begin(), series.end());
  return out;
}

}  // namespace pmk
