#pragma once

#include <string>
#include <vector>

#include "pmorkit/coupled_solver.hpp"
#include "pmorkit/linalg.hpp"

namespace pmk {

/// Orthonormal projection basis with provenance. singular_values keeps the
/// full spectrum of the source decomposition for order selection and
/// truncation-error reporting.
struct ProjectionBasis {
  Matrix basis;            // n x q, orthonormal columns
  Vector singular_values;  // full list, descending
  int q = 0;
  bool interpolated = false;
  std::vector<std::string> param_names;
  std::vector<double> param_values;
  std::vector<double> param_initial;
  std::vector<std::string> notes;  // e.g. ambiguous-pairing warnings
};

/// First q left singular vectors of the snapshot matrix.
ProjectionBasis pod_basis(const SnapshotMatrix& snapshots, int q);

/// Relative information content of the first q modes.
double ric(const Vector& singular_values, int q);

/// Sum of the squared truncated singular values.
double truncation_error(const Vector& singular_values, int q);

/// Smallest q with ric(q) >= 1 - eps_pod.
int select_order(const Vector& singular_values, double eps_pod);

/// Count of singular values above the numerical-rank cutoff.
int numerical_rank(const Vector& singular_values, double rel_tol = 1e-12);

// Persistence: "<prefix>.dat" holds the matrix, "<prefix>.meta" the sidecar.
void save_snapshots(const std::string& prefix, const SnapshotMatrix& snaps);
SnapshotMatrix load_snapshots(const std::string& prefix);
void save_basis(const std::string& prefix, const ProjectionBasis& basis);
ProjectionBasis load_basis(const std::string& prefix);

}  // namespace pmk
