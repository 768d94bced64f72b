#pragma once

#include <optional>
#include <vector>

#include "pmorkit/pod.hpp"

namespace pmk {

/// One precomputed parameter sample: snapshots and the local POD basis.
struct LibrarySample {
  std::vector<double> mu;  // physical parameter values
  SnapshotMatrix snapshots;
  ProjectionBasis basis;
};

/// Immutable collection of samples with identical state dimension and
/// reduced order; shareable across concurrent interpolation queries.
struct SampleLibrary {
  std::vector<LibrarySample> samples;

  void validate() const;
  int state_dim() const;
  int order() const;
};

/// Piecewise-linear weight pair for a scalar query inside [mu_1, mu_2].
/// Extrapolation outside the interval is refused (no clamping).
std::pair<double, double> linear_weights(double mu_star, double mu_1,
                                         double mu_2);

/// Inverse-distance weights over all samples; exact hits get weight one.
std::vector<double> inverse_distance_weights(const std::vector<double>& mu_star,
                                             const SampleLibrary& lib);

/// Weights for a scalar query against a library sorted by its first
/// parameter: linear interpolation between the bracketing pair.
std::vector<double> piecewise_linear_weights(double mu_star,
                                             const SampleLibrary& lib);

/// Weighted concatenation of bases: SVD of [w_1 V_1, ..., w_K V_K], keep the
/// first q left singular vectors. Zero-weight blocks are dropped (their
/// columns are null directions of the concatenation).
ProjectionBasis interp_concat_bases(const SampleLibrary& lib,
                                    const std::vector<double>& weights);

/// Weighted concatenation of snapshots: SVD of [w_1 D_1, ..., w_K D_K].
ProjectionBasis interp_concat_snapshots(const SampleLibrary& lib,
                                        const std::vector<double>& weights);

/// Core of the snapshot concatenation, usable without a full library (the
/// inverse analysis enriches the current iteration's snapshots this way).
ProjectionBasis weighted_snapshot_basis(const std::vector<const Matrix*>& mats,
                                        const std::vector<double>& weights,
                                        int q);

/// Singular-value-weighted concatenation of bases [w_k V_k diag(sigma_1..q)];
/// spans the same subspace as interp_concat_snapshots when q captures the
/// full numerical rank of every sample.
ProjectionBasis interp_concat_bases_sv_weighted(
    const SampleLibrary& lib, const std::vector<double>& weights);

/// Modal assurance criterion |v_i^T v_j|^2 / (|v_i|^2 |v_j|^2) in [0,1].
double mac(const Vector& v_i, const Vector& v_j);

/// MAC-adjusted direct interpolation of basis vectors. Per reference column
/// the best-matching (sign-aligned) vector of every sample is combined with
/// the weights, then the stack is SVD-orthonormalized. When no reference is
/// given the weighted concatenation-of-bases result is used. Duplicate
/// pairings are allowed and recorded as notes on the returned basis.
ProjectionBasis interp_direct_adjusted(
    const SampleLibrary& lib, const std::vector<double>& weights,
    const std::optional<Matrix>& reference = std::nullopt);

/// Subspace interpolation on the Grassmann manifold: logarithmic map of all
/// sample subspaces to the tangent space at sample k_ref, weighted average,
/// exponential map back.
ProjectionBasis interp_grassmann(const SampleLibrary& lib,
                                 const std::vector<double>& weights,
                                 int k_ref);

}  // namespace pmk
