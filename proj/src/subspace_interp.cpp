#include "pmorkit/subspace_interp.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "pmorkit/errors.hpp"

namespace pmk {

void SampleLibrary::validate() const {
  if (samples.empty())
    fail(ErrorCode::invalid_input, "library: needs at least one sample");
  const int n = state_dim();
  const int q = order();
  std::set<std::vector<double>> seen;
  for (const auto& s : samples) {
    if (s.basis.basis.rows() != n || s.basis.basis.cols() != q)
      fail(ErrorCode::invalid_input, "library: inconsistent basis shapes");
    if (s.snapshots.data.size() && s.snapshots.data.rows() != n)
      fail(ErrorCode::invalid_input, "library: inconsistent snapshot rows");
    if (!seen.insert(s.mu).second)
      fail(ErrorCode::invalid_input, "library: duplicate sample parameters");
  }
}

int SampleLibrary::state_dim() const {
  return static_cast<int>(samples.at(0).basis.basis.rows());
}

int SampleLibrary::order() const {
  return static_cast<int>(samples.at(0).basis.basis.cols());
}

std::pair<double, double> linear_weights(double mu_star, double mu_1,
                                         double mu_2) {
  if (mu_1 == mu_2)
    fail(ErrorCode::invalid_input, "linear_weights: coincident sample points");
  const double lo = std::min(mu_1, mu_2);
  const double hi = std::max(mu_1, mu_2);
  if (mu_star < lo || mu_star > hi) {
    std::ostringstream msg;
    msg << "linear_weights: query " << mu_star << " outside [" << lo << ", "
        << hi << "]; extrapolation is not defined";
    fail(ErrorCode::extrapolation, msg.str());
  }
  const double w = (mu_star - mu_2) / (mu_1 - mu_2);
  return {w, 1.0 - w};
}

std::vector<double> inverse_distance_weights(const std::vector<double>& mu_star,
                                             const SampleLibrary& lib) {
  const size_t k = lib.samples.size();
  std::vector<double> dist(k);
  for (size_t i = 0; i < k; ++i) {
    const auto& mu = lib.samples[i].mu;
    if (mu.size() != mu_star.size())
      fail(ErrorCode::invalid_input, "idw: parameter dimension mismatch");
    double d2 = 0.0;
    for (size_t p = 0; p < mu.size(); ++p)
      d2 += (mu_star[p] - mu[p]) * (mu_star[p] - mu[p]);
    dist[i] = std::sqrt(d2);
    if (dist[i] == 0.0) {
      std::vector<double> w(k, 0.0);
      w[i] = 1.0;
      return w;
    }
  }
  double sum = 0.0;
  std::vector<double> w(k);
  for (size_t i = 0; i < k; ++i) {
    w[i] = 1.0 / dist[i];
    sum += w[i];
  }
  for (double& wi : w) wi /= sum;
  return w;
}

std::vector<double> piecewise_linear_weights(double mu_star,
                                             const SampleLibrary& lib) {
  std::vector<size_t> order(lib.samples.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return lib.samples[a].mu.at(0) < lib.samples[b].mu.at(0);
  });
  std::vector<double> w(lib.samples.size(), 0.0);
  if (order.size() == 1) {
    const double mu = lib.samples[order[0]].mu.at(0);
    if (mu != mu_star)
      fail(ErrorCode::extrapolation,
           "piecewise_linear_weights: single-sample library only supports "
           "queries at the sample itself");
    w[order[0]] = 1.0;
    return w;
  }
  const double lo = lib.samples[order.front()].mu.at(0);
  const double hi = lib.samples[order.back()].mu.at(0);
  if (mu_star < lo || mu_star > hi) {
    std::ostringstream msg;
    msg << "piecewise_linear_weights: query " << mu_star << " outside ["
        << lo << ", " << hi << "]";
    fail(ErrorCode::extrapolation, msg.str());
  }
  for (size_t s = 0; s + 1 < order.size(); ++s) {
    const double mu_a = lib.samples[order[s]].mu.at(0);
    const double mu_b = lib.samples[order[s + 1]].mu.at(0);
    if (mu_star >= mu_a && mu_star <= mu_b) {
      const auto [wa, wb] = linear_weights(mu_star, mu_a, mu_b);
      w[order[s]] = wa;
      w[order[s + 1]] = wb;
      return w;
    }
  }
  w[order.back()] = 1.0;
  return w;
}

namespace {

void check_weights(const SampleLibrary& lib, const std::vector<double>& weights) {
  lib.validate();
  if (weights.size() != lib.samples.size())
    fail(ErrorCode::invalid_weights, "weights: size mismatch with library");
  double max_abs = 0.0;
  for (double w : weights) max_abs = std::max(max_abs, std::abs(w));
  if (max_abs == 0.0)
    fail(ErrorCode::invalid_weights, "weights: all weights are zero");
}

ProjectionBasis truncated_basis_of(const Matrix& concat, int q,
                                   const SampleLibrary& lib,
                                   const std::vector<double>& weights) {
  const ThinSvd svd = thin_svd(concat);
  ProjectionBasis out;
  out.basis = svd.left.leftCols(q);
  out.singular_values = svd.singular_values;
  out.q = q;
  out.interpolated = true;
  // Provenance: parameter names of the library samples; values left to the
  // caller-visible weights.
  out.param_names = lib.samples.front().basis.param_names;
  std::ostringstream note;
  note << "interpolated with weights";
  for (double w : weights) note << ' ' << w;
  out.notes.push_back(note.str());
  return out;
}

}  // namespace

ProjectionBasis interp_concat_bases(const SampleLibrary& lib,
                                    const std::vector<double>& weights) {
  check_weights(lib, weights);
  const int n = lib.state_dim();
  const int q = lib.order();
  int active = 0;
  for (double w : weights)
    if (w != 0.0) ++active;
  Matrix concat(n, static_cast<Eigen::Index>(active) * q);
  Eigen::Index col = 0;
  for (size_t k = 0; k < lib.samples.size(); ++k) {
    if (weights[k] == 0.0) continue;
    concat.middleCols(col, q) = weights[k] * lib.samples[k].basis.basis;
    col += q;
  }
  return truncated_basis_of(concat, q, lib, weights);
}

ProjectionBasis weighted_snapshot_basis(const std::vector<const Matrix*>& mats,
                                        const std::vector<double>& weights,
                                        int q) {
  if (mats.empty() || mats.size() != weights.size())
    fail(ErrorCode::invalid_input, "weighted_snapshot_basis: bad arguments");
  Eigen::Index cols = 0;
  for (size_t k = 0; k < mats.size(); ++k) {
    if (weights[k] == 0.0) continue;
    cols += mats[k]->cols();
  }
  if (cols == 0)
    fail(ErrorCode::invalid_weights, "weighted_snapshot_basis: all weights zero");
  Matrix concat(mats[0]->rows(), cols);
  Eigen::Index col = 0;
  for (size_t k = 0; k < mats.size(); ++k) {
    if (weights[k] == 0.0) continue;
    concat.middleCols(col, mats[k]->cols()) = weights[k] * (*mats[k]);
    col += mats[k]->cols();
  }
  const ThinSvd svd = thin_svd(concat);
  if (q < 1 || q > svd.left.cols())
    fail(ErrorCode::invalid_order, "weighted_snapshot_basis: order out of range");
  ProjectionBasis out;
  out.basis = svd.left.leftCols(q);
  out.singular_values = svd.singular_values;
  out.q = q;
  out.interpolated = mats.size() > 1;
  return out;
}

ProjectionBasis interp_concat_snapshots(const SampleLibrary& lib,
                                        const std::vector<double>& weights) {
  check_weights(lib, weights);
  const int q = lib.order();
  std::vector<const Matrix*> mats;
  std::vector<double> active;
  for (size_t k = 0; k < lib.samples.size(); ++k) {
    if (weights[k] == 0.0) continue;
    if (lib.samples[k].snapshots.data.size() == 0)
      fail(ErrorCode::invalid_input,
           "interp_concat_snapshots: sample has no snapshots");
    mats.push_back(&lib.samples[k].snapshots.data);
    active.push_back(weights[k]);
  }
  ProjectionBasis out = weighted_snapshot_basis(mats, active, q);
  out.interpolated = true;
  out.param_names = lib.samples.front().basis.param_names;
  std::ostringstream note;
  note << "interpolated with weights";
  for (double w : weights) note << ' ' << w;
  out.notes.push_back(note.str());
  return out;
}

ProjectionBasis interp_concat_bases_sv_weighted(
    const SampleLibrary& lib, const std::vector<double>& weights) {
  check_weights(lib, weights);
  const int n = lib.state_dim();
  const int q = lib.order();
  int active = 0;
  for (double w : weights)
    if (w != 0.0) ++active;
  Matrix concat(n, static_cast<Eigen::Index>(active) * q);
  Eigen::Index col = 0;
  for (size_t k = 0; k < lib.samples.size(); ++k) {
    if (weights[k] == 0.0) continue;
    const ProjectionBasis& b = lib.samples[k].basis;
    if (b.singular_values.size() < q)
      fail(ErrorCode::invalid_input,
           "interp_concat_bases_sv_weighted: sample lacks singular values");
    concat.middleCols(col, q) =
        weights[k] * b.basis * b.singular_values.head(q).asDiagonal();
    col += q;
  }
  return truncated_basis_of(concat, q, lib, weights);
}

double mac(const Vector& v_i, const Vector& v_j) {
  const double ni = v_i.squaredNorm();
  const double nj = v_j.squaredNorm();
  if (ni == 0.0 || nj == 0.0)
    fail(ErrorCode::invalid_input, "mac: zero vector");
  const double dot = v_i.dot(v_j);
  return dot * dot / (ni * nj);
}

ProjectionBasis interp_direct_adjusted(const SampleLibrary& lib,
                                       const std::vector<double>& weights,
                                       const std::optional<Matrix>& reference) {
  check_weights(lib, weights);
  const int n = lib.state_dim();
  const int q = lib.order();

  Matrix ref;
  if (reference) {
    ref = *reference;
    if (ref.rows() != n || ref.cols() != q)
      fail(ErrorCode::invalid_input,
           "interp_direct_adjusted: reference shape mismatch");
  } else {
    ref = interp_concat_bases(lib, weights).basis;
  }

  ProjectionBasis out;
  Matrix stacked = Matrix::Zero(n, q);
  for (size_t k = 0; k < lib.samples.size(); ++k) {
    if (weights[k] == 0.0) continue;
    const Matrix& vk = lib.samples[k].basis.basis;
    std::vector<int> used(q, -1);
    for (int j = 0; j < q; ++j) {
      // Best-matching sample vector for reference column j.
      int best = 0;
      double best_mac = -1.0;
      for (int i = 0; i < q; ++i) {
        const double m = mac(vk.col(i), ref.col(j));
        if (m > best_mac) {
          best_mac = m;
          best = i;
        }
      }
      if (used[best] >= 0) {
        std::ostringstream warn;
        warn << "ambiguous pairing: sample " << k << " vector " << best
             << " matched reference columns " << used[best] << " and " << j;
        out.notes.push_back(warn.str());
      }
      used[best] = j;
      const double sign = vk.col(best).dot(ref.col(j)) < 0.0 ? -1.0 : 1.0;
      stacked.col(j) += weights[k] * sign * vk.col(best);
    }
  }

  const ThinSvd svd = thin_svd(stacked);
  out.basis = svd.left.leftCols(q);
  out.singular_values = svd.singular_values;
  out.q = q;
  out.interpolated = true;
  out.param_names = lib.samples.front().basis.param_names;
  return out;
}

ProjectionBasis interp_grassmann(const SampleLibrary& lib,
                                 const std::vector<double>& weights,
                                 int k_ref) {
  check_weights(lib, weights);
  const int n = lib.state_dim();
  const int q = lib.order();
  if (k_ref < 0 || k_ref >= static_cast<int>(lib.samples.size()))
    fail(ErrorCode::invalid_input, "interp_grassmann: reference index");
  const Matrix& v0 = lib.samples[k_ref].basis.basis;

  // Logarithmic maps onto the tangent space at the reference subspace.
  Matrix tangent = Matrix::Zero(n, q);
  for (size_t k = 0; k < lib.samples.size(); ++k) {
    if (weights[k] == 0.0 || static_cast<int>(k) == static_cast<int>(k_ref))
      continue;  // log of the reference subspace is zero
    const Matrix& vk = lib.samples[k].basis.basis;
    const Matrix overlap = v0.transpose() * vk;  // q x q
    Eigen::PartialPivLU<Matrix> lu(overlap);
    if (!(lu.rcond() > 1e-12)) {
      std::ostringstream msg;
      msg << "interp_grassmann: tangent map undefined for sample " << k
          << " (subspaces too far from reference " << k_ref
          << ", overlap rcond " << lu.rcond() << ")";
      fail(ErrorCode::tangent_map, msg.str());
    }
    const Matrix scaled = lu.solve(Matrix::Identity(q, q)).eval();
    const Matrix oblique = vk * scaled;  // V_k (V_0^T V_k)^{-1}
    const Matrix residual = oblique - v0 * (v0.transpose() * oblique);
    const ThinSvd svd = thin_svd(residual);
    tangent += weights[k] * svd.left *
               svd.singular_values.array().atan().matrix().asDiagonal() *
               svd.right.transpose();
  }

  // Exponential map back to the manifold.
  const ThinSvd svd = thin_svd(tangent);
  const Vector cos_s = svd.singular_values.array().cos();
  const Vector sin_s = svd.singular_values.array().sin();
  ProjectionBasis out;
  out.basis = v0 * svd.right * cos_s.asDiagonal() +
              svd.left * sin_s.asDiagonal();
  out.singular_values = svd.singular_values;
  out.q = q;
  out.interpolated = true;
  out.param_names = lib.samples.front().basis.param_names;
  return out;
}

}  // namespace pmk
