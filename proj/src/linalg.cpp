#include "pmorkit/linalg.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "pmorkit/errors.hpp"

namespace pmk {

bool all_finite(const Matrix& a) { return a.allFinite(); }

ThinSvd thin_svd(const Matrix& a) {
  if (a.rows() < 1 || a.cols() < 1 || !a.allFinite())
    fail(ErrorCode::invalid_input, "thin_svd: matrix empty or not finite");

  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  ThinSvd out{svd.matrixU(), svd.singularValues(), svd.matrixV()};

  // Sign convention: largest-magnitude entry of each left vector positive.
  for (Eigen::Index k = 0; k < out.left.cols(); ++k) {
    Eigen::Index imax = 0;
    out.left.col(k).cwiseAbs().maxCoeff(&imax);
    if (out.left(imax, k) < 0.0) {
      out.left.col(k) *= -1.0;
      out.right.col(k) *= -1.0;
    }
  }
  return out;
}

Vector solve_dense(const Matrix& a, const Vector& b) {
  if (a.rows() != a.cols())
    fail(ErrorCode::invalid_input, "solve_dense: matrix not square");
  if (a.rows() != b.size())
    fail(ErrorCode::invalid_input, "solve_dense: dimension mismatch");
  if (!a.allFinite() || !b.allFinite())
    fail(ErrorCode::invalid_input, "solve_dense: non-finite input");

  Eigen::PartialPivLU<Matrix> lu(a);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-14)) {
    std::ostringstream msg;
    msg << "solve_dense: matrix singular to tolerance, rcond estimate "
        << rcond;
    fail(ErrorCode::singular_system, msg.str());
  }
  return lu.solve(b);
}

Matrix orthonormalize(const Matrix& a) {
  const ThinSvd svd = thin_svd(a);
  const double smax = svd.singular_values.size() ? svd.singular_values(0) : 0.0;
  const double tol =
      static_cast<double>(std::max(a.rows(), a.cols())) *
      std::numeric_limits<double>::epsilon() * smax;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < svd.singular_values.size(); ++i)
    if (svd.singular_values(i) > tol) ++rank;
  if (rank < a.cols()) {
    std::ostringstream msg;
    msg << "orthonormalize: rank-deficient input, numerical rank " << rank
        << " < " << a.cols() << " columns";
    fail(ErrorCode::rank_deficient, msg.str());
  }
  return svd.left;
}

double max_principal_angle(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    fail(ErrorCode::invalid_input,
         "max_principal_angle: subspace dimensions differ");
  // sin(theta_k) are the singular values of (I - a a^T) b.
  const Matrix residual = b - a * (a.transpose() * b);
  Eigen::BDCSVD<Matrix> svd(residual);
  const double s = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  return std::asin(std::min(1.0, s));
}

}  // namespace pmk
