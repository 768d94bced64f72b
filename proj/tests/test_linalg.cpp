#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "pmorkit/errors.hpp"
#include "pmorkit/io.hpp"
#include "pmorkit/linalg.hpp"
#include "test_helpers.hpp"

using namespace pmk;

TEST_SUITE("linalg") {

TEST_CASE("thin_svd identity has unit singular values") {
  const ThinSvd svd = thin_svd(Matrix::Identity(2, 2));
  CHECK(svd.singular_values(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(svd.singular_values(1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("thin_svd of two identical unit columns") {
  Matrix a(3, 2);
  a.col(0) << 1.0, 0.0, 0.0;
  a.col(1) << 1.0, 0.0, 0.0;
  const ThinSvd svd = thin_svd(a);
  CHECK(svd.singular_values(0) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(svd.singular_values(1) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("thin_svd singular values match a symmetric-eigen oracle") {
  std::mt19937_64 rng(42);
  const Matrix a = test::random_matrix(6, 4, rng);
  const ThinSvd svd = thin_svd(a);

  // Independent route: eigenvalues of a^T a, tridiagonal-QR based.
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a.transpose() * a);
  Vector expected = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  std::sort(expected.data(), expected.data() + expected.size(),
            std::greater<double>());
  for (int i = 0; i < 4; ++i)
    CHECK(svd.singular_values(i) ==
          doctest::Approx(expected(i)).epsilon(1e-8));
}

TEST_CASE("thin_svd reconstruction, orthonormality, energy identity") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const int rows = 3 + static_cast<int>(rng() % 12);
    const int cols = 2 + static_cast<int>(rng() % 12);
    const Matrix a = test::random_matrix(rows, cols, rng);
    const ThinSvd svd = thin_svd(a);
    const int r = static_cast<int>(std::min(rows, cols));
    REQUIRE(svd.singular_values.size() == r);

    const Matrix rebuilt =
        svd.left * svd.singular_values.asDiagonal() * svd.right.transpose();
    CHECK((a - rebuilt).norm() <= 1e-10 * a.norm());

    const Matrix utu = svd.left.transpose() * svd.left - Matrix::Identity(r, r);
    const Matrix vtv = svd.right.transpose() * svd.right - Matrix::Identity(r, r);
    CHECK(utu.cwiseAbs().maxCoeff() < 1e-10);
    CHECK(vtv.cwiseAbs().maxCoeff() < 1e-10);

    for (int i = 0; i + 1 < r; ++i)
      CHECK(svd.singular_values(i) >= svd.singular_values(i + 1));

    // |a|_F^2 = sum sigma_i^2
    CHECK(svd.singular_values.squaredNorm() ==
          doctest::Approx(a.squaredNorm()).epsilon(1e-10));

    // Sign convention: largest-magnitude entry positive.
    for (int k = 0; k < r; ++k) {
      Eigen::Index imax = 0;
      svd.left.col(k).cwiseAbs().maxCoeff(&imax);
      CHECK(svd.left(imax, k) >= 0.0);
    }
  }
}

TEST_CASE("thin_svd rejects non-finite input") {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(thin_svd(a), Error);
}

TEST_CASE("solve_dense trivial systems") {
  Vector b(2);
  b << 2.0, 4.0;
  CHECK((solve_dense(Matrix::Identity(2, 2), b) - b).norm() == 0.0);

  Matrix diag = Matrix::Zero(2, 2);
  diag(0, 0) = 2.0;
  diag(1, 1) = 4.0;
  const Vector x = solve_dense(diag, b);
  CHECK(x(0) == doctest::Approx(1.0));
  CHECK(x(1) == doctest::Approx(1.0));
}

TEST_CASE("solve_dense residual check on a random system") {
  std::mt19937_64 rng(11);
  Matrix a = test::random_matrix(10, 10, rng);
  a += 10.0 * Matrix::Identity(10, 10);  // well conditioned
  const Vector b = test::random_vector(10, rng);
  const Vector x = solve_dense(a, b);
  CHECK((a * x - b).norm() <= 1e-10 * (a.norm() * x.norm() + b.norm()));
}

TEST_CASE("solve_dense flags singular systems with a condition estimate") {
  Matrix a(2, 2);
  a << 1.0, 2.0, 2.0, 4.0;
  try {
    solve_dense(a, Vector::Ones(2));
    FAIL("expected singular-system error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::singular_system);
    CHECK(std::string(e.what()).find("rcond") != std::string::npos);
  }
}

TEST_CASE("orthonormalize preserves the span") {
  std::mt19937_64 rng(3);
  SUBCASE("already orthonormal input") {
    const Matrix q = test::random_orthonormal(8, 3, rng);
    const Matrix r = orthonormalize(q);
    CHECK(max_principal_angle(q, r) < 1e-8);
  }
  SUBCASE("nearly collinear pair still spans R^2") {
    Matrix a(2, 2);
    a << 1.0, 1.0, 0.0, 1e-3;
    const Matrix q = orthonormalize(a);
    const Matrix gram = q.transpose() * q - Matrix::Identity(2, 2);
    CHECK(gram.cwiseAbs().maxCoeff() < 1e-10);
    CHECK(max_principal_angle(q, Matrix::Identity(2, 2)) < 1e-8);
  }
  SUBCASE("random 8x3") {
    const Matrix a = test::random_matrix(8, 3, rng);
    const Matrix q = orthonormalize(a);
    const Matrix gram = q.transpose() * q - Matrix::Identity(3, 3);
    CHECK(gram.cwiseAbs().maxCoeff() < 1e-10);
    CHECK(max_principal_angle(orthonormalize(a), q) < 1e-10);
  }
}

TEST_CASE("orthonormalize reports rank deficiency") {
  Matrix a(4, 2);
  a.col(0) << 1.0, 2.0, 3.0, 4.0;
  a.col(1) = 2.0 * a.col(0);
  try {
    orthonormalize(a);
    FAIL("expected rank-deficiency error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::rank_deficient);
    CHECK(std::string(e.what()).find("rank 1") != std::string::npos);
  }
}

TEST_CASE("matrix file format round-trips at full precision") {
  std::mt19937_64 rng(5);
  const Matrix a = test::random_matrix(7, 3, rng, -1e3, 1e3);
  const std::string path = "test_matrix_roundtrip.dat";
  write_matrix(path, a);
  const Matrix b = read_matrix(path);
  REQUIRE(b.rows() == a.rows());
  REQUIRE(b.cols() == a.cols());
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
  std::remove(path.c_str());
}

}  // TEST_SUITE
