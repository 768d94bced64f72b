#include <doctest.h>

#include <cstdio>
#include <random>

#include "pmorkit/errors.hpp"
#include "pmorkit/pod.hpp"
#include "test_helpers.hpp"

using namespace pmk;

namespace {

SnapshotMatrix wrap(const Matrix& data) {
  SnapshotMatrix s;
  s.data = data;
  s.dt = 1e-3;
  return s;
}

}  // namespace

TEST_SUITE("pod") {

TEST_CASE("identical columns give a rank-one basis") {
  Matrix d(4, 3);
  Vector col(4);
  col << 1.0, 2.0, -1.0, 0.5;
  d.col(0) = col;
  d.col(1) = col;
  d.col(2) = col;
  const ProjectionBasis basis = pod_basis(wrap(d), 1);
  CHECK(max_principal_angle(basis.basis, (Matrix)col.normalized()) < 1e-12);
}

TEST_CASE("full-rank projection reproduces the snapshots") {
  std::mt19937_64 rng(61);
  const Matrix d = test::random_matrix(10, 6, rng);
  const ProjectionBasis basis = pod_basis(wrap(d), 6);
  const Matrix projected = basis.basis * (basis.basis.transpose() * d);
  CHECK((d - projected).norm() <= 1e-9 * d.norm());
}

TEST_CASE("projection error equals the truncated singular energy") {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 8 + static_cast<int>(rng() % 20);
    const int ns = 4 + static_cast<int>(rng() % 12);
    const Matrix d = test::random_matrix(n, ns, rng);
    const int q = 1 + static_cast<int>(rng() % std::min(n, ns));
    const ProjectionBasis basis = pod_basis(wrap(d), q);
    const Matrix projected = basis.basis * (basis.basis.transpose() * d);
    const double err = (d - projected).squaredNorm();
    const double expected = truncation_error(basis.singular_values, q);
    CHECK(std::abs(err - expected) <= 1e-10 * d.squaredNorm());
  }
}

TEST_CASE("pod_basis validates the order") {
  std::mt19937_64 rng(71);
  const Matrix d = test::random_matrix(5, 3, rng);
  CHECK_THROWS_AS(pod_basis(wrap(d), 0), Error);
  CHECK_THROWS_AS(pod_basis(wrap(d), 4), Error);
}

TEST_CASE("relative information content") {
  Vector sv(2);
  sv << 1.0, 1.0;
  CHECK(ric(sv, 1) == doctest::Approx(0.5));
  CHECK(ric(sv, 2) == doctest::Approx(1.0));

  SUBCASE("monotone nondecreasing in q") {
    std::mt19937_64 rng(73);
    for (int trial = 0; trial < 10; ++trial) {
      Vector s = test::random_vector(12, rng, 0.0, 3.0);
      std::sort(s.data(), s.data() + s.size(), std::greater<double>());
      double prev = 0.0;
      for (int q = 1; q <= 12; ++q) {
        const double r = ric(s, q);
        CHECK(r >= prev - 1e-15);
        CHECK(r <= 1.0 + 1e-15);
        prev = r;
      }
      CHECK(ric(s, 12) == doctest::Approx(1.0));
    }
  }

  SUBCASE("all-zero spectrum is undefined") {
    try {
      ric(Vector::Zero(3), 1);
      FAIL("expected undefined-RIC error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::undefined_ric);
    }
  }
}

TEST_CASE("truncation error identities") {
  Vector sv(2);
  sv << 2.0, 1.0;
  CHECK(truncation_error(sv, 1) == doctest::Approx(1.0));
  CHECK(truncation_error(sv, 2) == doctest::Approx(0.0));

  std::mt19937_64 rng(79);
  const Matrix d = test::random_matrix(9, 5, rng);
  const ThinSvd svd = thin_svd(d);
  for (int q = 0; q <= 5; ++q) {
    const double sum = truncation_error(svd.singular_values, q) +
                       svd.singular_values.head(q).squaredNorm();
    CHECK(sum == doctest::Approx(d.squaredNorm()).epsilon(1e-10));
  }
}

TEST_CASE("order selection by information content") {
  SUBCASE("exact boundary resolves to the smaller order") {
    Vector sv(2);
    sv << 1.0, 1.0;
    CHECK(select_order(sv, 0.5) == 1);
  }
  SUBCASE("tiny tolerance selects the numerical rank") {
    Vector sv(3);
    sv << 3.0, 1.0, 0.0;
    CHECK(select_order(sv, 1e-14) == 2);
  }
  SUBCASE("frozen example") {
    Vector sv(3);
    sv << 3.0, 1.0, 1e-8;
    // RIC(1) = 9/10 < 0.99, RIC(2) ~ 1 - 1e-17 >= 0.99.
    CHECK(select_order(sv, 1e-2) == 2);
  }
}

TEST_CASE("pod optimality against random subspaces") {
  std::mt19937_64 rng(83);
  const Matrix d = test::random_matrix(20, 10, rng);
  const int q = 3;
  const ProjectionBasis basis = pod_basis(wrap(d), q);
  const double pod_err = (d - basis.basis * (basis.basis.transpose() * d)).norm();
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix w = test::random_orthonormal(20, q, rng);
    const double err = (d - w * (w.transpose() * d)).norm();
    CHECK(pod_err <= err + 1e-12);
  }
}

TEST_CASE("snapshots and bases persist through the file pair") {
  std::mt19937_64 rng(89);
  SnapshotMatrix snaps = wrap(test::random_matrix(6, 4, rng));
  snaps.param_names = {"sigma", "t_sys"};
  snaps.param_values = {1.25, 0.9};
  snaps.param_initial = {280.0, 0.25};
  save_snapshots("test_pod_snaps", snaps);
  const SnapshotMatrix loaded = load_snapshots("test_pod_snaps");
  CHECK((loaded.data - snaps.data).cwiseAbs().maxCoeff() == 0.0);
  CHECK(loaded.dt == snaps.dt);
  CHECK(loaded.param_names == snaps.param_names);
  CHECK(loaded.param_values == snaps.param_values);

  ProjectionBasis basis = pod_basis(snaps, 2);
  basis.notes.push_back("checking notes");
  save_basis("test_pod_basis", basis);
  const ProjectionBasis loaded_basis = load_basis("test_pod_basis");
  CHECK((loaded_basis.basis - basis.basis).cwiseAbs().maxCoeff() == 0.0);
  CHECK(loaded_basis.q == 2);
  CHECK(loaded_basis.param_names == basis.param_names);
  CHECK((loaded_basis.singular_values - basis.singular_values)
            .cwiseAbs()
            .maxCoeff() == 0.0);
  for (const char* f : {"test_pod_snaps.dat", "test_pod_snaps.meta",
                        "test_pod_basis.dat", "test_pod_basis.meta"})
    std::remove(f);
}

}  // TEST_SUITE
