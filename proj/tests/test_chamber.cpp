#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pmorkit/chamber.hpp"
#include "pmorkit/errors.hpp"
#include "test_helpers.hpp"

using namespace pmk;

namespace {

ChamberMesh test_ring(int n = 16) {
  return ChamberMesh::make_ring(n, 25.0, 0.017, 1.0, 5);
}

ChamberMaterial test_material() {
  ChamberMaterial mat;
  mat.k_lin = 350.0;
  mat.k_cub = 2000.0;
  mat.c_visc = 10.0;
  mat.k_v = 2.0;
  mat.c_v = 0.05;
  return mat;
}

}  // namespace

TEST_SUITE("chamber") {

TEST_CASE("reference configuration is in equilibrium without loads") {
  const ChamberMesh mesh = test_ring();
  const ChamberMaterial mat = test_material();
  StructState s;
  s.d = Vector::Zero(mesh.dofs());
  s.v = Vector::Zero(mesh.dofs());
  s.a = Vector::Zero(mesh.dofs());
  s.tau = Vector::Zero(mesh.node_count);
  const Vector r = structural_residual(mesh, mat, s, 0.0);
  CHECK(r.lpNorm<Eigen::Infinity>() == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("uniform inflation produces a purely radial, symmetric force") {
  const int n = 16;
  const ChamberMesh mesh = test_ring(n);
  const ChamberMaterial mat = test_material();
  const double lambda_r = 1.1;
  Vector d(mesh.dofs());
  for (int i = 0; i < n; ++i) {
    d(2 * i) = (lambda_r - 1.0) * mesh.ref_pos(0, i);
    d(2 * i + 1) = (lambda_r - 1.0) * mesh.ref_pos(1, i);
  }
  const Vector zero = Vector::Zero(mesh.dofs());
  const ChamberOperators ops = assemble_chamber(
      mesh, mat, d, zero, Vector::Zero(n), 0.0, false);

  double magnitude = -1.0;
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector2d f(ops.force(2 * i), ops.force(2 * i + 1));
    const Eigen::Vector2d radial = mesh.ref_pos.col(i).normalized();
    const Eigen::Vector2d tangent(-radial.y(), radial.x());
    CHECK(std::abs(f.dot(tangent)) < 1e-10 * f.norm());
    if (magnitude < 0.0)
      magnitude = f.dot(radial);
    else
      CHECK(f.dot(radial) == doctest::Approx(magnitude).epsilon(1e-12));
  }
  // Stretched segments are in tension: the restoring contribution of an
  // inflated ring is positive along the outward radial direction.
  CHECK(magnitude > 0.0);
}

TEST_CASE("closed-polygon pressure forces sum to zero") {
  const ChamberMesh mesh = test_ring(24);
  const ChamberMaterial mat = test_material();
  std::mt19937_64 rng(23);
  const Vector d = test::random_vector(mesh.dofs(), rng, -1.0, 1.0);
  const double p_v = 7.3;
  // Oracle: per-edge summation of p * length * outward normal.
  double perimeter = 0.0;
  Eigen::Vector2d total = Eigen::Vector2d::Zero();
  for (int i = 0; i < mesh.node_count; ++i) {
    const int j = (i + 1) % mesh.node_count;
    const Eigen::Vector2d xi =
        mesh.ref_pos.col(i) + Eigen::Vector2d(d(2 * i), d(2 * i + 1));
    const Eigen::Vector2d xj =
        mesh.ref_pos.col(j) + Eigen::Vector2d(d(2 * j), d(2 * j + 1));
    const Eigen::Vector2d edge = xj - xi;
    total += p_v * Eigen::Vector2d(edge.y(), -edge.x());
    perimeter += edge.norm();
  }
  CHECK(total.norm() < 1e-12 * std::abs(p_v) * perimeter);

  // The assembled load obeys the same identity.
  const Vector zero = Vector::Zero(mesh.dofs());
  const ChamberOperators with_p = assemble_chamber(
      mesh, mat, d, zero, Vector::Zero(mesh.node_count), p_v, false);
  const ChamberOperators no_p = assemble_chamber(
      mesh, mat, d, zero, Vector::Zero(mesh.node_count), 0.0, false);
  Eigen::Vector2d assembled_sum = Eigen::Vector2d::Zero();
  for (int i = 0; i < mesh.node_count; ++i) {
    assembled_sum.x() += with_p.force(2 * i) - no_p.force(2 * i);
    assembled_sum.y() += with_p.force(2 * i + 1) - no_p.force(2 * i + 1);
  }
  CHECK(assembled_sum.norm() < 1e-12 * std::abs(p_v) * perimeter);
}

TEST_CASE("analytic jacobians match central finite differences") {
  const ChamberMesh mesh = test_ring(12);
  const ChamberMaterial mat = test_material();
  std::mt19937_64 rng(31);
  const int n = mesh.dofs();
  const Vector d = test::random_vector(n, rng, -0.5, 0.5);
  const Vector v = test::random_vector(n, rng, -5.0, 5.0);
  Vector tau = test::random_vector(mesh.node_count, rng, 0.0, 100.0);
  const double p_v = 4.2;

  const ChamberOperators ops = assemble_chamber(mesh, mat, d, v, tau, p_v, true);
  const double eps = 1e-6;
  const double scale = ops.d_force_dd.cwiseAbs().maxCoeff();

  SUBCASE("stiffness block") {
    double worst = 0.0;
    for (int k = 0; k < n; ++k) {
      Vector dp = d, dm = d;
      dp(k) += eps;
      dm(k) -= eps;
      const Vector fp = assemble_chamber(mesh, mat, dp, v, tau, p_v, false).force;
      const Vector fm = assemble_chamber(mesh, mat, dm, v, tau, p_v, false).force;
      const Vector fd = (fp - fm) / (2.0 * eps);
      worst = std::max(worst,
                       (fd - ops.d_force_dd.col(k)).lpNorm<Eigen::Infinity>());
    }
    CHECK(worst / scale < 1e-5);
  }

  SUBCASE("damping block") {
    double worst = 0.0;
    for (int k = 0; k < n; ++k) {
      Vector vp = v, vm = v;
      vp(k) += eps;
      vm(k) -= eps;
      const Vector fp = assemble_chamber(mesh, mat, d, vp, tau, p_v, false).force;
      const Vector fm = assemble_chamber(mesh, mat, d, vm, tau, p_v, false).force;
      const Vector fd = (fp - fm) / (2.0 * eps);
      worst = std::max(worst,
                       (fd - ops.d_force_dv.col(k)).lpNorm<Eigen::Infinity>());
    }
    CHECK(worst / ops.d_force_dv.cwiseAbs().maxCoeff() < 1e-5);
  }

  SUBCASE("pressure sensitivity equals the assembled edge-normal vector") {
    const Vector fp = assemble_chamber(mesh, mat, d, v, tau, p_v + eps, false).force;
    const Vector fm = assemble_chamber(mesh, mat, d, v, tau, p_v - eps, false).force;
    const Vector fd = (fp - fm) / (2.0 * eps);
    CHECK((fd - ops.d_force_dpv).lpNorm<Eigen::Infinity>() /
              ops.d_force_dpv.lpNorm<Eigen::Infinity>() <
          1e-8);
    // Direct oracle: independent per-edge assembly of the load distribution.
    Vector oracle = Vector::Zero(n);
    for (int i = 0; i < mesh.node_count; ++i) {
      const int j = (i + 1) % mesh.node_count;
      const Eigen::Vector2d xi =
          mesh.ref_pos.col(i) + Eigen::Vector2d(d(2 * i), d(2 * i + 1));
      const Eigen::Vector2d xj =
          mesh.ref_pos.col(j) + Eigen::Vector2d(d(2 * j), d(2 * j + 1));
      const Eigen::Vector2d edge = xj - xi;
      const Eigen::Vector2d contribution =
          -0.5 * Eigen::Vector2d(edge.y(), -edge.x());
      oracle(2 * i) += contribution.x();
      oracle(2 * i + 1) += contribution.y();
      oracle(2 * j) += contribution.x();
      oracle(2 * j + 1) += contribution.y();
    }
    CHECK((oracle - ops.d_force_dpv).lpNorm<Eigen::Infinity>() < 1e-12);
  }
}

TEST_CASE("zero-stiffness material leaves only support and pressure terms") {
  const ChamberMesh mesh = test_ring(12);
  ChamberMaterial mat = test_material();
  mat.k_lin = 1e-300;  // k_lin must stay positive; effectively zero
  mat.k_cub = 0.0;
  mat.c_visc = 0.0;
  std::mt19937_64 rng(37);
  const Vector d = test::random_vector(mesh.dofs(), rng, -0.2, 0.2);
  const Vector v = test::random_vector(mesh.dofs(), rng, -1.0, 1.0);
  const ChamberOperators ops = assemble_chamber(
      mesh, mat, d, v, Vector::Zero(mesh.node_count), 0.0, true);
  Matrix expected = Matrix::Zero(mesh.dofs(), mesh.dofs());
  expected.diagonal().array() += mat.k_v;
  CHECK((ops.d_force_dd - expected).cwiseAbs().maxCoeff() < 1e-12);
  Matrix expected_v = Matrix::Zero(mesh.dofs(), mesh.dofs());
  expected_v.diagonal().array() += mat.c_v;
  CHECK((ops.d_force_dv - expected_v).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("elastic stiffness block is symmetric at zero velocity") {
  const ChamberMesh mesh = test_ring(14);
  ChamberMaterial mat = test_material();
  mat.c_visc = 0.0;
  std::mt19937_64 rng(41);
  const Vector d = test::random_vector(mesh.dofs(), rng, -0.5, 0.5);
  const Vector zero = Vector::Zero(mesh.dofs());
  Vector tau = test::random_vector(mesh.node_count, rng, 0.0, 50.0);
  const ChamberOperators ops =
      assemble_chamber(mesh, mat, d, zero, tau, 0.0, true);
  const Matrix asym = ops.d_force_dd - ops.d_force_dd.transpose();
  CHECK(asym.cwiseAbs().maxCoeff() <
        1e-12 * ops.d_force_dd.cwiseAbs().maxCoeff());
}

TEST_CASE("collapsed segment raises a degenerate-geometry error") {
  const ChamberMesh mesh = test_ring(12);
  const ChamberMaterial mat = test_material();
  Vector d = Vector::Zero(mesh.dofs());
  // Move node 1 onto node 0.
  d(2) = mesh.ref_pos(0, 0) - mesh.ref_pos(0, 1);
  d(3) = mesh.ref_pos(1, 0) - mesh.ref_pos(1, 1);
  const Vector zero = Vector::Zero(mesh.dofs());
  try {
    assemble_chamber(mesh, mat, d, zero, Vector::Zero(mesh.node_count), 0.0,
                     false);
    FAIL("expected degenerate-geometry error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::degenerate_geometry);
  }
}

TEST_CASE("cavity volume of a regular polygon and its gradient") {
  const int n = 20;
  const double r = 25.0;
  const ChamberMesh mesh = ChamberMesh::make_ring(n, r, 0.017, 1.0, 5);

  SUBCASE("closed form at reference") {
    const CavityVolume vol = cavity_volume(mesh, Vector::Zero(mesh.dofs()));
    const double expected = 0.5 * n * r * r * std::sin(2.0 * std::numbers::pi / n);
    CHECK(vol.value == doctest::Approx(expected).epsilon(1e-12));
  }

  SUBCASE("gradient matches central finite differences") {
    std::mt19937_64 rng(43);
    const Vector d = test::random_vector(mesh.dofs(), rng, -0.5, 0.5);
    const CavityVolume vol = cavity_volume(mesh, d);
    // The shoelace area is quadratic, so central differences carry no
    // truncation error; a generous step suppresses cancellation noise.
    const double eps = 1e-2;
    Vector fd(mesh.dofs());
    for (int k = 0; k < mesh.dofs(); ++k) {
      Vector dp = d, dm = d;
      dp(k) += eps;
      dm(k) -= eps;
      fd(k) = (cavity_volume(mesh, dp).value - cavity_volume(mesh, dm).value) /
              (2.0 * eps);
    }
    CHECK((fd - vol.gradient).lpNorm<Eigen::Infinity>() /
              vol.gradient.lpNorm<Eigen::Infinity>() <
          1e-8);
  }

  SUBCASE("volume hessian matches finite differences of the gradient") {
    std::mt19937_64 rng(47);
    const Vector d = test::random_vector(mesh.dofs(), rng, -0.3, 0.3);
    Matrix hess = Matrix::Zero(mesh.dofs(), mesh.dofs());
    add_scaled_volume_hessian(mesh, 1.0, hess);
    const double eps = 1e-6;
    for (int k = 0; k < mesh.dofs(); ++k) {
      Vector dp = d, dm = d;
      dp(k) += eps;
      dm(k) -= eps;
      const Vector fd = (cavity_volume(mesh, dp).gradient -
                         cavity_volume(mesh, dm).gradient) /
                        (2.0 * eps);
      CHECK((fd - hess.col(k)).lpNorm<Eigen::Infinity>() < 1e-9);
    }
  }

  SUBCASE("self-intersecting polygon is rejected") {
    Vector d = Vector::Zero(mesh.dofs());
    // Swap two adjacent nodes to force a bow-tie crossing.
    d(0) = mesh.ref_pos(0, 1) - mesh.ref_pos(0, 0);
    d(1) = mesh.ref_pos(1, 1) - mesh.ref_pos(1, 0);
    d(2) = mesh.ref_pos(0, 0) - mesh.ref_pos(0, 1);
    d(3) = mesh.ref_pos(1, 0) - mesh.ref_pos(1, 1);
    try {
      cavity_volume(mesh, d);
      FAIL("expected degenerate-geometry error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::degenerate_geometry);
    }
  }
}

TEST_CASE("mesh construction pins two adjacent top nodes") {
  const ChamberMesh mesh = ChamberMesh::make_ring(100, 25.0, 0.017, 1.0, 10);
  CHECK(mesh.node_count == 100);
  CHECK(mesh.marked_nodes.size() == 10);
  const int a = mesh.pinned_nodes[0];
  const int b = mesh.pinned_nodes[1];
  CHECK((b - a + 100) % 100 == 1);
  // Top of the ring is at angular index 25 for N = 100.
  CHECK(a == 25);
}

}  // TEST_SUITE
