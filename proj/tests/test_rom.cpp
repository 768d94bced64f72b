#include <doctest.h>

#include <random>

#include "pmorkit/config.hpp"
#include "pmorkit/metrics.hpp"
#include "pmorkit/rom.hpp"
#include "test_helpers.hpp"

using namespace pmk;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.mesh_nodes = 16;
  cfg.integrator.t_end = 0.05;
  return cfg;
}

ProjectionBasis identity_basis(int n) {
  ProjectionBasis b;
  b.basis = Matrix::Identity(n, n);
  b.singular_values = Vector::Ones(n);
  b.q = n;
  return b;
}

}  // namespace

TEST_SUITE("rom") {

TEST_CASE("identity basis reproduces the full order steps") {
  ExperimentConfig cfg = small_config();
  cfg.integrator.t_end = 0.01;
  const ChamberScenario sc = cfg.scenario();
  const CoupledSolver fom(sc);
  const ReducedSolver rom(sc, identity_basis(sc.mesh.dofs()));

  const auto [fom_traj, fom_snaps] = fom.run();
  const auto [rom_traj, rom_snaps] = rom.run();
  REQUIRE(fom_traj.states.size() == rom_traj.states.size());
  for (size_t j = 0; j < fom_traj.states.size(); ++j) {
    CHECK((fom_traj.states[j].d - rom_traj.states[j].d)
              .lpNorm<Eigen::Infinity>() < 1e-9);
    CHECK((fom_traj.states[j].p - rom_traj.states[j].p).norm() < 1e-9);
  }
}

TEST_CASE("reduced system dimension is q plus the windkessel block") {
  ExperimentConfig cfg = small_config();
  const ChamberScenario sc = cfg.scenario();
  const CoupledSolver fom(sc);
  const auto [traj, snaps] = fom.run();
  SnapshotMatrix s = snaps;
  const ProjectionBasis basis = pod_basis(s, 5);
  const ReducedSolver rom(sc, basis);
  CHECK(rom.reduced_dim() == 5);
  ReducedState r0 = rom.initial_state();
  CHECK(r0.d_r.size() == 5);
  CHECK(r0.p.size() == 4);
  ReducedState r1;
  rom.step(r0, 0.0, r1);
  CHECK(r1.d_r.size() == 5);
  CHECK((r1.lifted_d - basis.basis * r1.d_r).lpNorm<Eigen::Infinity>() <
        1e-12);
}

TEST_CASE("single-mode reduced run converges") {
  ExperimentConfig cfg = small_config();
  const ChamberScenario sc = cfg.scenario();
  const CoupledSolver fom(sc);
  const auto [traj, snaps] = fom.run();
  SnapshotMatrix s = snaps;
  const ProjectionBasis basis = pod_basis(s, 1);
  const ReducedSolver rom(sc, basis);
  const auto [rom_traj, rom_snaps] = rom.run();
  CHECK(rom_traj.states.size() == traj.states.size());
  for (int iters : rom_traj.newton_iters) CHECK(iters <= sc.tolerances.max_newton);
}

TEST_CASE("galerkin consistency of the converged reduced residual") {
  ExperimentConfig cfg = small_config();
  const ChamberScenario sc = cfg.scenario();
  const CoupledSolver fom(sc);
  const auto [traj, snaps] = fom.run();
  SnapshotMatrix s = snaps;
  const ProjectionBasis basis = pod_basis(s, 6);
  const ReducedSolver rom(sc, basis);
  const auto [rom_traj, rom_snaps] = rom.run();

  // Fresh full-order residual assembly at the final lifted state.
  const size_t last = rom_traj.states.size() - 1;
  const CoupledLinearization lin = fom.linearize(
      rom_traj.states[last - 1], rom_traj.states[last],
      rom_traj.times[last - 1]);
  const int n = sc.mesh.dofs();
  const double reduced_res =
      (basis.basis.transpose() * lin.residual.head(n)).lpNorm<Eigen::Infinity>();
  CHECK(reduced_res < sc.tolerances.tol_s_res);
}

TEST_CASE("galerkin projection depends on the span, not the basis") {
  ExperimentConfig cfg = small_config();
  const ChamberScenario sc = cfg.scenario();
  const CoupledSolver fom(sc);
  const auto [traj, snaps] = fom.run();
  SnapshotMatrix s = snaps;
  const ProjectionBasis basis = pod_basis(s, 4);

  // Rotate the basis by a random orthogonal matrix: same span.
  std::mt19937_64 rng(97);
  const Matrix rot = orthonormalize(test::random_matrix(4, 4, rng));
  ProjectionBasis rotated = basis;
  rotated.basis = basis.basis * rot;

  const ReducedSolver rom_a(sc, basis);
  const ReducedSolver rom_b(sc, rotated);
  const auto [ta, sa] = rom_a.run();
  const auto [tb, sb] = rom_b.run();
  CHECK(eps_inf_inf(ta, tb) < 1e-8);
}

TEST_CASE("reduced timing breakdown accounts for the wall time") {
  ExperimentConfig cfg = small_config();
  const ChamberScenario sc = cfg.scenario();
  const CoupledSolver fom(sc);
  const auto [traj, snaps] = fom.run();
  SnapshotMatrix s = snaps;
  const ReducedSolver rom(sc, pod_basis(s, 4));
  const auto [rom_traj, rom_snaps] = rom.run();
  const TimingBreakdown& timing = rom_traj.timing;
  CHECK(timing.element_s >= 0.0);
  CHECK(timing.linear_s >= 0.0);
  CHECK(timing.other_s >= 0.0);
  CHECK(timing.total() == doctest::Approx(rom_traj.wall_time)
                              .epsilon(0.05));
  CHECK(rom_traj.reduced_order == 4);
}

TEST_CASE("non-orthonormal bases are rejected") {
  ExperimentConfig cfg = small_config();
  const ChamberScenario sc = cfg.scenario();
  ProjectionBasis bad = identity_basis(sc.mesh.dofs());
  bad.basis(0, 0) = 2.0;
  CHECK_THROWS_AS(ReducedSolver(sc, bad), Error);
}

}  // TEST_SUITE
