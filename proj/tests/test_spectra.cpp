#include <doctest.h>

#include "cdlab/spectra.hpp"
#include "cdlab/tfim.hpp"

using namespace cdlab;

TEST_CASE("eigendecompose shifts the ground energy to zero") {
  LocalOperator z{LatticeSpec(1)};
  z.add(complexd(1, 0), {{0, Pauli::Z}});
  SpectralData sd = eigendecompose(z.dense_realization());
  CHECK(sd.energies(0) == 0.0);
  CHECK(sd.energies(1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(sd.gap == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(sd.shift == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("open two-site chain matches a direct 4x4 oracle") {
  double h = 2.0;
  InteractionFamily f = models::tfim(2, Boundary::open, Envelope::constant(h));
  SpectralData sd = eigendecompose(f.dense_h(0.0));

  // independent construction of -2(sz0 + sz1) - sx0 sx1 in the same basis
  cxmat oracle = cxmat::Zero(4, 4);
  accumulate_dense(oracle, PauliString(complexd(-h, 0), {{0, Pauli::Z}}, 2), 2);
  accumulate_dense(oracle, PauliString(complexd(-h, 0), {{1, Pauli::Z}}, 2), 2);
  accumulate_dense(oracle, PauliString(complexd(-1, 0), {{0, Pauli::X}, {1, Pauli::X}}, 2), 2);
  Eigen::SelfAdjointEigenSolver<cxmat> es(oracle);
  for (int m = 0; m < 4; ++m)
    CHECK(sd.energies(m) + sd.shift ==
          doctest::Approx(es.eigenvalues()(m)).epsilon(1e-12).scale(1.0));
  CHECK(sd.gap == doctest::Approx(es.eigenvalues()(1) - es.eigenvalues()(0)).epsilon(1e-12));
}

TEST_CASE("periodic chain gap matches the free-fermion value at L = 8") {
  InteractionFamily f = models::tfim(8, Boundary::periodic, Envelope::constant(2.0));
  SpectralData sd = eigendecompose(f.dense_h(0.0));
  CHECK(std::abs(sd.gap - many_body_gap_free_fermion(8, 2.0)) <= 1e-8);
}

TEST_CASE("degenerate ground level is rejected") {
  // classical Ising at zero field: twofold ground degeneracy
  InteractionFamily f = models::tfim(4, Boundary::periodic, Envelope::constant(0.0));
  CHECK_THROWS_AS(eigendecompose(f.dense_h(0.0)), GaplessModelError);
}

TEST_CASE("constant family has a constant gauge-fixed ground state") {
  InteractionFamily f = models::tfim(4, Boundary::periodic, Envelope::constant(2.0));
  GroundStateFamily g = ground_family(f, uniform_grid(11));
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(g.dstates[i].norm() <= 1e-12);
    CHECK(std::abs(g.states[i].dot(g.states[0])) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("rotating single spin reproduces the analytic derivative") {
  // H = -(cos a sz + sin a sx): ground state (cos(a/2), sin(a/2))
  Envelope alpha = Envelope::linear(0.0, 1.0);
  InteractionFamily f = models::single_spin_rotation(alpha);
  auto grid = uniform_grid(101);
  GroundStateFamily g = ground_family(f, grid);
  for (std::size_t i = 0; i < g.size(); ++i) {
    double a = grid[i];
    cxvec exact(2), dexact(2);
    exact << std::cos(a / 2), std::sin(a / 2);
    dexact << -0.5 * std::sin(a / 2), 0.5 * std::cos(a / 2);
    complexd phase = exact.dot(g.states[i]);
    CHECK(std::abs(std::abs(phase) - 1.0) <= 1e-12);
    CHECK((g.states[i] - phase * exact).norm() <= 1e-10);
    CHECK((g.dstates[i] - phase * dexact).norm() <= 1e-10);
  }
}

TEST_CASE("family invariants: shifted kernel, Berry gauge, perturbative identity") {
  InteractionFamily f = models::tfim_longitudinal(5, Boundary::periodic,
                                                  Envelope::smooth_ramp(2.5, 1.6),
                                                  Envelope::scaled_switch(0.3));
  auto grid = uniform_grid(41);
  GroundStateFamily g = ground_family(f, grid);
  for (std::size_t i = 0; i < g.size(); ++i) {
    cxmat h = f.dense_h(grid[i]);
    Eigen::Index dim = h.rows();
    cxmat hs = h - g.shifts[i] * cxmat::Identity(dim, dim);
    CHECK((hs * g.states[i]).norm() <= 1e-10);
    CHECK(std::abs(g.states[i].dot(g.dstates[i])) <= 1e-8);
    cxmat dh = f.dense_dh(grid[i]);
    cxvec resid = hs * g.dstates[i] + dh * g.states[i] -
                  g.states[i] * g.states[i].dot(dh * g.states[i]);
    CHECK(resid.norm() <= 1e-8);
    CHECK(std::abs(g.states[i].norm() - 1.0) <= 1e-12);
  }
  // adjacent overlaps real and positive (smooth gauge)
  for (std::size_t i = 1; i < g.size(); ++i) {
    complexd ov = g.states[i - 1].dot(g.states[i]);
    CHECK(ov.real() > 0.0);
    CHECK(std::abs(ov.imag()) <= 1e-8);
  }
}

TEST_CASE("grid refinement shrinks the finite-difference mismatch quadratically") {
  InteractionFamily f = models::tfim(4, Boundary::periodic, Envelope::smooth_ramp(2.5, 1.8));
  auto mismatch = [&](int points) {
    auto grid = uniform_grid(points, 0.3, 0.7);  // away from the flat switch ends
    GroundStateFamily g = ground_family(f, grid);
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < g.size(); ++i) {
      cxvec fd = (g.states[i + 1] - g.states[i - 1]) / (grid[i + 1] - grid[i - 1]);
      worst = std::max(worst, (fd - g.dstates[i]).norm());
    }
    return worst;
  };
  double coarse = mismatch(41), fine = mismatch(81);
  CHECK(fine <= coarse / 3.0);  // second-order central differences
}

TEST_CASE("min_gap follows the envelope minimum and detects closing gaps") {
  InteractionFamily f = models::tfim(8, Boundary::periodic, Envelope::smooth_ramp(3.0, 1.5));
  auto grid = uniform_grid(41);
  GroundStateFamily g = ground_family(f, grid);
  double expected = *std::min_element(g.gaps.begin(), g.gaps.end());
  CHECK(min_gap(f, grid) == doctest::Approx(expected).epsilon(1e-12));
  // the gap decreases toward the h = 1.5 end of the ramp
  CHECK(g.gaps.back() < g.gaps.front());

  // crossing h = 1 at L = 10: finite-size gap dips below a desk-scale floor
  InteractionFamily cross = models::tfim(10, Boundary::periodic, Envelope::smooth_ramp(2.0, 0.5));
  FamilyOptions opts;
  opts.backend = SpectralBackend::iterative;
  opts.gap_floor = 0.5;
  CHECK_THROWS_AS(min_gap(cross, uniform_grid(21), opts), GaplessModelError);
}

TEST_CASE("lanczos backend agrees with the dense one") {
  InteractionFamily f = models::tfim(8, Boundary::periodic, Envelope::smooth_ramp(2.5, 1.7));
  auto grid = uniform_grid(9);
  FamilyOptions dense_opts, iter_opts;
  iter_opts.backend = SpectralBackend::iterative;
  GroundStateFamily gd = ground_family(f, grid, dense_opts);
  GroundStateFamily gi = ground_family(f, grid, iter_opts);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(std::abs(gd.gaps[i] - gi.gaps[i]) <= 1e-8);
    CHECK(std::abs(gd.shifts[i] - gi.shifts[i]) <= 1e-9);
    complexd phase = gd.states[i].dot(gi.states[i]);
    CHECK(std::abs(phase) == doctest::Approx(1.0).epsilon(1e-10));
    // the derivative formula scales with the state's phase and nothing else
    CHECK((gi.dstates[i] - phase * gd.dstates[i]).norm() <= 1e-7);
  }
}
