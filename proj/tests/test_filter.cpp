#include <doctest.h>

#include <random>

#include "cdlab/filter.hpp"
#include "cdlab/pauli_heisenberg.hpp"

using namespace cdlab;

TEST_CASE("hat function: exact inverse outside the window, smooth odd inside") {
  FilterSpec spec = build_filter(1.3);
  double g = 1.3;
  CHECK(spec.hat(2 * g) == complexd(0.0, 1.0 / (2 * g)));
  CHECK(spec.hat(g) == complexd(0.0, 1.0 / g));
  CHECK(spec.hat(-3.7 * g) == complexd(0.0, -1.0 / (3.7 * g)));
  CHECK(spec.hat(0.0) == complexd(0.0, 0.0));
  for (double u : {0.1, 0.4, 0.9}) {
    CHECK(std::abs(spec.hat_q(u * g)) <= 2.0 / g);           // bounded completion
    CHECK(spec.hat_q(-u * g) == -spec.hat_q(u * g));         // odd
  }
}

TEST_CASE("time profile: decaying tail and quadrature consistency") {
  FilterSpec spec = build_filter(2.0);
  CHECK(spec.cutoff_T > 0);
  double tail = 0.0;
  for (std::size_t j = 0; j < spec.t_nodes.size(); ++j)
    if (std::abs(spec.t_nodes[j]) >= spec.cutoff_T - 1e-12)
      tail = std::max(tail, std::abs(spec.h_values[j]));
  CHECK(tail <= spec.opts.tail_tol);
  double worst_omega = 0.0;
  CHECK(spec.consistency_error(&worst_omega) <= 1e-6);
  // h is real and odd on a symmetric grid
  std::size_t n = spec.t_nodes.size();
  for (std::size_t j = 0; j < n; ++j)
    CHECK(spec.h_values[j] == -spec.h_values[n - 1 - j]);
}

TEST_CASE("spectral application: single matrix element of a two-level system") {
  cxmat h = cxmat::Zero(2, 2);
  h(1, 1) = 3.0;
  SpectralData sd = eigendecompose(h);
  FilterSpec spec = build_filter(sd.gap);
  cxmat x = cxmat::Zero(2, 2);
  x(0, 1) = complexd(0.7, -0.2);
  x(1, 0) = std::conj(x(0, 1));
  cxvec action = filter_omega_action(spec, sd, x);
  CHECK(std::abs(action(1) - complexd(0, 1.0 / 3.0) * x(1, 0)) <= 1e-14);
  CHECK(std::abs(action(0)) <= 1e-14);
}

TEST_CASE("ground-sector exactness on a driven chain") {
  InteractionFamily f = models::tfim_longitudinal(6, Boundary::periodic,
                                                  Envelope::constant(2.0),
                                                  Envelope::constant(0.3));
  cxmat hd = f.dense_h(0.0);
  SpectralData sd = eigendecompose(hd);
  cxmat hs = hd - sd.shift * cxmat::Identity(hd.rows(), hd.cols());
  FilterSpec spec = build_filter(sd.gap * (1.0 - 1e-9));
  cxvec omega = sd.ground();

  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 5; ++trial) {
    cxmat x = cxmat::NullaryExpr(hd.rows(), hd.cols(),
                                 [&](Eigen::Index, Eigen::Index) {
                                   return complexd(gauss(rng), gauss(rng));
                                 });
    x = herm_part(x);
    x -= (omega.dot(x * omega)).real() * cxmat::Identity(x.rows(), x.cols());
    cxvec action = filter_omega_action(spec, sd, x);
    CHECK((hs * action - complexd(0, 1) * (x * omega)).norm() <= 1e-9);
    // the full application has the same ground column
    cxmat full = apply_filter_spectral(spec, sd, x);
    CHECK((full * omega - action).norm() <= 1e-11);
    CHECK(asymmetry(full) <= 1e-10);  // odd imaginary hat preserves Hermiticity
  }
}

TEST_CASE("identity input is rejected for the ground action") {
  cxmat h = cxmat::Zero(2, 2);
  h(1, 1) = 1.0;
  SpectralData sd = eigendecompose(h);
  FilterSpec spec = build_filter(1.0);
  CHECK_THROWS_AS(filter_omega_action(spec, sd, cxmat::Identity(2, 2)), PreconditionError);
}

TEST_CASE("quadrature backend: commuting input collapses to hat(0) = 0") {
  LatticeSpec lat(4);
  LocalOperator h(lat), x(lat);
  for (int i = 0; i < 4; ++i) h.add(complexd(-1.5, 0), {{i, Pauli::Z}});
  x.add(complexd(1.0, 0), {{0, Pauli::Z}});
  FilterSpec spec = build_filter(1.0);
  auto out = apply_filter_quadrature(spec, h, x);
  CHECK(block_sum_norm(out.result) <= 1e-12);
}

TEST_CASE("quadrature backend agrees with the spectral one on the ground action") {
  InteractionFamily f = models::tfim(6, Boundary::periodic, Envelope::constant(2.0));
  LocalOperator h_op = f.hamiltonian(0.0);
  SpectralData sd = eigendecompose(f.dense_h(0.0));
  FilterSpec spec = build_filter(sd.gap * (1.0 - 1e-9));
  LocalOperator x(f.lattice());
  x.add(complexd(1.0, 0), {{0, Pauli::Y}});

  QuadFilterOptions qopts;
  qopts.support_radius = 3;
  qopts.horizon_tol = 1e-5;
  auto quad = apply_filter_quadrature(spec, h_op, x, qopts);
  cxmat r_spec = apply_filter_spectral(spec, sd, x.dense_realization());
  double mismatch = ((quad.result.dense_realization() - r_spec) * sd.ground()).norm();
  CHECK(mismatch <= 1e-4);
}

TEST_CASE("quadrature output range grows with the time horizon") {
  // pure Pauli-word propagation on a long chain; only the cone size matters
  LatticeSpec lat(40);
  InteractionFamily f = models::tfim(40, Boundary::periodic, Envelope::constant(2.0));
  LocalOperator h_op = f.hamiltonian(0.0);
  LocalOperator x(lat);
  x.add(complexd(1.0, 0), {{20, Pauli::Y}});
  FilterSpec spec = build_filter(2.0);

  std::vector<int> ranges;
  for (double horizon : {5e-1, 1e-1, 2e-2}) {
    QuadFilterOptions qopts;
    qopts.support_radius = 10;
    qopts.horizon_tol = horizon;
    qopts.prune = 1e-5;
    qopts.series_tol = 1e-8;
    qopts.max_step_angle = 3.0;
    auto out = apply_filter_quadrature(spec, h_op, x, qopts);
    LocalOperator trimmed = out.result;
    double top = 0.0;
    for (const auto& [k, v] : trimmed.terms()) top = std::max(top, std::abs(v));
    trimmed.prune(1e-4 * top);
    ranges.push_back(trimmed.range());
  }
  CHECK(ranges[0] < ranges[2]);       // longer horizon, wider cone
  CHECK(ranges[1] <= ranges[2]);
  CHECK(ranges[2] <= 10);
}

TEST_CASE("filter construction rejects an impossible tail tolerance") {
  FilterOptions opts;
  opts.tail_tol = 1e-30;
  opts.t_search_max_over_g = 30.0;
  CHECK_THROWS_AS(build_filter(1.0, opts), FilterConstructionError);
}
