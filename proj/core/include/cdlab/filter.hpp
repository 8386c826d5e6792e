#pragma once

#include <string>
#include <vector>

#include "cdlab/local_operator.hpp"
#include "cdlab/spectra.hpp"

namespace cdlab {

struct FilterOptions {
  double switch_steepness = 2.0;  // a in f(u) = e^{-a/u} of the low-frequency window
  double omega_max_over_g = 40.0;
  double apod_start_over_g = 20.0;
  double apod_width_over_g = 4.0;
  double nodes_per_g = 96.0 / (2.0 * M_PI);  // dt = 2 pi / (96 g)
  double tail_tol = 1e-8;
  double t_search_max_over_g = 160.0;
  double consistency_tol = 1e-6;
};

// The function pair (h, hat-h) with hat-h(w) = i (1/w + v(w)): exactly i/w for
// |w| >= g, smooth odd interpolation i w/g^2 w(|w|/g) inside, plus the sampled
// real-time profile with trapezoid quadrature data. The stored Fourier
// convention: hat-h(w) = int h(t) e^{i w t} dt, spectral multiplier
// hat-h(E_m - E_n).
struct FilterSpec {
  double gap = 0.0;
  FilterOptions opts{};
  std::vector<double> t_nodes;   // symmetric uniform grid, |t| <= cutoff_T
  std::vector<double> weights;   // trapezoid weights
  std::vector<double> h_values;  // h(t_j), real and odd
  double cutoff_T = 0.0;
  std::string convention = "hat(w)=int h(t) exp(iwt) dt; multiplier hat(Em-En); hat odd imaginary";

  // Imaginary part of hat-h (hat-h = i q, q real odd).
  double hat_q(double omega) const;
  complexd hat(double omega) const { return complexd(0.0, hat_q(omega)); }

  // Worst |sum_j w_j h(t_j) e^{i w t_j} - hat(w)| over samples of [g, 10 g].
  double consistency_error(double* worst_omega = nullptr) const;
};

FilterSpec build_filter(double gap, const FilterOptions& opts = {});

// Entrywise multiplier hat-h(E_m - E_n) in the eigenbasis, mapped back.
cxmat apply_filter_spectral(const FilterSpec& spec, const SpectralData& sd, const cxmat& x);

// (filter x) Omega = i H^{-1} x Omega, defined when <Omega|x Omega> = 0.
cxvec filter_omega_action(const FilterSpec& spec, const SpectralData& sd, const cxmat& x,
                          double ground_expectation_tol = 1e-10);

struct QuadFilterOptions {
  int support_radius = 6;       // strings with larger support diameter are truncated away
  double series_tol = 1e-12;    // Heisenberg-step Taylor tail, relative
  double horizon_tol = 1e-9;    // cumulative |h| weight allowed to be dropped at large |t|
  double prune = 1e-12;         // per-step coefficient pruning, relative
  double max_step_angle = 1.0;  // ||ad_H|| dt per Taylor step
};

struct QuadFilterResult {
  LocalOperator result;
  double truncation_estimate = 0.0;  // dropped weight, crude upper bound
};

// Time-domain application sum_j w_j h(t_j) tau_{t_j}(x) with tau computed by
// stepped nested-commutator (Taylor) series on Pauli strings, truncated to a
// support radius. H enters as a local operator; scalar shifts of H cancel in
// the conjugation.
QuadFilterResult apply_filter_quadrature(const FilterSpec& spec, const LocalOperator& h,
                                         const LocalOperator& x, const QuadFilterOptions& opts = {});

}  // namespace cdlab
