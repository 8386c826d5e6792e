#include "cdlab/filter.hpp"

#include <cmath>

#include "cdlab/pauli_heisenberg.hpp"

namespace cdlab {

namespace {

double switch_f(double u, double a) { return u > 0.0 ? std::exp(-a / u) : 0.0; }

double gevrey_switch(double u, double a) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  double f1 = switch_f(u, a), f2 = switch_f(1.0 - u, a);
  return f1 / (f1 + f2);
}

// 8-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr double gl_x[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                            -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                            0.7966664774136267,  0.9602898564975363};
constexpr double gl_w[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                            0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                            0.2223810344533745, 0.1012285362903763};

}  // namespace

double FilterSpec::hat_q(double omega) const {
  double aw = std::abs(omega);
  if (aw == 0.0) return 0.0;
  if (aw >= gap) return 1.0 / omega;
  return gevrey_switch(aw / gap, opts.switch_steepness) / omega;
}

double FilterSpec::consistency_error(double* worst_omega) const {
  double worst = 0.0, at = gap;
  for (int i = 0; i <= 40; ++i) {
    double w = gap * (1.0 + 9.0 * i / 40.0);
    complexd s{0.0, 0.0};
    for (std::size_t j = 0; j < t_nodes.size(); ++j)
      s += weights[j] * h_values[j] * std::exp(complexd(0.0, w * t_nodes[j]));
    double err = std::abs(s - hat(w));
    if (err > worst) {
      worst = err;
      at = w;
    }
  }
  if (worst_omega) *worst_omega = at;
  return worst;
}

FilterSpec build_filter(double gap, const FilterOptions& opts) {
  if (gap <= 0.0) throw InvalidInputError("build_filter: gap must be positive");
  FilterSpec spec;
  spec.gap = gap;
  spec.opts = opts;

  // apodized odd symbol q_a on [0, omega_max]
  const double wmax = opts.omega_max_over_g * gap;
  const double apod0 = opts.apod_start_over_g * gap;
  const double apodw = opts.apod_width_over_g * gap;
  auto q_apod = [&](double w) {
    if (w <= 0.0) return 0.0;
    double q = gevrey_switch(std::min(w / gap, 1.0), opts.switch_steepness) / w;
    if (w > apod0) q *= std::exp(-std::pow((w - apod0) / apodw, 2));
    return q;
  };

  // h(t) = (1/pi) int_0^{wmax} q_a(w) sin(w t) dw by composite Gauss-Legendre
  // on a fixed node set resolving oscillations out to the search horizon.
  const double t_max = opts.t_search_max_over_g / gap;
  const int panels = 64 + static_cast<int>(wmax * t_max / 3.0);
  std::vector<double> qw_nodes, qw_weights;
  qw_nodes.reserve(8 * panels);
  qw_weights.reserve(8 * panels);
  {
    double pw = wmax / panels;
    for (int p = 0; p < panels; ++p) {
      double c = (p + 0.5) * pw, hw = 0.5 * pw;
      for (int g8 = 0; g8 < 8; ++g8) {
        double w = c + hw * gl_x[g8];
        qw_nodes.push_back(w);
        qw_weights.push_back(hw * gl_w[g8] * q_apod(w) / M_PI);
      }
    }
  }
  auto h_of = [&](double t) {
    double acc = 0.0;
    for (std::size_t i = 0; i < qw_nodes.size(); ++i)
      acc += qw_weights[i] * std::sin(qw_nodes[i] * t);
    return acc;
  };

  // march outward until |h| stays below tail_tol for a safety stretch
  const double dt = 1.0 / (opts.nodes_per_g * gap);
  const int n_side_max = static_cast<int>(t_max / dt);
  const int confirm = std::max(200, static_cast<int>(8.0 / (gap * dt)));
  std::vector<double> hp;
  hp.reserve(2048);
  int below_streak = 0, cut = -1;
  for (int j = 0; j <= n_side_max; ++j) {
    hp.push_back(h_of(j * dt));
    if (std::abs(hp.back()) < opts.tail_tol) {
      if (++below_streak >= confirm && j > confirm) {
        cut = j - confirm + 1;
        break;
      }
    } else {
      below_streak = 0;
    }
  }
  if (cut <= 0 || cut >= n_side_max)
    throw FilterConstructionError(
        "build_filter: time profile does not decay below tail_tol within the search window",
        hp.empty() ? 0.0 : std::abs(hp.back()));

  spec.cutoff_T = cut * dt;
  spec.t_nodes.reserve(2 * cut + 1);
  spec.h_values.reserve(2 * cut + 1);
  spec.weights.reserve(2 * cut + 1);
  for (int j = -cut; j <= cut; ++j) {
    spec.t_nodes.push_back(j * dt);
    double hv = j >= 0 ? hp[j] : -hp[-j];  // h is odd
    spec.h_values.push_back(hv);
    spec.weights.push_back((j == -cut || j == cut) ? 0.5 * dt : dt);
  }

  double worst_w = 0.0;
  double err = spec.consistency_error(&worst_w);
  if (err > opts.consistency_tol)
    throw FilterConstructionError("build_filter: quadrature consistency " + std::to_string(err) +
                                      " at omega = " + std::to_string(worst_w),
                                  worst_w);
  return spec;
}

cxmat apply_filter_spectral(const FilterSpec& spec, const SpectralData& sd, const cxmat& x) {
  cxmat xt = sd.vectors.adjoint() * x * sd.vectors;
  for (Eigen::Index m = 0; m < sd.dim(); ++m)
    for (Eigen::Index n = 0; n < sd.dim(); ++n)
      xt(m, n) *= spec.hat(sd.energies(m) - sd.energies(n));
  return sd.vectors * xt * sd.vectors.adjoint();
}

cxvec filter_omega_action(const FilterSpec& spec, const SpectralData& sd, const cxmat& x,
                          double ground_expectation_tol) {
  cxvec omega = sd.ground();
  complexd exp0 = omega.dot(x * omega);
  if (std::abs(exp0) > ground_expectation_tol)
    throw PreconditionError(
        "filter_omega_action: <Omega|X Omega> = " + std::to_string(std::abs(exp0)) +
        ", the inverse is undefined on the ground sector");
  cxvec xo = sd.vectors.adjoint() * (x * omega);
  for (Eigen::Index m = 0; m < sd.dim(); ++m) xo(m) *= spec.hat(sd.energies(m));
  return sd.vectors * xo;
}

QuadFilterResult apply_filter_quadrature(const FilterSpec& spec, const LocalOperator& h,
                                         const LocalOperator& x, const QuadFilterOptions& opts) {
  if (h.lattice() != x.lattice())
    throw InvalidInputError("apply_filter_quadrature: operators on different lattices");

  // Trim nodes whose cumulative |w h| tail is below horizon_tol (relative to
  // the filter's own mass); the dropped weight goes into the estimate.
  std::size_t n = spec.t_nodes.size();
  std::size_t mid = n / 2;  // t = 0
  double dropped_weight = 0.0;
  std::size_t last = n - 1;
  {
    double acc = 0.0;
    while (last > mid) {
      double inc = std::abs(spec.weights[last] * spec.h_values[last]);
      if (acc + inc > opts.horizon_tol) break;
      acc += inc;
      --last;
    }
    dropped_weight = 2.0 * acc;  // both tails, h odd
  }

  HeisenbergEngine engine(h, opts.support_radius, opts.prune, opts.series_tol,
                          opts.max_step_angle);
  HeisenbergEngine::State forward = engine.load(x);
  HeisenbergEngine::State backward = forward;

  LocalOperator acc(x.lattice());
  // h(0) = 0, so the midpoint never contributes; sum the symmetric pair
  // w_j h(t_j) [tau_{t}(x) - tau_{-t}(x)] marching outward.
  double x_scale = std::max(1.0, block_sum_norm(x));
  for (std::size_t j = mid + 1; j <= last; ++j) {
    double t0 = spec.t_nodes[j - 1], t1 = spec.t_nodes[j];
    engine.advance(forward, t1 - t0);
    engine.advance(backward, t0 - t1);
    double c = spec.weights[j] * spec.h_values[j];
    if (std::abs(c) * x_scale < 1e-18) continue;
    engine.accumulate(acc, forward, c);
    engine.accumulate(acc, backward, -c);
  }

  QuadFilterResult out{std::move(acc), engine.dropped_norm() + dropped_weight * x_scale};
  return out;
}

}  // namespace cdlab
