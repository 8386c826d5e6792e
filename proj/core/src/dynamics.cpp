#include "cdlab/dynamics.hpp"

#include <cmath>

#include "cdlab/dense.hpp"

namespace cdlab {

namespace {

constexpr double kGaussC1 = 0.5 - 0.28867513459481287;  // Gauss nodes 1/2 -+ sqrt(3)/6
constexpr double kGaussC2 = 0.5 + 0.28867513459481287;
constexpr double kCf4F1 = 0.25 - 0.28867513459481287;  // (3 -+ 2 sqrt(3)) / 12
constexpr double kCf4F2 = 0.25 + 0.28867513459481287;

// One evaluation point of the driven generator, H(s) + Y(s).
struct GenEval {
  const InteractionFamily* f;
  double s;
  const cxmat* y;  // may be null

  void apply(const cxvec& in, cxvec& out, double weight) const {
    cxvec tmp = cxvec::Zero(in.size());
    f->apply_h(s, in, tmp);
    if (y) tmp += (*y) * in;
    out += weight * tmp;
  }
};

// w = exp(-i (dt/eps) [w1 G1 + w2 G2]) v by sub-stepped Taylor series; bound
// is an upper estimate of ||w1 G1 + w2 G2||.
cxvec expv(const GenEval& g1, const GenEval& g2, double w1, double w2, double dt_over_eps,
           double bound, const cxvec& v) {
  int m = std::max(1, static_cast<int>(std::ceil(std::abs(dt_over_eps) * bound / 0.9)));
  complexd fac(0.0, -dt_over_eps / m);
  cxvec cur = v;
  for (int sub = 0; sub < m; ++sub) {
    cxvec acc = cur, term = cur;
    double base = cur.norm();
    for (int k = 1; k <= 40; ++k) {
      cxvec next = cxvec::Zero(cur.size());
      g1.apply(term, next, w1);
      g2.apply(term, next, w2);
      term = (fac / static_cast<double>(k)) * next;
      acc += term;
      if (term.norm() < 1e-15 * base) break;
    }
    cur.swap(acc);
  }
  return cur;
}

struct StepContext {
  const InteractionFamily* f;
  const DriveProtocol* proto;
  cxmat y1, y2;
  bool has_y = false;

  cxvec cf4_step(const cxvec& psi, double s, double h) {
    double s1 = s + kGaussC1 * h, s2 = s + kGaussC2 * h;
    if (has_y) {
      y1 = proto->extra_driving(s1);
      y2 = proto->extra_driving(s2);
    }
    GenEval g1{f, s1, has_y ? &y1 : nullptr};
    GenEval g2{f, s2, has_y ? &y2 : nullptr};
    double nb = std::max(f->norm_bound(s1), f->norm_bound(s2));
    if (has_y) nb += std::max(y1.cwiseAbs().rowwise().sum().maxCoeff(),
                              y2.cwiseAbs().rowwise().sum().maxCoeff());
    // second exponential applied first, weighting the early node more
    cxvec mid = expv(g1, g2, kCf4F2, kCf4F1, h / proto->eps, nb, psi);
    return expv(g1, g2, kCf4F1, kCf4F2, h / proto->eps, nb, mid);
  }
};

}  // namespace

Trajectory evolve(const InteractionFamily& f, const DriveProtocol& proto, const cxvec& psi0,
                  const ObservableSet& observables) {
  if (proto.out_grid.size() < 2) throw InvalidInputError("evolve: output grid too small");
  if (std::abs(psi0.norm() - 1.0) > 1e-10)
    throw InvalidInputError("evolve: initial state is not normalized");

  Trajectory traj;
  traj.s = proto.out_grid;
  traj.states.reserve(proto.out_grid.size());
  traj.norms.reserve(proto.out_grid.size());
  for (const auto& [name, op] : observables) traj.observables[name] = {};

  StepContext ctx{&f, &proto, {}, {}, static_cast<bool>(proto.extra_driving)};

  auto record = [&](const cxvec& psi) {
    traj.states.push_back(psi);
    traj.norms.push_back(psi.norm());
    for (const auto& [name, op] : observables)
      traj.observables[name].push_back(std::real(psi.dot(op * psi)));
  };

  cxvec psi = psi0;
  record(psi);

  double h = std::min(proto.max_step, 1e-2);
  for (std::size_t seg = 0; seg + 1 < proto.out_grid.size(); ++seg) {
    double s = proto.out_grid[seg], s_end = proto.out_grid[seg + 1];
    while (s < s_end - 1e-14) {
      double step = std::min(h, s_end - s);
      cxvec full = ctx.cf4_step(psi, s, step);
      cxvec half = ctx.cf4_step(psi, s, 0.5 * step);
      half = ctx.cf4_step(half, s + 0.5 * step, 0.5 * step);
      double err = (full - half).norm() / 15.0;
      double tol_here = proto.tolerance * step;
      if (err <= tol_here || step <= 1e-8) {
        psi = half;  // keep the better estimate
        s += step;
        ++traj.steps_taken;
        double grow = err > 0 ? 0.9 * std::pow(tol_here / err, 0.2) : 2.0;
        h = std::min(proto.max_step, step * std::min(2.0, std::max(0.3, grow)));
      } else {
        h = step * std::max(0.1, 0.9 * std::pow(tol_here / err, 0.2));
        if (h < 1e-9)
          throw IntegrationError("evolve: step control failed, local error " + std::to_string(err),
                                 err);
      }
    }
    record(psi);
  }
  return traj;
}

ErrorCurve diabatic_error(const Trajectory& traj, const std::vector<cxvec>& reference,
                          const cxmat& observable) {
  if (reference.size() != traj.states.size())
    throw InvalidInputError("diabatic_error: reference grid mismatch");
  ErrorCurve out;
  out.s = traj.s;
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    double a = std::real(traj.states[i].dot(observable * traj.states[i]));
    double b = std::real(reference[i].dot(observable * reference[i]));
    out.error.push_back(std::abs(a - b));
    out.max_error = std::max(out.max_error, out.error.back());
  }
  return out;
}

double naive_bound(const InteractionFamily& f, const GroundStateFamily& gsf, double eps) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < gsf.grid.size(); ++i) {
    double va = hermitian_norm(f.dense_dh(gsf.grid[i])) / (gsf.gaps[i] * gsf.gaps[i]);
    double vb = hermitian_norm(f.dense_dh(gsf.grid[i + 1])) / (gsf.gaps[i + 1] * gsf.gaps[i + 1]);
    acc += 0.5 * (gsf.grid[i + 1] - gsf.grid[i]) * (va + vb);
  }
  return eps * acc;
}

OrthogonalityResult orthogonality_demo(const InteractionFamily& single_site,
                                       const std::vector<double>& volumes, double eps,
                                       const cxmat& observable) {
  if (single_site.sites() != 1)
    throw InvalidInputError("orthogonality_demo: family must act on one site");
  auto grid = uniform_grid(41);
  FamilyOptions fo;
  GroundStateFamily gsf = ground_family(single_site, grid, fo);
  DriveProtocol proto(eps, grid);
  proto.tolerance = 1e-11;
  Trajectory traj = evolve(single_site, proto, gsf.states.front());

  const cxvec& psi = traj.states.back();
  const cxvec& om = gsf.states.back();
  double overlap_sq = std::norm(om.dot(psi));
  double local_err = std::abs(std::real(psi.dot(observable * psi)) -
                              std::real(om.dot(observable * om)));

  OrthogonalityResult out;
  out.single_site_overlap_sq = overlap_sq;
  out.local_error = local_err;
  for (double v : volumes) out.rows.push_back({v, v * std::log(overlap_sq), local_err});
  return out;
}

DuhamelResult duhamel_diagnostic(const InteractionFamily& f, double eps,
                                 const std::function<cxmat(double)>& y_of_s, const cxmat& obs,
                                 double s_final, int grid_points, double tolerance) {
  (void)tolerance;
  Eigen::Index dim = f.dim();
  if (dim > 512) throw ResourceError("duhamel_diagnostic: dense propagation beyond 9 sites");

  // forward propagator V(s') on a fine grid, B(s') = V(s') V(s)^+ O V(s) V(s')^+
  double nb = 0.0;
  for (int i = 0; i <= 8; ++i) nb = std::max(nb, f.norm_bound(s_final * i / 8.0));
  double h = std::min(0.3 * eps / std::max(nb, 1e-6), s_final / (4.0 * grid_points));
  int steps_per_seg = std::max(1, static_cast<int>(std::ceil(s_final / grid_points / h)));

  DuhamelResult out;
  cxmat v = cxmat::Identity(dim, dim);
  std::vector<cxmat> v_at;
  v_at.push_back(v);
  double s = 0.0;
  for (int seg = 0; seg < grid_points; ++seg) {
    double s_target = s_final * (seg + 1) / grid_points;
    double hh = (s_target - s) / steps_per_seg;
    for (int k = 0; k < steps_per_seg; ++k) {
      double s1 = s + kGaussC1 * hh, s2 = s + kGaussC2 * hh;
      cxmat h1 = f.dense_h(s1), h2 = f.dense_h(s2);
      cxmat e2 = unitary_exp((hh / eps) * (kCf4F2 * h1 + kCf4F1 * h2));
      cxmat e1 = unitary_exp((hh / eps) * (kCf4F1 * h1 + kCf4F2 * h2));
      v = e1 * e2 * v;
      s += hh;
    }
    v_at.push_back(v);
  }

  const cxmat& v_end = v_at.back();
  for (int seg = 0; seg <= grid_points; ++seg) {
    double sp = s_final * seg / grid_points;
    cxmat w = v_end * v_at[seg].adjoint();     // propagator s' -> s
    cxmat heis = w.adjoint() * obs * w;        // O(s, s')
    cxmat comm = y_of_s(sp) * heis - heis * y_of_s(sp);
    out.s_prime.push_back(sp);
    out.comm_norm.push_back(operator_norm(comm));
  }
  for (std::size_t i = 0; i + 1 < out.comm_norm.size(); ++i)
    out.integral += 0.5 * (out.s_prime[i + 1] - out.s_prime[i]) *
                    (out.comm_norm[i] + out.comm_norm[i + 1]);
  out.integral /= eps;
  return out;
}

}  // namespace cdlab
