#include "cdlab/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "cdlab/parallel.hpp"

namespace cdlab {

SpectralData eigendecompose(const cxmat& h, const EigOptions& opts) {
  double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if (asymmetry(h) > opts.hermiticity_tol * scale)
    throw InvalidInputError("eigendecompose: matrix is not Hermitian at tolerance");
  Eigen::SelfAdjointEigenSolver<cxmat> es(h);
  if (es.info() != Eigen::Success) throw NumericalError("eigendecompose: solver failed");
  SpectralData sd;
  sd.shift = es.eigenvalues()(0);
  sd.energies = es.eigenvalues().array() - sd.shift;
  sd.vectors = es.eigenvectors();
  sd.gap = sd.energies(1);
  if (sd.gap < opts.degeneracy_threshold)
    throw GaplessModelError("eigendecompose: ground level is degenerate, E1-E0 = " +
                                std::to_string(sd.gap),
                            sd.gap);
  // eigenpair residual check on a few extreme states
  double hnorm = std::max(std::abs(sd.shift), std::abs(es.eigenvalues()(h.rows() - 1)));
  hnorm = std::max(hnorm, 1.0);
  for (Eigen::Index m : {Eigen::Index(0), Eigen::Index(1), h.rows() - 1}) {
    double res = (h * sd.vectors.col(m) - es.eigenvalues()(m) * sd.vectors.col(m)).norm();
    if (res > opts.residual_tol * hnorm)
      throw NumericalError("eigendecompose: eigenpair residual " + std::to_string(res));
  }
  return sd;
}

LanczosResult lanczos_lowest(const std::function<void(const cxvec&, cxvec&)>& apply,
                             Eigen::Index dim, std::uint64_t seed, int max_iter, double tol) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  cxvec v = cxvec::NullaryExpr(dim, [&](Eigen::Index) { return complexd(gauss(rng), gauss(rng)); });
  v.normalize();

  std::vector<cxvec> basis;
  std::vector<double> alpha, beta;
  cxvec w = cxvec::Zero(dim);
  LanczosResult out;
  double prev_e0 = 1e300;
  for (int it = 0; it < max_iter; ++it) {
    basis.push_back(v);
    w.setZero();
    apply(v, w);
    double a = std::real(v.dot(w));
    alpha.push_back(a);
    w -= a * v;
    if (!beta.empty()) w -= beta.back() * basis[basis.size() - 2];
    for (const auto& b : basis) w -= b.dot(w) * b;  // full reorthogonalization
    double bnorm = w.norm();

    Eigen::Index m = static_cast<Eigen::Index>(alpha.size());
    if (m >= 2 && (it % 5 == 0 || bnorm < 1e-14 || it == max_iter - 1)) {
      Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
      for (Eigen::Index i = 0; i < m; ++i) {
        t(i, i) = alpha[i];
        if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
      double e0 = es.eigenvalues()(0);
      if (std::abs(e0 - prev_e0) < tol * std::max(1.0, std::abs(e0)) || bnorm < 1e-14 ||
          it == max_iter - 1) {
        out.e0 = e0;
        out.e1 = es.eigenvalues()(1);
        cxvec g = cxvec::Zero(dim);
        for (Eigen::Index i = 0; i < m; ++i) g += es.eigenvectors()(i, 0) * basis[i];
        g.normalize();
        out.ground = g;
        return out;
      }
      prev_e0 = e0;
    }
    if (bnorm < 1e-14) continue;  // handled above on the next factorization
    beta.push_back(bnorm);
    v = w / bnorm;
  }
  throw NumericalError("lanczos_lowest: no convergence");
}

namespace {

// dOmega = -H^{-1} (1 - |O><O|) (dH) Omega in the shifted gauge, solved in
// the eigenbasis when available, else by conjugate gradients on H restricted
// to the orthogonal complement (H is positive definite there).
cxvec dstate_from_spectrum(const SpectralData& sd, const cxmat& dh) {
  cxvec rhs = sd.vectors.adjoint() * (dh * sd.ground());
  rhs(0) = complexd(0, 0);
  for (Eigen::Index m = 1; m < sd.dim(); ++m) rhs(m) /= -sd.energies(m);
  return sd.vectors * rhs;
}

cxvec dstate_cg(const std::function<void(const cxvec&, cxvec&)>& apply_shifted, const cxvec& omega,
                const cxvec& dh_omega, double gap) {
  cxvec b = -(dh_omega - omega * omega.dot(dh_omega));
  cxvec x = cxvec::Zero(b.size());
  cxvec r = b, p = b, hp(b.size());
  double rr = std::real(r.dot(r));
  double b2 = std::sqrt(rr);
  if (b2 < 1e-300) return x;
  int max_it = 200 + static_cast<int>(b.size());
  for (int it = 0; it < max_it; ++it) {
    hp.setZero();
    apply_shifted(p, hp);
    hp -= omega * omega.dot(hp);  // stay in the orthogonal complement
    double denom = std::real(p.dot(hp));
    if (denom <= 0) throw NumericalError("dstate_cg: lost positivity, gap " + std::to_string(gap));
    double a = rr / denom;
    x += a * p;
    r -= a * hp;
    double rr_new = std::real(r.dot(r));
    if (std::sqrt(rr_new) < 1e-13 * b2 || std::sqrt(rr_new) < 1e-15) break;
    p = r + (rr_new / rr) * p;
    rr = rr_new;
  }
  x -= omega * omega.dot(x);
  return x;
}

}  // namespace

namespace {
void check_gap_floor(const std::vector<double>& gaps, const std::vector<double>& grid,
                     double floor, const char* who) {
  for (std::size_t i = 0; i < gaps.size(); ++i)
    if (gaps[i] < floor)
      throw GaplessModelError(std::string(who) + ": gap " + std::to_string(gaps[i]) +
                                  " below floor at s = " + std::to_string(grid[i]),
                              gaps[i]);
}
}  // namespace

GroundStateFamily ground_family(const InteractionFamily& f, const std::vector<double>& grid,
                                const FamilyOptions& opts) {
  GroundStateFamily g;
  g.grid = grid;
  std::size_t n = grid.size();
  g.states.resize(n);
  g.dstates.resize(n);
  g.gaps.resize(n);
  g.shifts.resize(n);

  if (opts.backend == SpectralBackend::dense) {
    std::vector<SpectralData> sds(n);
    parallel_for(n, opts.jobs, [&](std::size_t i) {
      sds[i] = eigendecompose(f.dense_h(grid[i]), opts.eig);
    });
    for (std::size_t i = 0; i < n; ++i) {
      g.states[i] = sds[i].ground();
      g.gaps[i] = sds[i].gap;
      g.shifts[i] = sds[i].shift;
    }
    check_gap_floor(g.gaps, grid, opts.gap_floor, "ground_family");
    // discrete parallel transport, then the exact first-order derivative
    for (std::size_t i = 1; i < n; ++i) {
      complexd ov = g.states[i - 1].dot(g.states[i]);
      if (std::abs(ov) > 0) g.states[i] *= std::conj(ov) / std::abs(ov);
    }
    parallel_for(n, opts.jobs, [&](std::size_t i) {
      SpectralData sd = sds[i];
      sd.vectors.col(0) = g.states[i];
      g.dstates[i] = dstate_from_spectrum(sd, f.dense_dh(grid[i]));
    });
  } else {
    Eigen::Index dim = f.dim();
    for (std::size_t i = 0; i < n; ++i) {
      double s = grid[i];
      auto apply = [&](const cxvec& in, cxvec& out) { f.apply_h(s, in, out); };
      LanczosResult lr = lanczos_lowest(apply, dim, opts.seed, 400, 1e-13);
      g.states[i] = lr.ground;
      g.gaps[i] = lr.e1 - lr.e0;
      g.shifts[i] = lr.e0;
      if (g.gaps[i] < opts.gap_floor)
        throw GaplessModelError("ground_family: gap " + std::to_string(g.gaps[i]) +
                                    " below floor at s = " + std::to_string(s),
                                g.gaps[i]);
      if (i > 0) {
        complexd ov = g.states[i - 1].dot(g.states[i]);
        if (std::abs(ov) > 0) g.states[i] *= std::conj(ov) / std::abs(ov);
      }
      cxvec dh_omega = cxvec::Zero(dim), tmp = cxvec::Zero(dim);
      for (const auto& t : f.terms()) {
        double c = t.env.deriv(s);
        if (c == 0.0) continue;
        for (const auto& [k, v] : t.op.terms())
          apply_string(PauliString(c * v, k.first, k.second, f.sites()), g.states[i], dh_omega);
      }
      double e0 = lr.e0;
      auto apply_shifted = [&](const cxvec& in, cxvec& out) {
        f.apply_h(s, in, out);
        out -= e0 * in;
      };
      (void)tmp;
      g.dstates[i] = dstate_cg(apply_shifted, g.states[i], dh_omega, g.gaps[i]);
    }
  }

  g.min_gap = *std::min_element(g.gaps.begin(), g.gaps.end());
  return g;
}

double min_gap(const InteractionFamily& f, const std::vector<double>& grid,
               const FamilyOptions& opts) {
  return ground_family(f, grid, opts).min_gap;
}

SpectralFamily spectral_family(const InteractionFamily& f, const std::vector<double>& grid,
                               const FamilyOptions& opts) {
  SpectralFamily sf;
  sf.grid = grid;
  std::size_t n = grid.size();
  sf.data.resize(n);
  parallel_for(n, opts.jobs, [&](std::size_t i) {
    sf.data[i] = eigendecompose(f.dense_h(grid[i]), opts.eig);
  });
  sf.gsf.grid = grid;
  sf.gsf.states.resize(n);
  sf.gsf.dstates.resize(n);
  sf.gsf.gaps.resize(n);
  sf.gsf.shifts.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) {
      complexd ov = sf.data[i - 1].vectors.col(0).dot(sf.data[i].vectors.col(0));
      if (std::abs(ov) > 0) sf.data[i].vectors.col(0) *= std::conj(ov) / std::abs(ov);
    }
    sf.gsf.states[i] = sf.data[i].ground();
    sf.gsf.gaps[i] = sf.data[i].gap;
    sf.gsf.shifts[i] = sf.data[i].shift;
  }
  parallel_for(n, opts.jobs, [&](std::size_t i) {
    sf.gsf.dstates[i] = dstate_from_spectrum(sf.data[i], f.dense_dh(grid[i]));
  });
  check_gap_floor(sf.gsf.gaps, grid, opts.gap_floor, "spectral_family");
  sf.gsf.min_gap = *std::min_element(sf.gsf.gaps.begin(), sf.gsf.gaps.end());
  return sf;
}

std::vector<double> uniform_grid(int points, double a, double b) {
  if (points < 2) throw InvalidInputError("uniform_grid: need at least two points");
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) g[i] = a + (b - a) * i / (points - 1);
  return g;
}

}  // namespace cdlab
