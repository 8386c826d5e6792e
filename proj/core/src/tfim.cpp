#include "cdlab/tfim.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "cdlab/dense.hpp"
#include "cdlab/fit.hpp"

namespace cdlab {

namespace {
using Vec2 = Eigen::Vector2cd;
using Mat2 = Eigen::Matrix2cd;
using std::sqrt;
}  // namespace

double IsingProtocol::h(double s) const {
  double b = h0 - 1.0;
  if (shape == Shape::hyperbolic) return 1.0 + sqrt(b * b + (s / 4.0) * (s / 4.0));
  return h0 + s * s;
}

double IsingProtocol::dh(double s) const {
  double b = h0 - 1.0;
  if (shape == Shape::hyperbolic) return (s / 16.0) / sqrt(b * b + (s / 4.0) * (s / 4.0));
  return 2.0 * s;
}

IsingProtocol IsingProtocol::canonical(double h0, double eps, int L, double h_end) {
  if (h0 <= 1.0) throw InvalidInputError("IsingProtocol: need h0 > 1 (gapped sweep)");
  if (h_end < 10.0) throw InvalidInputError("IsingProtocol: endpoint field below the 10.0 cutoff");
  IsingProtocol p;
  p.h0 = h0;
  p.eps = eps;
  p.chain_length = L;
  p.h_end = h_end;
  p.shape = Shape::hyperbolic;
  double b = h0 - 1.0, a = h_end - 1.0;
  p.span = 4.0 * sqrt(a * a - b * b);
  return p;
}

IsingProtocol IsingProtocol::quadratic(double h0, double eps, int L, double h_end) {
  IsingProtocol p = canonical(h0, eps, L, h_end);
  p.shape = Shape::quadratic;
  p.span = sqrt(h_end - h0);
  return p;
}

std::vector<double> allowed_momenta(int L) {
  if (L < 2 || L % 2 != 0) throw InvalidInputError("allowed_momenta: L must be even");
  std::vector<double> ks(L);
  for (int m = 0; m < L; ++m) ks[m] = M_PI * (2 * m + 1) / L;
  return ks;
}

Eigen::Matrix2cd mode_hamiltonian(double k, double h, int L_for_grid_check) {
  if (L_for_grid_check > 0) {
    double m = (k * L_for_grid_check / M_PI - 1.0) / 2.0;
    if (std::abs(m - std::round(m)) > 1e-9 || k <= 0 || k >= 2 * M_PI)
      throw InvalidInputError("mode_hamiltonian: k is not on the antiperiodic grid");
  }
  Mat2 out;
  double a = 2.0 * (h - std::cos(k)), b = 2.0 * std::sin(k);
  out << a, b, b, -a;
  return out;
}

double quasiparticle_energy(double k, double h) {
  return 2.0 * sqrt(h * h + 1.0 - 2.0 * h * std::cos(k));
}

namespace {

// Dormand-Prince 5(4) for the two-level Schrödinger equation
// i eps dpsi/ds = H_k(h(s)) psi.
Vec2 mode_rhs(const IsingProtocol& proto, double k, double s, const Vec2& y) {
  double a = 2.0 * (proto.h(s) - std::cos(k)), b = 2.0 * std::sin(k);
  complexd f(0.0, -1.0 / proto.eps);
  return Vec2(f * (a * y(0) + b * y(1)), f * (b * y(0) - a * y(1)));
}

Vec2 integrate_mode(const IsingProtocol& proto, double k, const Vec2& y0, double tol) {
  static const double c[7] = {0, 1. / 5, 3. / 10, 4. / 5, 8. / 9, 1., 1.};
  static const double a2[] = {1. / 5};
  static const double a3[] = {3. / 40, 9. / 40};
  static const double a4[] = {44. / 45, -56. / 15, 32. / 9};
  static const double a5[] = {19372. / 6561, -25360. / 2187, 64448. / 6561, -212. / 729};
  static const double a6[] = {9017. / 3168, -355. / 33, 46732. / 5247, 49. / 176,
                              -5103. / 18656};
  static const double b5[] = {35. / 384, 0, 500. / 1113, 125. / 192, -2187. / 6784, 11. / 84, 0};
  static const double b4[] = {5179. / 57600,    0,           7571. / 16695, 393. / 640,
                              -92097. / 339200, 187. / 2100, 1. / 40};

  double s = -proto.span, s_end = proto.span;
  Vec2 y = y0;
  double hstep = std::min(0.01 * proto.eps, (s_end - s) / 16.0);
  int rejected = 0;
  while (s < s_end) {
    hstep = std::min(hstep, s_end - s);
    Vec2 kk[7];
    kk[0] = mode_rhs(proto, k, s, y);
    kk[1] = mode_rhs(proto, k, s + c[1] * hstep, y + hstep * (a2[0] * kk[0]));
    kk[2] = mode_rhs(proto, k, s + c[2] * hstep, y + hstep * (a3[0] * kk[0] + a3[1] * kk[1]));
    kk[3] = mode_rhs(proto, k, s + c[3] * hstep,
                     y + hstep * (a4[0] * kk[0] + a4[1] * kk[1] + a4[2] * kk[2]));
    kk[4] = mode_rhs(proto, k, s + c[4] * hstep,
                     y + hstep * (a5[0] * kk[0] + a5[1] * kk[1] + a5[2] * kk[2] + a5[3] * kk[3]));
    kk[5] = mode_rhs(proto, k, s + hstep,
                     y + hstep * (a6[0] * kk[0] + a6[1] * kk[1] + a6[2] * kk[2] + a6[3] * kk[3] +
                                  a6[4] * kk[4]));
    Vec2 y5 = y + hstep * (b5[0] * kk[0] + b5[2] * kk[2] + b5[3] * kk[3] + b5[4] * kk[4] +
                           b5[5] * kk[5]);
    kk[6] = mode_rhs(proto, k, s + hstep, y5);
    Vec2 y4 = y + hstep * (b4[0] * kk[0] + b4[2] * kk[2] + b4[3] * kk[3] + b4[4] * kk[4] +
                           b4[5] * kk[5] + b4[6] * kk[6]);
    double err = (y5 - y4).norm();
    if (err <= tol || hstep < 1e-12) {
      s += hstep;
      y = y5;
      y.normalize();
      double grow = err > 0 ? 0.9 * std::pow(tol / err, 0.2) : 2.0;
      hstep *= std::min(4.0, std::max(0.2, grow));
    } else {
      hstep *= std::max(0.1, 0.9 * std::pow(tol / err, 0.2));
      if (++rejected > 1000000)
        throw IntegrationError("integrate_mode: step control failed", err);
    }
  }
  return y;
}

Vec2 mode_eigvec(double k, double h, bool excited) {
  double a = 2.0 * (h - std::cos(k)), b = 2.0 * std::sin(k);
  double th = 0.5 * std::atan2(b, a);
  if (excited) return Vec2(std::cos(th), std::sin(th));
  return Vec2(-std::sin(th), std::cos(th));
}

double closed_form_p(double k, const IsingProtocol& proto) {
  // Landau-Zener with gap and local sweep rate extracted from H_k(h(s)):
  // the splitting-squared is locally Delta^2 + alpha^2 t^2 at its minimum.
  auto de2 = [&](double s) {
    double a = 2.0 * (proto.h(s) - std::cos(k)), b = 2.0 * std::sin(k);
    return 4.0 * (a * a + b * b);
  };
  double de2_min = de2(0.0);  // h has its minimum at s = 0 and grows monotonically
  double d = 1e-3;
  double curv = (de2(d) - 2.0 * de2_min + de2(-d)) / (d * d);
  if (curv <= 0) throw NumericalError("closed_form_p: no avoided-crossing curvature");
  double alpha = sqrt(0.5 * curv) * proto.eps;  // |d(splitting)/dt| asymptotically
  return std::exp(-M_PI * de2_min / (2.0 * alpha));
}

}  // namespace

ModeResult lz_probability(double k, const IsingProtocol& proto, LzMethod method, double ode_tol) {
  ModeResult out;
  out.k = k;
  out.method = method;
  out.gamma_k = quasiparticle_energy(k, proto.h0);
  if (method == LzMethod::closed_form) {
    out.p = closed_form_p(k, proto);
    return out;
  }
  Vec2 y0 = mode_eigvec(k, proto.h(-proto.span), false);
  Vec2 yf = integrate_mode(proto, k, y0, ode_tol);
  Vec2 ex = mode_eigvec(k, proto.h(proto.span), true);
  out.p = std::norm(ex.dot(yf));
  return out;
}

DensityResult excitation_density(const IsingProtocol& proto, LzMethod method,
                                 double skip_threshold) {
  DensityResult out;
  int L = proto.chain_length;
  auto ks = allowed_momenta(L);
  double sum = 0.0;
  for (int m = 0; m < L / 2; ++m) {  // p(2 pi - k) = p(k)
    double k = ks[m];
    double est = closed_form_p(k, proto);
    double p;
    if (method == LzMethod::closed_form || est < skip_threshold) {
      p = est;
      if (method != LzMethod::closed_form && est < skip_threshold)
        out.skipped_below = std::max(out.skipped_below, est);
    } else {
      p = lz_probability(k, proto, LzMethod::ode).p;
    }
    sum += 2.0 * p;
  }
  out.rho_modesum = sum / L;

  // continuum integral of the closed form
  int nq = 4096;
  double acc = 0.0;
  for (int i = 0; i < nq; ++i) {
    double k = M_PI * (i + 0.5) / nq;
    acc += closed_form_p(k, proto);
  }
  out.rho_integral = acc / nq;  // (1/2pi) * 2 * int_0^pi = mean over (0, pi)

  double b = proto.h0 - 1.0;
  out.rho_asymptotic =
      sqrt(proto.eps / proto.h0) / (4.0 * sqrt(2.0) * M_PI) * std::exp(-8.0 * M_PI * b * b / proto.eps);
  return out;
}

CorrelationResult zz_correlation(const IsingProtocol& proto, int l_max, LzMethod method) {
  int L = proto.chain_length;
  if (l_max >= L / 2) throw InvalidInputError("zz_correlation: need l < L/2");
  auto ks = allowed_momenta(L);
  std::vector<double> p(L / 2);
  for (int m = 0; m < L / 2; ++m) {
    double est = closed_form_p(ks[m], proto);
    p[m] = (method == LzMethod::closed_form || est < 1e-40)
               ? est
               : lz_probability(ks[m], proto, method).p;
  }

  CorrelationResult out;
  for (int l = 0; l <= l_max; ++l) {
    // the double sum factorizes: L^{-2} sum_{k,q} p_k p_q e^{il(q-k)} = |S(l)|^2
    double re = 0.0, im = 0.0;
    for (int m = 0; m < L / 2; ++m) {
      re += 2.0 * p[m] * std::cos(ks[m] * l);  // k and 2pi-k pair up
      im += 0.0;
    }
    double s_l = re / L;
    (void)im;
    out.l.push_back(l);
    out.value.push_back(s_l * s_l);
  }
  out.rho = std::sqrt(out.value[0]);

  // Gaussian fit C(l) = C(0) exp(-(l/xi)^2) over the clean decade band
  std::vector<double> xs, ys;
  for (std::size_t i = 1; i < out.value.size(); ++i) {
    double ratio = out.value[i] / out.value[0];
    if (ratio < 1e-8 || ratio > 0.9) continue;
    xs.push_back(static_cast<double>(out.l[i]) * out.l[i]);
    ys.push_back(std::log(ratio));
  }
  if (xs.size() < 3) throw NumericalError("zz_correlation: not enough points for the Gaussian fit");
  LinearFit fit = fit_linear(xs, ys);
  if (fit.slope >= 0) throw NumericalError("zz_correlation: correlation does not decay");
  out.xi = 1.0 / std::sqrt(-fit.slope);
  return out;
}

double many_body_gap_free_fermion(int L, double h) {
  if (h <= 1.0) throw InvalidInputError("many_body_gap_free_fermion: need h > 1");
  // even parity: antiperiodic momenta, vacuum is the global ground state
  double e_abc = 0.0;
  double min_abc = 1e300;
  for (double k : allowed_momenta(L)) {
    double e = quasiparticle_energy(k, h);
    e_abc -= 0.5 * e;
    min_abc = std::min(min_abc, e);
  }
  // odd parity: periodic momenta including k = 0 and pi, one quasiparticle
  double e_pbc = 0.0;
  double min_pbc = 1e300;
  for (int m = 0; m < L; ++m) {
    double k = 2.0 * M_PI * m / L;
    double e = k == 0.0 ? 2.0 * (h - 1.0) : quasiparticle_energy(k, h);
    e_pbc -= 0.5 * e;
    min_pbc = std::min(min_pbc, e);
  }
  double odd_gap = (e_pbc + min_pbc) - e_abc;
  double even_gap = 2.0 * min_abc;
  return std::min(odd_gap, even_gap);
}

}  // namespace cdlab
