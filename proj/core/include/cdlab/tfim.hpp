#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cdlab/errors.hpp"

namespace cdlab {

// Driven transverse-field Ising chain in its free-fermion reduction. The
// canonical sweep is hyperbolic, h(s) = 1 + sqrt((h0-1)^2 + (s/4)^2): analytic,
// minimum h0 at s = 0, asymptotically linear so that every momentum pair sees
// an exact Landau-Zener crossing shape with gap gamma_k.
struct IsingProtocol {
  double h0 = 1.5;
  double eps = 1.0;
  int chain_length = 4096;   // momentum grid size
  double h_end = 10.0;       // field at the span ends
  double span = 0.0;         // +- S, filled by the factory
  enum class Shape { hyperbolic, quadratic } shape = Shape::hyperbolic;

  double h(double s) const;
  double dh(double s) const;

  static IsingProtocol canonical(double h0, double eps, int L, double h_end = 10.0);
  static IsingProtocol quadratic(double h0, double eps, int L, double h_end = 10.0);
};

// Antiperiodic-sector momenta k = pi (2m+1) / L, m = 0..L-1.
std::vector<double> allowed_momenta(int L);

// Pair Hamiltonian H_k(h) = 2 [(h - cos k) tz + (sin k) tx]; its splitting is
// twice the quasiparticle energy gamma_k(h) = 2 sqrt(h^2 + 1 - 2 h cos k).
Eigen::Matrix2cd mode_hamiltonian(double k, double h, int L_for_grid_check = 0);

double quasiparticle_energy(double k, double h);

enum class LzMethod { ode, closed_form };

struct ModeResult {
  double k = 0.0;
  double gamma_k = 0.0;  // minimal quasiparticle gap over the sweep
  double p = 0.0;        // pair excitation probability
  LzMethod method = LzMethod::ode;
};

ModeResult lz_probability(double k, const IsingProtocol& proto, LzMethod method,
                          double ode_tol = 1e-11);

struct DensityResult {
  double rho_modesum = 0.0;    // L^{-1} sum_k p_k with the requested method
  double rho_integral = 0.0;   // continuum integral of the closed form
  double rho_asymptotic = 0.0; // sqrt(eps/h0)/(4 sqrt(2) pi) exp(-8 pi (h0-1)^2 / eps)
  double skipped_below = 0.0;  // modes below this estimated p were not integrated
};

DensityResult excitation_density(const IsingProtocol& proto, LzMethod method,
                                 double skip_threshold = 1e-40);

struct CorrelationResult {
  std::vector<int> l;
  std::vector<double> value;   // |L^{-1} sum_k p_k e^{ikl}|^2
  double rho = 0.0;
  double xi = 0.0;             // Gaussian fit value C(l) = C(0) exp(-(l/xi)^2)
};

CorrelationResult zz_correlation(const IsingProtocol& proto, int l_max, LzMethod method);

// Exact finite-L many-body gap of H = -sum(h sz + sx sx) on the periodic
// chain from the two parity sectors (even/antiperiodic vacuum vs odd/periodic
// one-quasiparticle states).
double many_body_gap_free_fermion(int L, double h);

}  // namespace cdlab
