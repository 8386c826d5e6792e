#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "cdlab/interaction_family.hpp"
#include "cdlab/spectra.hpp"

namespace cdlab {

// Driven Schrödinger integration eps d/ds psi = -i (H_s + Y_s) psi with a
// commutator-free 4th-order Magnus stepper (two exponentials per step, Gauss
// midpoint Hamiltonians), adaptive by step doubling.
struct DriveProtocol {
  double eps = 0.1;
  std::vector<double> out_grid;  // s values where the state/observables are recorded
  double tolerance = 1e-9;       // local error per unit s
  double max_step = 0.05;
  std::function<cxmat(double)> extra_driving;  // optional Y(s), dense

  DriveProtocol() = default;
  DriveProtocol(double e, std::vector<double> grid) : eps(e), out_grid(std::move(grid)) {
    if (eps <= 0.0 || eps > 1.0) throw InvalidInputError("DriveProtocol: need 0 < eps <= 1");
  }
};

struct Trajectory {
  std::vector<double> s;
  std::vector<cxvec> states;
  std::map<std::string, std::vector<double>> observables;  // real expectations
  std::vector<double> norms;
  std::size_t steps_taken = 0;
};

using ObservableSet = std::vector<std::pair<std::string, cxmat>>;

Trajectory evolve(const InteractionFamily& f, const DriveProtocol& proto, const cxvec& psi0,
                  const ObservableSet& observables = {});

// |<psi|O|psi> - <ref|O|ref>| per recorded s and its maximum.
struct ErrorCurve {
  std::vector<double> s;
  std::vector<double> error;
  double max_error = 0.0;
};
ErrorCurve diabatic_error(const Trajectory& traj, const std::vector<cxvec>& reference,
                          const cxmat& observable);

// eps * integral ||dH|| / gap^2 ds on the family grid (dense operator norm).
double naive_bound(const InteractionFamily& f, const GroundStateFamily& gsf, double eps);

// Product-state demo: one site evolved exactly, fidelity |<Omega,psi>|^{2V}.
struct OrthogonalityRow {
  double volume;
  double log_fidelity;
  double local_error;
};
struct OrthogonalityResult {
  std::vector<OrthogonalityRow> rows;
  double single_site_overlap_sq;  // |<Omega_s, psi(s)>|^2 at the final time
  double local_error;
};
OrthogonalityResult orthogonality_demo(const InteractionFamily& single_site,
                                       const std::vector<double>& volumes, double eps,
                                       const cxmat& observable);

// Backward Heisenberg evolution of O and the commutator norms
// ||[Y_{s'}, O(s, s')]|| on a grid of s' <= s, with the Duhamel integral.
struct DuhamelResult {
  std::vector<double> s_prime;
  std::vector<double> comm_norm;
  double integral = 0.0;  // (1/eps) int ||[Y, O(s,s')]|| ds'
};
DuhamelResult duhamel_diagnostic(const InteractionFamily& f, double eps,
                                 const std::function<cxmat(double)>& y_of_s, const cxmat& obs,
                                 double s_final, int grid_points, double tolerance = 1e-9);

}  // namespace cdlab
