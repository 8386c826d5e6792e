#pragma once

#include <optional>
#include <vector>

#include "cdlab/dense.hpp"
#include "cdlab/interaction_family.hpp"

namespace cdlab {

// Full eigendecomposition with the ground energy shifted to zero.
struct SpectralData {
  Eigen::VectorXd energies;  // ascending, energies(0) == 0
  cxmat vectors;             // orthonormal columns
  double shift = 0.0;        // subtracted ground energy
  double gap = 0.0;          // energies(1) - energies(0)

  cxvec ground() const { return vectors.col(0); }
  Eigen::Index dim() const { return energies.size(); }
};

struct EigOptions {
  double hermiticity_tol = 1e-12;     // relative to the matrix scale
  double degeneracy_threshold = 1e-8; // simple vs numerically degenerate ground level
  double residual_tol = 1e-10;        // relative eigenpair residual
};

SpectralData eigendecompose(const cxmat& h, const EigOptions& opts = {});

// Lowest two eigenpairs by Lanczos with full reorthogonalization on a
// matrix-free apply. Deterministic for a fixed seed.
struct LanczosResult {
  double e0 = 0.0;
  double e1 = 0.0;
  cxvec ground;
};
LanczosResult lanczos_lowest(const std::function<void(const cxvec&, cxvec&)>& apply,
                             Eigen::Index dim, std::uint64_t seed = 7, int max_iter = 400,
                             double tol = 1e-12);

enum class SpectralBackend { dense, iterative };

struct FamilyOptions {
  SpectralBackend backend = SpectralBackend::dense;
  double gap_floor = 1e-6;  // below this the family is rejected as not gapped
  EigOptions eig{};
  std::uint64_t seed = 7;
  int jobs = 1;
};

// Gauge-fixed ground-state family on a grid: H_s Omega_s = 0 after the
// per-point shift, adjacent overlaps real positive, <Omega|dOmega> = 0 with
// dOmega from the first-order formula -H^{-1}(1-P)(dH)Omega.
struct GroundStateFamily {
  std::vector<double> grid;
  std::vector<cxvec> states;
  std::vector<cxvec> dstates;
  std::vector<double> gaps;
  std::vector<double> shifts;
  double min_gap = 0.0;

  std::size_t size() const { return grid.size(); }
};

GroundStateFamily ground_family(const InteractionFamily& f, const std::vector<double>& grid,
                                const FamilyOptions& opts = {});

double min_gap(const InteractionFamily& f, const std::vector<double>& grid,
               const FamilyOptions& opts = {});

// Dense spectral data along the grid (the expansion's spectral backend needs
// every eigenpair, not just the ground state). States share the ground
// family's phase alignment.
struct SpectralFamily {
  std::vector<double> grid;
  std::vector<SpectralData> data;
  GroundStateFamily gsf;
};

SpectralFamily spectral_family(const InteractionFamily& f, const std::vector<double>& grid,
                               const FamilyOptions& opts = {});

std::vector<double> uniform_grid(int points, double a = 0.0, double b = 1.0);

}  // namespace cdlab
