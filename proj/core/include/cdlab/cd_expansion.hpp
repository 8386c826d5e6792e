#pragma once

#include <optional>
#include <vector>

#include "cdlab/filter.hpp"
#include "cdlab/interaction_family.hpp"
#include "cdlab/spectra.hpp"

namespace cdlab {

// All compositions of p (ordered tuples of positive integers summing to p),
// first entry descending: p=3 -> (3), (2,1), (1,2), (1,1,1). Count 2^{p-1}.
std::vector<std::vector<int>> compositions(int p);

// Order-p generator-condition pair. With U = e^{-iA}, A = sum eps^j A_j, the
// dressed driving in the rotated frame expands as sum_p eps^p (M_p + N_p):
//   M_p = - sum_{d(j)=p}   (i^k / k!) ad_{A_{j_k}} ... ad_{A_{j_1}} (H)
//   N_p = delta_{p,1} K + sum_{d(j)=p-1} (i^{m-1} / m!) ad_{A_{j_m}} ... ad_{A_{j_2}} (dA_{j_1})
// (innermost index acts first). The construction chooses A_p so that
// (M_p + N_p) Omega = 0 for p < n. `a[q-1]`/`da[q-1]` hold A_q and its
// s-derivative; orders not yet present are skipped.
std::pair<cxmat, cxmat> build_mn(int p, const std::vector<cxmat>& a, const std::vector<cxmat>& da,
                                 const cxmat& h_shifted, const cxmat* k);

struct ExpansionOptions {
  int order = 3;  // n: solves A_1 .. A_{n-1}
  double residual_tol_base = 1e-8;
  double qa_residual_tol = 1e-7;
  double solvability_tol = 1e-7;
  double hermiticity_tol = 1e-9;
  bool keep_generator = true;   // retain K on the grid (needed for Y_1 and diagnostics)
  bool keep_spectra = false;    // retain full eigendata (memory-heavy)
  FamilyOptions family{};
  FilterOptions filter{};
  int jobs = 1;
};

// Spectral-backend expansion on an s-grid: filtered Hermitian parts A_p,
// integration constants C_p (C_p(0) = 0), s-derivatives, and the order
// residuals ||(M_p+N_p) Omega||.
class CDExpansion {
 public:
  InteractionFamily family;
  std::vector<double> grid;
  int order_n = 0;
  FilterSpec filter;
  std::string backend = "spectral";
  double scale = 1.0;  // residual scale, max(1, max_s ||K||)

  std::vector<double> shifts, gaps;
  std::vector<cxvec> omega, domega;
  std::vector<cxmat> k_op;              // empty unless keep_generator
  std::vector<double> k_residual;       // ||dOmega + i K Omega|| per point
  std::vector<double> k_asymmetry;      // pre-symmetrization defect of K

  std::vector<std::vector<cxmat>> a;    // a[p-1][i], Hermitian filtered part
  std::vector<std::vector<cxmat>> da;   // derivative incl. the dC Id piece
  std::vector<std::vector<double>> c;   // C_p(s)
  std::vector<std::vector<double>> dc;
  std::vector<std::vector<double>> residual;  // ||(M_p+N_p)Omega||

  std::optional<std::vector<SpectralData>> spectra;

  std::size_t points() const { return grid.size(); }
  double tol_p(int p) const;
  cxmat h_shifted(std::size_t i) const;
  cxmat a_total(double eps, std::size_t i) const;

  struct Dressing {
    cxmat u;
    cxvec phi;
    double unitarity_defect;
  };
  Dressing dressing_unitary(double eps, std::size_t i) const;

  struct Driving {
    cxmat y_tilde;
    cxmat y;  // U y_tilde U^dagger
    double tail_estimate;
    double hermiticity_defect;
  };
  // Y_n for n <= order: composition sums of degree n..2n with entries < n.
  Driving assemble_yn(int n, double eps, std::size_t i) const;

  // Interpolation helper for dynamics: Y_n on an arbitrary s in [0,1] by
  // piecewise-linear interpolation of the grid operators.
  cxmat y_interpolated(int n, double eps, double s) const;

  // Release per-point data except at the given grid indices (memory relief
  // for larger volumes; residuals stay recorded).
  void keep_only(const std::vector<std::size_t>& indices);
};

CDExpansion build_expansion(const InteractionFamily& f, const std::vector<double>& grid,
                            const ExpansionOptions& opts = {});

// Quasi-adiabatic generator at one grid point: K = -(filter dH), Hermitian
// part enforced, sign fixed by dOmega = -i K Omega.
cxmat qa_generator(const FilterSpec& spec, const SpectralData& sd, const cxmat& dh,
                   double* asymmetry_out = nullptr);

// ---- quadrature-backend growth diagnostic ----

struct GrowthOptions {
  double s_star = 0.5;
  double fd_delta = 0.02;
  int orders = 4;
  double report_threshold = 1e-6;  // relative coefficient cut for range measurement
  QuadFilterOptions quad{};
};

struct GrowthRow {
  int p = 0;
  double loc_norm = 0.0;
  int range = 0;
  double ratio = 0.0;  // loc_norm(p) / loc_norm(p-1)
  double truncation = 0.0;
};

struct GrowthResult {
  std::vector<GrowthRow> rows;
  std::vector<LocalOperator> a_ops;  // A_p at s_star
  double min_gap = 0.0;
};

GrowthResult growth_diagnostic(const InteractionFamily& f, const GrowthOptions& opts = {});

}  // namespace cdlab
