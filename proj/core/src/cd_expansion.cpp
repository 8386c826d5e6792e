#include "cdlab/cd_expansion.hpp"

#include <cmath>

#include "cdlab/parallel.hpp"

namespace cdlab {

std::vector<std::vector<int>> compositions(int p) {
  if (p < 0) throw InvalidInputError("compositions: negative order");
  if (p == 0) return {{}};
  std::vector<std::vector<int>> out;
  for (int first = p; first >= 1; --first)
    for (const auto& rest : compositions(p - first)) {
      std::vector<int> c{first};
      c.insert(c.end(), rest.begin(), rest.end());
      out.push_back(std::move(c));
    }
  return out;
}

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

complexd i_pow_over_fact(int e, int k) { return ipow(e) / factorial(k); }

// ad_{A_{j_k}} ... ad_{A_{j_1}} (B), j_1 innermost.
cxmat nested_ad(const std::vector<int>& j, const std::vector<cxmat>& a, const cxmat& b) {
  cxmat x = b;
  for (int idx : j) {
    const cxmat& op = a[idx - 1];
    x = op * x - x * op;
  }
  return x;
}

cxmat nested_ad_d(const std::vector<int>& j, const std::vector<cxmat>& a,
                  const std::vector<cxmat>& da) {
  cxmat x = da[j[0] - 1];
  for (std::size_t i = 1; i < j.size(); ++i) {
    const cxmat& op = a[j[i] - 1];
    x = op * x - x * op;
  }
  return x;
}

bool orders_available(const std::vector<int>& j, std::size_t available, int skip_above = 0) {
  for (int idx : j) {
    if (static_cast<std::size_t>(idx) > available) return false;
    if (skip_above > 0 && idx >= skip_above) return false;
  }
  return true;
}

// 4th-order finite differences on a uniform grid (one-sided at the edges).
std::vector<cxmat> fd_grid(const std::vector<cxmat>& v, const std::vector<double>& grid) {
  std::size_t n = v.size();
  double h = grid[1] - grid[0];
  std::vector<cxmat> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= 2 && i + 2 < n)
      d[i] = (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) / (12.0 * h);
    else if (i < 2)
      d[i] = (-25.0 * v[i] + 48.0 * v[i + 1] - 36.0 * v[i + 2] + 16.0 * v[i + 3] -
              3.0 * v[i + 4]) /
             (12.0 * h);
    else
      d[i] = (25.0 * v[i] - 48.0 * v[i - 1] + 36.0 * v[i - 2] - 16.0 * v[i - 3] +
              3.0 * v[i - 4]) /
             (12.0 * h);
  }
  return d;
}

}  // namespace

std::pair<cxmat, cxmat> build_mn(int p, const std::vector<cxmat>& a, const std::vector<cxmat>& da,
                                 const cxmat& h_shifted, const cxmat* k) {
  if (p < 1) throw InvalidInputError("build_mn: order must be positive");
  Eigen::Index dim = h_shifted.rows();
  cxmat m = cxmat::Zero(dim, dim), n = cxmat::Zero(dim, dim);
  for (const auto& j : compositions(p)) {
    if (!orders_available(j, a.size())) continue;
    int kk = static_cast<int>(j.size());
    m -= i_pow_over_fact(kk, kk) * nested_ad(j, a, h_shifted);
  }
  if (p == 1) {
    if (!k) throw InvalidInputError("build_mn: p = 1 requires the QA generator");
    n += *k;
  }
  for (const auto& j : compositions(p - 1)) {
    if (j.empty()) continue;
    if (!orders_available(j, std::min(a.size(), da.size()))) continue;
    int mm = static_cast<int>(j.size());
    n += i_pow_over_fact(mm - 1, mm) * nested_ad_d(j, a, da);
  }
  return {m, n};
}

cxmat qa_generator(const FilterSpec& spec, const SpectralData& sd, const cxmat& dh,
                   double* asymmetry_out) {
  cxmat k = -apply_filter_spectral(spec, sd, dh);
  double asym = asymmetry(k);
  if (asymmetry_out) *asymmetry_out = asym;
  return herm_part(k);
}

double CDExpansion::tol_p(int p) const { return 1e-8 * std::pow(scale, p); }

cxmat CDExpansion::h_shifted(std::size_t i) const {
  return family.dense_h(grid[i]) - shifts[i] * cxmat::Identity(omega[i].size(), omega[i].size());
}

cxmat CDExpansion::a_total(double eps, std::size_t i) const {
  Eigen::Index dim = omega[i].size();
  cxmat total = cxmat::Zero(dim, dim);
  double ep = 1.0;
  for (int p = 1; p < order_n; ++p) {
    ep *= eps;
    if (a[p - 1].empty()) throw InvalidInputError("CDExpansion: point data was stripped");
    total += ep * a[p - 1][i];
    total += ep * c[p - 1][i] * cxmat::Identity(dim, dim);
  }
  return total;
}

CDExpansion::Dressing CDExpansion::dressing_unitary(double eps, std::size_t i) const {
  cxmat u = unitary_exp(a_total(eps, i));
  double defect = (u * u.adjoint() - cxmat::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
  if (defect > 1e-10)
    throw NumericalError("dressing_unitary: unitarity defect " + std::to_string(defect));
  return {u, u * omega[i], defect};
}

CDExpansion::Driving CDExpansion::assemble_yn(int n, double eps, std::size_t i) const {
  if (n < 1 || n > order_n) throw InvalidInputError("assemble_yn: n out of range");
  Eigen::Index dim = omega[i].size();
  Driving out;
  if (n == 1) {
    if (k_op.empty()) throw InvalidInputError("assemble_yn: generator not kept");
    out.y_tilde = eps * k_op[i];
    out.y = out.y_tilde;
    out.tail_estimate = 0.0;
    out.hermiticity_defect = asymmetry(out.y);
    return out;
  }
  std::vector<cxmat> ai, dai;
  for (int p = 1; p < order_n; ++p) {
    ai.push_back(a[p - 1][i]);
    dai.push_back(da[p - 1][i]);
  }
  cxmat h = h_shifted(i);
  cxmat y_tilde = cxmat::Zero(dim, dim);
  double last_order_norm = 0.0;
  for (int p = n; p <= 2 * n; ++p) {
    cxmat term = cxmat::Zero(dim, dim);
    for (const auto& j : compositions(p)) {
      if (!orders_available(j, ai.size(), n)) continue;
      int kk = static_cast<int>(j.size());
      term -= i_pow_over_fact(kk, kk) * nested_ad(j, ai, h);
    }
    for (const auto& j : compositions(p - 1)) {
      if (j.empty() || !orders_available(j, ai.size(), n)) continue;
      int mm = static_cast<int>(j.size());
      term += i_pow_over_fact(mm - 1, mm) * nested_ad_d(j, ai, dai);
    }
    double ep = std::pow(eps, p);
    y_tilde += ep * term;
    last_order_norm = ep * hermitian_norm(herm_part(term));
  }
  Dressing dr = dressing_unitary(eps, i);
  out.y_tilde = y_tilde;
  out.y = dr.u * y_tilde * dr.u.adjoint();
  out.tail_estimate = last_order_norm * eps;  // first omitted order, crudely
  out.hermiticity_defect = asymmetry(out.y);
  return out;
}

cxmat CDExpansion::y_interpolated(int n, double eps, double s) const {
  auto it = std::upper_bound(grid.begin(), grid.end(), s);
  std::size_t hi = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - grid.begin(), 1),
                                         grid.size() - 1);
  std::size_t lo = hi - 1;
  double t = (s - grid[lo]) / (grid[hi] - grid[lo]);
  cxmat ylo = assemble_yn(n, eps, lo).y;
  cxmat yhi = assemble_yn(n, eps, hi).y;
  return (1.0 - t) * ylo + t * yhi;
}

void CDExpansion::keep_only(const std::vector<std::size_t>& indices) {
  std::vector<std::uint8_t> keep(points(), 0);
  for (auto i : indices) keep.at(i) = 1;
  for (std::size_t i = 0; i < points(); ++i) {
    if (keep[i]) continue;
    for (auto& per_order : a)
      if (!per_order.empty()) per_order[i] = cxmat();
    for (auto& per_order : da)
      if (!per_order.empty()) per_order[i] = cxmat();
    if (!k_op.empty()) k_op[i] = cxmat();
  }
  spectra.reset();
}

CDExpansion build_expansion(const InteractionFamily& f, const std::vector<double>& grid,
                            const ExpansionOptions& opts) {
  if (opts.order < 1) throw InvalidInputError("build_expansion: order must be >= 1");
  CDExpansion ex;
  ex.family = f;
  ex.grid = grid;
  ex.order_n = opts.order;

  FamilyOptions fo = opts.family;
  fo.jobs = opts.jobs;
  SpectralFamily sf = spectral_family(f, grid, fo);
  std::size_t n = grid.size();
  ex.gaps = sf.gsf.gaps;
  ex.shifts = sf.gsf.shifts;
  ex.omega = sf.gsf.states;
  ex.domega = sf.gsf.dstates;

  ex.filter = build_filter(sf.gsf.min_gap * (1.0 - 1e-9), opts.filter);

  // QA generator and its defining residual on the whole grid
  ex.k_op.resize(n);
  ex.k_residual.resize(n);
  ex.k_asymmetry.resize(n);
  parallel_for(n, opts.jobs, [&](std::size_t i) {
    double asym = 0.0;
    ex.k_op[i] = qa_generator(ex.filter, sf.data[i], f.dense_dh(grid[i]), &asym);
    ex.k_asymmetry[i] = asym;
    ex.k_residual[i] = (ex.domega[i] + complexd(0, 1) * (ex.k_op[i] * ex.omega[i])).norm();
  });
  for (std::size_t i = 0; i < n; ++i)
    if (ex.k_residual[i] > opts.qa_residual_tol)
      throw GeneratorConstructionError("qa_generator: ||dOmega + iK Omega|| = " +
                                       std::to_string(ex.k_residual[i]) + " at s = " +
                                       std::to_string(grid[i]));
  ex.scale = 1.0;
  for (std::size_t i = 0; i < n; ++i) ex.scale = std::max(ex.scale, hermitian_norm(ex.k_op[i]));

  const int n_orders = opts.order - 1;
  ex.a.assign(n_orders, {});
  ex.da.assign(n_orders, {});
  ex.c.assign(n_orders, std::vector<double>(n, 0.0));
  ex.dc.assign(n_orders, std::vector<double>(n, 0.0));
  ex.residual.assign(n_orders, std::vector<double>(n, 0.0));

  // per-point views of solved orders, rebuilt as orders complete
  auto a_view = [&](std::size_t i, int upto) {
    std::vector<cxmat> v;
    for (int q = 1; q <= upto; ++q) v.push_back(ex.a[q - 1][i]);
    return v;
  };
  auto da_view = [&](std::size_t i, int upto) {
    std::vector<cxmat> v;
    for (int q = 1; q <= upto; ++q) v.push_back(ex.da[q - 1][i]);
    return v;
  };

  for (int p = 1; p <= n_orders; ++p) {
    std::vector<cxmat> x(n);
    if (p == 1) {
      for (std::size_t i = 0; i < n; ++i) x[i] = ex.k_op[i];
      double worst = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        worst = std::max(worst, std::abs(ex.omega[i].dot(ex.k_op[i] * ex.omega[i])));
      if (worst > opts.solvability_tol)
        throw ConstantsIntegrationError("build_expansion: <Omega|K Omega> = " +
                                        std::to_string(worst));
    } else {
      // L_p with the designated dA_{p-1} term removed, then the constants.
      std::vector<cxmat> lp(n);
      parallel_for(n, opts.jobs, [&](std::size_t i) {
        auto [m, nn] = build_mn(p, a_view(i, p - 1), da_view(i, p - 1), ex.h_shifted(i),
                                &ex.k_op[i]);
        lp[i] = m + nn - ex.da[p - 2][i];
      });
      std::vector<double> r(n);
      for (std::size_t i = 0; i < n; ++i) {
        complexd val = ex.omega[i].dot((lp[i] + ex.da[p - 2][i]) * ex.omega[i]);
        if (std::abs(val.imag()) > 1e-9)
          throw ConstantsIntegrationError(
              "build_expansion: complex solvability expectation at order " + std::to_string(p));
        r[i] = val.real();
      }
      Eigen::Index dim = ex.omega[0].size();
      for (std::size_t i = 0; i < n; ++i) {
        ex.dc[p - 2][i] = -r[i];
        ex.da[p - 2][i] += ex.dc[p - 2][i] * cxmat::Identity(dim, dim);
      }
      // trapezoid integral, C(0) = 0
      for (std::size_t i = 1; i < n; ++i)
        ex.c[p - 2][i] = ex.c[p - 2][i - 1] +
                         0.5 * (grid[i] - grid[i - 1]) * (ex.dc[p - 2][i - 1] + ex.dc[p - 2][i]);
      for (std::size_t i = 0; i < n; ++i) x[i] = lp[i] + ex.da[p - 2][i];
    }

    ex.a[p - 1].resize(n);
    parallel_for(n, opts.jobs, [&](std::size_t i) {
      cxmat raw = apply_filter_spectral(ex.filter, sf.data[i], x[i]);
      double asym = asymmetry(raw);
      if (asym > opts.hermiticity_tol * std::max(1.0, raw.cwiseAbs().maxCoeff()))
        throw NumericalError("build_expansion: filtered A_" + std::to_string(p) +
                             " asymmetry " + std::to_string(asym));
      ex.a[p - 1][i] = herm_part(raw);
    });
    ex.da[p - 1] = fd_grid(ex.a[p - 1], grid);

    // order-p residual via an independent assembly including A_p
    parallel_for(n, opts.jobs, [&](std::size_t i) {
      auto [m, nn] =
          build_mn(p, a_view(i, p), da_view(i, p - 1), ex.h_shifted(i), &ex.k_op[i]);
      ex.residual[p - 1][i] = ((m + nn) * ex.omega[i]).norm();
    });
    for (std::size_t i = 0; i < n; ++i)
      if (ex.residual[p - 1][i] > opts.residual_tol_base * std::pow(ex.scale, p))
        throw RecursionError("build_expansion: order " + std::to_string(p) + " residual " +
                                 std::to_string(ex.residual[p - 1][i]) + " at s = " +
                                 std::to_string(grid[i]),
                             grid[i], p);
  }

  if (opts.keep_spectra) ex.spectra = std::move(sf.data);
  if (!opts.keep_generator) ex.k_op.clear();
  return ex;
}

GrowthResult growth_diagnostic(const InteractionFamily& f, const GrowthOptions& opts) {
  const int orders = opts.orders;
  const double delta = opts.fd_delta;
  GrowthResult out;

  // stencil points s* + j delta, j = 0..orders-1; order p is built on the
  // first (orders - p + 1) of them, one-sided derivatives
  std::vector<double> pts(orders);
  for (int j = 0; j < orders; ++j) pts[j] = opts.s_star + j * delta;

  std::vector<LocalOperator> h_at, dh_at, k_at;
  for (double s : pts) {
    h_at.push_back(f.hamiltonian(s));
    dh_at.push_back(f.dhamiltonian(s));
  }

  // filter tuned to the family gap on a coarse scan
  FamilyOptions fo;
  fo.backend = f.sites() <= 10 ? SpectralBackend::dense : SpectralBackend::iterative;
  GroundStateFamily gsf = ground_family(f, uniform_grid(21), fo);
  out.min_gap = gsf.min_gap;
  FilterOptions fopts;
  fopts.tail_tol = 1e-6;  // qualitative diagnostic, shorter horizon
  FilterSpec spec = build_filter(gsf.min_gap * (1.0 - 1e-9), fopts);

  auto filt = [&](const LocalOperator& h, const LocalOperator& x, double& trunc) {
    auto r = apply_filter_quadrature(spec, h, x, opts.quad);
    trunc += r.truncation_estimate;
    return r.result;
  };

  // a[p-1][j] = A_p at pts[j]; j ranges over 0..orders-p
  std::vector<std::vector<LocalOperator>> a(orders), da(orders);
  std::vector<double> trunc(orders + 1, 0.0);

  for (int j = 0; j < orders; ++j) {
    k_at.push_back(filt(h_at[j], dh_at[j], trunc[0]));
    k_at.back() *= complexd(-1.0, 0.0);
  }
  for (int p = 1; p <= orders; ++p) {
    int npts = orders - p + 1;
    a[p - 1].resize(npts, LocalOperator(f.lattice()));
    for (int j = 0; j < npts; ++j) {
      LocalOperator x(f.lattice());
      if (p == 1) {
        x = k_at[j];
      } else {
        // L_p plus dA_{p-1}: H-commutator sums (j != (p)) and dA-sums
        for (const auto& comp : compositions(p)) {
          if (*std::max_element(comp.begin(), comp.end()) >= p) continue;
          int kk = static_cast<int>(comp.size());
          LocalOperator nested = h_at[j];
          for (int idx : comp) nested = commutator(a[idx - 1][j], nested);
          nested *= -i_pow_over_fact(kk, kk);
          x += nested;
        }
        for (const auto& comp : compositions(p - 1)) {
          if (comp.empty()) continue;
          int mm = static_cast<int>(comp.size());
          LocalOperator nested = da[comp[0] - 1][j];
          for (std::size_t q = 1; q < comp.size(); ++q)
            nested = commutator(a[comp[q] - 1][j], nested);
          nested *= i_pow_over_fact(mm - 1, mm);
          x += nested;
        }
      }
      a[p - 1][j] = filt(h_at[j], x, trunc[p]);
    }
    // one-sided derivative at the surviving points
    da[p - 1].resize(npts > 1 ? npts - 1 : 0, LocalOperator(f.lattice()));
    for (int j = 0; j + 1 < npts; ++j) {
      LocalOperator d = a[p - 1][j + 1];
      d -= a[p - 1][j];
      d *= complexd(1.0 / delta, 0.0);
      da[p - 1][j] = d;
    }
  }

  double prev = 0.0;
  for (int p = 1; p <= orders; ++p) {
    LocalOperator op = a[p - 1][0];
    // range at a relative coefficient threshold
    double top = 0.0;
    for (const auto& [k, v] : op.terms()) top = std::max(top, std::abs(v));
    LocalOperator thresholded = op;
    thresholded.prune(opts.report_threshold * top);
    GrowthRow row;
    row.p = p;
    row.loc_norm = op.local_norm();
    row.range = thresholded.range();
    row.ratio = p == 1 ? 0.0 : (prev > 0 ? row.loc_norm / prev : 0.0);
    row.truncation = trunc[p];
    prev = row.loc_norm;
    out.rows.push_back(row);
    out.a_ops.push_back(std::move(op));
  }
  return out;
}

}  // namespace cdlab
