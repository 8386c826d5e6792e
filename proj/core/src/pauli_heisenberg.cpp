#include "cdlab/pauli_heisenberg.hpp"

#include <bit>
#include <cmath>

namespace cdlab {

double block_sum_norm(const LocalOperator& op) {
  double s = 0.0;
  for (const auto& [k, c] : op.terms()) s += std::abs(c);
  return s;
}

namespace {

inline bool anticommute(std::uint64_t xa, std::uint64_t za, std::uint64_t xb, std::uint64_t zb) {
  return ((std::popcount(xa & zb) + std::popcount(za & xb)) & 1) != 0;
}

inline complexd product_phase(std::uint64_t xa, std::uint64_t za, std::uint64_t xb,
                              std::uint64_t zb) {
  int e = std::popcount(xa & za) + std::popcount(xb & zb) + 2 * std::popcount(za & xb) -
          std::popcount((xa ^ xb) & (za ^ zb));
  return ipow(e);
}

}  // namespace

HeisenbergEngine::HeisenbergEngine(const LocalOperator& h, int support_radius, double prune,
                                   double series_tol, double max_step_angle)
    : lattice_(h.lattice()),
      n_(h.lattice().sites()),
      radius_(support_radius),
      prune_(prune),
      series_tol_(series_tol),
      max_angle_(max_step_angle) {
  use_flat_ = n_ <= 10;
  for (const auto& [k, c] : h.terms()) {
    if ((k.first | k.second) == 0) continue;  // scalar part cancels in the conjugation
    hterms_.push_back({k.first, k.second, c});
  }
  // Taylor step scale: only terms overlapping a word act on it, so the
  // relevant bound is the per-site coefficient density times the largest
  // word footprint, not the extensive sum.
  std::vector<double> density(n_, 0.0);
  int h_range = 0;
  for (const auto& t : hterms_) {
    std::uint64_t s = t.x | t.z;
    h_range = std::max(h_range, lattice_.diameter(s));
    for (int site = 0; site < n_; ++site)
      if ((s >> site) & 1u) density[site] += std::abs(t.c);
  }
  double dmax = 0.0;
  for (double d : density) dmax = std::max(dmax, d);
  ad_bound_ = 2.0 * dmax * std::min<double>(n_, radius_ + 2 * h_range + 1);
  if (use_flat_) {
    diam_ok_.assign(1ull << n_, 1);
    for (std::uint64_t m = 1; m < (1ull << n_); ++m)
      diam_ok_[m] = lattice_.diameter(m) <= radius_ ? 1 : 0;
    // per-term code tables over the packed index: bit 2 set if the words
    // anticommute, bits 0-1 the product phase exponent
    const std::uint64_t size = 1ull << (2 * n_);
    const std::uint64_t xmask = (1ull << n_) - 1;
    codes_.resize(hterms_.size());
    for (std::size_t a = 0; a < hterms_.size(); ++a) {
      codes_[a].resize(size);
      const auto& t = hterms_[a];
      for (std::uint64_t idx = 0; idx < size; ++idx) {
        std::uint64_t px = idx & xmask, pz = idx >> n_;
        std::uint8_t code = 0;
        if (anticommute(t.x, t.z, px, pz)) {
          int e = std::popcount(t.x & t.z) + std::popcount(px & pz) +
                  2 * std::popcount(t.z & px) - std::popcount((t.x ^ px) & (t.z ^ pz));
          code = 0x4u | static_cast<std::uint8_t>(((e % 4) + 4) % 4);
        }
        codes_[a][idx] = code;
      }
    }
  }
}

HeisenbergEngine::State HeisenbergEngine::load(const LocalOperator& x) const {
  if (x.lattice() != lattice_) throw InvalidInputError("HeisenbergEngine: lattice mismatch");
  State s;
  s.flat = use_flat_;
  if (use_flat_) {
    s.dense.assign(1ull << (2 * n_), complexd{0, 0});
    for (const auto& [k, c] : x.terms()) s.dense[k.first | (k.second << n_)] = c;
  } else {
    for (const auto& [k, c] : x.terms()) s.sparse[{k.first, k.second}] = c;
  }
  return s;
}

void HeisenbergEngine::ad_flat(const std::vector<complexd>& in, std::vector<complexd>& out) const {
  const std::uint64_t size = in.size();
  std::fill(out.begin(), out.end(), complexd{0, 0});
  for (std::size_t a = 0; a < hterms_.size(); ++a) {
    const auto& t = hterms_[a];
    const std::uint64_t shift_key = t.x | (t.z << n_);
    const std::uint8_t* code = codes_[a].data();
    const complexd twice[4] = {2.0 * t.c, complexd(0, 2) * t.c, -2.0 * t.c, complexd(0, -2) * t.c};
    for (std::uint64_t idx = 0; idx < size; ++idx) {
      const complexd c = in[idx];
      if (c.real() == 0.0 && c.imag() == 0.0) continue;
      const std::uint8_t cd = code[idx];
      if (!(cd & 0x4u)) continue;  // commuting pair, [h, P] = 0
      out[idx ^ shift_key] += twice[cd & 0x3u] * c;  // [h, P] = 2 hP otherwise
    }
  }
}

void HeisenbergEngine::ad_sparse(const std::unordered_map<Key, complexd, KeyHash>& in,
                                 std::unordered_map<Key, complexd, KeyHash>& out) const {
  out.clear();
  for (const auto& [k, c] : in) {
    for (const auto& t : hterms_) {
      if (!anticommute(t.x, t.z, k.x, k.z)) continue;
      Key nk{t.x ^ k.x, t.z ^ k.z};
      out[nk] += 2.0 * t.c * c * product_phase(t.x, t.z, k.x, k.z);
    }
  }
}

void HeisenbergEngine::taylor_step(State& s, double dt) {
  const complexd idt(0.0, dt);
  if (s.flat) {
    std::vector<complexd> acc = s.dense, term = s.dense, next(s.dense.size());
    double term_norm = 0.0;
    for (const auto& v : term) term_norm += std::abs(v);
    double base = std::max(term_norm, 1e-300);
    bool converged = false;
    for (int k = 1; k <= 48; ++k) {
      ad_flat(term, next);
      const complexd f = idt / static_cast<double>(k);
      term_norm = 0.0;
      for (std::uint64_t i = 0; i < next.size(); ++i) {
        next[i] *= f;
        acc[i] += next[i];
        term_norm += std::abs(next[i]);
      }
      term.swap(next);
      if (term_norm < series_tol_ * base) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw TruncationError("HeisenbergEngine: Taylor series did not converge", term_norm);
    // prune and truncate by support diameter
    const std::uint64_t xmask = (1ull << n_) - 1;
    double scale = 0.0;
    for (const auto& v : acc) scale += std::abs(v);
    double cutoff = prune_ * std::max(scale, 1e-300) / static_cast<double>(acc.size());
    for (std::uint64_t i = 0; i < acc.size(); ++i) {
      if (acc[i].real() == 0.0 && acc[i].imag() == 0.0) continue;
      std::uint64_t support = (i & xmask) | (i >> n_);
      if (!diam_ok_[support]) {
        dropped_ += std::abs(acc[i]);
        acc[i] = complexd{0, 0};
      } else if (std::abs(acc[i]) < cutoff) {
        dropped_ += std::abs(acc[i]);
        acc[i] = complexd{0, 0};
      }
    }
    s.dense.swap(acc);
  } else {
    std::unordered_map<Key, complexd, KeyHash> acc = s.sparse, term = s.sparse, next;
    double base = 0.0;
    for (const auto& [k, v] : term) base += std::abs(v);
    base = std::max(base, 1e-300);
    bool converged = false;
    for (int k = 1; k <= 48; ++k) {
      ad_sparse(term, next);
      const complexd f = idt / static_cast<double>(k);
      double term_norm = 0.0;
      for (auto& [key, v] : next) {
        v *= f;
        acc[key] += v;
        term_norm += std::abs(v);
      }
      term.swap(next);
      if (term_norm < series_tol_ * base) {
        converged = true;
        break;
      }
    }
    if (!converged) throw TruncationError("HeisenbergEngine: Taylor series did not converge", 0.0);
    double scale = 0.0;
    for (const auto& [k, v] : acc) scale += std::abs(v);
    double cutoff = prune_ * std::max(scale, 1e-300) / std::max<std::size_t>(acc.size(), 1);
    for (auto it = acc.begin(); it != acc.end();) {
      std::uint64_t support = it->first.x | it->first.z;
      bool drop = std::abs(it->second) < cutoff ||
                  (support != 0 && lattice_.diameter(support) > radius_);
      if (drop) {
        dropped_ += std::abs(it->second);
        it = acc.erase(it);
      } else {
        ++it;
      }
    }
    s.sparse.swap(acc);
  }
}

void HeisenbergEngine::advance(State& s, double dt) {
  if (dt == 0.0) return;
  double step = max_angle_ / std::max(ad_bound_, 1e-12);
  int m = std::max(1, static_cast<int>(std::ceil(std::abs(dt) / step)));
  double sub = dt / m;
  for (int i = 0; i < m; ++i) taylor_step(s, sub);
}

void HeisenbergEngine::accumulate(LocalOperator& target, const State& s, complexd coeff) const {
  if (s.flat) {
    const std::uint64_t xmask = (1ull << n_) - 1;
    for (std::uint64_t i = 0; i < s.dense.size(); ++i) {
      if (s.dense[i].real() == 0.0 && s.dense[i].imag() == 0.0) continue;
      target.add(PauliString(coeff * s.dense[i], i & xmask, i >> n_, n_));
    }
  } else {
    for (const auto& [k, v] : s.sparse) target.add(PauliString(coeff * v, k.x, k.z, n_));
  }
}

LocalOperator HeisenbergEngine::to_operator(const State& s) const {
  LocalOperator out(lattice_);
  accumulate(out, s, complexd{1.0, 0.0});
  return out;
}

}  // namespace cdlab
