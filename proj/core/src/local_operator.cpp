#include "cdlab/local_operator.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace cdlab {

void LocalOperator::add(const PauliString& p) {
  if (p.n_sites > 0 && p.n_sites != lattice_.sites())
    throw InvalidInputError("LocalOperator::add: string built for a different lattice");
  if (p.support() >> lattice_.sites())
    throw InvalidInputError("LocalOperator::add: string support outside the lattice");
  Key k{p.x, p.z};
  auto it = terms_.find(k);
  if (it == terms_.end()) {
    if (std::abs(p.coeff) > merge_threshold) terms_.emplace(k, p.coeff);
  } else {
    it->second += p.coeff;
    if (std::abs(it->second) <= merge_threshold) terms_.erase(it);
  }
}

std::vector<PauliString> LocalOperator::strings() const {
  std::vector<PauliString> out;
  out.reserve(terms_.size());
  for (const auto& [k, c] : terms_) out.emplace_back(c, k.first, k.second, lattice_.sites());
  return out;
}

LocalOperator& LocalOperator::operator+=(const LocalOperator& o) {
  if (lattice_ != o.lattice_)
    throw InvalidInputError("LocalOperator: adding operators on different lattices");
  for (const auto& [k, c] : o.terms_) add(PauliString(c, k.first, k.second, lattice_.sites()));
  return *this;
}

LocalOperator& LocalOperator::operator-=(const LocalOperator& o) {
  if (lattice_ != o.lattice_)
    throw InvalidInputError("LocalOperator: subtracting operators on different lattices");
  for (const auto& [k, c] : o.terms_) add(PauliString(-c, k.first, k.second, lattice_.sites()));
  return *this;
}

LocalOperator& LocalOperator::operator*=(complexd c) {
  if (c == complexd{0.0, 0.0}) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, v] : terms_) v *= c;
  return *this;
}

LocalOperator LocalOperator::adjoint() const {
  LocalOperator out(lattice_);
  for (const auto& [k, c] : terms_) out.terms_.emplace(k, std::conj(c));
  return out;
}

double LocalOperator::hermiticity_defect() const {
  double d = 0.0;
  for (const auto& [k, c] : terms_) d = std::max(d, std::abs(c.imag()));
  return d;
}

int LocalOperator::range() const {
  int r = 0;
  for (const auto& [k, c] : terms_) {
    std::uint64_t s = k.first | k.second;
    if (s) r = std::max(r, lattice_.diameter(s));
  }
  return r;
}

std::map<std::uint64_t, std::vector<PauliString>> LocalOperator::support_blocks() const {
  std::map<std::uint64_t, std::vector<PauliString>> blocks;
  for (const auto& [k, c] : terms_)
    blocks[k.first | k.second].emplace_back(c, k.first, k.second, lattice_.sites());
  return blocks;
}

double block_operator_norm(const std::vector<PauliString>& words, const LatticeSpec& lattice) {
  if (words.empty()) return 0.0;
  std::uint64_t support = 0;
  for (const auto& w : words) support |= w.support();
  if (support == 0) {  // scalar block
    complexd c{0, 0};
    for (const auto& w : words) c += w.coeff;
    return std::abs(c);
  }
  // map lattice sites to a compact register
  std::vector<int> sites;
  for (int s = 0; s < lattice.sites(); ++s)
    if ((support >> s) & 1u) sites.push_back(s);
  int n = static_cast<int>(sites.size());
  if (n > 12) throw ResourceError("block_operator_norm: support larger than 12 sites");
  cxmat block = cxmat::Zero(1 << n, 1 << n);
  for (const auto& w : words) {
    std::uint64_t cx = 0, cz = 0;
    for (int i = 0; i < n; ++i) {
      if ((w.x >> sites[i]) & 1u) cx |= (1ull << i);
      if ((w.z >> sites[i]) & 1u) cz |= (1ull << i);
    }
    accumulate_dense(block, PauliString(w.coeff, cx, cz, n), n);
  }
  Eigen::JacobiSVD<cxmat> svd(block);
  return svd.singularValues()(0);
}

double LocalOperator::local_norm() const {
  auto blocks = support_blocks();
  std::vector<double> per_site(lattice_.sites(), 0.0);
  for (const auto& [mask, words] : blocks) {
    if (mask == 0) continue;  // the scalar block contains no site
    double nrm = block_operator_norm(words, lattice_);
    for (int s = 0; s < lattice_.sites(); ++s)
      if ((mask >> s) & 1u) per_site[s] += nrm;
  }
  double sup = 0.0;
  for (double v : per_site) sup = std::max(sup, v);
  return sup;
}

void accumulate_dense(cxmat& target, const PauliString& p, int n_sites) {
  const std::uint64_t dim = 1ull << n_sites;
  complexd base = p.coeff * ipow(std::popcount(p.x & p.z));
  for (std::uint64_t b = 0; b < dim; ++b) {
    complexd v = (std::popcount(p.z & b) & 1) ? -base : base;
    target(static_cast<Eigen::Index>(b ^ p.x), static_cast<Eigen::Index>(b)) += v;
  }
}

cxmat LocalOperator::dense_realization(int site_cap) const {
  int n = lattice_.sites();
  if (n > site_cap)
    throw ResourceError("dense_realization: " + std::to_string(n) +
                        " sites exceeds the configured cap of " + std::to_string(site_cap));
  cxmat out = cxmat::Zero(1 << n, 1 << n);
  for (const auto& [k, c] : terms_) accumulate_dense(out, PauliString(c, k.first, k.second, n), n);
  return out;
}

void apply_string(const PauliString& p, const cxvec& in, cxvec& out) {
  const std::uint64_t dim = static_cast<std::uint64_t>(in.size());
  complexd base = p.coeff * ipow(std::popcount(p.x & p.z));
  for (std::uint64_t b = 0; b < dim; ++b) {
    complexd v = (std::popcount(p.z & b) & 1) ? -base : base;
    out(static_cast<Eigen::Index>(b ^ p.x)) += v * in(static_cast<Eigen::Index>(b));
  }
}

LocalOperator commutator(const LocalOperator& a, const LocalOperator& b) {
  if (a.lattice() != b.lattice())
    throw InvalidInputError("commutator: operators on different lattices");
  LocalOperator out(a.lattice());
  for (const auto& [ka, ca] : a.terms()) {
    std::uint64_t sa = ka.first | ka.second;
    PauliString wa(ca, ka.first, ka.second, a.lattice().sites());
    for (const auto& [kb, cb] : b.terms()) {
      if ((sa & (kb.first | kb.second)) == 0) continue;  // disjoint supports commute
      PauliString wb(cb, kb.first, kb.second, b.lattice().sites());
      if (words_commute(wa, wb)) continue;
      PauliString prod = multiply(wa, wb);  // [P,Q] = 2 PQ for anticommuting words
      prod.coeff *= 2.0;
      out.add(prod);
    }
  }
  return out;
}

void LocalOperator::prune(double threshold) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) <= threshold)
      it = terms_.erase(it);
    else
      ++it;
  }
}

void LocalOperator::serialize(std::ostream& os) const {
  os << "lattice " << lattice_.length << " " << lattice_.dim << " "
     << (lattice_.boundary == Boundary::periodic ? "periodic" : "open") << "\n";
  char buf[128];
  for (const auto& [k, c] : terms_) {
    PauliString p(c, k.first, k.second, lattice_.sites());
    auto letters = p.letters();
    std::string sites, word;
    for (auto [site, pl] : letters) {
      if (!sites.empty()) sites += ',';
      sites += std::to_string(site);
      word += pauli_char(pl);
    }
    if (letters.empty()) {
      sites = "-";
      word = "I";
    }
    std::snprintf(buf, sizeof buf, "%.17g %.17g", c.real(), c.imag());
    os << sites << " " << word << " " << buf << "\n";
  }
}

LocalOperator LocalOperator::deserialize(std::istream& is) {
  std::string tag, bnd;
  int L = 0, d = 0;
  if (!(is >> tag >> L >> d >> bnd) || tag != "lattice")
    throw IoError("LocalOperator::deserialize: missing lattice header");
  LocalOperator out(LatticeSpec(L, d, bnd == "periodic" ? Boundary::periodic : Boundary::open));
  std::string sites, word;
  double re = 0, im = 0;
  while (is >> sites >> word >> re >> im) {
    std::map<int, Pauli> letters;
    if (sites != "-") {
      std::stringstream ss(sites);
      std::string tok;
      std::size_t i = 0;
      while (std::getline(ss, tok, ',')) {
        if (i >= word.size()) throw IoError("LocalOperator::deserialize: word/site mismatch");
        char ch = word[i++];
        Pauli p = ch == 'X' ? Pauli::X : (ch == 'Y' ? Pauli::Y : Pauli::Z);
        letters[std::stoi(tok)] = p;
      }
    }
    out.add(PauliString(complexd(re, im), letters, out.lattice().sites()));
  }
  return out;
}

}  // namespace cdlab
