#pragma once

#include <bit>
#include <complex>
#include <cstdint>
#include <map>
#include <string>

#include "cdlab/errors.hpp"

namespace cdlab {

using complexd = std::complex<double>;

enum class Pauli : std::uint8_t { X, Y, Z };

inline char pauli_char(Pauli p) { return p == Pauli::X ? 'X' : (p == Pauli::Y ? 'Y' : 'Z'); }

// One Pauli word with a complex coefficient. Site s carries X when bit s of
// `x` is set, Z when bit s of `z` is set, Y when both are (Y = iXZ); identity
// elsewhere. Words are Hermitian, so the adjoint only conjugates the
// coefficient. `n_sites` records the lattice the string was built against
// (0 = unspecified).
struct PauliString {
  complexd coeff{0.0, 0.0};
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  int n_sites = 0;

  PauliString() = default;
  PauliString(complexd c, std::uint64_t x_mask, std::uint64_t z_mask, int n = 0)
      : coeff(c), x(x_mask), z(z_mask), n_sites(n) {}

  PauliString(complexd c, const std::map<int, Pauli>& letters, int n = 0) : coeff(c), n_sites(n) {
    for (auto [site, p] : letters) {
      if (site < 0 || site >= 64 || (n > 0 && site >= n))
        throw InvalidInputError("PauliString: site index out of range");
      if (p != Pauli::Z) x |= (1ull << site);
      if (p != Pauli::X) z |= (1ull << site);
    }
  }

  std::uint64_t support() const { return x | z; }
  int weight() const { return std::popcount(support()); }
  bool is_identity_word() const { return support() == 0; }

  std::map<int, Pauli> letters() const {
    std::map<int, Pauli> m;
    std::uint64_t s = support();
    while (s) {
      int site = std::countr_zero(s);
      s &= s - 1;
      bool bx = (x >> site) & 1u, bz = (z >> site) & 1u;
      m[site] = bx && bz ? Pauli::Y : (bx ? Pauli::X : Pauli::Z);
    }
    return m;
  }

  std::string word() const {
    std::string w;
    for (auto [site, p] : letters()) {
      w += pauli_char(p);
      w += std::to_string(site);
    }
    return w.empty() ? std::string("I") : w;
  }
};

inline complexd ipow(int e) {
  switch (((e % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

// Exact Pauli-group product. With W(x,z) = i^{|x&z|} X^x Z^z per word,
//   W1 W2 = i^(|x1&z1| + |x2&z2| + 2|z1&x2| - |x3&z3|) W3.
inline PauliString multiply(const PauliString& a, const PauliString& b) {
  if (a.n_sites > 0 && b.n_sites > 0 && a.n_sites != b.n_sites)
    throw InvalidInputError("multiply: Pauli strings live on different lattices");
  std::uint64_t x3 = a.x ^ b.x, z3 = a.z ^ b.z;
  int e = std::popcount(a.x & a.z) + std::popcount(b.x & b.z) + 2 * std::popcount(a.z & b.x) -
          std::popcount(x3 & z3);
  return {a.coeff * b.coeff * ipow(e), x3, z3, a.n_sites > 0 ? a.n_sites : b.n_sites};
}

inline bool words_commute(const PauliString& a, const PauliString& b) {
  return ((std::popcount(a.x & b.z) + std::popcount(a.z & b.x)) & 1) == 0;
}

}  // namespace cdlab
