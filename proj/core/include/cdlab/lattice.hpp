#pragma once

#include <array>
#include <cstdint>
#include <cstdlib>
#include <vector>

#include "cdlab/errors.hpp"

namespace cdlab {

enum class Boundary { periodic, open };

// Finite hypercubic lattice Z^d/(L Z)^d (or the open box). Sites are flattened
// row-major; the string algebra packs them into 64-bit masks, hence the cap.
struct LatticeSpec {
  int length = 1;
  int dim = 1;
  Boundary boundary = Boundary::periodic;

  LatticeSpec() = default;
  LatticeSpec(int L, int d = 1, Boundary b = Boundary::periodic)
      : length(L), dim(d), boundary(b) {
    if (L < 1 || d < 1) throw InvalidInputError("LatticeSpec: length and dimension must be positive");
    long n = 1;
    for (int i = 0; i < d; ++i) {
      n *= L;
      if (n > 64) throw ResourceError("LatticeSpec: more than 64 sites not representable");
    }
  }

  int sites() const {
    int n = 1;
    for (int i = 0; i < dim; ++i) n *= length;
    return n;
  }

  bool operator==(const LatticeSpec& o) const {
    return length == o.length && dim == o.dim && boundary == o.boundary;
  }
  bool operator!=(const LatticeSpec& o) const { return !(*this == o); }

  std::vector<int> coords(int site) const {
    std::vector<int> c(dim);
    for (int i = 0; i < dim; ++i) {
      c[i] = site % length;
      site /= length;
    }
    return c;
  }

  int site_of(const std::vector<int>& c) const {
    int s = 0;
    for (int i = dim - 1; i >= 0; --i) {
      int x = c[i] % length;
      if (x < 0) x += length;
      s = s * length + x;
    }
    return s;
  }

  // Graph distance; per coordinate the torus takes the shorter way around
  // (ties at L/2 resolved to the minimum).
  int distance(int a, int b) const {
    int d = 0;
    for (int i = 0; i < dim; ++i) {
      int xa = a % length, xb = b % length;
      a /= length;
      b /= length;
      int delta = std::abs(xa - xb);
      if (boundary == Boundary::periodic) delta = std::min(delta, length - delta);
      d += delta;
    }
    return d;
  }

  // Diameter of a support set given as a bit mask over sites.
  int diameter(std::uint64_t support) const {
    int diam = 0;
    for (int a = 0; a < sites(); ++a) {
      if (!((support >> a) & 1u)) continue;
      for (int b = a + 1; b < sites(); ++b) {
        if (!((support >> b) & 1u)) continue;
        diam = std::max(diam, distance(a, b));
      }
    }
    return diam;
  }
};

}  // namespace cdlab
