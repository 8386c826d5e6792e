#pragma once

#include <unordered_map>
#include <vector>

#include "cdlab/local_operator.hpp"

namespace cdlab {

// Coefficient 1-norm over Pauli words; cheap upper bound on the operator norm.
double block_sum_norm(const LocalOperator& op);

// Heisenberg-picture propagation of an operator in the Pauli-word basis:
// tau_t(X) = e^{itH} X e^{-itH} composed from Taylor steps
// X <- sum_k (i dt)^k/k! ad_H^k(X), with coefficient pruning and truncation of
// words whose support diameter exceeds a radius. Uses a flat 4^n coefficient
// array up to 10 sites and a hash map beyond.
class HeisenbergEngine {
 public:
  struct Key {
    std::uint64_t x = 0, z = 0;
    bool operator==(const Key& o) const { return x == o.x && z == o.z; }
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::uint64_t h = k.x * 0x9e3779b97f4a7c15ull;
      h ^= (k.z + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
      return static_cast<std::size_t>(h * 0xc2b2ae3d27d4eb4full);
    }
  };

  struct State {
    bool flat = true;
    std::vector<complexd> dense;                       // index x | (z << n)
    std::unordered_map<Key, complexd, KeyHash> sparse;
  };

  HeisenbergEngine(const LocalOperator& h, int support_radius, double prune, double series_tol,
                   double max_step_angle);

  State load(const LocalOperator& x) const;
  void advance(State& s, double dt);
  void accumulate(LocalOperator& target, const State& s, complexd coeff) const;
  LocalOperator to_operator(const State& s) const;

  double dropped_norm() const { return dropped_; }
  int sites() const { return n_; }

 private:
  void ad_flat(const std::vector<complexd>& in, std::vector<complexd>& out) const;
  void ad_sparse(const std::unordered_map<Key, complexd, KeyHash>& in,
                 std::unordered_map<Key, complexd, KeyHash>& out) const;
  void taylor_step(State& s, double dt);

  LatticeSpec lattice_;
  int n_ = 0;
  bool use_flat_ = true;
  int radius_ = 0;
  double prune_ = 1e-12;
  double series_tol_ = 1e-12;
  double max_angle_ = 0.4;
  double ad_bound_ = 0.0;
  double dropped_ = 0.0;

  struct HTerm {
    std::uint64_t x, z;
    complexd c;
  };
  std::vector<HTerm> hterms_;
  std::vector<std::uint8_t> diam_ok_;             // per support mask, flat mode only
  std::vector<std::vector<std::uint8_t>> codes_;  // per-term phase/anticommute tables
};

}  // namespace cdlab
