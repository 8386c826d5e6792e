#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "cdlab/dense.hpp"
#include "cdlab/local_operator.hpp"

namespace cdlab {

// C-infinity switch: 0 for s <= 0, 1 for s >= 1, all derivatives vanishing at
// both ends; theta(s) = f(s)/(f(s)+f(1-s)) with f(s) = e^{-1/s}.
double smooth_switch(double s);
double smooth_switch_deriv(double s);

// Scalar envelope with analytic derivative access.
struct Envelope {
  std::function<double(double)> value;
  std::function<double(double)> deriv;

  static Envelope constant(double c);
  static Envelope linear(double a, double b);                 // a + b s
  static Envelope smooth_ramp(double from, double to);        // from + (to-from) theta(s)
  static Envelope scaled_switch(double amplitude);            // amplitude * theta(s)
};

// s-parametrized Hamiltonian family H_s = sum_a c_a(s) T_a with fixed
// extensive structure operators and smooth scalar envelopes.
class InteractionFamily {
 public:
  struct Term {
    std::string name;
    LocalOperator op;
    Envelope env;
  };

  InteractionFamily() = default;
  explicit InteractionFamily(LatticeSpec lattice) : lattice_(lattice) {}

  const LatticeSpec& lattice() const { return lattice_; }
  const std::vector<Term>& terms() const { return terms_; }
  void add_term(std::string name, LocalOperator op, Envelope env);

  LocalOperator hamiltonian(double s) const;
  LocalOperator dhamiltonian(double s) const;

  // Dense realizations; the fixed term matrices are cached on first use.
  const cxmat& term_matrix(std::size_t a) const;
  cxmat dense_h(double s) const;
  cxmat dense_dh(double s) const;

  // Matrix-free action out += H(s) in, and a cheap upper bound on ||H(s)||.
  void apply_h(double s, const cxvec& in, cxvec& out) const;
  double norm_bound(double s) const;

  int sites() const { return lattice_.sites(); }
  Eigen::Index dim() const { return Eigen::Index(1) << lattice_.sites(); }

 private:
  LatticeSpec lattice_{};
  std::vector<Term> terms_;
  mutable std::vector<cxmat> cached_;       // dense term matrices
  mutable std::vector<double> term_norms_;  // 2-norm bounds per term
};

namespace models {

// H_s = -h(s) sum sigma^z - sum sigma^x sigma^x
InteractionFamily tfim(int L, Boundary boundary, Envelope h);
// Adds a longitudinal field -lambda(s) sum sigma^x.
InteractionFamily tfim_longitudinal(int L, Boundary boundary, Envelope h, Envelope lambda);
// Single spin in a rotating field, H_s = -b (cos(alpha(s)) sigma^z + sin(alpha(s)) sigma^x).
InteractionFamily single_spin_rotation(Envelope alpha, double b = 1.0);
// s-independent family around a fixed operator.
InteractionFamily constant_family(const LocalOperator& h0);

}  // namespace models

}  // namespace cdlab
