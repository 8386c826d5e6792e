#include "cdlab/interaction_family.hpp"

#include <cmath>

namespace cdlab {

namespace {
double fswitch(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }
double dfswitch(double s) { return s > 0.0 ? std::exp(-1.0 / s) / (s * s) : 0.0; }
}  // namespace

double smooth_switch(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  double a = fswitch(s), b = fswitch(1.0 - s);
  return a / (a + b);
}

double smooth_switch_deriv(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  double a = fswitch(s), b = fswitch(1.0 - s);
  double da = dfswitch(s), db = -dfswitch(1.0 - s);
  double denom = a + b;
  return (da * denom - a * (da + db)) / (denom * denom);
}

Envelope Envelope::constant(double c) {
  return {[c](double) { return c; }, [](double) { return 0.0; }};
}

Envelope Envelope::linear(double a, double b) {
  return {[a, b](double s) { return a + b * s; }, [b](double) { return b; }};
}

Envelope Envelope::smooth_ramp(double from, double to) {
  double d = to - from;
  return {[from, d](double s) { return from + d * smooth_switch(s); },
          [d](double s) { return d * smooth_switch_deriv(s); }};
}

Envelope Envelope::scaled_switch(double amplitude) { return smooth_ramp(0.0, amplitude); }

void InteractionFamily::add_term(std::string name, LocalOperator op, Envelope env) {
  if (op.lattice() != lattice_)
    throw InvalidInputError("InteractionFamily::add_term: lattice mismatch");
  terms_.push_back({std::move(name), std::move(op), std::move(env)});
  cached_.clear();
  term_norms_.clear();
}

LocalOperator InteractionFamily::hamiltonian(double s) const {
  LocalOperator h(lattice_);
  for (const auto& t : terms_) {
    LocalOperator scaled = t.op;
    scaled *= complexd(t.env.value(s), 0.0);
    h += scaled;
  }
  return h;
}

LocalOperator InteractionFamily::dhamiltonian(double s) const {
  LocalOperator h(lattice_);
  for (const auto& t : terms_) {
    LocalOperator scaled = t.op;
    scaled *= complexd(t.env.deriv(s), 0.0);
    h += scaled;
  }
  return h;
}

const cxmat& InteractionFamily::term_matrix(std::size_t a) const {
  if (cached_.empty()) {
    cached_.reserve(terms_.size());
    term_norms_.reserve(terms_.size());
    for (const auto& t : terms_) {
      cached_.push_back(t.op.dense_realization());
      term_norms_.push_back(operator_norm(cached_.back()));
    }
  }
  return cached_.at(a);
}

cxmat InteractionFamily::dense_h(double s) const {
  cxmat h = cxmat::Zero(dim(), dim());
  for (std::size_t a = 0; a < terms_.size(); ++a) h += terms_[a].env.value(s) * term_matrix(a);
  return h;
}

cxmat InteractionFamily::dense_dh(double s) const {
  cxmat h = cxmat::Zero(dim(), dim());
  for (std::size_t a = 0; a < terms_.size(); ++a) h += terms_[a].env.deriv(s) * term_matrix(a);
  return h;
}

void InteractionFamily::apply_h(double s, const cxvec& in, cxvec& out) const {
  for (const auto& t : terms_) {
    double c = t.env.value(s);
    if (c == 0.0) continue;
    for (const auto& [k, v] : t.op.terms()) {
      PauliString p(c * v, k.first, k.second, lattice_.sites());
      apply_string(p, in, out);
    }
  }
}

double InteractionFamily::norm_bound(double s) const {
  term_matrix(0);  // ensure caches
  double b = 0.0;
  for (std::size_t a = 0; a < terms_.size(); ++a)
    b += std::abs(terms_[a].env.value(s)) * term_norms_[a];
  return b;
}

namespace models {

InteractionFamily tfim(int L, Boundary boundary, Envelope h) {
  LatticeSpec lat(L, 1, boundary);
  InteractionFamily f(lat);
  LocalOperator field(lat), bonds(lat);
  for (int i = 0; i < L; ++i) field.add(complexd(-1.0, 0.0), {{i, Pauli::Z}});
  int nb = boundary == Boundary::periodic ? L : L - 1;
  for (int i = 0; i < nb; ++i)
    bonds.add(complexd(-1.0, 0.0), {{i, Pauli::X}, {(i + 1) % L, Pauli::X}});
  f.add_term("field_z", std::move(field), std::move(h));
  f.add_term("bond_xx", std::move(bonds), Envelope::constant(1.0));
  return f;
}

InteractionFamily tfim_longitudinal(int L, Boundary boundary, Envelope h, Envelope lambda) {
  InteractionFamily f = tfim(L, boundary, std::move(h));
  LocalOperator lx(f.lattice());
  for (int i = 0; i < L; ++i) lx.add(complexd(-1.0, 0.0), {{i, Pauli::X}});
  f.add_term("field_x", std::move(lx), std::move(lambda));
  return f;
}

InteractionFamily single_spin_rotation(Envelope alpha, double b) {
  LatticeSpec lat(1, 1, Boundary::open);
  InteractionFamily f(lat);
  LocalOperator sz(lat), sx(lat);
  sz.add(complexd(1.0, 0.0), {{0, Pauli::Z}});
  sx.add(complexd(1.0, 0.0), {{0, Pauli::X}});
  auto av = alpha.value, ad = alpha.deriv;
  Envelope cz{[av, b](double s) { return -b * std::cos(av(s)); },
              [av, ad, b](double s) { return b * std::sin(av(s)) * ad(s); }};
  Envelope cx{[av, b](double s) { return -b * std::sin(av(s)); },
              [av, ad, b](double s) { return -b * std::cos(av(s)) * ad(s); }};
  f.add_term("cos_z", std::move(sz), std::move(cz));
  f.add_term("sin_x", std::move(sx), std::move(cx));
  return f;
}

InteractionFamily constant_family(const LocalOperator& h0) {
  InteractionFamily f(h0.lattice());
  f.add_term("h0", h0, Envelope::constant(1.0));
  return f;
}

}  // namespace models

}  // namespace cdlab
