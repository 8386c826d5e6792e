#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <map>
#include <vector>

#include "cdlab/lattice.hpp"
#include "cdlab/pauli.hpp"

namespace cdlab {

using cxmat = Eigen::MatrixXcd;
using cxvec = Eigen::VectorXcd;

// Extensive operator B = sum_X B_X held as a coefficient map over Pauli
// words. Support blocks B_X are recovered by grouping words with equal
// support. Words with |coeff| below merge_threshold are dropped on the way
// in, so long commutator cascades do not accumulate numerical zeros.
class LocalOperator {
 public:
  using Key = std::pair<std::uint64_t, std::uint64_t>;  // (x, z)
  static constexpr double merge_threshold = 1e-14;
  static constexpr int default_dense_cap = 14;

  LocalOperator() = default;
  explicit LocalOperator(LatticeSpec lattice) : lattice_(lattice) {}
  LocalOperator(LatticeSpec lattice, const std::vector<PauliString>& terms) : lattice_(lattice) {
    for (const auto& t : terms) add(t);
  }

  const LatticeSpec& lattice() const { return lattice_; }
  const std::map<Key, complexd>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add(const PauliString& p);
  void add(complexd coeff, const std::map<int, Pauli>& letters) {
    add(PauliString(coeff, letters, lattice_.sites()));
  }
  void add_identity(complexd coeff) { add(PauliString(coeff, 0, 0, lattice_.sites())); }

  std::vector<PauliString> strings() const;

  LocalOperator& operator+=(const LocalOperator& o);
  LocalOperator& operator-=(const LocalOperator& o);
  LocalOperator& operator*=(complexd c);
  friend LocalOperator operator+(LocalOperator a, const LocalOperator& b) { return a += b; }
  friend LocalOperator operator-(LocalOperator a, const LocalOperator& b) { return a -= b; }
  friend LocalOperator operator*(complexd c, LocalOperator a) { return a *= c; }

  LocalOperator adjoint() const;
  // Words are Hermitian, so Hermiticity of each block is equivalent to real
  // coefficients; returns the largest imaginary part.
  double hermiticity_defect() const;
  bool is_hermitian(double tol = 1e-12) const { return hermiticity_defect() <= tol; }

  // Largest support diameter (torus metric); 0 for pure identity.
  int range() const;

  // sup_x sum_{X ni x} ||B_X||, operator norms from dense blocks on the
  // support only.
  double local_norm() const;

  // Support-grouped view: mask -> words of that exact support.
  std::map<std::uint64_t, std::vector<PauliString>> support_blocks() const;

  cxmat dense_realization(int site_cap = default_dense_cap) const;

  // One word per line: sites, word, Re, Im at 17 significant digits.
  void serialize(std::ostream& os) const;
  static LocalOperator deserialize(std::istream& is);

  void prune(double threshold);

 private:
  LatticeSpec lattice_{};
  std::map<Key, complexd> terms_;
};

// Term-by-term [A, B]; word pairs with disjoint supports or commuting words
// are skipped (their commutator vanishes identically).
LocalOperator commutator(const LocalOperator& a, const LocalOperator& b);

// Operator 2-norm of a word sum restricted to the union support.
double block_operator_norm(const std::vector<PauliString>& words, const LatticeSpec& lattice);

// Dense matrix of a single word on an n-site register.
void accumulate_dense(cxmat& target, const PauliString& p, int n_sites);

// Action on a state vector, |b> -> i^{|x&z|} (-1)^{|z&b|} |b^x>.
void apply_string(const PauliString& p, const cxvec& in, cxvec& out);

}  // namespace cdlab
