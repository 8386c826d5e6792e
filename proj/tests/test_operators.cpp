#include <doctest.h>

#include <random>
#include <sstream>

#include "cdlab/local_operator.hpp"

using namespace cdlab;

namespace {

PauliString ps(complexd c, std::initializer_list<std::pair<int, Pauli>> letters, int n = 0) {
  std::map<int, Pauli> m(letters.begin(), letters.end());
  return PauliString(c, m, n);
}

LocalOperator random_operator(const LatticeSpec& lat, int n_terms, int max_weight,
                              std::mt19937_64& rng) {
  std::uniform_int_distribution<int> site(0, lat.sites() - 1);
  std::uniform_int_distribution<int> letter(0, 2);
  std::uniform_int_distribution<int> weight(1, max_weight);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  LocalOperator op(lat);
  for (int t = 0; t < n_terms; ++t) {
    std::map<int, Pauli> letters;
    int w = weight(rng);
    while (static_cast<int>(letters.size()) < w) letters[site(rng)] = static_cast<Pauli>(letter(rng));
    op.add(PauliString(complexd(coeff(rng), coeff(rng)), letters, lat.sites()));
  }
  return op;
}

}  // namespace

TEST_CASE("pauli multiplication is the exact group product") {
  auto x0 = ps({1, 0}, {{0, Pauli::X}});
  auto y0 = ps({1, 0}, {{0, Pauli::Y}});
  auto prod = multiply(x0, y0);
  CHECK(prod.letters() == std::map<int, Pauli>{{0, Pauli::Z}});
  CHECK(prod.coeff == complexd(0, 1));  // sigma^x sigma^y = i sigma^z

  auto a = ps({2, 0}, {{0, Pauli::X}, {1, Pauli::Z}});
  auto b = ps({1, 0}, {{0, Pauli::X}});
  auto ab = multiply(a, b);
  CHECK(ab.letters() == std::map<int, Pauli>{{1, Pauli::Z}});
  CHECK(ab.coeff == complexd(2, 0));  // X^2 = Id

  auto identity = PauliString(complexd(3, -1), 0, 0);
  auto p = ps({0.5, 0.25}, {{2, Pauli::Y}, {5, Pauli::X}});
  auto ip = multiply(identity, p);
  CHECK(ip.x == p.x);
  CHECK(ip.z == p.z);
  CHECK(ip.coeff == identity.coeff * p.coeff);
}

TEST_CASE("pauli words commute or anticommute by shared-site parity") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> letter(0, 2);
  for (int trial = 0; trial < 200; ++trial) {
    std::map<int, Pauli> la, lb;
    for (int s = 0; s < 6; ++s) {
      if (rng() & 1) la[s] = static_cast<Pauli>(letter(rng));
      if (rng() & 1) lb[s] = static_cast<Pauli>(letter(rng));
    }
    PauliString a(complexd(1, 0), la), b(complexd(1, 0), lb);
    auto ab = multiply(a, b), ba = multiply(b, a);
    // count shared sites with different letters
    int anti = 0;
    for (auto [s, p] : la)
      if (lb.count(s) && lb[s] != p) ++anti;
    complexd expected = (anti % 2 == 0) ? ab.coeff : -ab.coeff;
    CHECK(ba.coeff == expected);
    CHECK(ba.x == ab.x);
    CHECK(ba.z == ab.z);
  }
}

TEST_CASE("mismatched lattices are rejected") {
  PauliString a(complexd(1, 0), {{0, Pauli::X}}, 4);
  PauliString b(complexd(1, 0), {{0, Pauli::X}}, 6);
  CHECK_THROWS_AS(multiply(a, b), InvalidInputError);

  LocalOperator oa{LatticeSpec(4)}, ob{LatticeSpec(6)};
  oa.add(complexd(1, 0), {{0, Pauli::X}});
  ob.add(complexd(1, 0), {{0, Pauli::X}});
  CHECK_THROWS_AS(commutator(oa, ob), InvalidInputError);
}

TEST_CASE("commutators respect locality") {
  LatticeSpec lat(6);
  LocalOperator a(lat), b(lat), c(lat), d(lat);
  a.add(complexd(1, 0), {{0, Pauli::X}});
  b.add(complexd(1, 0), {{0, Pauli::Y}});
  auto com = commutator(a, b);
  REQUIRE(com.size() == 1);
  CHECK(com.strings()[0].coeff == complexd(0, 2));  // [X, Y] = 2iZ
  CHECK(com.strings()[0].letters() == std::map<int, Pauli>{{0, Pauli::Z}});

  c.add(complexd(1, 0), {{3, Pauli::Z}});
  CHECK(commutator(a, c).empty());  // disjoint supports

  d.add(complexd(1, 0), {{0, Pauli::X}, {1, Pauli::X}});
  LocalOperator z0(lat);
  z0.add(complexd(1, 0), {{0, Pauli::Z}});
  auto zc = commutator(z0, d);
  REQUIRE(zc.size() == 1);
  CHECK(zc.strings()[0].coeff == complexd(0, 2));  // [Z, XX] = 2i YX
  CHECK(zc.strings()[0].letters() == std::map<int, Pauli>{{0, Pauli::Y}, {1, Pauli::X}});
}

TEST_CASE("local norm counts the terms through each site") {
  double h = 1.7;
  LatticeSpec lat(6);
  LocalOperator field(lat);
  for (int i = 0; i < 6; ++i) field.add(complexd(h, 0), {{i, Pauli::Z}});
  CHECK(field.local_norm() == doctest::Approx(h).epsilon(1e-12));

  // periodic TFIM: each site sits in one field term and two bonds
  LocalOperator tfim(lat);
  for (int i = 0; i < 6; ++i) {
    tfim.add(complexd(-h, 0), {{i, Pauli::Z}});
    tfim.add(complexd(-1, 0), {{i, Pauli::X}, {(i + 1) % 6, Pauli::X}});
  }
  CHECK(tfim.local_norm() == doctest::Approx(h + 2.0).epsilon(1e-12));

  // single block: largest singular value
  LocalOperator single(lat);
  single.add(complexd(0.3, 0), {{0, Pauli::X}, {1, Pauli::X}});
  single.add(complexd(0, 0.4), {{0, Pauli::Y}, {1, Pauli::Z}});
  cxmat block = cxmat::Zero(4, 4);
  accumulate_dense(block, PauliString(complexd(0.3, 0), {{0, Pauli::X}, {1, Pauli::X}}, 2), 2);
  accumulate_dense(block, PauliString(complexd(0, 0.4), {{0, Pauli::Y}, {1, Pauli::Z}}, 2), 2);
  Eigen::JacobiSVD<cxmat> svd(block);
  CHECK(single.local_norm() == doctest::Approx(svd.singularValues()(0)).epsilon(1e-12));
}

TEST_CASE("local norm is a seminorm") {
  std::mt19937_64 rng(5);
  LatticeSpec lat(8);
  for (int t = 0; t < 20; ++t) {
    auto a = random_operator(lat, 5, 3, rng);
    auto b = random_operator(lat, 5, 3, rng);
    double na = a.local_norm(), nb = b.local_norm();
    CHECK((a + b).local_norm() <= na + nb + 1e-10);
    complexd c(1.7, -0.3);
    LocalOperator ca = a;
    ca *= c;
    CHECK(ca.local_norm() == doctest::Approx(std::abs(c) * na).epsilon(1e-10));
  }
}

TEST_CASE("commutator local-norm bound on random instances") {
  std::mt19937_64 rng(17);
  for (int d : {1, 2}) {
    LatticeSpec lat(d == 1 ? 8 : 3, d);
    for (int t = 0; t < 25; ++t) {
      auto a = random_operator(lat, 4, 3, rng);
      auto b = random_operator(lat, 4, 3, rng);
      double ra = a.range(), rb = b.range();
      double bound = 2.0 * std::pow(std::max(ra, rb + 1.0), d) * a.local_norm() * b.local_norm();
      CHECK(commutator(a, b).local_norm() <= bound + 1e-9);
    }
  }
}

TEST_CASE("dense realization is exact and a homomorphism") {
  LocalOperator z1{LatticeSpec(1)};
  z1.add(complexd(1, 0), {{0, Pauli::Z}});
  cxmat dz = z1.dense_realization();
  CHECK(dz(0, 0) == complexd(1, 0));
  CHECK(dz(1, 1) == complexd(-1, 0));
  CHECK(std::abs(dz(0, 1)) + std::abs(dz(1, 0)) == 0.0);

  // sigma^x at site 0 on two sites: site 0 is the fast index
  LocalOperator x0{LatticeSpec(2)};
  x0.add(complexd(1, 0), {{0, Pauli::X}});
  cxmat expected = cxmat::Zero(4, 4);
  expected(1, 0) = expected(0, 1) = expected(3, 2) = expected(2, 3) = complexd(1, 0);
  CHECK((x0.dense_realization() - expected).cwiseAbs().maxCoeff() == 0.0);

  std::mt19937_64 rng(23);
  LatticeSpec lat(3);
  for (int t = 0; t < 10; ++t) {
    auto a = random_operator(lat, 4, 3, rng);
    auto b = random_operator(lat, 4, 3, rng);
    cxmat da = a.dense_realization(), db = b.dense_realization();
    CHECK((commutator(a, b).dense_realization() - (da * db - db * da)).cwiseAbs().maxCoeff() <=
          1e-12);
    CHECK(((a + b).dense_realization() - (da + db)).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((a.adjoint().dense_realization() - da.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("dense realization enforces the site cap") {
  LocalOperator op{LatticeSpec(15, 1)};
  op.add(complexd(1, 0), {{0, Pauli::Z}});
  CHECK_THROWS_AS(op.dense_realization(), ResourceError);
  CHECK_THROWS_WITH_AS(op.dense_realization(), doctest::Contains("cap of 14"), ResourceError);
}

TEST_CASE("torus metric resolves ties to the minimum") {
  LatticeSpec lat(6, 1, Boundary::periodic);
  CHECK(lat.distance(0, 3) == 3);  // antipodal on an even ring
  CHECK(lat.distance(0, 5) == 1);
  LatticeSpec open_lat(6, 1, Boundary::open);
  CHECK(open_lat.distance(0, 5) == 5);
  LatticeSpec lat2(4, 2, Boundary::periodic);
  CHECK(lat2.distance(lat2.site_of({0, 0}), lat2.site_of({3, 3})) == 2);
}

TEST_CASE("serialization round-trips exactly") {
  std::mt19937_64 rng(31);
  LatticeSpec lat(7);
  auto op = random_operator(lat, 12, 4, rng);
  op.add_identity(complexd(0.125, -3.5e-11));
  std::stringstream ss;
  op.serialize(ss);
  LocalOperator back = LocalOperator::deserialize(ss);
  REQUIRE(back.size() == op.size());
  auto sa = op.strings(), sb = back.strings();
  for (std::size_t i = 0; i < sa.size(); ++i) {
    CHECK(sa[i].x == sb[i].x);
    CHECK(sa[i].z == sb[i].z);
    CHECK(sa[i].coeff == sb[i].coeff);  // 17 significant digits round-trip doubles
  }
}

TEST_CASE("hermiticity check reflects coefficient reality") {
  LatticeSpec lat(3);
  LocalOperator op(lat);
  op.add(complexd(0.5, 0), {{0, Pauli::X}, {1, Pauli::Y}});
  CHECK(op.is_hermitian());
  op.add(complexd(0, 1e-6), {{2, Pauli::Z}});
  CHECK(!op.is_hermitian(1e-9));
  CHECK(op.hermiticity_defect() == doctest::Approx(1e-6));
}
