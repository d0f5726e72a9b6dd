#include <random>

#include "doctest.h"

#include "cdt/clifford.hpp"

using namespace cdt;

namespace {

// Sign of e_A e_B by literally concatenating generator lists and bubble
// sorting, contracting equal neighbours with the metric.
double naive_sign(BladeMask a, BladeMask b, const Signature& sig) {
  std::vector<int> g;
  for (int i = 0; i < sig.dim(); ++i)
    if (a >> i & 1) g.push_back(i);
  for (int i = 0; i < sig.dim(); ++i)
    if (b >> i & 1) g.push_back(i);
  double sign = 1.0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t k = 0; k + 1 < g.size(); ++k) {
      if (g[k] > g[k + 1]) {
        std::swap(g[k], g[k + 1]);
        sign = -sign;
        changed = true;
      } else if (g[k] == g[k + 1]) {
        sign *= sig.metric(g[k]);
        g.erase(g.begin() + k, g.begin() + k + 2);
        changed = true;
      }
    }
  }
  return sign;
}

MultiVector random_integer(const Signature& sig, std::mt19937& rng) {
  std::uniform_int_distribution<int> dist(-5, 5);
  MultiVector m(sig);
  for (BladeMask b = 0; b < sig.blade_count(); ++b) m[b] = dist(rng);
  return m;
}

MultiVector e(const Signature& sig, BladeMask m) { return MultiVector::blade(sig, m); }

}  // namespace

TEST_CASE("quaternion multiplication table in Cl(0,2)") {
  const Signature s(0, 2);
  const MultiVector one = MultiVector::scalar(s, 1), i = e(s, 1), j = e(s, 2), k = e(s, 3);
  CHECK(i * i == -one);
  CHECK(j * j == -one);
  CHECK(k * k == -one);
  CHECK(i * j == k);
  CHECK(j * i == -k);
  CHECK(j * k == i);
  CHECK(k * j == -i);
  CHECK(k * i == j);
  CHECK(i * k == -j);
}

TEST_CASE("blade sign agrees with generator reordering") {
  for (int d = 1; d <= 5; ++d) {
    for (int p = 0; p <= d; ++p) {
      const Signature s(p, d - p);
      for (BladeMask a = 0; a < s.blade_count(); ++a)
        for (BladeMask b = 0; b < s.blade_count(); ++b) REQUIRE(blade_product_sign(a, b, s) == naive_sign(a, b, s));
    }
  }
}

TEST_CASE("associativity and anticommutation are exact on integer coefficients") {
  std::mt19937 rng(7);
  for (int d = 1; d <= 6; ++d) {
    for (int p = 0; p <= d; ++p) {
      const Signature s(p, d - p);
      for (int trial = 0; trial < 6; ++trial) {
        const MultiVector a = random_integer(s, rng), b = random_integer(s, rng), c = random_integer(s, rng);
        REQUIRE((a * b) * c == a * (b * c));
        REQUIRE(a * (b + c) == a * b + a * c);
      }
      for (int i = 0; i < d; ++i) {
        REQUIRE(e(s, 1u << i) * e(s, 1u << i) == MultiVector::scalar(s, s.metric(i)));
        for (int j = i + 1; j < d; ++j) REQUIRE(e(s, 1u << i) * e(s, 1u << j) == -(e(s, 1u << j) * e(s, 1u << i)));
      }
    }
  }
}

TEST_CASE("accumulate_product matches the geometric product") {
  std::mt19937 rng(11);
  const Signature s(1, 3);
  const MultiVector a = random_integer(s, rng), b = random_integer(s, rng);
  std::vector<double> out(s.blade_count(), 1.0);
  accumulate_product(a.coefficients(), b.coefficients(), s, out);
  const MultiVector expect = a * b + MultiVector(s, std::vector<double>(s.blade_count(), 1.0));
  CHECK(MultiVector(s, out) == expect);
  CHECK(geometric_product(a, b) == a * b);
}

TEST_CASE("principal reverse is the quaternion conjugate in Cl(0,2)") {
  const Signature s(0, 2);
  const MultiVector q(s, {1, 2, 3, 4});
  CHECK(principal_reverse(q) == MultiVector(s, {1, -2, -3, -4}));
  // Quaternion norm: q conj(q) = |q|^2.
  CHECK(q * principal_reverse(q) == MultiVector::scalar(s, 30));
}

TEST_CASE("principal reverse reverses products") {
  std::mt19937 rng(3);
  for (int p = 0; p <= 3; ++p) {
    const Signature s(p, 3 - p);
    const MultiVector a = random_integer(s, rng), b = random_integer(s, rng);
    CHECK(principal_reverse(a * b) == principal_reverse(b) * principal_reverse(a));
  }
}

TEST_CASE("scalar product of M with itself is the coefficient sum of squares") {
  std::mt19937 rng(5);
  for (int d = 1; d <= 5; ++d) {
    for (int p = 0; p <= d; ++p) {
      const Signature s(p, d - p);
      const MultiVector m = random_integer(s, rng);
      double sum = 0;
      for (double c : m.coefficients()) sum += c * c;
      CHECK(scalar_product(m, m) == sum);
      CHECK(modulus(m) == doctest::Approx(std::sqrt(sum)).epsilon(1e-15));
    }
  }
}

TEST_CASE("grade projection and bar") {
  const Signature s(1, 2);
  const MultiVector m(s, {1, 2, 3, 4, 5, 6, 7, 8});
  CHECK(grade(m, 0) + grade(m, 1) + grade(m, 2) + grade(m, 3) == m);
  CHECK(grade(m, 1)[1] == 2);
  CHECK(grade(m, 1)[3] == 0);
  // e1 squares to +1, e2 and e3 to -1.
  const MultiVector b = bar(m);
  CHECK(b[1] == 2);
  CHECK(b[2] == -3);
  CHECK(b[6] == 7);
  CHECK(b[3] == -4);
  CHECK(b[7] == 8);
}

TEST_CASE("blade labels") {
  CHECK(blade_label(0, 3) == "1");
  CHECK(blade_label(5, 3) == "e13");
  CHECK(parse_blade("e12", 2) == 3u);
  CHECK(parse_blade("1", 4) == 0u);
  CHECK(blade_label(parse_blade("e{1,12}", 12), 12) == "e{1,12}");
  CHECK_THROWS_AS(parse_blade("e21", 2), Error);
  CHECK_THROWS_AS(parse_blade("e3", 2), Error);
  CHECK_THROWS_AS(parse_blade("x1", 2), Error);
}

TEST_CASE("parse_multivector") {
  const Signature s(0, 2);
  CHECK(parse_multivector("2 + 3e12 - e1", s) == MultiVector(s, {2, -1, 0, 3}));
}

TEST_CASE("imaginary units") {
  const Signature q(0, 2), p(2, 0);
  CHECK_NOTHROW(ImaginaryUnit::parse("e1", q));
  CHECK_NOTHROW(ImaginaryUnit::parse("e12", q));
  CHECK_NOTHROW(ImaginaryUnit::parse("e12", p));
  try {
    ImaginaryUnit::parse("e1", p);
    FAIL("expected SquareNotMinusOne");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::SquareNotMinusOne);
  }
  CHECK_THROWS_AS(ImaginaryUnit::parse("1", q), Error);

  const ImaginaryUnit u = ImaginaryUnit::parse("e2", q);
  const MultiVector m(q, {1, 2, 3, 4});
  std::vector<double> l(4), r(4);
  u.left_multiply(m.coefficients(), l);
  u.right_multiply(m.coefficients(), r);
  CHECK(MultiVector(q, l) == u.value() * m);
  CHECK(MultiVector(q, r) == m * u.value());
}

TEST_CASE("signature validation") {
  CHECK_THROWS_AS(Signature(-1, 2), Error);
  CHECK_THROWS_AS(Signature(7, 6), Error);
  CHECK_THROWS_AS(MultiVector(Signature(0, 2)) + MultiVector(Signature(2, 0)), Error);
}
