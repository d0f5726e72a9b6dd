#pragma once

// Real Clifford algebra Cl(p,q) with blades encoded as d-bit masks.
// Bit i of a mask stands for generator e_{i+1}; generators 1..p square to +1,
// generators p+1..d square to -1.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cdt/errors.hpp"

namespace cdt {

using BladeMask = std::uint32_t;

struct Signature {
  int p = 0;
  int q = 0;

  Signature() = default;
  Signature(int p_, int q_);

  int dim() const { return p + q; }
  std::size_t blade_count() const { return std::size_t{1} << dim(); }
  // Metric of generator index i (0-based).
  double metric(int i) const { return i < p ? 1.0 : -1.0; }

  friend bool operator==(const Signature&, const Signature&) = default;
};

inline constexpr int kMaxDimension = 12;

// Sign of e_A e_B after reordering into canonical ascending order and
// contracting repeated generators with the metric.
double blade_product_sign(BladeMask a, BladeMask b, const Signature& sig);

inline int blade_grade(BladeMask a) { return __builtin_popcount(a); }

// "1", "e1", "e12", "e{1,12}".
std::string blade_label(BladeMask a, int dim);
BladeMask parse_blade(std::string_view text, int dim);

class MultiVector {
 public:
  MultiVector() = default;
  explicit MultiVector(Signature sig);
  MultiVector(Signature sig, std::vector<double> coeff);

  static MultiVector scalar(Signature sig, double value);
  static MultiVector blade(Signature sig, BladeMask mask, double value = 1.0);

  const Signature& signature() const { return sig_; }
  std::size_t size() const { return coeff_.size(); }

  double operator[](BladeMask a) const { return coeff_[a]; }
  double& operator[](BladeMask a) { return coeff_[a]; }

  std::span<const double> coefficients() const { return coeff_; }
  std::span<double> coefficients() { return coeff_; }

  MultiVector& operator+=(const MultiVector& o);
  MultiVector& operator-=(const MultiVector& o);
  MultiVector& operator*=(double s);

  friend MultiVector operator+(MultiVector a, const MultiVector& b) { return a += b; }
  friend MultiVector operator-(MultiVector a, const MultiVector& b) { return a -= b; }
  friend MultiVector operator*(MultiVector a, double s) { return a *= s; }
  friend MultiVector operator*(double s, MultiVector a) { return a *= s; }
  friend MultiVector operator-(MultiVector a) { return a *= -1.0; }
  friend MultiVector operator*(const MultiVector& a, const MultiVector& b);

  friend bool operator==(const MultiVector&, const MultiVector&) = default;

  bool is_scalar() const;
  std::string to_string() const;

 private:
  Signature sig_;
  std::vector<double> coeff_;
};

MultiVector geometric_product(const MultiVector& m, const MultiVector& n);

// Flips the sign of every negative-square generator in each blade.
MultiVector bar(const MultiVector& m);
// sum_k (-1)^{k(k-1)/2} <bar(M)>_k
MultiVector principal_reverse(const MultiVector& m);
MultiVector grade(const MultiVector& m, int k);

double scalar_product(const MultiVector& m, const MultiVector& n);
double modulus(const MultiVector& m);

// Parses "2 + 3e12 - e1" style literals: a sum of optional real coefficient
// times blade label.
MultiVector parse_multivector(std::string_view text, const Signature& sig);

// A multivector square root of -1.
class ImaginaryUnit {
 public:
  static ImaginaryUnit validate(const MultiVector& m, std::string label = {});
  static ImaginaryUnit parse(std::string_view text, const Signature& sig);

  const MultiVector& value() const { return value_; }
  const std::string& label() const { return label_; }

  // out = u * in  /  out = in * u, on raw coefficient arrays of size 2^d.
  void left_multiply(std::span<const double> in, std::span<double> out) const;
  void right_multiply(std::span<const double> in, std::span<double> out) const;

 private:
  ImaginaryUnit(MultiVector v, std::string label);

  struct Term {
    BladeMask mask;
    double coeff;
  };

  MultiVector value_;
  std::string label_;
  std::vector<Term> terms_;
};

// Raw-span helpers shared by the transform engine.
void accumulate_product(std::span<const double> m, std::span<const double> n,
                        const Signature& sig, std::span<double> out);

}  // namespace cdt
