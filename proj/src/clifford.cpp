#include "cdt/clifford.hpp"

#include <cmath>
#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace cdt {

const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SignatureMismatch: return "SignatureMismatch";
    case ErrorCode::SquareNotMinusOne: return "SquareNotMinusOne";
    case ErrorCode::TruncationTooLarge: return "TruncationTooLarge";
    case ErrorCode::ArgumentOutOfRadius: return "ArgumentOutOfRadius";
    case ErrorCode::QuadratureDisagreement: return "QuadratureDisagreement";
    case ErrorCode::RecurrenceBreakdown: return "RecurrenceBreakdown";
    case ErrorCode::NodeCountExceeded: return "NodeCountExceeded";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::PlanMismatch: return "PlanMismatch";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::ZeroNorm: return "ZeroNorm";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownCoordinate: return "UnknownCoordinate";
    case ErrorCode::DepthExceeded: return "DepthExceeded";
    case ErrorCode::NonFiniteResult: return "NonFiniteResult";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Signature::Signature(int p_, int q_) : p(p_), q(q_) {
  if (p < 0 || q < 0 || p + q < 1 || p + q > kMaxDimension) {
    throw Error(ErrorCode::InvalidArgument,
                "signature (" + std::to_string(p) + "," + std::to_string(q) +
                    ") needs p,q >= 0 and 1 <= p+q <= " + std::to_string(kMaxDimension));
  }
}

double blade_product_sign(BladeMask a, BladeMask b, const Signature& sig) {
  // Transpositions: every generator of b must move past the generators of a
  // with a larger index.
  int swaps = 0;
  for (BladeMask s = a >> 1; s != 0; s >>= 1) swaps += __builtin_popcount(s & b);
  double sign = (swaps & 1) ? -1.0 : 1.0;
  BladeMask common = a & b;
  // Negative-square generators occupy bits p..d-1.
  BladeMask negative = common & ~((BladeMask{1} << sig.p) - 1);
  if (__builtin_popcount(negative) & 1) sign = -sign;
  return sign;
}

std::string blade_label(BladeMask a, int dim) {
  if (a == 0) return "1";
  bool wide = dim > 9;
  std::string out = wide ? "e{" : "e";
  bool first = true;
  for (int i = 0; i < dim; ++i) {
    if (!(a & (BladeMask{1} << i))) continue;
    if (wide && !first) out += ',';
    out += std::to_string(i + 1);
    first = false;
  }
  if (wide) out += '}';
  return out;
}

namespace {

[[noreturn]] void bad_blade(std::string_view text, const std::string& why) {
  throw Error(ErrorCode::SchemaError, "blade '" + std::string(text) + "': " + why);
}

BladeMask add_generator(BladeMask mask, int index, int dim, std::string_view text, int& last) {
  if (index < 1 || index > dim) {
    bad_blade(text, "generator " + std::to_string(index) + " outside 1.." + std::to_string(dim));
  }
  if (index <= last) bad_blade(text, "generators must be strictly ascending");
  last = index;
  return mask | (BladeMask{1} << (index - 1));
}

}  // namespace

BladeMask parse_blade(std::string_view text, int dim) {
  if (text == "1") return 0;
  if (text.size() < 2 || text[0] != 'e') bad_blade(text, "expected '1' or 'e<digits>'");
  BladeMask mask = 0;
  int last = 0;
  if (text[1] == '{') {
    if (text.back() != '}') bad_blade(text, "unterminated '{'");
    std::string_view body = text.substr(2, text.size() - 3);
    if (body.empty()) bad_blade(text, "empty generator list");
    std::size_t pos = 0;
    while (pos <= body.size()) {
      std::size_t comma = body.find(',', pos);
      std::string_view item = body.substr(pos, comma == std::string_view::npos ? body.npos : comma - pos);
      if (item.empty() || item.size() > 2) bad_blade(text, "bad generator index");
      int value = 0;
      for (char c : item) {
        if (c < '0' || c > '9') bad_blade(text, "bad generator index");
        value = value * 10 + (c - '0');
      }
      mask = add_generator(mask, value, dim, text, last);
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    return mask;
  }
  for (char c : text.substr(1)) {
    if (c < '1' || c > '9') bad_blade(text, "expected digits 1-9 (use e{..} beyond 9)");
    mask = add_generator(mask, c - '0', dim, text, last);
  }
  return mask;
}

MultiVector::MultiVector(Signature sig) : sig_(sig), coeff_(sig.blade_count(), 0.0) {}

MultiVector::MultiVector(Signature sig, std::vector<double> coeff)
    : sig_(sig), coeff_(std::move(coeff)) {
  if (coeff_.size() != sig_.blade_count()) {
    throw Error(ErrorCode::LengthMismatch, "multivector needs " + std::to_string(sig_.blade_count()) +
                                               " coefficients, got " + std::to_string(coeff_.size()));
  }
}

MultiVector MultiVector::scalar(Signature sig, double value) {
  MultiVector m(sig);
  m.coeff_[0] = value;
  return m;
}

MultiVector MultiVector::blade(Signature sig, BladeMask mask, double value) {
  MultiVector m(sig);
  if (mask >= sig.blade_count()) {
    throw Error(ErrorCode::InvalidArgument, "blade mask outside signature");
  }
  m.coeff_[mask] = value;
  return m;
}

static void require_same(const Signature& a, const Signature& b) {
  if (!(a == b)) throw Error(ErrorCode::SignatureMismatch, "operands have different signatures");
}

MultiVector& MultiVector::operator+=(const MultiVector& o) {
  require_same(sig_, o.sig_);
  for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] += o.coeff_[i];
  return *this;
}

MultiVector& MultiVector::operator-=(const MultiVector& o) {
  require_same(sig_, o.sig_);
  for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] -= o.coeff_[i];
  return *this;
}

MultiVector& MultiVector::operator*=(double s) {
  for (double& c : coeff_) c *= s;
  return *this;
}

void accumulate_product(std::span<const double> m, std::span<const double> n, const Signature& sig,
                        std::span<double> out) {
  const BladeMask count = static_cast<BladeMask>(sig.blade_count());
  for (BladeMask a = 0; a < count; ++a) {
    if (m[a] == 0.0) continue;
    for (BladeMask b = 0; b < count; ++b) {
      if (n[b] == 0.0) continue;
      out[a ^ b] += blade_product_sign(a, b, sig) * m[a] * n[b];
    }
  }
}

MultiVector operator*(const MultiVector& a, const MultiVector& b) { return geometric_product(a, b); }

MultiVector geometric_product(const MultiVector& m, const MultiVector& n) {
  require_same(m.signature(), n.signature());
  MultiVector out(m.signature());
  accumulate_product(m.coefficients(), n.coefficients(), m.signature(), out.coefficients());
  return out;
}

MultiVector bar(const MultiVector& m) {
  MultiVector out = m;
  const BladeMask negative = ~((BladeMask{1} << m.signature().p) - 1);
  for (BladeMask a = 0; a < m.size(); ++a) {
    if (__builtin_popcount(a & negative) & 1) out[a] = -out[a];
  }
  return out;
}

MultiVector principal_reverse(const MultiVector& m) {
  MultiVector out = bar(m);
  for (BladeMask a = 0; a < out.size(); ++a) {
    int k = blade_grade(a);
    if ((k * (k - 1) / 2) & 1) out[a] = -out[a];
  }
  return out;
}

MultiVector grade(const MultiVector& m, int k) {
  MultiVector out(m.signature());
  for (BladeMask a = 0; a < m.size(); ++a) {
    if (blade_grade(a) == k) out[a] = m[a];
  }
  return out;
}

double scalar_product(const MultiVector& m, const MultiVector& n) {
  require_same(m.signature(), n.signature());
  double s = 0.0;
  for (BladeMask a = 0; a < m.size(); ++a) s += m[a] * n[a];
  return s;
}

double modulus(const MultiVector& m) { return std::sqrt(scalar_product(m, m)); }

bool MultiVector::is_scalar() const {
  for (std::size_t a = 1; a < coeff_.size(); ++a) {
    if (coeff_[a] != 0.0) return false;
  }
  return true;
}

std::string MultiVector::to_string() const {
  std::ostringstream os;
  bool any = false;
  for (BladeMask a = 0; a < coeff_.size(); ++a) {
    if (coeff_[a] == 0.0) continue;
    char buf[64];
    if (any) os << (coeff_[a] < 0 ? " - " : " + ");
    else if (coeff_[a] < 0) os << "-";
    std::snprintf(buf, sizeof buf, "%.17g", std::fabs(coeff_[a]));
    os << buf;
    if (a != 0) os << '*' << blade_label(a, sig_.dim());
    any = true;
  }
  if (!any) os << "0";
  return os.str();
}

MultiVector parse_multivector(std::string_view text, const Signature& sig) {
  MultiVector out(sig);
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && text[i] == ' ') ++i;
  };
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::SchemaError, "multivector '" + std::string(text) + "': " + why);
  };
  skip();
  if (i == text.size()) fail("empty");
  bool first = true;
  while (i < text.size()) {
    double sign = 1.0;
    skip();
    if (text[i] == '+' || text[i] == '-') {
      if (text[i] == '-') sign = -1.0;
      ++i;
      skip();
    } else if (!first) {
      fail("expected '+' or '-'");
    }
    double coeff = 1.0;
    bool have_number = false;
    if (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.')) {
      std::size_t start = i;
      while (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.' ||
                                 text[i] == 'E' ||
                                 ((text[i] == '+' || text[i] == '-') && i > start && text[i - 1] == 'E'))) {
        ++i;
      }
      std::string number(text.substr(start, i - start));
      char* end = nullptr;
      coeff = std::strtod(number.c_str(), &end);
      if (end != number.c_str() + number.size()) fail("bad number '" + number + "'");
      have_number = true;
      skip();
      if (i < text.size() && text[i] == '*') {
        ++i;
        skip();
      }
    }
    BladeMask mask = 0;
    if (i < text.size() && text[i] == 'e') {
      std::size_t start = i;
      ++i;
      if (i < text.size() && text[i] == '{') {
        while (i < text.size() && text[i] != '}') ++i;
        if (i < text.size()) ++i;
      } else {
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      }
      mask = parse_blade(text.substr(start, i - start), sig.dim());
    } else if (!have_number) {
      fail("expected coefficient or blade");
    }
    out[mask] += sign * coeff;
    first = false;
    skip();
  }
  return out;
}

ImaginaryUnit::ImaginaryUnit(MultiVector v, std::string label) : value_(std::move(v)), label_(std::move(label)) {
  for (BladeMask a = 0; a < value_.size(); ++a) {
    if (value_[a] != 0.0) terms_.push_back({a, value_[a]});
  }
}

ImaginaryUnit ImaginaryUnit::validate(const MultiVector& m, std::string label) {
  MultiVector sq = m * m;
  if (!(sq == MultiVector::scalar(m.signature(), -1.0))) {
    throw Error(ErrorCode::SquareNotMinusOne,
                "'" + (label.empty() ? m.to_string() : label) + "' squares to " + sq.to_string());
  }
  if (label.empty()) label = m.to_string();
  return ImaginaryUnit(m, std::move(label));
}

ImaginaryUnit ImaginaryUnit::parse(std::string_view text, const Signature& sig) {
  return validate(parse_multivector(text, sig), std::string(text));
}

void ImaginaryUnit::left_multiply(std::span<const double> in, std::span<double> out) const {
  const Signature& sig = value_.signature();
  std::fill(out.begin(), out.end(), 0.0);
  for (const Term& t : terms_) {
    for (BladeMask b = 0; b < in.size(); ++b) {
      out[t.mask ^ b] += blade_product_sign(t.mask, b, sig) * t.coeff * in[b];
    }
  }
}

void ImaginaryUnit::right_multiply(std::span<const double> in, std::span<double> out) const {
  const Signature& sig = value_.signature();
  std::fill(out.begin(), out.end(), 0.0);
  for (const Term& t : terms_) {
    for (BladeMask b = 0; b < in.size(); ++b) {
      out[b ^ t.mask] += blade_product_sign(b, t.mask, sig) * in[b] * t.coeff;
    }
  }
}

}  // namespace cdt
