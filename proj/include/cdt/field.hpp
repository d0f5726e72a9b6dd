#pragma once

// Cl(p,q)-valued functions on R^d: analytic (per-blade expressions or a
// callable) or sampled on a tensor grid.

#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "cdt/clifford.hpp"
#include "cdt/expr.hpp"
#include "cdt/quadrature.hpp"

namespace cdt {

bool same_grid(const TensorGrid& a, const TensorGrid& b);

// Values at the nodes of a grid, 2^d coefficients per node.
struct SampledField {
  Signature sig;
  std::shared_ptr<const TensorGrid> grid;
  std::vector<double> values;

  SampledField() = default;
  SampledField(Signature s, std::shared_ptr<const TensorGrid> g);
  SampledField(Signature s, std::shared_ptr<const TensorGrid> g, std::vector<double> v);

  std::size_t blade_count() const { return sig.blade_count(); }
  std::span<const double> node(std::size_t i) const {
    return std::span<const double>(values).subspan(i * blade_count(), blade_count());
  }
  std::span<double> node(std::size_t i) { return std::span<double>(values).subspan(i * blade_count(), blade_count()); }
  MultiVector at(std::size_t i) const;
};

// Writes the 2^d coefficients of f(x) into out.
using PointFunction = std::function<void(std::span<const double> x, std::span<double> out)>;

class Field {
 public:
  using Blades = std::vector<std::pair<BladeMask, Expr>>;

  static Field from_expressions(Signature sig, std::vector<double> kappa, Blades blades, double spread = 1.0);
  static Field from_function(Signature sig, std::vector<double> kappa, PointFunction fn, double spread = 1.0);
  static Field from_samples(std::vector<double> kappa, SampledField samples, double spread = 1.0);

  const Signature& signature() const { return sig_; }
  const std::vector<double>& kappa() const { return kappa_; }
  double spread() const { return spread_; }

  bool is_sampled() const { return std::holds_alternative<SampledField>(body_); }
  const SampledField& samples() const;
  // Empty unless the field was built from expressions.
  const Blades& expressions() const { return expressions_; }

  // Analytic fields only.
  void eval(std::span<const double> x, std::span<double> out) const;
  MultiVector eval(std::span<const double> x) const;

  // Values on `grid`; a sampled field must already live on an equal grid.
  SampledField sample(std::shared_ptr<const TensorGrid> grid) const;

 private:
  Signature sig_;
  std::vector<double> kappa_;
  double spread_ = 1.0;
  Blades expressions_;
  std::variant<PointFunction, SampledField> body_;
};

}  // namespace cdt
