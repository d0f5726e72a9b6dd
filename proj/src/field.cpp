#include "cdt/field.hpp"

namespace cdt {

bool same_grid(const TensorGrid& a, const TensorGrid& b) {
  if (&a == &b) return true;
  if (a.dim() != b.dim()) return false;
  for (int j = 0; j < a.dim(); ++j) {
    const Grid1D& x = a.axis(j);
    const Grid1D& y = b.axis(j);
    if (x.nodes != y.nodes || x.weights != y.weights || x.weight_values != y.weight_values) return false;
  }
  return true;
}

SampledField::SampledField(Signature s, std::shared_ptr<const TensorGrid> g)
    : sig(s), grid(std::move(g)), values(grid->size() * s.blade_count(), 0.0) {}

SampledField::SampledField(Signature s, std::shared_ptr<const TensorGrid> g, std::vector<double> v)
    : sig(s), grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid->size() * sig.blade_count()) {
    throw Error(ErrorCode::LengthMismatch, "sampled field has " + std::to_string(values.size()) +
                                               " coefficients for " + std::to_string(grid->size()) + " nodes");
  }
  if (grid->dim() != sig.dim()) throw Error(ErrorCode::SignatureMismatch, "grid dimension differs from signature");
}

MultiVector SampledField::at(std::size_t i) const {
  auto v = node(i);
  return MultiVector(sig, std::vector<double>(v.begin(), v.end()));
}

Field Field::from_expressions(Signature sig, std::vector<double> kappa, Blades blades, double spread) {
  if (blades.empty()) throw Error(ErrorCode::SchemaError, "field needs at least one blade");
  for (const auto& [mask, e] : blades) {
    if (mask >= sig.blade_count()) throw Error(ErrorCode::SchemaError, "blade outside the signature");
  }
  auto shared = std::make_shared<const Blades>(blades);
  Field f = from_function(
      sig, std::move(kappa),
      [shared](std::span<const double> x, std::span<double> out) {
        std::fill(out.begin(), out.end(), 0.0);
        for (const auto& [mask, e] : *shared) out[mask] += eval_expr(e, x);
      },
      spread);
  f.expressions_ = std::move(blades);
  return f;
}

Field Field::from_function(Signature sig, std::vector<double> kappa, PointFunction fn, double spread) {
  if (!kappa.empty() && static_cast<int>(kappa.size()) != sig.dim()) {
    throw Error(ErrorCode::SchemaError, "kappa has " + std::to_string(kappa.size()) + " entries for dimension " +
                                            std::to_string(sig.dim()));
  }
  if (!(spread > 0.0)) throw Error(ErrorCode::SchemaError, "spread must be positive");
  Field f;
  f.sig_ = sig;
  f.kappa_ = std::move(kappa);
  f.spread_ = spread;
  f.body_ = std::move(fn);
  return f;
}

Field Field::from_samples(std::vector<double> kappa, SampledField samples, double spread) {
  Field f = from_function(samples.sig, std::move(kappa), PointFunction{}, spread);
  f.body_ = std::move(samples);
  return f;
}

const SampledField& Field::samples() const {
  if (!is_sampled()) throw Error(ErrorCode::InvalidArgument, "field is analytic, not sampled");
  return std::get<SampledField>(body_);
}

void Field::eval(std::span<const double> x, std::span<double> out) const {
  if (is_sampled()) throw Error(ErrorCode::InvalidArgument, "sampled fields cannot be evaluated off-grid");
  if (static_cast<int>(x.size()) != sig_.dim()) throw Error(ErrorCode::LengthMismatch, "point dimension mismatch");
  std::get<PointFunction>(body_)(x, out);
}

MultiVector Field::eval(std::span<const double> x) const {
  MultiVector m(sig_);
  eval(x, m.coefficients());
  return m;
}

SampledField Field::sample(std::shared_ptr<const TensorGrid> grid) const {
  if (grid->dim() != sig_.dim()) throw Error(ErrorCode::PlanMismatch, "grid dimension differs from field");
  if (is_sampled()) {
    const SampledField& s = samples();
    if (!same_grid(*s.grid, *grid)) throw Error(ErrorCode::PlanMismatch, "sampled field lives on a different grid");
    return SampledField(s.sig, grid, s.values);
  }
  SampledField out(sig_, grid);
  std::vector<double> x(sig_.dim());
  for (std::size_t i = 0; i < grid->size(); ++i) {
    grid->point(i, x);
    eval(x, out.node(i));
  }
  return out;
}

}  // namespace cdt
