#include "cdt/transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace cdt {

const char* to_string(Normalization n) { return n == Normalization::Raw ? "raw" : "mehta"; }

Normalization parse_normalization(std::string_view text) {
  if (text == "raw") return Normalization::Raw;
  if (text == "mehta") return Normalization::Mehta;
  throw Error(ErrorCode::InvalidArgument, "normalization must be raw or mehta, got '" + std::string(text) + "'");
}

namespace {

void check_axis_kappa(const TensorGrid& g, const MultiplicitySplit& ms, const char* which) {
  if (g.dim() != ms.dim()) throw Error(ErrorCode::PlanMismatch, std::string(which) + " grid dimension mismatch");
  for (int j = 0; j < g.dim(); ++j) {
    if (g.axis(j).kappa != ms.kappa[j]) {
      throw Error(ErrorCode::PlanMismatch, std::string(which) + " grid axis " + std::to_string(j + 1) +
                                               " built for kappa=" + std::to_string(g.axis(j).kappa) +
                                               ", plan has " + std::to_string(ms.kappa[j]));
    }
  }
}

// Values on a tensor of nodes, blade_count coefficients per node.
struct Tensor {
  std::vector<std::size_t> dims;
  std::vector<double> data;
};

// Replaces axis `axis` (size cols) by `rows` entries:
//   out[.., r, ..] = sum_c Re M[r,c] t[.., c, ..] + Im M[r,c] (u t)[.., c, ..]
// with u t taken as u*t (left) or t*u (right). A null unit skips the
// imaginary part.
void contract_axis(Tensor& t, int axis, std::size_t rows, const std::complex<double>* M, const ImaginaryUnit* unit,
                   bool left, std::size_t nb) {
  const std::size_t cols = t.dims[axis];
  std::size_t outer = 1, inner = nb;
  for (int j = 0; j < axis; ++j) outer *= t.dims[j];
  for (std::size_t j = axis + 1; j < t.dims.size(); ++j) inner *= t.dims[j];

  std::vector<double> g;
  if (unit) {
    g.resize(t.data.size());
    const std::size_t nodes = t.data.size() / nb;
    for (std::size_t i = 0; i < nodes; ++i) {
      std::span<const double> in(t.data.data() + i * nb, nb);
      std::span<double> out(g.data() + i * nb, nb);
      if (left) {
        unit->left_multiply(in, out);
      } else {
        unit->right_multiply(in, out);
      }
    }
  }
  std::vector<double> out(outer * rows * inner, 0.0);
  for (std::size_t o = 0; o < outer; ++o) {
    const double* src = t.data.data() + o * cols * inner;
    const double* gsrc = unit ? g.data() + o * cols * inner : nullptr;
    double* dst = out.data() + o * rows * inner;
    for (std::size_t r = 0; r < rows; ++r) {
      double* drow = dst + r * inner;
      const std::complex<double>* mrow = M + r * cols;
      for (std::size_t c = 0; c < cols; ++c) {
        const double mr = mrow[c].real();
        const double* s = src + c * inner;
        for (std::size_t k = 0; k < inner; ++k) drow[k] += mr * s[k];
        if (gsrc) {
          const double mi = mrow[c].imag();
          const double* gs = gsrc + c * inner;
          for (std::size_t k = 0; k < inner; ++k) drow[k] += mi * gs[k];
        }
      }
    }
  }
  t.dims[axis] = rows;
  t.data = std::move(out);
}

Tensor tensor_of(const SampledField& f) {
  Tensor t;
  for (const Grid1D& a : f.grid->axes()) t.dims.push_back(a.size());
  t.data = f.values;
  return t;
}

SampledField check_input(const Field& f, const TransformPlan& plan) {
  if (!(f.signature() == plan.signature())) throw Error(ErrorCode::PlanMismatch, "field signature differs from plan");
  if (!f.kappa().empty() && f.kappa() != plan.split().kappa) {
    throw Error(ErrorCode::PlanMismatch, "field multiplicities differ from plan");
  }
  return f.sample(plan.in_grid());
}

double mv_norm_sq(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

}  // namespace

TransformPlan::TransformPlan(Signature sig, MultiplicitySplit ms, ImaginaryUnit a, ImaginaryUnit b,
                             std::shared_ptr<const TensorGrid> in, std::shared_ptr<const TensorGrid> out,
                             PlanOptions opt)
    : sig_(sig),
      ms_(std::move(ms)),
      a_(std::move(a)),
      b_(std::move(b)),
      in_(std::move(in)),
      out_(std::move(out)),
      opt_(opt) {
  if (ms_.dim() != sig_.dim()) {
    throw Error(ErrorCode::PlanMismatch, "kappa has " + std::to_string(ms_.dim()) + " entries for dimension " +
                                             std::to_string(sig_.dim()));
  }
  if (!(a_.value().signature() == sig_) || !(b_.value().signature() == sig_)) {
    throw Error(ErrorCode::SignatureMismatch, "transform units belong to a different signature");
  }
  if (!in_ || !out_) throw Error(ErrorCode::InvalidArgument, "plan needs input and output grids");
  check_axis_kappa(*in_, ms_, "input");
  if (out_->dim() != sig_.dim()) throw Error(ErrorCode::PlanMismatch, "output grid dimension mismatch");
  for (int j = 0; j < dim(); ++j) {
    const double xm = in_->axis(j).max_abs(), ym = out_->axis(j).max_abs();
    if (xm * ym > opt_.t_max) {
      throw Error(ErrorCode::ArgumentOutOfRadius,
                  "coordinate " + std::to_string(j + 1) + ": max|x| * max|y| = " + std::to_string(xm * ym) +
                      " exceeds kernel radius " + std::to_string(opt_.t_max));
    }
  }
  c_p_ = mehta_constant(ms_.block_p());
  c_q_ = mehta_constant(ms_.block_q());
  for (int j = 0; j < dim(); ++j) {
    tables_.push_back(kernel_coefficients(ms_.kappa[j], opt_.kernel_tol, opt_.t_max));
    const Grid1D& X = in_->axis(j);
    const Grid1D& Y = out_->axis(j);
    std::vector<std::complex<double>> f(Y.size() * X.size()), g(X.size() * Y.size());
    for (std::size_t o = 0; o < Y.size(); ++o) {
      for (std::size_t i = 0; i < X.size(); ++i) {
        auto [A, B] = eval_kernel_ab(tables_[j], X.nodes[i] * Y.nodes[o]);
        f[o * X.size() + i] = X.mass(i) * std::complex<double>(A, B);
        g[i * Y.size() + o] = Y.mass(o) * std::complex<double>(A, -B);
      }
    }
    fwd_.push_back(std::move(f));
    inv_.push_back(std::move(g));
  }
}

double TransformPlan::forward_scale() const { return opt_.norm == Normalization::Raw ? 1.0 : c_p_ * c_q_; }

double TransformPlan::inverse_scale() const {
  const double c = c_p_ * c_q_;
  return opt_.norm == Normalization::Raw ? c * c : c;
}

std::string TransformPlan::units_label() const {
  std::ostringstream os;
  os << "a=" << a_.label() << " b=" << b_.label() << " split=" << ms_.split << " norm=" << to_string(opt_.norm);
  return os.str();
}

std::string TransformPlan::grid_label() const { return "in=" + in_->describe() + " out=" + out_->describe(); }

SampledField forward(const SampledField& f, const TransformPlan& plan, TransformKind kind) {
  if (!same_grid(*f.grid, *plan.in_grid())) throw Error(ErrorCode::PlanMismatch, "field is not on the plan's input grid");
  if (!(f.sig == plan.signature())) throw Error(ErrorCode::PlanMismatch, "field signature differs from plan");
  const std::size_t nb = plan.signature().blade_count();
  const int d = plan.dim();
  const int split = plan.split().split;
  Tensor t = tensor_of(f);
  auto step = [&](int j, bool left) {
    contract_axis(t, j, plan.out_grid()->axis(j).size(), plan.forward_matrix(j).data(), &plan.unit(j), left, nb);
  };
  switch (kind) {
    case TransformKind::TwoSided:
      for (int j = 0; j < d; ++j) step(j, j < split);
      break;
    case TransformKind::Left:
      // E_p (E_q f): the b-block acts first.
      for (int j = split; j < d; ++j) step(j, true);
      for (int j = 0; j < split; ++j) step(j, true);
      break;
    case TransformKind::Right:
      // (f E_p) E_q: the a-block acts first.
      for (int j = 0; j < split; ++j) step(j, false);
      for (int j = split; j < d; ++j) step(j, false);
      break;
  }
  const double s = plan.forward_scale();
  if (s != 1.0) {
    for (double& v : t.data) v *= s;
  }
  return SampledField(plan.signature(), plan.out_grid(), std::move(t.data));
}

SampledField forward(const Field& f, const TransformPlan& plan, TransformKind kind) {
  return forward(check_input(f, plan), plan, kind);
}

SampledField forward_left(const Field& f, const TransformPlan& plan) { return forward(f, plan, TransformKind::Left); }

SampledField forward_right(const Field& f, const TransformPlan& plan) {
  return forward(f, plan, TransformKind::Right);
}

SampledField inverse(const SampledField& F, const TransformPlan& plan) {
  if (!same_grid(*F.grid, *plan.out_grid())) {
    throw Error(ErrorCode::PlanMismatch, "frequency field is not on the plan's output grid");
  }
  if (!(F.sig == plan.signature())) throw Error(ErrorCode::PlanMismatch, "field signature differs from plan");
  check_axis_kappa(*plan.out_grid(), plan.split(), "output");
  const std::size_t nb = plan.signature().blade_count();
  const int split = plan.split().split;
  Tensor t = tensor_of(F);
  for (int j = 0; j < plan.dim(); ++j) {
    contract_axis(t, j, plan.in_grid()->axis(j).size(), plan.inverse_matrix(j).data(), &plan.unit(j), j < split, nb);
  }
  const double s = plan.inverse_scale();
  for (double& v : t.data) v *= s;
  return SampledField(plan.signature(), plan.in_grid(), std::move(t.data));
}

double l2_norm_sq(const SampledField& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.grid->size(); ++i) s += f.grid->mass(i) * mv_norm_sq(f.node(i));
  return s;
}

double relative_l2(const SampledField& a, const SampledField& b) {
  if (!same_grid(*a.grid, *b.grid) || a.values.size() != b.values.size()) {
    throw Error(ErrorCode::PlanMismatch, "relative_l2 needs fields on a common grid");
  }
  double num = 0.0, den = 0.0;
  const std::size_t nb = a.blade_count();
  for (std::size_t i = 0; i < a.grid->size(); ++i) {
    const double m = a.grid->mass(i);
    for (std::size_t k = 0; k < nb; ++k) {
      const double x = a.values[i * nb + k], y = b.values[i * nb + k];
      num += m * (x - y) * (x - y);
      den += m * y * y;
    }
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::sqrt(num / den);
}

double asserted_eigenvalue(const TransformPlan& plan) {
  const MultiplicitySplit& ms = plan.split();
  const double mp = ms.split, mq = ms.dim() - ms.split;
  const double cp = plan.c_p(), cq = plan.c_q();
  return std::pow(2.0, ms.gamma_p() + mp / 2.0) * std::pow(2.0, ms.gamma_q() + mq / 2.0) / (cp * cp * cq * cq);
}

double asserted_plancherel_constant(const TransformPlan& plan) {
  const double e = asserted_eigenvalue(plan);
  return e * e;
}

PlancherelResult plancherel_ratio(const Field& f, const TransformPlan& plan) {
  check_axis_kappa(*plan.out_grid(), plan.split(), "output");
  const SampledField s = check_input(f, plan);
  PlancherelResult r;
  r.input_norm_sq = l2_norm_sq(s);
  if (!(r.input_norm_sq > 0.0)) throw Error(ErrorCode::ZeroNorm, "Plancherel ratio of a zero field");
  r.output_norm_sq = l2_norm_sq(forward(s, plan));
  r.ratio = r.output_norm_sq / r.input_norm_sq;
  r.report = constant_claim("plancherel_constant_asserted", asserted_plancherel_constant(plan), r.ratio, 1e-6);
  r.report.grid = plan.grid_label();
  r.report.units = plan.units_label();
  r.report.sig = std::to_string(plan.signature().p) + "," + std::to_string(plan.signature().q);
  r.report.kappa = plan.split().kappa;
  return r;
}

namespace {

std::vector<HermiteBasis> bases_for(const MultiplicitySplit& ms, int n_max) {
  std::vector<HermiteBasis> out;
  for (double k : ms.kappa) out.push_back(hermite_basis(k, n_max));
  return out;
}

}  // namespace

std::vector<HermiteCoefficient> expand_hermite(const Field& f, int n_max, const TransformPlan& plan) {
  const SampledField s = check_input(f, plan);
  const auto bases = bases_for(plan.split(), n_max);
  const std::size_t nb = plan.signature().blade_count();
  const std::size_t rows = n_max + 1;
  Tensor t = tensor_of(s);
  std::vector<double> h(rows);
  for (int j = 0; j < plan.dim(); ++j) {
    const Grid1D& X = plan.in_grid()->axis(j);
    std::vector<std::complex<double>> M(rows * X.size());
    for (std::size_t i = 0; i < X.size(); ++i) {
      bases[j].eval_all(X.nodes[i], h);
      for (std::size_t n = 0; n < rows; ++n) M[n * X.size() + i] = X.mass(i) * h[n];
    }
    contract_axis(t, j, rows, M.data(), nullptr, true, nb);
  }
  std::vector<HermiteCoefficient> out;
  const int d = plan.dim();
  std::vector<int> idx(d, 0);
  const std::size_t total = t.data.size() / nb;
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    int deg = 0;
    for (int j = d - 1; j >= 0; --j) {
      idx[j] = static_cast<int>(rem % rows);
      rem /= rows;
      deg += idx[j];
    }
    if (deg > n_max) continue;
    out.push_back({idx, MultiVector(plan.signature(), std::vector<double>(t.data.begin() + flat * nb,
                                                                            t.data.begin() + (flat + 1) * nb))});
  }
  std::stable_sort(out.begin(), out.end(), [](const HermiteCoefficient& x, const HermiteCoefficient& y) {
    const int dx = std::accumulate(x.index.begin(), x.index.end(), 0);
    const int dy = std::accumulate(y.index.begin(), y.index.end(), 0);
    return dx != dy ? dx < dy : x.index < y.index;
  });
  return out;
}

EigenResult eigencheck(std::span<const int> v, std::span<const int> u, const TransformPlan& plan) {
  const MultiplicitySplit& ms = plan.split();
  if (static_cast<int>(v.size()) != ms.split || static_cast<int>(u.size()) != ms.dim() - ms.split) {
    throw Error(ErrorCode::InvalidArgument, "eigencheck: v needs " + std::to_string(ms.split) + " entries and u " +
                                                std::to_string(ms.dim() - ms.split));
  }
  std::vector<int> idx(v.begin(), v.end());
  idx.insert(idx.end(), u.begin(), u.end());
  int n_max = 0, lv = 0, lu = 0;
  for (int n : idx) {
    if (n < 0) throw Error(ErrorCode::InvalidArgument, "eigencheck: negative index");
    n_max = std::max(n_max, n);
  }
  for (int n : v) lv += n;
  for (int n : u) lu += n;
  const auto bases = bases_for(ms, n_max);
  const Signature sig = plan.signature();
  Field f = Field::from_function(
      sig, ms.kappa,
      [&](std::span<const double> x, std::span<double> out) {
        std::fill(out.begin(), out.end(), 0.0);
        out[0] = eval_h(idx, x, bases);
      });
  const SampledField F = forward(f, plan);
  const TensorGrid& Y = *plan.out_grid();
  const std::size_t nb = sig.blade_count();

  // C = sum m F g / sum m g^2, blade-wise.
  std::vector<double> y(plan.dim());
  std::vector<double> g(Y.size());
  double gg = 0.0;
  MultiVector C(sig);
  for (std::size_t i = 0; i < Y.size(); ++i) {
    Y.point(i, y);
    g[i] = eval_h(idx, y, bases);
    gg += Y.mass(i) * g[i] * g[i];
    auto Fi = F.node(i);
    for (std::size_t k = 0; k < nb; ++k) C[k] += Y.mass(i) * Fi[k] * g[i];
  }
  C *= 1.0 / gg;
  double res = 0.0, tot = 0.0;
  for (std::size_t i = 0; i < Y.size(); ++i) {
    auto Fi = F.node(i);
    for (std::size_t k = 0; k < nb; ++k) {
      const double e = Fi[k] - C[k] * g[i];
      res += Y.mass(i) * e * e;
      tot += Y.mass(i) * Fi[k] * Fi[k];
    }
  }
  EigenResult r;
  r.constant = C;
  r.shape_residual = std::sqrt(res / tot);
  MultiVector U = MultiVector::scalar(sig, 1.0);
  for (int k = 0; k < lv; ++k) U = U * (-plan.a().value());
  for (int k = 0; k < lu; ++k) U = U * (-plan.b().value());
  r.expected_unit = U;
  r.lambda = scalar_product(C, U) / scalar_product(U, U);
  r.collinearity_residual = modulus(C - U * r.lambda) / modulus(C);

  std::ostringstream name;
  name << "eigenvalue_v";
  for (int n : v) name << n;
  name << "_u";
  for (int n : u) name << n;
  r.report = constant_claim(name.str(), asserted_eigenvalue(plan), r.lambda, 1e-6);
  r.report.grid = plan.grid_label();
  r.report.units = plan.units_label();
  r.report.sig = std::to_string(sig.p) + "," + std::to_string(sig.q);
  r.report.kappa = ms.kappa;
  return r;
}

SampledField translate_spectral(const Field& f, std::span<const double> z, const TransformPlan& plan) {
  const int d = plan.dim();
  if (static_cast<int>(z.size()) != d) throw Error(ErrorCode::LengthMismatch, "shift has wrong dimension");
  for (int j = 0; j < d; ++j) {
    if (std::fabs(z[j]) * plan.out_grid()->axis(j).max_abs() > plan.options().t_max) {
      throw Error(ErrorCode::ArgumentOutOfRadius,
                  "shift component " + std::to_string(z[j]) + " exceeds the kernel radius on the output grid");
    }
  }
  SampledField F = forward(f, plan);
  const TensorGrid& Y = *plan.out_grid();
  const std::size_t nb = plan.signature().blade_count();
  const int split = plan.split().split;
  std::vector<double> y(d), t1(nb), t2(nb);
  for (std::size_t i = 0; i < Y.size(); ++i) {
    Y.point(i, y);
    std::complex<double> L(1.0, 0.0), R(1.0, 0.0);
    for (int j = 0; j < d; ++j) {
      auto [A, B] = eval_kernel_ab(plan.table(j), z[j] * y[j]);
      (j < split ? L : R) *= std::complex<double>(A, B);
    }
    auto node = F.node(i);
    // t = L F, then node = t R.
    plan.a().left_multiply(node, t1);
    for (std::size_t k = 0; k < nb; ++k) t1[k] = L.real() * node[k] + L.imag() * t1[k];
    plan.b().right_multiply(t1, t2);
    for (std::size_t k = 0; k < nb; ++k) node[k] = R.real() * t1[k] + R.imag() * t2[k];
  }
  return inverse(F, plan);
}

namespace {

struct WeightedPoint {
  double x;
  double w;
};

// One-dimensional Rosler translation x -> (tau_z h)(x) as a finite sum of
// weighted evaluations of h.
void rosler_points(double x, double z, double kappa, const JacobiRule* rule, std::vector<WeightedPoint>& out) {
  out.clear();
  if (kappa == 0.0) {
    out.push_back({x - z, 1.0});
    return;
  }
  const double pref = psi_prefactor(kappa);
  const double dz = x - z;
  for (std::size_t k = 0; k < rule->nodes.size(); ++k) {
    const double t = rule->nodes[k];
    const double psi = pref * rule->weights[k] * (1.0 + t);
    const double omega = std::sqrt(std::max(0.0, x * x + z * z - 2.0 * x * z * t));
    if (omega == 0.0) {
      out.push_back({0.0, psi});
      continue;
    }
    out.push_back({omega, 0.5 * psi * (1.0 + dz / omega)});
    out.push_back({-omega, 0.5 * psi * (1.0 - dz / omega)});
  }
}

MultiVector translate_with_rules(const Field& f, std::span<const double> z, const MultiplicitySplit& ms,
                                 std::span<const double> x, const std::vector<JacobiRule>& rules) {
  const int d = ms.dim();
  std::vector<std::vector<WeightedPoint>> pts(d);
  for (int j = 0; j < d; ++j) rosler_points(x[j], z[j], ms.kappa[j], ms.kappa[j] > 0 ? &rules[j] : nullptr, pts[j]);
  const Signature& sig = f.signature();
  MultiVector acc(sig);
  std::vector<double> val(sig.blade_count()), p(d);
  std::vector<std::size_t> it(d, 0);
  for (;;) {
    double w = 1.0;
    for (int j = 0; j < d; ++j) {
      p[j] = pts[j][it[j]].x;
      w *= pts[j][it[j]].w;
    }
    f.eval(p, val);
    for (std::size_t k = 0; k < val.size(); ++k) acc[k] += w * val[k];
    int j = d - 1;
    while (j >= 0 && ++it[j] == pts[j].size()) it[j--] = 0;
    if (j < 0) break;
  }
  return acc;
}

std::vector<JacobiRule> rules_for(const MultiplicitySplit& ms, int order) {
  std::vector<JacobiRule> rules(ms.dim());
  for (int j = 0; j < ms.dim(); ++j) {
    if (ms.kappa[j] > 0.0) rules[j] = jacobi_rule(ms.kappa[j], order);
  }
  return rules;
}

void check_translate_args(const Field& f, std::span<const double> z, const MultiplicitySplit& ms) {
  if (f.is_sampled()) throw Error(ErrorCode::InvalidArgument, "explicit translation needs an analytic field");
  if (ms.dim() != f.signature().dim() || static_cast<int>(z.size()) != ms.dim()) {
    throw Error(ErrorCode::LengthMismatch, "translation: dimension mismatch");
  }
}

}  // namespace

MultiVector translate_explicit_at(const Field& f, std::span<const double> z, const MultiplicitySplit& ms,
                                  std::span<const double> x, int jacobi_order) {
  check_translate_args(f, z, ms);
  return translate_with_rules(f, z, ms, x, rules_for(ms, jacobi_order));
}

SampledField translate_explicit(const Field& f, std::span<const double> z, const MultiplicitySplit& ms,
                                std::shared_ptr<const TensorGrid> grid, int jacobi_order) {
  check_translate_args(f, z, ms);
  const auto rules = rules_for(ms, jacobi_order);
  SampledField out(f.signature(), grid);
  std::vector<double> x(ms.dim());
  for (std::size_t i = 0; i < grid->size(); ++i) {
    grid->point(i, x);
    MultiVector m = translate_with_rules(f, z, ms, x, rules);
    std::copy(m.coefficients().begin(), m.coefficients().end(), out.node(i).begin());
  }
  return out;
}

SampledField convolve(const Field& f, const Field& g, const TransformPlan& plan) {
  const TensorGrid& X = *plan.in_grid();
  const TensorGrid& Y = *plan.out_grid();
  check_axis_kappa(Y, plan.split(), "output");
  const int d = plan.dim();
  // Each coordinate needs the pair kernel at every (x, z, y) triple.
  double cost = 0.0;
  for (int j = 0; j < d; ++j) {
    const double n = static_cast<double>(X.axis(j).size());
    cost += n * n * static_cast<double>(Y.axis(j).size());
  }
  if (cost > static_cast<double>(plan.options().convolution_budget)) {
    throw Error(ErrorCode::BudgetExceeded, "convolution needs " + std::to_string(static_cast<long long>(cost)) +
                                               " pair-kernel evaluations, budget is " +
                                               std::to_string(plan.options().convolution_budget));
  }
  const SampledField fs = check_input(f, plan);
  const SampledField gs = check_input(g, plan);
  const std::size_t nb = plan.signature().blade_count();
  const int split = plan.split().split;

  // tau_z g = inverse(E(z, -.) forward(g) E(z, -.)); the forward scale is
  // already in G, the inverse scale is applied with the f(z) weights below.
  SampledField G = forward(gs, plan);
  Tensor t = tensor_of(G);
  for (int j = 0; j < d; ++j) {
    const Grid1D& Xa = X.axis(j);
    const Grid1D& Ya = Y.axis(j);
    const std::size_t n = Xa.size();
    std::vector<std::complex<double>> K(n * Ya.size());
    for (std::size_t o = 0; o < Ya.size(); ++o) {
      for (std::size_t i = 0; i < n; ++i) {
        auto [A, B] = eval_kernel_ab(plan.table(j), Xa.nodes[i] * Ya.nodes[o]);
        K[i * Ya.size() + o] = std::complex<double>(A, B);
      }
    }
    // Row (x, z): mass_y conj(K(x y)) K(z y).
    std::vector<std::complex<double>> M(n * n * Ya.size());
    for (std::size_t xi = 0; xi < n; ++xi) {
      for (std::size_t zi = 0; zi < n; ++zi) {
        std::complex<double>* row = M.data() + (xi * n + zi) * Ya.size();
        for (std::size_t o = 0; o < Ya.size(); ++o) {
          row[o] = Ya.mass(o) * std::conj(K[xi * Ya.size() + o]) * K[zi * Ya.size() + o];
        }
      }
    }
    contract_axis(t, j, n * n, M.data(), &plan.unit(j), j < split, nb);
  }
  // t is indexed by (x1, z1, x2, z2, ...); T[x, z] = tau_z g(x) / inverse_scale.
  const double s = plan.inverse_scale();
  std::vector<std::size_t> xdims(d);
  for (int j = 0; j < d; ++j) xdims[j] = X.axis(j).size();
  SampledField out(plan.signature(), plan.in_grid());
  std::vector<std::size_t> xi(d), zi(d);
  const Signature& sig = plan.signature();
  std::vector<double> fw(fs.values);
  for (std::size_t zf = 0; zf < X.size(); ++zf) {
    for (std::size_t k = 0; k < nb; ++k) fw[zf * nb + k] *= X.mass(zf) * s;
  }
  for (std::size_t xf = 0; xf < X.size(); ++xf) {
    X.index(xf, xi);
    auto dst = out.node(xf);
    for (std::size_t zf = 0; zf < X.size(); ++zf) {
      X.index(zf, zi);
      std::size_t flat = 0;
      for (int j = 0; j < d; ++j) flat = (flat * xdims[j] + xi[j]) * xdims[j] + zi[j];
      std::span<const double> T(t.data.data() + flat * nb, nb);
      accumulate_product(std::span<const double>(fw.data() + zf * nb, nb), T, sig, dst);
    }
  }
  return out;
}

}  // namespace cdt
