#include "cdt/claims.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "cdt/miyachi.hpp"

namespace cdt {

std::shared_ptr<const TensorGrid> make_grid(std::span<const double> kappa, double L, int panels, int order) {
  return std::make_shared<const TensorGrid>(build_grid(kappa, L, panels, order));
}

LedgerConfig ledger_config_from_json(const json& j) {
  LedgerConfig c;
  if (!j.is_object()) throw Error(ErrorCode::SchemaError, "ledger config must be a JSON object");
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& k = it.key();
      const json& v = it.value();
      if (k == "sig") {
        c.sig = Signature(v.at("p").get<int>(), v.at("q").get<int>());
      } else if (k == "kappa") {
        c.kappa = v.get<std::vector<double>>();
      } else if (k == "split") {
        c.split = v.get<int>();
      } else if (k == "a") {
        c.a = v.get<std::string>();
      } else if (k == "b") {
        c.b = v.get<std::string>();
      } else if (k == "norm") {
        c.norm = parse_normalization(v.get<std::string>());
      } else if (k == "t_max") {
        c.t_max = v.get<double>();
      } else if (k == "panels") {
        c.panels = v.get<int>();
      } else if (k == "order") {
        c.order = v.get<int>();
      } else if (k == "kernel_kappas") {
        c.kernel_kappas = v.get<std::vector<double>>();
      } else if (k == "kernel_samples") {
        c.kernel_samples = v.get<int>();
      } else if (k == "eigen_degree") {
        c.eigen_degree = v.get<int>();
      } else if (k == "shift") {
        c.shift = v.get<std::vector<double>>();
      } else {
        throw Error(ErrorCode::SchemaError, "ledger config: unknown key '" + k + "'");
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaError, std::string("ledger config: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SchemaError) throw;
    throw Error(ErrorCode::SchemaError, std::string("ledger config: ") + e.what());
  }
  if (static_cast<int>(c.kappa.size()) != c.sig.dim()) {
    throw Error(ErrorCode::SchemaError, "ledger config: kappa length differs from p+q");
  }
  return c;
}

namespace {

using Scalar = std::function<double(std::span<const double>)>;

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

Field scalar_field(const Signature& sig, const std::vector<double>& kappa, Scalar s) {
  return Field::from_function(sig, kappa, [s](std::span<const double> x, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    out[0] = s(x);
  });
}

Field mv_field(const Signature& sig, const std::vector<double>& kappa,
               std::function<MultiVector(std::span<const double>)> fn) {
  return Field::from_function(sig, kappa, [fn](std::span<const double> x, std::span<double> out) {
    const MultiVector m = fn(x);
    std::copy(m.coefficients().begin(), m.coefficients().end(), out.begin());
  });
}

class Ledger {
 public:
  explicit Ledger(const LedgerConfig& c)
      : cfg_(c),
        ms_(c.kappa, c.split < 0 ? MultiplicitySplit::default_split(c.sig) : c.split),
        a_(ImaginaryUnit::parse(c.a, c.sig)),
        b_(ImaginaryUnit::parse(c.b, c.sig)) {
    opt_.norm = c.norm;
    opt_.t_max = c.t_max;
  }

  std::vector<ClaimReport> run() {
    kernel_claims();
    gaussian_claims();
    linearity_claims();
    inversion_claims();
    plancherel_claims();
    eigen_claims();
    translation_claims();
    miyachi_claims();
    return std::move(out_);
  }

 private:
  int d() const { return cfg_.sig.dim(); }

  TransformPlan plan(double Lx, double Ly) const {
    return TransformPlan(cfg_.sig, ms_, a_, b_, make_grid(ms_.kappa, Lx, cfg_.panels, cfg_.order),
                         make_grid(ms_.kappa, Ly, cfg_.panels, cfg_.order), opt_);
  }

  // Input and output boxes with equal Gaussian tails for e^{-delta |x|^2}.
  TransformPlan balanced(double delta) const {
    const double Lx = std::sqrt(cfg_.t_max / (2.0 * delta));
    return plan(Lx, cfg_.t_max / Lx);
  }

  void add(ClaimReport r, const TransformPlan* p) {
    std::ostringstream sig;
    sig << cfg_.sig.p << "," << cfg_.sig.q;
    r.sig = sig.str();
    r.kappa = cfg_.kappa;
    if (p) {
      r.grid = p->grid_label();
      r.units = p->units_label();
    } else {
      r.units = "a=" + cfg_.a + " b=" + cfg_.b + " norm=" + to_string(cfg_.norm);
    }
    out_.push_back(std::move(r));
  }

  void kernel_claims() {
    for (double k : cfg_.kernel_kappas) {
      const KernelTable tab = kernel_coefficients(k, kDefaultKernelTol, cfg_.t_max);
      double worst = 0.0;
      const int n = std::max(cfg_.kernel_samples, 2);
      for (int i = 0; i < n; ++i) {
        const double t = -cfg_.t_max + 2.0 * cfg_.t_max * i / (n - 1);
        auto [A, B] = eval_kernel_ab(tab, t);
        worst = std::max(worst, A * A + B * B);
      }
      std::ostringstream name;
      name << "kernel_bound_kappa=" << k;
      add(bound_claim(name.str(), 1.0 + 1e-12, worst), nullptr);
      auto [A0, B0] = eval_kernel_ab(tab, 0.0);
      std::ostringstream name0;
      name0 << "kernel_origin_kappa=" << k;
      add(bound_claim(name0.str(), 0.0, std::fabs(A0 - 1.0) + std::fabs(B0)), nullptr);
    }
  }

  void gaussian_claims() {
    for (double delta : {0.5, 1.0}) {
      const double Lx = std::min(std::sqrt(32.0 / delta), cfg_.t_max / 2.0);
      const TransformPlan p = plan(Lx, cfg_.t_max / Lx);
      const SampledField F =
          forward(scalar_field(cfg_.sig, cfg_.kappa, [delta](auto x) { return std::exp(-delta * norm2(x)); }), p);
      const TensorGrid& Y = *p.out_grid();
      std::vector<double> y(d()), g(Y.size());
      double num = 0.0, den = 0.0, peak = 0.0;
      for (std::size_t i = 0; i < Y.size(); ++i) {
        Y.point(i, y);
        g[i] = std::exp(-norm2(y) / (4.0 * delta));
        num += Y.mass(i) * F.node(i)[0] * g[i];
        den += Y.mass(i) * g[i] * g[i];
        peak = std::max(peak, std::sqrt(norm2(F.node(i))));
      }
      const double K = num / den;
      double dev = 0.0;
      for (std::size_t i = 0; i < Y.size(); ++i) {
        const double model = K * g[i];
        if (std::fabs(model) < 1e-8 * peak) continue;
        std::vector<double> diff(F.node(i).begin(), F.node(i).end());
        diff[0] -= model;
        dev = std::max(dev, std::sqrt(norm2(diff)) / std::fabs(model));
      }
      std::ostringstream tag;
      tag << "_delta=" << delta;
      add(bound_claim("gaussian_shape" + tag.str(), 1e-6, dev), &p);
      const double power = std::pow(2.0 * delta, ms_.gamma() + d() / 2.0);
      add(constant_claim("gaussian_constant_asserted" + tag.str(), 1.0 / power, K, 1e-6), &p);
      add(constant_claim("gaussian_constant_oracle" + tag.str(), p.forward_scale() / (p.c_p() * p.c_q() * power), K,
                         1e-6),
          &p);
    }
  }

  void linearity_claims() {
    const TransformPlan p = balanced(0.5);
    const Field f = scalar_field(cfg_.sig, cfg_.kappa, [](auto x) { return (1.0 + x[0]) * std::exp(-0.5 * norm2(x)); });
    const Field g = general_field(0.5);
    const double al = 2.5, be = -1.25;
    const Field h = Field::from_function(cfg_.sig, cfg_.kappa, [&](std::span<const double> x, std::span<double> o) {
      std::vector<double> u(o.size()), v(o.size());
      f.eval(x, u);
      g.eval(x, v);
      for (std::size_t k = 0; k < o.size(); ++k) o[k] = al * u[k] + be * v[k];
    });
    const SampledField Ff = forward(f, p), Fg = forward(g, p), Fh = forward(h, p);
    double diff = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < Fh.values.size(); ++k) {
      diff = std::max(diff, std::fabs(Fh.values[k] - (al * Ff.values[k] + be * Fg.values[k])));
      scale = std::max(scale, std::fabs(Fh.values[k]));
    }
    add(bound_claim("scalar_linearity", 1e-12, diff / scale), &p);
  }

  // (1 + e_1) x_1 e^{-delta |x|^2} (1 + e_d) plus a grade-mixing term.
  Field general_field(double delta) const {
    const Signature sig = cfg_.sig;
    const int dim = d();
    const MultiVector L = MultiVector::scalar(sig, 1.0) + MultiVector::blade(sig, 1u);
    const MultiVector R = MultiVector::scalar(sig, 1.0) + MultiVector::blade(sig, 1u << (dim - 1));
    const MultiVector LR = L * R;
    const MultiVector top = MultiVector::blade(sig, static_cast<BladeMask>(sig.blade_count() - 1), 0.5);
    return mv_field(sig, cfg_.kappa, [=](std::span<const double> x) {
      const double gauss = std::exp(-delta * norm2(x));
      return LR * (x[0] * gauss) + top * (x[dim - 1] * x[dim - 1] * gauss);
    });
  }

  void inversion_claims() {
    {
      const TransformPlan p = balanced(0.5);
      const Field f = scalar_field(cfg_.sig, cfg_.kappa, [&](auto x) {
        return (1.0 + x[0] - 0.5 * x[d() - 1] * x[d() - 1]) * std::exp(-0.5 * norm2(x));
      });
      const SampledField s = f.sample(p.in_grid());
      add(bound_claim("inversion_scalar", 1e-5, relative_l2(inverse(forward(s, p), p), s)), &p);
    }
    {
      const TransformPlan p = balanced(1.0);
      const SampledField s = general_field(1.0).sample(p.in_grid());
      add(bound_claim("inversion_general", 1e-5, relative_l2(inverse(forward(s, p), p), s)), &p);
    }
  }

  void plancherel_claims() {
    const TransformPlan p = balanced(0.5);
    const Signature sig = cfg_.sig;
    const int dim = d();
    std::vector<Field> fields;
    fields.push_back(scalar_field(sig, cfg_.kappa, [](auto x) { return std::exp(-0.5 * norm2(x)); }));
    fields.push_back(scalar_field(sig, cfg_.kappa, [](auto x) { return (1.0 + x[0]) * std::exp(-0.5 * norm2(x)); }));
    fields.push_back(general_field(0.5));
    fields.push_back(mv_field(sig, cfg_.kappa, [=](std::span<const double> x) {
      MultiVector m = MultiVector::scalar(sig, 1.0) + MultiVector::blade(sig, 1u, x[dim - 1] * x[dim - 1]);
      return m * std::exp(-0.7 * norm2(x));
    }));
    fields.push_back(mv_field(sig, cfg_.kappa, [=](std::span<const double> x) {
      double r = 0.0;
      for (int j = 0; j < dim; ++j) {
        const double c = j % 2 ? -0.3 : 0.5;
        r += (x[j] - c) * (x[j] - c);
      }
      return (MultiVector::scalar(sig, 2.0) - MultiVector::blade(sig, 1u << (dim - 1))) * std::exp(-0.5 * r);
    }));
    double lo = INFINITY, hi = 0.0;
    PlancherelResult first;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      PlancherelResult r = plancherel_ratio(fields[i], p);
      if (i == 0) first = r;
      lo = std::min(lo, r.ratio);
      hi = std::max(hi, r.ratio);
    }
    add(bound_claim("plancherel_constancy", 1e-6, (hi - lo) / lo), &p);
    const double c = p.c_p() * p.c_q();
    const double s = p.forward_scale();
    add(constant_claim("plancherel_constant_oracle", s * s / (c * c), first.ratio, 1e-6), &p);
    ClaimReport asserted = first.report;
    add(asserted, &p);
  }

  void eigen_claims() {
    const double Lx = std::min(8.0, cfg_.t_max / 2.0);
    const TransformPlan p = plan(Lx, cfg_.t_max / Lx);
    const int dim = d();
    const int split = ms_.split;
    double shape = 0.0, col = 0.0, lmin = INFINITY, lmax = -INFINITY;
    ClaimReport asserted;
    std::vector<int> idx(dim, 0);
    for (;;) {
      int total = 0;
      for (int n : idx) total += n;
      if (total <= cfg_.eigen_degree) {
        std::span<const int> all(idx);
        EigenResult r = eigencheck(all.first(split), all.subspan(split), p);
        shape = std::max(shape, r.shape_residual);
        col = std::max(col, r.collinearity_residual);
        lmin = std::min(lmin, r.lambda);
        lmax = std::max(lmax, r.lambda);
        if (total == 0) asserted = r.report;
      }
      int j = dim - 1;
      while (j >= 0 && ++idx[j] > cfg_.eigen_degree) idx[j--] = 0;
      if (j < 0) break;
    }
    add(bound_claim("eigen_shape", 1e-6, shape), &p);
    add(bound_claim("eigen_collinearity", 1e-6, col), &p);
    add(bound_claim("eigenvalue_consistency", 1e-6, (lmax - lmin) / std::fabs(lmin)), &p);
    add(bound_claim("eigenvalue_positive", 0.0, lmin > 0.0 ? 0.0 : 1.0), &p);
    add(constant_claim("eigenvalue_oracle", p.forward_scale() / (p.c_p() * p.c_q()), asserted.measured_value, 1e-6), &p);
    asserted.claim = "eigenvalue_asserted";
    add(asserted, &p);
  }

  void translation_claims() {
    const TransformPlan p = balanced(1.0);
    std::vector<double> z(d());
    for (int j = 0; j < d(); ++j) z[j] = j < static_cast<int>(cfg_.shift.size()) ? cfg_.shift[j] : 0.3;
    const std::vector<double> zero(d(), 0.0);
    const Field gauss = scalar_field(cfg_.sig, cfg_.kappa, [](auto x) { return std::exp(-norm2(x)); });
    const Field xgauss = scalar_field(cfg_.sig, cfg_.kappa, [](auto x) { return x[0] * std::exp(-norm2(x)); });
    for (const auto& [name, f] : {std::pair{"gaussian", &gauss}, std::pair{"x_gaussian", &xgauss}}) {
      const SampledField S = translate_spectral(*f, z, p);
      const SampledField E = translate_explicit(*f, z, ms_, p.in_grid(), opt_.jacobi_order);
      add(bound_claim(std::string("translation_equivalence_") + name, 1e-5, relative_l2(E, S)), &p);
    }
    add(bound_claim("translation_identity", 1e-5,
                    relative_l2(translate_spectral(gauss, zero, p), gauss.sample(p.in_grid()))),
        &p);
  }

  void miyachi_claims() {
    const double Lx = 6.0;
    const TransformPlan p = plan(Lx, cfg_.t_max / Lx);
    const Signature sig = cfg_.sig;
    MiyachiConfig mc;
    mc.alpha = 1.0;
    mc.ladder = {1.0, 2.0, 3.0, 4.0};
    {
      mc.beta = 1.0;
      const Field f = scalar_field(sig, cfg_.kappa, [](auto x) { return std::exp(-norm2(x)); });
      const MiyachiVerdict v = verdict(f, mc, p);
      bool strictly = true;
      for (double inc : v.condition2.increments) strictly = strictly && inc > 0.0;
      const bool ok = v.kase == MiyachiCase::Vanishing && v.condition2.status == Condition::Growing && strictly;
      add(bound_claim("miyachi_vanishing_log_growing", 0.0, ok ? 0.0 : 1.0), &p);
    }
    {
      mc.beta = 0.25;
      mc.lambda = 3.0;
      const Field f = scalar_field(sig, cfg_.kappa, [](auto x) { return 2.0 * std::exp(-norm2(x)); });
      const MiyachiVerdict v = verdict(f, mc, p);
      add(bound_claim("miyachi_boundary_fit_residual", 1e-4, v.residual.value_or(NAN)), &p);
      add(bound_claim("miyachi_boundary_lambda", 0.0, v.lambda_check.value_or(false) ? 0.0 : 1.0), &p);
    }
    {
      mc.beta = 0.1;
      mc.lambda = 0.3;
      mc.ladder = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
      const double delta = 0.2;
      const MultiVector c = MultiVector::scalar(sig, 1.0) + MultiVector::blade(sig, static_cast<BladeMask>(sig.blade_count() - 1));
      const Field f = mv_field(sig, cfg_.kappa, [=](std::span<const double> x) {
        return c * (x[0] * x[0] * std::exp(-norm2(x) / (4.0 * delta)));
      });
      const TransformPlan ps = plan(4.5, cfg_.t_max / 4.5);
      const MiyachiVerdict v = verdict(f, mc, ps);
      const bool ok = v.kase == MiyachiCase::Subcritical && v.condition1.status == Condition::Finite &&
                      v.condition2.status == Condition::Finite;
      add(bound_claim("miyachi_subcritical_finite", 0.0, ok ? 0.0 : 1.0), &ps);
    }
  }

  LedgerConfig cfg_;
  MultiplicitySplit ms_;
  ImaginaryUnit a_;
  ImaginaryUnit b_;
  PlanOptions opt_;
  std::vector<ClaimReport> out_;
};

}  // namespace

std::vector<ClaimReport> run_claims_ledger(const LedgerConfig& config) { return Ledger(config).run(); }

}  // namespace cdt
