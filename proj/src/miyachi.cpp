#include "cdt/miyachi.hpp"

#include <algorithm>
#include <cmath>

namespace cdt {

const char* to_string(MiyachiCase c) {
  switch (c) {
    case MiyachiCase::Vanishing: return "vanishing";
    case MiyachiCase::Boundary: return "boundary";
    case MiyachiCase::Subcritical: return "subcritical";
  }
  return "?";
}

const char* to_string(Condition c) { return c == Condition::Finite ? "finite" : "growing"; }

MiyachiCase classify(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha and beta must be positive");
  const double ab = alpha * beta;
  if (std::fabs(ab - 0.25) <= 1e-12) return MiyachiCase::Boundary;
  return ab > 0.25 ? MiyachiCase::Vanishing : MiyachiCase::Subcritical;
}

void MiyachiConfig::validate() const {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha and beta must be positive");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw Error(ErrorCode::InvalidArgument, "lambda must be positive");
  if (!(exponent >= 1.0)) throw Error(ErrorCode::InvalidArgument, "exponent must lie in [1, inf]");
  if (ladder.size() < 3) throw Error(ErrorCode::InvalidArgument, "ladder needs at least 3 rungs");
  for (std::size_t j = 0; j < ladder.size(); ++j) {
    if (!(ladder[j] > (j ? ladder[j - 1] : 0.0)) || !std::isfinite(ladder[j])) {
      throw Error(ErrorCode::InvalidArgument, "ladder must be positive and strictly increasing");
    }
  }
  if (!(panel_width > 0.0) || order < 1) throw Error(ErrorCode::InvalidArgument, "bad ladder quadrature settings");
}

Condition decide(std::span<const double> values) {
  if (values.size() < 3) throw Error(ErrorCode::InvalidArgument, "need at least 3 ladder values");
  const std::size_t m = values.size();
  const double last = values[m - 1] - values[m - 2];
  const double prev = values[m - 2] - values[m - 3];
  // Increments at rounding level count as zero.
  const double slack = 1e-12 * std::max(1.0, std::fabs(values[m - 1]));
  return last <= 0.5 * prev + slack ? Condition::Finite : Condition::Growing;
}

Grid1D ladder_axis(double kappa, std::span<const double> ladder, double panel_width, int order) {
  std::vector<double> pos;
  double lo = 0.0;
  for (double L : ladder) {
    const int pieces = std::max(1, static_cast<int>(std::ceil((L - lo) / panel_width - 1e-12)));
    for (int k = 1; k <= pieces; ++k) pos.push_back(k == pieces ? L : lo + (L - lo) * k / pieces);
    lo = L;
  }
  std::vector<double> breaks;
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) breaks.push_back(-*it);
  breaks.push_back(0.0);
  breaks.insert(breaks.end(), pos.begin(), pos.end());
  return build_axis(kappa, breaks, order);
}

namespace {

// Smallest rung index j with |x|_inf <= L_j, or ladder.size() if none.
std::size_t rung_of(std::span<const double> x, std::span<const double> ladder) {
  double r = 0.0;
  for (double v : x) r = std::max(r, std::fabs(v));
  return static_cast<std::size_t>(std::lower_bound(ladder.begin(), ladder.end(), r) - ladder.begin());
}

ConditionReport finish(std::vector<double> per_rung, bool sup) {
  ConditionReport rep;
  double acc = 0.0;
  for (double v : per_rung) {
    acc = sup ? std::max(acc, v) : acc + v;
    rep.values.push_back(acc);
  }
  for (std::size_t j = 1; j < rep.values.size(); ++j) rep.increments.push_back(rep.values[j] - rep.values[j - 1]);
  rep.status = decide(rep.values);
  return rep;
}

double sq_norm(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

}  // namespace

ConditionReport check_growth(const Field& f, double alpha, double n, std::span<const double> ladder,
                             const MultiplicitySplit& ms, double panel_width, int order) {
  MiyachiConfig cfg;
  cfg.alpha = alpha;
  cfg.exponent = n;
  cfg.ladder.assign(ladder.begin(), ladder.end());
  cfg.panel_width = panel_width;
  cfg.order = order;
  cfg.validate();
  const int d = f.signature().dim();
  if (ms.dim() != d) throw Error(ErrorCode::LengthMismatch, "check_growth: kappa length differs from field");
  std::vector<Grid1D> axes;
  for (int j = 0; j < d; ++j) axes.push_back(ladder_axis(ms.kappa[j], ladder, panel_width, order));
  const TensorGrid grid(std::move(axes));
  const bool sup = std::isinf(n);
  std::vector<double> per_rung(ladder.size(), 0.0);
  std::vector<double> x(d), val(f.signature().blade_count());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid.point(i, x);
    const std::size_t r = rung_of(x, ladder);
    if (r >= ladder.size()) continue;
    f.eval(x, val);
    const double norm_sq = sq_norm(val);
    if (norm_sq == 0.0) continue;
    // log of |e^{alpha |x|^2} f(x)|, kept in log space against overflow.
    const double lg = 0.5 * std::log(norm_sq) + alpha * sq_norm(x);
    double term;
    if (sup) {
      term = lg > 700.0 ? std::numeric_limits<double>::infinity() : std::exp(lg);
    } else {
      const double lt = n * lg + std::log(grid.mass(i));
      term = lt > 700.0 ? std::numeric_limits<double>::infinity() : std::exp(lt);
    }
    per_rung[r] = sup ? std::max(per_rung[r], term) : per_rung[r] + term;
  }
  return finish(std::move(per_rung), sup);
}

ConditionReport check_log(const SampledField& F, double beta, double lambda, std::span<const double> ladder) {
  if (!(beta > 0.0) || !(lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "beta and lambda must be positive");
  const TensorGrid& grid = *F.grid;
  std::vector<double> per_rung(ladder.size(), 0.0);
  std::vector<double> y(grid.dim());
  std::vector<std::size_t> idx(grid.dim());
  const double log_lambda = std::log(lambda);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid.point(i, y);
    const std::size_t r = rung_of(y, ladder);
    if (r >= ladder.size()) continue;
    double norm_sq = 0.0;
    for (double v : F.node(i)) norm_sq += v * v;
    if (norm_sq == 0.0) continue;
    const double lg = 0.5 * std::log(norm_sq) + beta * sq_norm(y) - log_lambda;
    if (lg <= 0.0) continue;
    grid.index(i, idx);
    double w = 1.0;
    for (int j = 0; j < grid.dim(); ++j) w *= grid.axis(j).weights[idx[j]];
    per_rung[r] += w * lg;
  }
  return finish(std::move(per_rung), false);
}

MiyachiVerdict verdict(const Field& f, const MiyachiConfig& config, const TransformPlan& plan) {
  config.validate();
  MiyachiVerdict v;
  v.kase = classify(config.alpha, config.beta);
  v.ladder = config.ladder;
  const MultiplicitySplit& ms = plan.split();
  v.condition1 = check_growth(f, config.alpha, config.exponent, config.ladder, ms, config.panel_width, config.order);

  std::vector<Grid1D> axes;
  for (int j = 0; j < plan.dim(); ++j) {
    axes.push_back(ladder_axis(0.0, config.ladder, config.panel_width, config.order));
  }
  auto ygrid = std::make_shared<const TensorGrid>(std::move(axes));
  const TransformPlan lplan(plan.signature(), ms, plan.a(), plan.b(), plan.in_grid(), ygrid, plan.options());
  const SampledField F = forward(f, lplan);
  v.condition2 = check_log(F, config.beta, config.lambda, config.ladder);

  if (v.kase == MiyachiCase::Boundary && v.condition1.status == Condition::Finite &&
      v.condition2.status == Condition::Finite) {
    // Weighted least squares f ~ C g with g = e^{-alpha |x|^2} and weights
    // mass * g, which keeps the far tail from dominating.
    const SampledField s = f.sample(plan.in_grid());
    const TensorGrid& X = *plan.in_grid();
    const std::size_t nb = s.blade_count();
    MultiVector C(plan.signature());
    double gg = 0.0;
    std::vector<double> x(plan.dim()), g(X.size()), w(X.size());
    for (std::size_t i = 0; i < X.size(); ++i) {
      X.point(i, x);
      g[i] = std::exp(-config.alpha * sq_norm(x));
      w[i] = X.mass(i) * g[i];
      gg += w[i] * g[i] * g[i];
      auto fi = s.node(i);
      for (std::size_t k = 0; k < nb; ++k) C[k] += w[i] * fi[k] * g[i];
    }
    C *= 1.0 / gg;
    double res = 0.0, tot = 0.0;
    for (std::size_t i = 0; i < X.size(); ++i) {
      auto fi = s.node(i);
      for (std::size_t k = 0; k < nb; ++k) {
        const double e = fi[k] - C[k] * g[i];
        res += w[i] * e * e;
        tot += w[i] * fi[k] * fi[k];
      }
    }
    v.residual = tot > 0.0 ? std::sqrt(res / tot) : 0.0;
    v.lambda_check = modulus(C) <= config.lambda;
    v.C = std::move(C);
  }
  return v;
}

}  // namespace cdt
