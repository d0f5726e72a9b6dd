#include "cdt/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <sstream>

namespace cdt {

GaussRule gauss_from_recurrence(std::span<const double> alpha, std::span<const double> beta, double mu0) {
  const auto n = static_cast<Eigen::Index>(alpha.size());
  if (n < 1 || beta.size() != alpha.size()) {
    throw Error(ErrorCode::InvalidArgument, "recurrence needs matching alpha/beta of length >= 1");
  }
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(std::max<Eigen::Index>(n - 1, 0));
  for (Eigen::Index i = 0; i < n; ++i) diag[i] = alpha[i];
  for (Eigen::Index i = 1; i < n; ++i) {
    if (!(beta[i] > 0.0)) {
      throw Error(ErrorCode::RecurrenceBreakdown, "non-positive recurrence norm at degree " + std::to_string(i));
    }
    sub[i - 1] = std::sqrt(beta[i]);
  }
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  if (n == 1) {
    rule.nodes[0] = alpha[0];
    rule.weights[0] = mu0;
    return rule;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::RecurrenceBreakdown, "tridiagonal eigen-solve did not converge");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    rule.nodes[i] = solver.eigenvalues()[i];
    double v0 = solver.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v0 * v0;
  }
  return rule;
}

GaussRule gauss_jacobi(int order, double a, double b) {
  if (order < 1) throw Error(ErrorCode::InvalidArgument, "Gauss order must be >= 1");
  if (!(a > -1.0) || !(b > -1.0)) throw Error(ErrorCode::InvalidArgument, "Jacobi exponents must exceed -1");
  std::vector<double> alpha(order), beta(order, 0.0);
  const double ab = a + b;
  alpha[0] = (b - a) / (ab + 2.0);
  for (int k = 1; k < order; ++k) {
    const double s = 2.0 * k + ab;
    alpha[k] = (b * b - a * a) / (s * (s + 2.0));
    if (k == 1) {
      beta[k] = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      beta[k] = 4.0 * k * (k + a) * (k + b) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
  }
  const double mu0 =
      std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) + std::lgamma(b + 1.0) - std::lgamma(ab + 2.0));
  GaussRule rule = gauss_from_recurrence(alpha, beta, mu0);
  if (a == b) {
    const std::size_t n = rule.nodes.size();
    for (std::size_t i = 0; i < n / 2; ++i) {
      const std::size_t j = n - 1 - i;
      const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
      const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
      rule.nodes[i] = -x;
      rule.nodes[j] = x;
      rule.weights[i] = rule.weights[j] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  }
  return rule;
}

GaussRule gauss_legendre(int order) { return gauss_jacobi(order, 0.0, 0.0); }

double Grid1D::max_abs() const {
  double m = 0.0;
  for (double x : nodes) m = std::max(m, std::fabs(x));
  return m;
}

Grid1D build_axis(double kappa, double L, int panels, int order) {
  if (!(L > 0.0)) throw Error(ErrorCode::InvalidArgument, "grid half-width L must be positive");
  if (panels < 2 || panels % 2 != 0) {
    throw Error(ErrorCode::InvalidArgument, "panel count must be even and >= 2 so that 0 is a breakpoint");
  }
  std::vector<double> breaks(panels + 1);
  for (int i = 0; i <= panels; ++i) breaks[i] = -L + 2.0 * L * i / panels;
  breaks[panels / 2] = 0.0;
  Grid1D g = build_axis(kappa, breaks, order);
  g.L = L;
  return g;
}

Grid1D build_axis(double kappa, std::span<const double> breakpoints, int order) {
  if (!(kappa >= 0.0)) throw Error(ErrorCode::InvalidArgument, "multiplicity must be >= 0");
  if (order < 1) throw Error(ErrorCode::InvalidArgument, "Gauss order must be >= 1");
  if (breakpoints.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least one panel");
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    if (!(breakpoints[i] > breakpoints[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "panel breakpoints must be strictly ascending");
    }
    if (breakpoints[i - 1] < 0.0 && breakpoints[i] > 0.0) {
      throw Error(ErrorCode::InvalidArgument, "0 must be a panel breakpoint");
    }
  }
  const GaussRule legendre = gauss_legendre(order);
  const GaussRule singular = kappa > 0.0 ? gauss_jacobi(order, 0.0, 2.0 * kappa) : legendre;

  Grid1D g;
  g.kappa = kappa;
  g.order = order;
  g.panels = static_cast<int>(breakpoints.size()) - 1;
  g.L = std::max(std::fabs(breakpoints.front()), std::fabs(breakpoints.back()));
  for (std::size_t p = 0; p + 1 < breakpoints.size(); ++p) {
    const double lo = breakpoints[p], hi = breakpoints[p + 1];
    const double half = 0.5 * (hi - lo);
    if (hi == 0.0 || lo == 0.0) {
      // Rule for (1+t)^{2 kappa} mapped so that t = -1 sits at the origin.
      const double scale = std::pow(half, 2.0 * kappa + 1.0);
      for (int k = 0; k < order; ++k) {
        // Left of the origin the mirrored rule is traversed in reverse for
        // ascending node order.
        const int idx = hi == 0.0 ? order - 1 - k : k;
        const double r = half * (1.0 + singular.nodes[idx]);
        const double x = hi == 0.0 ? -r : r;
        const double wv = kappa > 0.0 ? std::pow(r, 2.0 * kappa) : 1.0;
        g.nodes.push_back(x);
        g.weight_values.push_back(wv);
        g.weights.push_back(scale * singular.weights[idx] / wv);
      }
    } else {
      const double mid = 0.5 * (hi + lo);
      for (int k = 0; k < order; ++k) {
        const double x = mid + half * legendre.nodes[k];
        g.nodes.push_back(x);
        g.weight_values.push_back(kappa > 0.0 ? std::pow(std::fabs(x), 2.0 * kappa) : 1.0);
        g.weights.push_back(half * legendre.weights[k]);
      }
    }
  }
  return g;
}

TensorGrid::TensorGrid(std::vector<Grid1D> axes, std::size_t node_cap) : axes_(std::move(axes)) {
  size_ = 1;
  for (const Grid1D& a : axes_) {
    if (a.size() == 0) throw Error(ErrorCode::InvalidArgument, "empty grid axis");
    if (size_ > node_cap / a.size()) {
      throw Error(ErrorCode::NodeCountExceeded, "tensor grid exceeds node cap " + std::to_string(node_cap));
    }
    size_ *= a.size();
  }
  strides_.assign(axes_.size(), 1);
  for (int j = static_cast<int>(axes_.size()) - 2; j >= 0; --j) {
    strides_[j] = strides_[j + 1] * axes_[j + 1].size();
  }
  weight_values_.assign(size_, 1.0);
  masses_.assign(size_, 1.0);
  std::vector<std::size_t> idx(axes_.size());
  for (std::size_t i = 0; i < size_; ++i) {
    index(i, idx);
    double wv = 1.0, qw = 1.0;
    for (std::size_t j = 0; j < axes_.size(); ++j) {
      wv *= axes_[j].weight_values[idx[j]];
      qw *= axes_[j].weights[idx[j]];
    }
    weight_values_[i] = wv;
    masses_[i] = qw * wv;
  }
}

void TensorGrid::index(std::size_t i, std::span<std::size_t> out) const {
  for (std::size_t j = 0; j < axes_.size(); ++j) {
    out[j] = (i / strides_[j]) % axes_[j].size();
  }
}

void TensorGrid::point(std::size_t i, std::span<double> out) const {
  for (std::size_t j = 0; j < axes_.size(); ++j) {
    out[j] = axes_[j].nodes[(i / strides_[j]) % axes_[j].size()];
  }
}

std::vector<double> TensorGrid::point(std::size_t i) const {
  std::vector<double> x(axes_.size());
  point(i, x);
  return x;
}

std::string TensorGrid::describe() const {
  std::ostringstream os;
  for (std::size_t j = 0; j < axes_.size(); ++j) {
    if (j) os << ';';
    const Grid1D& a = axes_[j];
    os << -a.L << ':' << a.L << ':' << a.panels << ':' << a.order;
  }
  return os.str();
}

TensorGrid build_grid(std::span<const double> kappa, double L, int panels, int order, std::size_t node_cap) {
  std::vector<Grid1D> axes;
  axes.reserve(kappa.size());
  for (double k : kappa) axes.push_back(build_axis(k, L, panels, order));
  return TensorGrid(std::move(axes), node_cap);
}

std::string GridSpec::to_string() const {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%.17g:%.17g:%d:%d", lo, hi, panels, order);
  return buf;
}

GridSpec parse_grid_spec(std::string_view text) {
  // The leading minus may arrive as a Unicode minus sign.
  std::string s(text);
  for (std::size_t pos; (pos = s.find("\xE2\x88\x92")) != std::string::npos;) s.replace(pos, 3, "-");
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == ':') {
      parts.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::InvalidArgument, "grid spec '" + std::string(text) + "': " + why);
  };
  if (parts.size() != 4) fail("expected -L:L:panels:order");
  auto number = [&](const std::string& p) {
    char* end = nullptr;
    double v = std::strtod(p.c_str(), &end);
    if (p.empty() || end != p.c_str() + p.size() || !std::isfinite(v)) fail("bad number '" + p + "'");
    return v;
  };
  auto integer = [&](const std::string& p) {
    double v = number(p);
    if (v != std::floor(v) || v < 1 || v > 1e6) fail("bad count '" + p + "'");
    return static_cast<int>(v);
  };
  GridSpec g;
  g.lo = number(parts[0]);
  g.hi = number(parts[1]);
  g.panels = integer(parts[2]);
  g.order = integer(parts[3]);
  if (!(g.hi > 0.0) || g.lo != -g.hi) fail("grid must be symmetric, -L:L with L > 0");
  return g;
}

std::vector<GridSpec> parse_grid_specs(std::string_view text, int dim) {
  std::vector<GridSpec> specs;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ';') {
      specs.push_back(parse_grid_spec(text.substr(start, i - start)));
      start = i + 1;
    }
  }
  if (specs.size() == 1 && dim > 1) specs.assign(dim, specs.front());
  if (static_cast<int>(specs.size()) != dim) {
    throw Error(ErrorCode::InvalidArgument, "grid spec lists " + std::to_string(specs.size()) +
                                                " axes for dimension " + std::to_string(dim));
  }
  return specs;
}

TensorGrid build_grid(std::span<const double> kappa, std::span<const GridSpec> specs, std::size_t node_cap) {
  if (specs.size() != kappa.size()) throw Error(ErrorCode::InvalidArgument, "grid spec / kappa length mismatch");
  std::vector<Grid1D> axes;
  for (std::size_t j = 0; j < specs.size(); ++j) {
    axes.push_back(build_axis(kappa[j], specs[j].hi, specs[j].panels, specs[j].order));
  }
  return TensorGrid(std::move(axes), node_cap);
}

MultiVector integrate(std::span<const double> values, const TensorGrid& grid, const Signature& sig) {
  const std::size_t nb = sig.blade_count();
  if (values.size() != grid.size() * nb) {
    throw Error(ErrorCode::LengthMismatch, "integrate: " + std::to_string(values.size() / nb) +
                                               " values for " + std::to_string(grid.size()) + " nodes");
  }
  MultiVector out(sig);
  auto acc = out.coefficients();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double m = grid.mass(i);
    const double* v = values.data() + i * nb;
    for (std::size_t b = 0; b < nb; ++b) acc[b] += v[b] * m;
  }
  return out;
}

MultiVector integrate(std::span<const MultiVector> values, const TensorGrid& grid) {
  if (values.size() != grid.size()) {
    throw Error(ErrorCode::LengthMismatch, "integrate: " + std::to_string(values.size()) + " values for " +
                                               std::to_string(grid.size()) + " nodes");
  }
  if (values.empty()) throw Error(ErrorCode::LengthMismatch, "integrate: no values");
  MultiVector out(values.front().signature());
  for (std::size_t i = 0; i < values.size(); ++i) out += values[i] * grid.mass(i);
  return out;
}

JacobiRule jacobi_rule(double kappa, int order) {
  if (!(kappa > 0.0)) throw Error(ErrorCode::InvalidArgument, "jacobi_rule needs kappa > 0");
  GaussRule g = gauss_jacobi(order, kappa - 1.0, kappa - 1.0);
  return JacobiRule{kappa, std::move(g.nodes), std::move(g.weights)};
}

double psi_prefactor(double kappa) {
  return std::exp(std::lgamma(kappa + 0.5) - std::lgamma(kappa)) / std::sqrt(std::numbers::pi);
}

}  // namespace cdt
