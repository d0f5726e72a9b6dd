#include "cdt/dunkl.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "cdt/quadrature.hpp"

namespace cdt {

MultiplicitySplit::MultiplicitySplit(std::vector<double> k, int s) : kappa(std::move(k)), split(s) {
  for (double v : kappa) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidArgument, "multiplicities must be finite and >= 0");
    }
  }
  if (split < 0 || split > dim()) {
    throw Error(ErrorCode::InvalidArgument, "split " + std::to_string(split) + " outside 0.." + std::to_string(dim()));
  }
}

int MultiplicitySplit::default_split(const Signature& sig) {
  if (sig.p > 0 && sig.p < sig.dim()) return sig.p;
  return sig.dim() / 2;
}

double MultiplicitySplit::gamma_p() const {
  auto b = block_p();
  return std::accumulate(b.begin(), b.end(), 0.0);
}

double MultiplicitySplit::gamma_q() const {
  auto b = block_q();
  return std::accumulate(b.begin(), b.end(), 0.0);
}

KernelTable kernel_coefficients(double kappa, double tol, double t_max, int cap) {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw Error(ErrorCode::InvalidArgument, "kappa must be >= 0");
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "kernel tolerance must be > 0");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw Error(ErrorCode::InvalidArgument, "t_max must be > 0");
  KernelTable tab;
  tab.kappa = kappa;
  tab.t_max = t_max;
  tab.tol = tol;
  tab.exact.push_back(dd(1.0));
  const double two_k = 2.0 * kappa;
  // log of c_n t_max^n, tracked in double to decide truncation.
  double log_term = 0.0;
  const double log_t = std::log(t_max);
  for (int n = 1;; ++n) {
    if (n > cap) {
      throw Error(ErrorCode::TruncationTooLarge, "kernel series for kappa=" + std::to_string(kappa) + ", t_max=" +
                                                     std::to_string(t_max) + " needs more than " +
                                                     std::to_string(cap) + " terms");
    }
    const dd den = (n % 2 == 1) ? two_sum(static_cast<double>(n), two_k) : dd(static_cast<double>(n));
    tab.exact.push_back(tab.exact.back() / den);
    log_term += log_t - std::log(den.value());
    const double ratio = t_max / (n + 1.0);
    if (ratio < 1.0 && log_term + std::log(ratio / (1.0 - ratio)) < std::log(tol)) {
      tab.N = n;
      break;
    }
  }
  tab.coeffs.reserve(tab.exact.size());
  for (const dd& c : tab.exact) tab.coeffs.push_back(c.value());
  return tab;
}

std::pair<double, double> eval_kernel_ab(const KernelTable& table, double t) {
  if (!(std::fabs(t) <= table.t_max)) {
    throw Error(ErrorCode::ArgumentOutOfRadius,
                "kernel argument " + std::to_string(t) + " outside radius " + std::to_string(table.t_max));
  }
  if (table.kappa == 0.0) return {std::cos(t), -std::sin(t)};
  dd a(0.0), b(0.0), power(1.0);
  for (int n = 0; n <= table.N; ++n) {
    const dd term = table.exact[n] * power;
    // Degree 2m contributes (-1)^m to A, degree 2m+1 contributes (-1)^{m+1} to B.
    switch (n % 4) {
      case 0: a += term; break;
      case 1: b -= term; break;
      case 2: a -= term; break;
      default: b += term; break;
    }
    power = power * t;
  }
  return {a.value(), b.value()};
}

std::complex<double> eval_kernel_block_complex(std::span<const KernelTable> tables, std::span<const double> x,
                                               std::span<const double> y, bool conj) {
  if (x.size() != tables.size() || y.size() != tables.size()) {
    throw Error(ErrorCode::LengthMismatch, "kernel block: coordinate count mismatch");
  }
  std::complex<double> z(1.0, 0.0);
  for (std::size_t j = 0; j < tables.size(); ++j) {
    auto [A, B] = eval_kernel_ab(tables[j], x[j] * y[j]);
    z *= std::complex<double>(A, conj ? -B : B);
  }
  return z;
}

MultiVector eval_kernel_block(std::span<const KernelTable> tables, std::span<const double> x,
                              std::span<const double> y, const ImaginaryUnit& unit, bool conj) {
  const std::complex<double> z = eval_kernel_block_complex(tables, x, y, conj);
  const Signature& sig = unit.value().signature();
  return MultiVector::scalar(sig, z.real()) + unit.value() * z.imag();
}

double weight(const MultiplicitySplit& ms, std::span<const double> x) {
  if (x.size() != ms.kappa.size()) throw Error(ErrorCode::LengthMismatch, "weight: coordinate count mismatch");
  double w = 1.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (ms.kappa[j] != 0.0) w *= std::pow(std::fabs(x[j]), 2.0 * ms.kappa[j]);
  }
  return w;
}

double gaussian_moment(double kappa) {
  return std::exp((kappa + 0.5) * std::log(2.0) + std::lgamma(kappa + 0.5));
}

double mehta_constant(std::span<const double> kappa) {
  double c = 1.0;
  for (double k : kappa) {
    const Grid1D g = build_axis(k, 14.0, 28, 24);
    double integral = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) integral += g.mass(i) * std::exp(-0.5 * g.nodes[i] * g.nodes[i]);
    const double closed = gaussian_moment(k);
    if (!(std::fabs(integral / closed - 1.0) <= 1e-10)) {
      throw Error(ErrorCode::QuadratureDisagreement,
                  "Gaussian moment for kappa=" + std::to_string(k) + ": quadrature " + std::to_string(integral) +
                      " vs closed form " + std::to_string(closed));
    }
    c /= integral;
  }
  return c;
}

double HermiteBasis::h(int n, double s) const {
  if (n < 0 || n > n_max) throw Error(ErrorCode::InvalidArgument, "Hermite index out of range");
  std::vector<double> v(n_max + 1);
  eval_all(s, v);
  return v[n];
}

void HermiteBasis::eval_all(double s, std::span<double> out) const {
  double prev = 0.0;
  double cur = std::exp(-0.5 * s * s) / std::sqrt(beta[0]);
  out[0] = cur;
  for (int n = 0; n < n_max; ++n) {
    const double back = n == 0 ? 0.0 : std::sqrt(beta[n]) * prev;
    const double next = ((s - alpha[n]) * cur - back) / std::sqrt(beta[n + 1]);
    prev = cur;
    cur = next;
    out[n + 1] = cur;
  }
}

HermiteBasis hermite_basis(double kappa, int n_max) {
  if (n_max < 0 || n_max > kHermiteCap) {
    throw Error(ErrorCode::InvalidArgument, "Hermite degree must lie in 0.." + std::to_string(kHermiteCap));
  }
  // Discretized Stieltjes procedure on a fine grid that resolves the
  // oscillation of the highest requested degree.
  const double L = std::sqrt(2.0 * n_max + 1.0) + 8.0;
  int panels = 2 * static_cast<int>(std::ceil(L / 0.5));
  const Grid1D g = build_axis(kappa, L, panels, 32);
  const std::size_t m = g.size();
  std::vector<double> mass(m), s(m);
  for (std::size_t i = 0; i < m; ++i) {
    s[i] = g.nodes[i];
    mass[i] = g.mass(i) * std::exp(-s[i] * s[i]);
  }
  HermiteBasis hb;
  hb.kappa = kappa;
  hb.n_max = n_max;
  hb.alpha.assign(n_max + 1, 0.0);
  hb.beta.assign(n_max + 1, 0.0);
  hb.beta[0] = std::accumulate(mass.begin(), mass.end(), 0.0);
  std::vector<double> prev(m, 0.0), cur(m, 1.0 / std::sqrt(hb.beta[0])), next(m);
  for (int n = 0; n <= n_max; ++n) {
    double a = 0.0;
    for (std::size_t i = 0; i < m; ++i) a += mass[i] * s[i] * cur[i] * cur[i];
    hb.alpha[n] = a;
    if (n == n_max) break;
    const double sb = n == 0 ? 0.0 : std::sqrt(hb.beta[n]);
    double norm = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      next[i] = (s[i] - a) * cur[i] - sb * prev[i];
      norm += mass[i] * next[i] * next[i];
    }
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw Error(ErrorCode::RecurrenceBreakdown, "recurrence norm lost positivity at degree " + std::to_string(n + 1));
    }
    hb.beta[n + 1] = norm;
    const double inv = 1.0 / std::sqrt(norm);
    for (std::size_t i = 0; i < m; ++i) next[i] *= inv;
    std::swap(prev, cur);
    std::swap(cur, next);
  }
  return hb;
}

double eval_h(std::span<const int> v, std::span<const double> x, std::span<const HermiteBasis> bases) {
  if (v.size() != x.size() || x.size() != bases.size()) {
    throw Error(ErrorCode::LengthMismatch, "eval_h: index, point and basis lengths differ");
  }
  double r = 1.0;
  for (std::size_t j = 0; j < v.size(); ++j) r *= bases[j].h(v[j], x[j]);
  return r;
}

}  // namespace cdt
