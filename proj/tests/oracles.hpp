#pragma once

// Independent reference implementations used by the tests. Nothing here
// calls into the library's kernel, quadrature or transform code.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

// Hamilton quaternions (w, i, j, k). Cl(0,2) maps 1, e1, e2, e12 to 1, i, j, k.
struct Quat {
  double w = 0, x = 0, y = 0, z = 0;
};

inline Quat operator*(const Quat& a, const Quat& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z, a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x, a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}
inline Quat operator+(const Quat& a, const Quat& b) { return {a.w + b.w, a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Quat operator*(double s, const Quat& a) { return {s * a.w, s * a.x, s * a.y, s * a.z}; }

// e^{-u theta} for a pure unit quaternion u.
inline Quat exp_minus(const Quat& u, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return {c, -s * u.x, -s * u.y, -s * u.z};
}

enum class Side { Two, Left, Right };

// QFT integral by the trapezoid rule on [-L, L]^2 with n + 1 points per
// axis. Two: e^{-a x1 y1} f e^{-b x2 y2}; Left: e^{-a x1 y1} e^{-b x2 y2} f;
// Right: f e^{-a x1 y1} e^{-b x2 y2}.
inline Quat qft(const std::function<Quat(double, double)>& f, const Quat& a, const Quat& b, double y1, double y2,
                double L, int n, Side side = Side::Two) {
  const double h = 2.0 * L / n;
  Quat acc;
  for (int i = 0; i <= n; ++i) {
    const double x1 = -L + i * h;
    const double w1 = (i == 0 || i == n) ? 0.5 : 1.0;
    const Quat left = exp_minus(a, x1 * y1);
    for (int j = 0; j <= n; ++j) {
      const double x2 = -L + j * h;
      const double w2 = (j == 0 || j == n) ? 0.5 : 1.0;
      const Quat right = exp_minus(b, x2 * y2);
      const Quat v = f(x1, x2);
      const Quat term = side == Side::Two ? left * v * right : side == Side::Left ? left * right * v : v * left * right;
      acc = acc + (w1 * w2 * h * h) * term;
    }
  }
  return acc;
}

// Classical integral e^{-i x.y} f(x) dx over [-L, L]^d by the trapezoid
// rule, d in {1, 2}.
inline std::complex<double> fourier(const std::function<double(const std::vector<double>&)>& f,
                                    const std::vector<double>& y, double L, int n) {
  const double h = 2.0 * L / n;
  const std::size_t d = y.size();
  std::complex<double> acc = 0.0;
  std::vector<double> x(d);
  const int total = d == 1 ? n + 1 : (n + 1) * (n + 1);
  for (int k = 0; k < total; ++k) {
    double w = 1.0, phase = 0.0;
    int r = k;
    for (std::size_t j = 0; j < d; ++j) {
      const int i = r % (n + 1);
      r /= n + 1;
      x[j] = -L + i * h;
      w *= ((i == 0 || i == n) ? 0.5 : 1.0) * h;
      phase += x[j] * y[j];
    }
    acc += w * f(x) * std::exp(std::complex<double>(0.0, -phase));
  }
  return acc;
}

// Normalized Bessel j_nu(t) = Gamma(nu + 1) (2/t)^nu J_nu(t), j_nu(0) = 1.
inline double normalized_bessel(double nu, double t) {
  if (t == 0.0) return 1.0;
  const double at = std::fabs(t);
  // Negative orders through J_{-m} = cos(m pi) J_m - sin(m pi) Y_m.
  const double J = nu >= 0.0 ? std::cyl_bessel_j(nu, at)
                             : std::cos(-nu * M_PI) * std::cyl_bessel_j(-nu, at) -
                                   std::sin(-nu * M_PI) * std::cyl_neumann(-nu, at);
  return std::tgamma(nu + 1.0) * std::pow(2.0 / at, nu) * J;
}

// Rank-one kernel E(x, -i y) = A + i B at t = x y via Bessel functions:
// A = j_{k-1/2}(t), B = -t/(2k+1) j_{k+1/2}(t).
inline std::array<double, 2> dunkl_kernel(double kappa, double t) {
  if (kappa == 0.0) return {std::cos(t), -std::sin(t)};
  return {normalized_bessel(kappa - 0.5, t), -t / (2.0 * kappa + 1.0) * normalized_bessel(kappa + 0.5, t)};
}

}  // namespace oracle
