#include <cmath>
#include <complex>

#include "doctest.h"
#include "oracles.hpp"

#include "cdt/dunkl.hpp"
#include "cdt/quadrature.hpp"

using namespace cdt;

TEST_CASE("series coefficients for kappa = 1") {
  const KernelTable t = kernel_coefficients(1.0);
  CHECK(t.coeffs[0] == 1.0);
  CHECK(t.coeffs[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-16));
  CHECK(t.coeffs[2] == doctest::Approx(1.0 / 6.0).epsilon(1e-16));
  CHECK(t.coeffs[3] == doctest::Approx(1.0 / 30.0).epsilon(1e-16));
}

TEST_CASE("kernel matches the Bessel closed form") {
  for (double k : {0.25, 0.5, 1.0, 2.0}) {
    const KernelTable tab = kernel_coefficients(k);
    for (double t = -30.0; t <= 30.0; t += 0.37) {
      const auto [A, B] = eval_kernel_ab(tab, t);
      const auto ref = oracle::dunkl_kernel(k, t);
      CHECK(std::fabs(A - ref[0]) <= 1e-12);
      CHECK(std::fabs(B - ref[1]) <= 1e-12);
    }
  }
}

TEST_CASE("kappa = 0 reproduces cos and -sin") {
  const KernelTable tab = kernel_coefficients(0.0);
  for (double t = -30.0; t <= 30.0; t += 0.013) {
    const auto [A, B] = eval_kernel_ab(tab, t);
    CHECK(std::fabs(A - std::cos(t)) <= 1e-14);
    CHECK(std::fabs(B + std::sin(t)) <= 1e-14);
  }
}

TEST_CASE("kernel eigen-equation T_x E(x, -iy) = -iy E(x, -iy)") {
  // Dunkl operator T f(x) = f'(x) + k (f(x) - f(-x)) / x, derivative by
  // fourth-order central differences.
  for (double k : {0.25, 0.5, 1.0, 2.0}) {
    const KernelTable tab = kernel_coefficients(k);
    const double y = 1.3;
    auto E = [&](double x) {
      const auto [A, B] = eval_kernel_ab(tab, x * y);
      return std::complex<double>(A, B);
    };
    for (double x : {-2.1, -0.7, 0.4, 1.5, 3.2}) {
      const double h = 1e-3;
      const auto d = (-E(x + 2 * h) + 8.0 * E(x + h) - 8.0 * E(x - h) + E(x - 2 * h)) / (12.0 * h);
      const auto T = d + k * (E(x) - E(-x)) / x;
      const auto expect = std::complex<double>(0.0, -y) * E(x);
      CHECK(std::abs(T - expect) <= 1e-9);
    }
  }
}

TEST_CASE("kernel bound and normalization") {
  for (double k : {0.0, 0.25, 0.5, 1.0, 2.0}) {
    const KernelTable tab = kernel_coefficients(k);
    for (int i = 0; i < 2000; ++i) {
      const double t = -30.0 + 60.0 * i / 1999.0;
      const auto [A, B] = eval_kernel_ab(tab, t);
      REQUIRE(A * A + B * B <= 1.0 + 1e-12);
    }
    const auto [A0, B0] = eval_kernel_ab(tab, 0.0);
    CHECK(A0 == 1.0);
    CHECK(B0 == 0.0);
  }
}

TEST_CASE("kernel argument radius and truncation errors") {
  const KernelTable tab = kernel_coefficients(0.5, kDefaultKernelTol, 10.0);
  CHECK_THROWS_AS(eval_kernel_ab(tab, 10.5), Error);
  try {
    kernel_coefficients(0.5, 1e-20, 300.0, 50);
    FAIL("expected TruncationTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TruncationTooLarge);
  }
  CHECK_THROWS_AS(kernel_coefficients(-0.1), Error);
}

TEST_CASE("kernel block is a product of rank-one factors") {
  const Signature s(0, 2);
  const std::vector<KernelTable> tabs{kernel_coefficients(0.3), kernel_coefficients(0.7)};
  const double x[] = {0.8, -1.1}, y[] = {1.7, 0.6};
  const ImaginaryUnit u = ImaginaryUnit::parse("e12", s);
  const MultiVector m = eval_kernel_block(tabs, x, y, u, false);
  const auto a = oracle::dunkl_kernel(0.3, x[0] * y[0]);
  const auto b = oracle::dunkl_kernel(0.7, x[1] * y[1]);
  const std::complex<double> z = std::complex<double>(a[0], a[1]) * std::complex<double>(b[0], b[1]);
  CHECK(m[0] == doctest::Approx(z.real()).epsilon(1e-12));
  CHECK(m[3] == doctest::Approx(z.imag()).epsilon(1e-12));
  CHECK(m[1] == 0.0);
  const MultiVector c = eval_kernel_block(tabs, x, y, u, true);
  CHECK(c[3] == doctest::Approx(-z.imag()).epsilon(1e-12));
}

TEST_CASE("Mehta constant") {
  const double k[] = {0.3, 0.7};
  const double expect =
      1.0 / (std::pow(2.0, 0.8) * std::tgamma(0.8) * std::pow(2.0, 1.2) * std::tgamma(1.2));
  CHECK(mehta_constant(k) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(gaussian_moment(0.0) == doctest::Approx(std::sqrt(2.0 * M_PI)).epsilon(1e-14));
}

TEST_CASE("weight function") {
  const MultiplicitySplit ms({0.5, 1.0}, 1);
  const double x[] = {-2.0, 3.0};
  CHECK(weight(ms, x) == doctest::Approx(2.0 * 9.0));
  CHECK(ms.gamma_p() == 0.5);
  CHECK(ms.gamma_q() == 1.0);
  CHECK(MultiplicitySplit::default_split(Signature(0, 2)) == 1);
  CHECK(MultiplicitySplit::default_split(Signature(1, 2)) == 1);
  CHECK(MultiplicitySplit::default_split(Signature(3, 0)) == 1);
}

TEST_CASE("generalized Hermite recurrence coefficients") {
  // Monic recurrence for |s|^{2k} e^{-s^2}: alpha_n = 0,
  // beta_n = n/2 for even n and (n + 2k)/2 for odd n.
  for (double k : {0.0, 0.3, 0.7, 1.5}) {
    const HermiteBasis hb = hermite_basis(k, 24);
    CHECK(hb.beta[0] == doctest::Approx(std::tgamma(k + 0.5)).epsilon(1e-12));
    for (int n = 1; n <= 24; ++n) {
      const double expect = n % 2 ? (n + 2.0 * k) / 2.0 : n / 2.0;
      CHECK(std::fabs(hb.beta[n] / expect - 1.0) <= 1e-10);
      CHECK(std::fabs(hb.alpha[n]) <= 1e-10);
    }
  }
}

TEST_CASE("Hermite functions are orthonormal") {
  for (double k : {0.0, 0.3, 1.0}) {
    const int n = 16;
    const HermiteBasis hb = hermite_basis(k, n);
    const Grid1D g = build_axis(k, 14.0, 28, 32);
    std::vector<std::vector<double>> h(g.size(), std::vector<double>(n + 1));
    for (std::size_t i = 0; i < g.size(); ++i) hb.eval_all(g.nodes[i], h[i]);
    for (int a = 0; a <= n; ++a) {
      for (int b = a; b <= n; ++b) {
        double s = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) s += g.mass(i) * h[i][a] * h[i][b];
        CHECK(std::fabs(s - (a == b ? 1.0 : 0.0)) <= 1e-10);
      }
    }
    std::vector<double> v(n + 1);
    hb.eval_all(0.9, v);
    CHECK(hb.h(3, 0.9) == doctest::Approx(v[3]).epsilon(1e-14));
  }
}

TEST_CASE("classical Hermite functions at kappa = 0") {
  // h_1(s) = sqrt(2) s e^{-s^2/2} / pi^{1/4}
  const HermiteBasis hb = hermite_basis(0.0, 4);
  const double s = 0.7;
  CHECK(hb.h(1, s) == doctest::Approx(std::sqrt(2.0) * s * std::exp(-s * s / 2) / std::pow(M_PI, 0.25)).epsilon(1e-12));
  CHECK_THROWS_AS(hermite_basis(0.0, kHermiteCap + 1), Error);
}
