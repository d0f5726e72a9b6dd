#pragma once

// Rank-one (Z2) Dunkl kernel, weight, Mehta constant and generalized Hermite
// functions, plus their coordinate-wise products.

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "cdt/clifford.hpp"
#include "cdt/double_double.hpp"

namespace cdt {

// Per-coordinate multiplicities. The first `split` coordinates form the block
// transformed with the left unit a, the rest the block transformed with the
// right unit b.
struct MultiplicitySplit {
  std::vector<double> kappa;
  int split = 0;

  MultiplicitySplit() = default;
  MultiplicitySplit(std::vector<double> kappa, int split);

  // p when 0 < p < d, otherwise floor(d/2), so that both units are used
  // whenever d >= 2.
  static int default_split(const Signature& sig);

  int dim() const { return static_cast<int>(kappa.size()); }
  std::span<const double> block_p() const { return std::span<const double>(kappa).first(split); }
  std::span<const double> block_q() const { return std::span<const double>(kappa).subspan(split); }
  double gamma_p() const;
  double gamma_q() const;
  double gamma() const { return gamma_p() + gamma_q(); }
};

inline constexpr double kDefaultKernelTol = 1e-20;
inline constexpr double kDefaultTMax = 30.0;
inline constexpr int kDefaultKernelCap = 400;

// Power-series coefficients of t -> E(x, y) with t = x y.
struct KernelTable {
  double kappa = 0.0;
  std::vector<double> coeffs;  // rounded copies of `exact`
  std::vector<dd> exact;
  int N = 0;
  double t_max = 0.0;
  double tol = 0.0;
};

KernelTable kernel_coefficients(double kappa, double tol = kDefaultKernelTol, double t_max = kDefaultTMax,
                                int cap = kDefaultKernelCap);

// E(x, -u y) = A + u B and E(x, +u y) = A - u B for t = x y.
std::pair<double, double> eval_kernel_ab(const KernelTable& table, double t);

// prod_j (A_j + i B_j) (or A_j - i B_j when conj), as a complex number in the
// plane span{1, u}.
std::complex<double> eval_kernel_block_complex(std::span<const KernelTable> tables, std::span<const double> x,
                                               std::span<const double> y, bool conj);
MultiVector eval_kernel_block(std::span<const KernelTable> tables, std::span<const double> x,
                              std::span<const double> y, const ImaginaryUnit& unit, bool conj);

double weight(const MultiplicitySplit& ms, std::span<const double> x);

// Closed form of integral e^{-s^2/2} |s|^{2 kappa} ds.
double gaussian_moment(double kappa);
// (integral e^{-|x|^2/2} w_k dx)^{-1} for the given coordinates.
double mehta_constant(std::span<const double> kappa);

inline constexpr int kHermiteCap = 64;

// Orthonormal polynomials for |s|^{2 kappa} e^{-s^2} ds via
// sqrt(beta_{n+1}) p_{n+1} = (s - alpha_n) p_n - sqrt(beta_n) p_{n-1},
// p_0 = 1/sqrt(beta_0). h_n(s) = p_n(s) e^{-s^2/2} is then orthonormal for
// |s|^{2 kappa} ds.
struct HermiteBasis {
  double kappa = 0.0;
  int n_max = 0;
  std::vector<double> alpha;  // n_max + 1 entries
  std::vector<double> beta;   // n_max + 1 entries, beta[0] = total mass

  double h(int n, double s) const;
  // h_0..h_{n_max} at s.
  void eval_all(double s, std::span<double> out) const;
};

HermiteBasis hermite_basis(double kappa, int n_max);

// Coordinate product prod_j h_{v_j}(x_j).
double eval_h(std::span<const int> v, std::span<const double> x, std::span<const HermiteBasis> bases);

}  // namespace cdt
