#pragma once

// Weighted quadrature on R^d against prod_j |x_j|^{2 kappa_j} dx, and on
// [-1,1] against (1-t^2)^{kappa-1} dt.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cdt/clifford.hpp"

namespace cdt {

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Golub-Welsch: Gauss rule from the monic three-term recurrence
// p_{n+1} = (t - alpha_n) p_n - beta_n p_{n-1}, with mu0 = integral of the weight.
// alpha.size() == beta.size() == order; beta[0] is ignored.
GaussRule gauss_from_recurrence(std::span<const double> alpha, std::span<const double> beta, double mu0);

// Weight (1-t)^a (1+t)^b on [-1,1], a,b > -1.
GaussRule gauss_jacobi(int order, double a, double b);
GaussRule gauss_legendre(int order);

// One coordinate axis. `weights[i] * weight_values[i]` is the measure mass of
// node i; weight_values[i] = |node|^{2 kappa}. Panels adjacent to 0 carry a
// Gauss-Jacobi rule for the singular factor, so their `weights` are the Jacobi
// masses divided back by the weight value.
struct Grid1D {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> weight_values;
  double kappa = 0.0;
  double L = 0.0;
  int panels = 0;
  int order = 0;

  std::size_t size() const { return nodes.size(); }
  double mass(std::size_t i) const { return weights[i] * weight_values[i]; }
  double max_abs() const;
};

// Symmetric panelled grid on [-L, L] with `panels` equal panels (even, so 0 is
// a breakpoint).
Grid1D build_axis(double kappa, double L, int panels, int order);
// Arbitrary ascending breakpoints; 0 must not lie strictly inside a panel.
Grid1D build_axis(double kappa, std::span<const double> breakpoints, int order);

inline constexpr std::size_t kDefaultNodeCap = std::size_t{1} << 24;

// Tensor product of axes, nodes in lexicographic order (first axis slowest).
// An empty axis list is the one-point grid of the empty product measure.
class TensorGrid {
 public:
  TensorGrid() : TensorGrid(std::vector<Grid1D>{}) {}
  explicit TensorGrid(std::vector<Grid1D> axes, std::size_t node_cap = kDefaultNodeCap);

  int dim() const { return static_cast<int>(axes_.size()); }
  std::size_t size() const { return size_; }
  const Grid1D& axis(int j) const { return axes_[j]; }
  const std::vector<Grid1D>& axes() const { return axes_; }

  // Multi-index of node i along each axis.
  void index(std::size_t i, std::span<std::size_t> out) const;
  void point(std::size_t i, std::span<double> out) const;
  std::vector<double> point(std::size_t i) const;
  // Cached prod_j |x_j|^{2 kappa_j}.
  double weight_value(std::size_t i) const { return weight_values_[i]; }
  // Quadrature weight times weight value.
  double mass(std::size_t i) const { return masses_[i]; }
  std::span<const double> masses() const { return masses_; }
  // Stride of axis j in the flat node index.
  std::size_t stride(int j) const { return strides_[j]; }

  std::string describe() const;

 private:
  std::vector<Grid1D> axes_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 1;
  std::vector<double> weight_values_;
  std::vector<double> masses_;
};

TensorGrid build_grid(std::span<const double> kappa, double L, int panels, int order,
                      std::size_t node_cap = kDefaultNodeCap);

// "-L:L:panels:order"; a list is semicolon-separated, one entry per coordinate
// or a single entry broadcast to all coordinates.
struct GridSpec {
  double lo = -8.0;
  double hi = 8.0;
  int panels = 8;
  int order = 16;

  std::string to_string() const;
};
GridSpec parse_grid_spec(std::string_view text);
std::vector<GridSpec> parse_grid_specs(std::string_view text, int dim);
TensorGrid build_grid(std::span<const double> kappa, std::span<const GridSpec> specs,
                      std::size_t node_cap = kDefaultNodeCap);

// Sum of value_i * mass_i in node order. `values` holds size() blocks of
// 2^d coefficients.
MultiVector integrate(std::span<const double> values, const TensorGrid& grid, const Signature& sig);
MultiVector integrate(std::span<const MultiVector> values, const TensorGrid& grid);

struct JacobiRule {
  double kappa = 0.0;
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss rule for (1-t^2)^{kappa-1} on (-1,1).
JacobiRule jacobi_rule(double kappa, int order);

// Gamma(kappa+1/2) / (sqrt(pi) Gamma(kappa)), the prefactor of the
// translation density psi_kappa(t) = prefactor (1+t)(1-t^2)^{kappa-1}.
double psi_prefactor(double kappa);

}  // namespace cdt
