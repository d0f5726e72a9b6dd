#pragma once

// Two-sided, left- and right-sided Clifford Dunkl transforms on tensor grids,
// evaluated as one separable contraction per coordinate.
//
//   forward:  F(y) = s_f  integral E_p(x', -a y') f(x) E_q(x'', -b y'') dmu(x)
//   inverse:  f(x) = s_i  integral E_p(x', +a y') F(y) E_q(x'', +b y'') dmu(y)
//
// x' are the first `split` coordinates, x'' the rest. In raw mode s_f = 1 and
// s_i = (c_p c_q)^2; in mehta mode s_f = s_i = c_p c_q.

#include <complex>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cdt/clifford.hpp"
#include "cdt/dunkl.hpp"
#include "cdt/field.hpp"
#include "cdt/quadrature.hpp"
#include "cdt/report.hpp"

namespace cdt {

enum class Normalization { Raw, Mehta };
enum class TransformKind { TwoSided, Left, Right };

const char* to_string(Normalization n);
Normalization parse_normalization(std::string_view text);

struct PlanOptions {
  Normalization norm = Normalization::Raw;
  double t_max = kDefaultTMax;
  double kernel_tol = kDefaultKernelTol;
  // Upper bound on sum_j N_in_j^2 * N_out_j, the pair-kernel evaluations
  // of a convolution.
  std::size_t convolution_budget = std::size_t{1} << 20;
  int jacobi_order = 48;
};

class TransformPlan {
 public:
  TransformPlan(Signature sig, MultiplicitySplit ms, ImaginaryUnit a, ImaginaryUnit b,
                std::shared_ptr<const TensorGrid> in, std::shared_ptr<const TensorGrid> out, PlanOptions opt = {});

  const Signature& signature() const { return sig_; }
  const MultiplicitySplit& split() const { return ms_; }
  const ImaginaryUnit& a() const { return a_; }
  const ImaginaryUnit& b() const { return b_; }
  const std::shared_ptr<const TensorGrid>& in_grid() const { return in_; }
  const std::shared_ptr<const TensorGrid>& out_grid() const { return out_; }
  const PlanOptions& options() const { return opt_; }
  Normalization norm() const { return opt_.norm; }
  int dim() const { return sig_.dim(); }

  const KernelTable& table(int j) const { return tables_[j]; }
  std::span<const KernelTable> tables() const { return tables_; }
  // The unit acting on coordinate j: a for the first `split`, b for the rest.
  const ImaginaryUnit& unit(int j) const { return j < ms_.split ? a_ : b_; }

  double c_p() const { return c_p_; }
  double c_q() const { return c_q_; }
  double forward_scale() const;
  double inverse_scale() const;

  // Row-major N_out x N_in: mass_i (A + i B)(x_i y_o).
  const std::vector<std::complex<double>>& forward_matrix(int j) const { return fwd_[j]; }
  // Row-major N_in x N_out: mass_o (A - i B)(x_i y_o).
  const std::vector<std::complex<double>>& inverse_matrix(int j) const { return inv_[j]; }

  // "a=e1 b=e2 split=1 norm=raw"
  std::string units_label() const;
  std::string grid_label() const;

 private:
  Signature sig_;
  MultiplicitySplit ms_;
  ImaginaryUnit a_;
  ImaginaryUnit b_;
  std::shared_ptr<const TensorGrid> in_;
  std::shared_ptr<const TensorGrid> out_;
  PlanOptions opt_;
  std::vector<KernelTable> tables_;
  double c_p_ = 1.0;
  double c_q_ = 1.0;
  std::vector<std::vector<std::complex<double>>> fwd_;
  std::vector<std::vector<std::complex<double>>> inv_;
};

SampledField forward(const Field& f, const TransformPlan& plan, TransformKind kind = TransformKind::TwoSided);
SampledField forward(const SampledField& f, const TransformPlan& plan, TransformKind kind = TransformKind::TwoSided);
SampledField forward_left(const Field& f, const TransformPlan& plan);
SampledField forward_right(const Field& f, const TransformPlan& plan);
SampledField inverse(const SampledField& F, const TransformPlan& plan);

// sum_i mass_i |f_i|^2, the squared weighted L2 norm.
double l2_norm_sq(const SampledField& f);
// |a - b|_2 / |b|_2 on a common grid.
double relative_l2(const SampledField& a, const SampledField& b);

struct PlancherelResult {
  double ratio = 0.0;
  double input_norm_sq = 0.0;
  double output_norm_sq = 0.0;
  ClaimReport report;
};

// Constant asserted for the ratio |F|^2 / |f|^2:
// (c_p^-2 c_q^-2 2^{gamma_p + m_p/2} 2^{gamma_q + m_q/2})^2, with m_p, m_q
// the block sizes.
double asserted_plancherel_constant(const TransformPlan& plan);
// Constant asserted for the eigenvalue of h_v h_u:
// c_p^-2 c_q^-2 2^{gamma_p + m_p/2} 2^{gamma_q + m_q/2}.
double asserted_eigenvalue(const TransformPlan& plan);

PlancherelResult plancherel_ratio(const Field& f, const TransformPlan& plan);

struct HermiteCoefficient {
  std::vector<int> index;
  MultiVector value;
};

// Projections onto prod_j h_{n_j}(x_j) for total degree <= n_max, ordered by
// total degree then lexicographically.
std::vector<HermiteCoefficient> expand_hermite(const Field& f, int n_max, const TransformPlan& plan);

struct EigenResult {
  MultiVector constant;              // least-squares C with F ~ C h_v h_u
  MultiVector expected_unit;         // (-a)^{l(v)} (-b)^{l(u)}
  double lambda = 0.0;               // C = lambda * expected_unit
  double shape_residual = 0.0;       // |F - C g| / |F|
  double collinearity_residual = 0.0;  // |C - lambda U| / |C|
  ClaimReport report;
};

// v indexes the first `split` coordinates, u the rest.
EigenResult eigencheck(std::span<const int> v, std::span<const int> u, const TransformPlan& plan);

// inverse(E_p(z', -a y') F(y) E_q(z'', -b y'')) with F = forward(f).
SampledField translate_spectral(const Field& f, std::span<const double> z, const TransformPlan& plan);

// Product of one-dimensional Rosler translations evaluated at the nodes of
// `grid`; kappa_j = 0 coordinates shift exactly, x_j -> x_j - z_j.
SampledField translate_explicit(const Field& f, std::span<const double> z, const MultiplicitySplit& ms,
                                std::shared_ptr<const TensorGrid> grid, int jacobi_order = 48);
MultiVector translate_explicit_at(const Field& f, std::span<const double> z, const MultiplicitySplit& ms,
                                  std::span<const double> x, int jacobi_order = 48);

// (f * g)(x) = integral f(z) tau_z g(x) dmu(z), on the plan's input grid.
SampledField convolve(const Field& f, const Field& g, const TransformPlan& plan);

}  // namespace cdt
