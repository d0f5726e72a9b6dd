#pragma once

// Numerical checks of the growth and log-integrability hypotheses of
// Miyachi's theorem for the two-sided transform.

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cdt/field.hpp"
#include "cdt/transform.hpp"

namespace cdt {

enum class MiyachiCase { Vanishing, Boundary, Subcritical };
enum class Condition { Finite, Growing };

const char* to_string(MiyachiCase c);
const char* to_string(Condition c);

// alpha beta > 1/4, = 1/4 (within 1e-12), < 1/4.
MiyachiCase classify(double alpha, double beta);

struct MiyachiConfig {
  double alpha = 1.0;
  double beta = 1.0;
  double lambda = 1.0;
  // L^n exponent; infinity selects the sup norm.
  double exponent = std::numeric_limits<double>::infinity();
  std::vector<double> ladder{1.0, 2.0, 3.0, 4.0};
  // Ladder grids: panels no wider than this, Gauss order per panel.
  double panel_width = 0.5;
  int order = 8;

  void validate() const;
};

struct ConditionReport {
  Condition status = Condition::Finite;
  std::vector<double> values;      // I(L_j) or J(L_j)
  std::vector<double> increments;  // values[j+1] - values[j]
};

// "finite" iff the last increment is at most half the one before it.
Condition decide(std::span<const double> values);

// Axis with breakpoints 0 and +-L_j, subdivided into panels <= panel_width.
Grid1D ladder_axis(double kappa, std::span<const double> ladder, double panel_width, int order);

// I(L) = integral over |x|_inf <= L of |e^{alpha |x|^2} f(x)|^n dmu(x), or the
// maximum of the integrand when n is infinite.
ConditionReport check_growth(const Field& f, double alpha, double n, std::span<const double> ladder,
                             const MultiplicitySplit& ms, double panel_width = 0.5, int order = 8);

// J(L) = integral over |y|_inf <= L of log+(|F(y)| e^{beta |y|^2} / lambda) dy,
// with dy taken from the grid's unweighted quadrature weights.
ConditionReport check_log(const SampledField& F, double beta, double lambda, std::span<const double> ladder);

struct MiyachiVerdict {
  MiyachiCase kase = MiyachiCase::Vanishing;
  ConditionReport condition1;
  ConditionReport condition2;
  std::vector<double> ladder;
  std::optional<MultiVector> C;
  std::optional<double> residual;
  std::optional<bool> lambda_check;
};

// Transforms f with the plan's units, input grid and options onto a
// Lebesgue ladder grid, runs both checks, and in the boundary case with both
// conditions finite fits f ~ C e^{-alpha |x|^2} on the plan's input grid.
MiyachiVerdict verdict(const Field& f, const MiyachiConfig& config, const TransformPlan& plan);

}  // namespace cdt
