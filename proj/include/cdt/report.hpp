#pragma once

#include <cmath>
#include <string>
#include <vector>

namespace cdt {

// One checked identity. kind "constant": pass iff |measured/paper_value - 1| <=
// tolerance. kind "bound": paper_value is an upper bound, pass iff
// measured <= paper_value.
struct ClaimReport {
  std::string claim;
  std::string kind = "constant";
  double paper_value = 0.0;
  double measured_value = 0.0;
  double ratio = 0.0;
  double tolerance = 0.0;
  std::string status;
  std::string grid;
  std::string sig;
  std::vector<double> kappa;
  std::string units;

  bool passed() const { return status == "pass"; }
  friend bool operator==(const ClaimReport&, const ClaimReport&) = default;
};

inline ClaimReport constant_claim(std::string claim, double asserted, double measured, double tol) {
  ClaimReport r;
  r.claim = std::move(claim);
  r.kind = "constant";
  r.paper_value = asserted;
  r.measured_value = measured;
  r.ratio = measured / asserted;
  r.tolerance = tol;
  r.status = std::fabs(r.ratio - 1.0) <= tol ? "pass" : "flagged";
  return r;
}

inline ClaimReport bound_claim(std::string claim, double bound, double measured) {
  ClaimReport r;
  r.claim = std::move(claim);
  r.kind = "bound";
  r.paper_value = bound;
  r.measured_value = measured;
  r.ratio = bound != 0.0 ? measured / bound : (measured == 0.0 ? 0.0 : INFINITY);
  r.tolerance = bound;
  r.status = measured <= bound ? "pass" : "flagged";
  return r;
}

}  // namespace cdt
