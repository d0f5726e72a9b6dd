#pragma once

// JSON field files, CSV export, and JSON forms of reports and verdicts.
//
// Analytic field file:
//   {"signature": {"p": 0, "q": 2}, "kappa": [0.3, 0.7], "spread": 1,
//    "blades": {"1": "exp(-0.5*(x1^2+x2^2))", "e12": "x1*exp(-x1^2-x2^2)"}}
// Sampled field file: the same, with "blades" mapping labels to value arrays
// in grid node order and a "grid" object holding every axis verbatim.

#include <string>

#include "json.hpp"

#include "cdt/field.hpp"
#include "cdt/miyachi.hpp"
#include "cdt/report.hpp"

namespace cdt {

using json = nlohmann::json;

json grid_to_json(const TensorGrid& grid);
TensorGrid grid_from_json(const json& j, const std::string& path = "$.grid");

json field_to_json(const Field& f);
Field field_from_json(const json& j);
// Sampled variant that keeps the field's own multiplicities.
json sampled_to_json(const SampledField& s, const std::vector<double>& kappa, double spread = 1.0);

Field load_field(const std::string& path);
void save_field(const Field& f, const std::string& path);

// Header "x1,...,xd,<blade labels>"; blades that vanish at every node are
// omitted, except the scalar blade of an all-zero field.
std::string grid_csv(const SampledField& s);
void save_grid_csv(const SampledField& s, const std::string& path);

json to_json(const ClaimReport& r);
ClaimReport claim_from_json(const json& j);
json to_json(const MultiVector& m);
json to_json(const MiyachiVerdict& v);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace cdt
