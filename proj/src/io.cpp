#include "cdt/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace cdt {

namespace {

[[noreturn]] void schema(const std::string& path, const std::string& why) {
  throw Error(ErrorCode::SchemaError, path + ": " + why);
}

const json& member(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) schema(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema(path + "." + key, "missing");
  return *it;
}

void only_keys(const json& j, std::initializer_list<const char*> keys, const std::string& path) {
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) schema(path + "." + it.key(), "unknown key");
  }
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) schema(path, "expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) schema(path, "expected an integer");
  return j.get<int>();
}

std::vector<double> numbers(const json& j, const std::string& path) {
  if (!j.is_array()) schema(path, "expected an array of numbers");
  std::vector<double> v;
  v.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
  return v;
}

// JSON has no infinities or NaN; they travel as null.
json num_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
double from_num_or_null(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace

json grid_to_json(const TensorGrid& grid) {
  json axes = json::array();
  for (const Grid1D& a : grid.axes()) {
    axes.push_back({{"kappa", a.kappa},
                    {"L", a.L},
                    {"panels", a.panels},
                    {"order", a.order},
                    {"nodes", a.nodes},
                    {"weights", a.weights},
                    {"weight_values", a.weight_values}});
  }
  return {{"axes", axes}};
}

TensorGrid grid_from_json(const json& j, const std::string& path) {
  const json& axes = member(j, "axes", path);
  if (!axes.is_array()) schema(path + ".axes", "expected an array");
  std::vector<Grid1D> out;
  for (std::size_t i = 0; i < axes.size(); ++i) {
    const std::string p = path + ".axes[" + std::to_string(i) + "]";
    const json& a = axes[i];
    Grid1D g;
    g.kappa = number(member(a, "kappa", p), p + ".kappa");
    g.L = number(member(a, "L", p), p + ".L");
    g.panels = integer(member(a, "panels", p), p + ".panels");
    g.order = integer(member(a, "order", p), p + ".order");
    g.nodes = numbers(member(a, "nodes", p), p + ".nodes");
    g.weights = numbers(member(a, "weights", p), p + ".weights");
    g.weight_values = numbers(member(a, "weight_values", p), p + ".weight_values");
    if (g.nodes.empty() || g.weights.size() != g.nodes.size() || g.weight_values.size() != g.nodes.size()) {
      schema(p, "nodes, weights and weight_values must be nonempty and of equal length");
    }
    out.push_back(std::move(g));
  }
  return TensorGrid(std::move(out));
}

json sampled_to_json(const SampledField& s, const std::vector<double>& kappa, double spread) {
  const std::size_t nb = s.blade_count();
  json blades = json::object();
  for (BladeMask b = 0; b < nb; ++b) {
    std::vector<double> col(s.grid->size());
    bool any = false;
    for (std::size_t i = 0; i < col.size(); ++i) {
      col[i] = s.values[i * nb + b];
      any = any || col[i] != 0.0;
    }
    if (any || (b == nb - 1 && blades.empty())) blades[blade_label(any ? b : 0, s.sig.dim())] = col;
  }
  return {{"signature", {{"p", s.sig.p}, {"q", s.sig.q}}},
          {"kappa", kappa},
          {"spread", spread},
          {"grid", grid_to_json(*s.grid)},
          {"blades", blades}};
}

json field_to_json(const Field& f) {
  if (f.is_sampled()) return sampled_to_json(f.samples(), f.kappa(), f.spread());
  if (f.expressions().empty()) {
    throw Error(ErrorCode::SchemaError, "only expression or sampled fields can be serialized");
  }
  json blades = json::object();
  for (const auto& [mask, e] : f.expressions()) {
    const std::string label = blade_label(mask, f.signature().dim());
    if (blades.contains(label)) {
      blades[label] = "(" + blades[label].get<std::string>() + ") + (" + print_expr(e) + ")";
    } else {
      blades[label] = print_expr(e);
    }
  }
  return {{"signature", {{"p", f.signature().p}, {"q", f.signature().q}}},
          {"kappa", f.kappa()},
          {"spread", f.spread()},
          {"blades", blades}};
}

Field field_from_json(const json& j) {
  if (!j.is_object()) schema("$", "expected an object");
  only_keys(j, {"signature", "kappa", "spread", "blades", "grid"}, "$");
  const json& sj = member(j, "signature", "$");
  only_keys(sj, {"p", "q"}, "$.signature");
  const int p = integer(member(sj, "p", "$.signature"), "$.signature.p");
  const int q = integer(member(sj, "q", "$.signature"), "$.signature.q");
  Signature sig;
  try {
    sig = Signature(p, q);
  } catch (const Error& e) {
    schema("$.signature", e.what());
  }
  std::vector<double> kappa;
  if (j.contains("kappa")) {
    kappa = numbers(j["kappa"], "$.kappa");
    if (static_cast<int>(kappa.size()) != sig.dim()) {
      schema("$.kappa", "has " + std::to_string(kappa.size()) + " entries for dimension " + std::to_string(sig.dim()));
    }
    for (double k : kappa) {
      if (!(k >= 0.0)) schema("$.kappa", "entries must be >= 0");
    }
  }
  double spread = 1.0;
  if (j.contains("spread")) {
    spread = number(j["spread"], "$.spread");
    if (!(spread > 0.0)) schema("$.spread", "must be positive");
  }
  const json& bj = member(j, "blades", "$");
  if (!bj.is_object() || bj.empty()) schema("$.blades", "expected a nonempty object");
  auto mask_of = [&](const std::string& label) {
    try {
      return parse_blade(label, sig.dim());
    } catch (const Error& e) {
      schema("$.blades." + label, e.what());
    }
  };
  if (j.contains("grid")) {
    auto grid = std::make_shared<const TensorGrid>(grid_from_json(j["grid"]));
    if (grid->dim() != sig.dim()) schema("$.grid", "dimension differs from signature");
    SampledField s(sig, grid);
    const std::size_t nb = sig.blade_count();
    for (auto it = bj.begin(); it != bj.end(); ++it) {
      const BladeMask m = mask_of(it.key());
      const auto col = numbers(it.value(), "$.blades." + it.key());
      if (col.size() != grid->size()) {
        schema("$.blades." + it.key(), std::to_string(col.size()) + " values for " + std::to_string(grid->size()) +
                                           " nodes");
      }
      for (std::size_t i = 0; i < col.size(); ++i) s.values[i * nb + m] = col[i];
    }
    return Field::from_samples(std::move(kappa), std::move(s), spread);
  }
  Field::Blades blades;
  for (auto it = bj.begin(); it != bj.end(); ++it) {
    const BladeMask m = mask_of(it.key());
    if (!it.value().is_string()) schema("$.blades." + it.key(), "expected an expression string");
    try {
      blades.emplace_back(m, parse_expr(it.value().get<std::string>(), sig.dim()));
    } catch (const Error& e) {
      throw Error(e.code(), "$.blades." + it.key() + ": " + e.what());
    }
  }
  return Field::from_expressions(sig, std::move(kappa), std::move(blades), spread);
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaError, "'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
}

Field load_field(const std::string& path) { return field_from_json(read_json_file(path)); }

void save_field(const Field& f, const std::string& path) { write_text_file(path, field_to_json(f).dump(2) + "\n"); }

std::string grid_csv(const SampledField& s) {
  const int d = s.sig.dim();
  const std::size_t nb = s.blade_count();
  std::vector<BladeMask> cols;
  for (BladeMask b = 0; b < nb; ++b) {
    for (std::size_t i = 0; i < s.grid->size(); ++i) {
      if (s.values[i * nb + b] != 0.0) {
        cols.push_back(b);
        break;
      }
    }
  }
  if (cols.empty()) cols.push_back(0);
  std::ostringstream os;
  os.precision(17);
  for (int j = 0; j < d; ++j) os << (j ? "," : "") << "x" << j + 1;
  for (BladeMask b : cols) os << "," << blade_label(b, d);
  os << "\n";
  std::vector<double> x(d);
  for (std::size_t i = 0; i < s.grid->size(); ++i) {
    s.grid->point(i, x);
    for (int j = 0; j < d; ++j) os << (j ? "," : "") << x[j];
    for (BladeMask b : cols) os << "," << s.values[i * nb + b];
    os << "\n";
  }
  return os.str();
}

void save_grid_csv(const SampledField& s, const std::string& path) { write_text_file(path, grid_csv(s)); }

json to_json(const ClaimReport& r) {
  return {{"claim", r.claim},
          {"kind", r.kind},
          {"paper_value", num_or_null(r.paper_value)},
          {"measured_value", num_or_null(r.measured_value)},
          {"ratio", num_or_null(r.ratio)},
          {"tolerance", num_or_null(r.tolerance)},
          {"status", r.status},
          {"grid", r.grid},
          {"sig", r.sig},
          {"kappa", r.kappa},
          {"units", r.units}};
}

ClaimReport claim_from_json(const json& j) {
  ClaimReport r;
  try {
    r.claim = j.at("claim").get<std::string>();
    r.kind = j.at("kind").get<std::string>();
    r.paper_value = from_num_or_null(j.at("paper_value"));
    r.measured_value = from_num_or_null(j.at("measured_value"));
    r.ratio = from_num_or_null(j.at("ratio"));
    r.tolerance = from_num_or_null(j.at("tolerance"));
    r.status = j.at("status").get<std::string>();
    r.grid = j.at("grid").get<std::string>();
    r.sig = j.at("sig").get<std::string>();
    r.kappa = j.at("kappa").get<std::vector<double>>();
    r.units = j.at("units").get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaError, std::string("claim report: ") + e.what());
  }
  return r;
}

json to_json(const MultiVector& m) {
  json o = json::object();
  for (BladeMask b = 0; b < m.size(); ++b) {
    if (m[b] != 0.0) o[blade_label(b, m.signature().dim())] = m[b];
  }
  if (o.empty()) o["1"] = 0.0;
  return o;
}

json to_json(const MiyachiVerdict& v) {
  json ladder = json::array();
  for (std::size_t j = 0; j < v.ladder.size(); ++j) {
    ladder.push_back({{"L", v.ladder[j]},
                      {"I", num_or_null(v.condition1.values[j])},
                      {"J", num_or_null(v.condition2.values[j])}});
  }
  json o = {{"case", to_string(v.kase)},
            {"condition1", to_string(v.condition1.status)},
            {"condition2", to_string(v.condition2.status)},
            {"ladder", ladder}};
  if (v.C) o["C"] = to_json(*v.C);
  if (v.residual) o["residual"] = *v.residual;
  if (v.lambda_check) o["lambda_check"] = *v.lambda_check;
  return o;
}

}  // namespace cdt
