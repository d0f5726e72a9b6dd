// cdt: command-line driver for transforms, checks and the claims ledger.
// Exit codes: 0 success, 2 usage, 3 input or schema, 4 numerical failure,
// 5 ledger ran with at least one flagged claim.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cdt/claims.hpp"
#include "cdt/io.hpp"
#include "cdt/miyachi.hpp"
#include "cdt/transform.hpp"

using namespace cdt;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;
constexpr int kExitNumeric = 4;
constexpr int kExitFlagged = 5;

struct Options {
  std::string sig;
  std::string kappa;
  std::string a;
  std::string b;
  int split = -1;
  std::string field;
  std::string field2;
  std::string in_grid;
  std::string out_grid;
  std::string norm = "raw";
  std::string out;
  std::string csv;
  double t_max = kDefaultTMax;
  std::string v;
  std::string u;
  std::string z;
  std::string method = "spectral";
  double alpha = 1.0;
  double beta = 1.0;
  double lambda = 1.0;
  std::string ladder = "1,2,3,4";
  std::string exponent = "inf";
  std::string config;
  double budget = 0.0;
  double t = 0.0;
};

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (item.empty() || used != item.size()) {
      throw Error(ErrorCode::InvalidArgument, std::string(what) + ": cannot parse '" + item + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, std::string(what) + ": empty list");
  return out;
}

std::vector<int> parse_ints(const std::string& text, const char* what) {
  std::vector<int> out;
  for (double v : parse_list(text, what)) {
    if (v != std::floor(v) || v < 0) throw Error(ErrorCode::InvalidArgument, std::string(what) + ": expected integers >= 0");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

Signature parse_sig(const std::string& text) {
  const auto pq = parse_list(text, "--sig");
  if (pq.size() != 2 || pq[0] != std::floor(pq[0]) || pq[1] != std::floor(pq[1])) {
    throw Error(ErrorCode::InvalidArgument, "--sig expects P,Q");
  }
  return Signature(static_cast<int>(pq[0]), static_cast<int>(pq[1]));
}

// First available units: negative generators, else e12 of Cl(p,0).
std::pair<std::string, std::string> default_units(const Signature& sig) {
  const int d = sig.dim();
  auto gen = [d](int i) { return blade_label(BladeMask{1} << i, d); };
  if (sig.q >= 2) return {gen(sig.p), gen(sig.p + 1)};
  if (sig.q == 1) return {gen(sig.p), gen(sig.p)};
  if (d >= 2) return {"e12", "e12"};
  throw Error(ErrorCode::InvalidArgument, "Cl(" + std::to_string(sig.p) + ",0) has no coordinate imaginary unit");
}

// Everything a transform-like command needs.
struct Setup {
  Signature sig;
  std::vector<double> kappa;
  std::optional<Field> field;
  std::optional<TransformPlan> plan;
};

Setup setup(const Options& o, bool need_field, bool inverse_side = false) {
  Setup s;
  double spread = 1.0;
  if (need_field) {
    if (o.field.empty()) throw Error(ErrorCode::InvalidArgument, "--field is required");
    s.field = load_field(o.field);
    spread = s.field->spread();
  }
  if (!o.sig.empty()) {
    s.sig = parse_sig(o.sig);
    if (s.field && !(s.field->signature() == s.sig)) {
      throw Error(ErrorCode::SchemaError, "--sig differs from the field file signature");
    }
  } else if (s.field) {
    s.sig = s.field->signature();
  } else {
    throw Error(ErrorCode::InvalidArgument, "--sig is required");
  }
  const int d = s.sig.dim();
  if (!o.kappa.empty()) {
    s.kappa = parse_list(o.kappa, "--kappa");
  } else if (s.field && !s.field->kappa().empty()) {
    s.kappa = s.field->kappa();
  } else {
    s.kappa.assign(d, 0.0);
  }
  if (static_cast<int>(s.kappa.size()) != d) {
    throw Error(ErrorCode::InvalidArgument, "--kappa needs " + std::to_string(d) + " entries");
  }
  auto [da, db] = default_units(s.sig);
  const ImaginaryUnit a = ImaginaryUnit::parse(o.a.empty() ? da : o.a, s.sig);
  const ImaginaryUnit b = ImaginaryUnit::parse(o.b.empty() ? db : o.b, s.sig);
  const int split = o.split < 0 ? MultiplicitySplit::default_split(s.sig) : o.split;
  if (split > d) throw Error(ErrorCode::InvalidArgument, "--split exceeds the dimension");
  MultiplicitySplit ms(s.kappa, split);

  PlanOptions opt;
  opt.norm = parse_normalization(o.norm);
  opt.t_max = o.t_max;
  if (o.budget > 0.0) opt.convolution_budget = o.budget;

  const double Lx = 6.0 * spread;
  const double Ly = o.t_max / Lx;
  auto grid = [&](const std::string& spec, double L) {
    if (spec.empty()) return make_grid(s.kappa, L, 8, 12);
    const auto specs = parse_grid_specs(spec, d);
    return std::make_shared<const TensorGrid>(build_grid(s.kappa, specs));
  };
  // For inverse the field lives on the frequency side: --in-grid is the
  // frequency grid and --out-grid the spatial one.
  std::shared_ptr<const TensorGrid> X, Y;
  if (inverse_side) {
    Y = s.field && s.field->is_sampled() ? s.field->samples().grid : grid(o.in_grid, Ly);
    X = grid(o.out_grid, Lx);
  } else {
    X = s.field && s.field->is_sampled() ? s.field->samples().grid : grid(o.in_grid, Lx);
    Y = grid(o.out_grid, Ly);
  }
  s.plan.emplace(s.sig, ms, a, b, X, Y, opt);
  return s;
}

void emit(const SampledField& f, const Setup& s, const Options& o) {
  const std::string text = sampled_to_json(f, s.kappa).dump(1) + "\n";
  if (o.out.empty()) {
    std::cout << text;
  } else {
    write_text_file(o.out, text);
  }
  if (!o.csv.empty()) save_grid_csv(f, o.csv);
}

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

int run_transform(const Options& o) {
  Setup s = setup(o, true);
  emit(forward(*s.field, *s.plan), s, o);
  return 0;
}

int run_inverse(const Options& o) {
  Setup s = setup(o, true, true);
  emit(inverse(s.field->sample(s.plan->out_grid()), *s.plan), s, o);
  return 0;
}

int run_roundtrip(const Options& o) {
  Setup s = setup(o, true);
  const SampledField f = s.field->sample(s.plan->in_grid());
  const double err = relative_l2(inverse(forward(f, *s.plan), *s.plan), f);
  print_json({{"relative_l2", err}, {"grid", s.plan->grid_label()}, {"units", s.plan->units_label()}});
  return 0;
}

int run_plancherel(const Options& o) {
  Setup s = setup(o, true);
  const PlancherelResult r = plancherel_ratio(*s.field, *s.plan);
  print_json({{"ratio", r.ratio},
              {"input_norm_sq", r.input_norm_sq},
              {"output_norm_sq", r.output_norm_sq},
              {"claim", to_json(r.report)}});
  return 0;
}

int run_eigencheck(const Options& o) {
  Setup s = setup(o, false);
  const int split = s.plan->split().split;
  const int d = s.sig.dim();
  const std::vector<int> v = o.v.empty() ? std::vector<int>(split, 0) : parse_ints(o.v, "--v");
  const std::vector<int> u = o.u.empty() ? std::vector<int>(d - split, 0) : parse_ints(o.u, "--u");
  if (static_cast<int>(v.size()) != split || static_cast<int>(u.size()) != d - split) {
    throw Error(ErrorCode::InvalidArgument, "--v needs " + std::to_string(split) + " and --u " +
                                                std::to_string(d - split) + " entries");
  }
  const EigenResult r = eigencheck(v, u, *s.plan);
  print_json({{"lambda", r.lambda},
              {"constant", to_json(r.constant)},
              {"expected_unit", to_json(r.expected_unit)},
              {"shape_residual", r.shape_residual},
              {"collinearity_residual", r.collinearity_residual},
              {"claim", to_json(r.report)}});
  return 0;
}

int run_translate(const Options& o) {
  Setup s = setup(o, true);
  if (o.z.empty()) throw Error(ErrorCode::InvalidArgument, "--z is required");
  const std::vector<double> z = parse_list(o.z, "--z");
  if (static_cast<int>(z.size()) != s.sig.dim()) throw Error(ErrorCode::InvalidArgument, "--z length differs from d");
  if (o.method == "spectral") {
    emit(translate_spectral(*s.field, z, *s.plan), s, o);
  } else if (o.method == "explicit") {
    emit(translate_explicit(*s.field, z, s.plan->split(), s.plan->in_grid(), s.plan->options().jacobi_order), s, o);
  } else {
    throw Error(ErrorCode::InvalidArgument, "--method must be spectral or explicit");
  }
  return 0;
}

int run_convolve(const Options& o) {
  Setup s = setup(o, true);
  if (o.field2.empty()) throw Error(ErrorCode::InvalidArgument, "--field2 is required");
  const Field g = load_field(o.field2);
  if (!(g.signature() == s.sig)) throw Error(ErrorCode::SchemaError, "--field2 signature differs from --field");
  emit(convolve(*s.field, g, *s.plan), s, o);
  return 0;
}

int run_miyachi(const Options& o) {
  Setup s = setup(o, true);
  MiyachiConfig mc;
  mc.alpha = o.alpha;
  mc.beta = o.beta;
  mc.lambda = o.lambda;
  mc.ladder = parse_list(o.ladder, "--ladder");
  mc.exponent = parse_list(o.exponent, "--exponent").at(0);
  print_json(to_json(verdict(*s.field, mc, *s.plan)));
  return 0;
}

int run_verify(const Options& o) {
  const LedgerConfig cfg = o.config.empty() ? LedgerConfig{} : ledger_config_from_json(read_json_file(o.config));
  const std::vector<ClaimReport> reports = run_claims_ledger(cfg);
  json arr = json::array();
  int flagged = 0;
  for (const ClaimReport& r : reports) {
    arr.push_back(to_json(r));
    if (!r.passed()) ++flagged;
    std::printf("%-40s %-7s paper=%-14.8g measured=%-14.8g\n", r.claim.c_str(), r.status.c_str(), r.paper_value,
                r.measured_value);
  }
  std::printf("%zu claims, %d flagged\n", reports.size(), flagged);
  if (!o.out.empty()) write_text_file(o.out, arr.dump(2) + "\n");
  return flagged ? kExitFlagged : 0;
}

int run_kernel(const Options& o) {
  const std::vector<double> k = parse_list(o.kappa.empty() ? "0" : o.kappa, "--kappa");
  if (k.size() != 1 || !(k[0] >= 0.0)) throw Error(ErrorCode::InvalidArgument, "--kappa expects one value >= 0");
  const KernelTable tab = kernel_coefficients(k[0], kDefaultKernelTol, std::max(o.t_max, std::fabs(o.t)));
  auto [A, B] = eval_kernel_ab(tab, o.t);
  std::printf("(%.17g, %.17g)\n", A, B);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-sided Clifford Dunkl transform toolkit"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* c) {
    c->add_option("--sig", o.sig, "Signature P,Q");
    c->add_option("--kappa", o.kappa, "Multiplicities K1,...,Kd");
    c->add_option("--a", o.a, "Left imaginary unit blade");
    c->add_option("--b", o.b, "Right imaginary unit blade");
    c->add_option("--split", o.split, "Coordinates in the left block");
    c->add_option("--in-grid", o.in_grid, "Input grid -L:L:panels:order[;...]");
    c->add_option("--out-grid", o.out_grid, "Output grid -L:L:panels:order[;...]");
    c->add_option("--norm", o.norm, "raw or mehta");
    c->add_option("--t-max", o.t_max, "Kernel radius");
  };
  auto with_field = [&](CLI::App* c) {
    common(c);
    c->add_option("--field", o.field, "Field file (JSON)");
  };
  auto with_out = [&](CLI::App* c) {
    c->add_option("--out", o.out, "Output JSON file (default stdout)");
    c->add_option("--csv", o.csv, "Also write a CSV of the result");
  };

  std::function<int(const Options&)> action;
  auto sub = [&](const char* name, const char* help, int (*fn)(const Options&)) {
    CLI::App* c = app.add_subcommand(name, help);
    c->callback([&action, fn] { action = fn; });
    return c;
  };

  CLI::App* c = sub("transform", "Forward two-sided transform", run_transform);
  with_field(c);
  with_out(c);
  c = sub("inverse", "Inverse transform of a frequency-side field", run_inverse);
  with_field(c);
  with_out(c);
  c = sub("roundtrip", "Relative L2 error of inverse(forward(f))", run_roundtrip);
  with_field(c);
  c = sub("plancherel", "Norm ratio and constant comparison", run_plancherel);
  with_field(c);
  c = sub("eigencheck", "Eigenfunction check for h_v h_u", run_eigencheck);
  common(c);
  c->add_option("--v", o.v, "Degrees of the left block");
  c->add_option("--u", o.u, "Degrees of the right block");
  c = sub("translate", "Generalized translation by z", run_translate);
  with_field(c);
  with_out(c);
  c->add_option("--z", o.z, "Shift Z1,...,Zd");
  c->add_option("--method", o.method, "spectral or explicit");
  c = sub("convolve", "Generalized convolution of two fields", run_convolve);
  with_field(c);
  with_out(c);
  c->add_option("--field2", o.field2, "Second field file");
  c->add_option("--budget", o.budget, "Convolution work budget");
  c = sub("miyachi", "Miyachi conditions and verdict", run_miyachi);
  with_field(c);
  c->add_option("--alpha", o.alpha, "Spatial decay rate");
  c->add_option("--beta", o.beta, "Frequency decay rate");
  c->add_option("--lambda", o.lambda, "Level in the log condition");
  c->add_option("--ladder", o.ladder, "Radii L1,L2,...");
  c->add_option("--exponent", o.exponent, "L^n exponent, or inf");
  c = sub("verify", "Run the claims ledger", run_verify);
  c->add_option("--config", o.config, "Ledger config JSON");
  c->add_option("--out", o.out, "ClaimReport JSON output");
  c = sub("kernel", "Rank-one kernel E(x,-uy) = A + uB at t = xy", run_kernel);
  c->add_option("--kappa", o.kappa, "Multiplicity");
  c->add_option("--t", o.t, "Argument t = x y")->required();
  c->add_option("--t-max", o.t_max, "Kernel radius");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    return action(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_input_error(e.code()) ? kExitInput : kExitNumeric;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}
