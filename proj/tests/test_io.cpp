#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>

#include "doctest.h"

#include "cdt/claims.hpp"
#include "cdt/io.hpp"

using namespace cdt;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("cdt_test_" + name)).string();
}

ErrorCode code_of(const std::string& text) {
  try {
    field_from_json(json::parse(text));
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("accepted: " << text);
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("sampled field save/load is bit-exact") {
  const Signature sig(1, 2);
  const std::vector<double> kappa{0.3, 0.0, 1.7};
  auto grid = make_grid(kappa, 3.0, 2, 3);
  SampledField s(sig, grid);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> ex(-300, 300);
  for (double& v : s.values) v = std::ldexp(u(rng), ex(rng));
  const Field f = Field::from_samples(kappa, s, 1.5);
  const std::string path = temp_path("roundtrip.json");
  save_field(f, path);
  const Field g = load_field(path);
  std::remove(path.c_str());
  REQUIRE(g.is_sampled());
  CHECK(g.signature() == sig);
  CHECK(g.kappa() == kappa);
  CHECK(g.spread() == 1.5);
  CHECK(g.samples().values == s.values);
  CHECK(same_grid(*g.samples().grid, *grid));
  for (int j = 0; j < 3; ++j) {
    CHECK(g.samples().grid->axis(j).nodes == grid->axis(j).nodes);
    CHECK(g.samples().grid->axis(j).weights == grid->axis(j).weights);
  }
}

TEST_CASE("expression field round trip") {
  const std::string text = R"J({"signature": {"p": 0, "q": 2}, "kappa": [0.3, 0.7], "spread": 2,
    "blades": {"1": "exp(-0.5*(x1^2+x2^2))", "e12": "x1*exp(-(x1^2+x2^2))"}})J";
  const Field f = field_from_json(json::parse(text));
  const Field g = field_from_json(field_to_json(f));
  const std::vector<double> x{0.4, -1.2};
  CHECK(f.eval(x) == g.eval(x));
  CHECK(g.spread() == 2.0);
  CHECK(f.eval(x)[3] == doctest::Approx(0.4 * std::exp(-(0.16 + 1.44))));
}

TEST_CASE("schema violations") {
  CHECK(code_of(R"J({"signature": {"p": 0, "q": 2}, "blades": {"e9": "1"}})J") == ErrorCode::SchemaError);
  CHECK(code_of(R"J({"signature": {"p": 0, "q": 2}, "kappa": [0.1], "blades": {"1": "1"}})J") ==
        ErrorCode::SchemaError);
  CHECK(code_of(R"J({"signature": {"p": 0, "q": 2}, "kappa": [0.1, -1], "blades": {"1": "1"}})J") ==
        ErrorCode::SchemaError);
  CHECK(code_of(R"J({"signature": {"p": 0, "q": 2}, "blades": {}})J") == ErrorCode::SchemaError);
  CHECK(code_of(R"J({"signature": {"p": 0, "q": 2}, "blades": {"1": 3}})J") == ErrorCode::SchemaError);
  CHECK(code_of(R"J({"signature": {"p": 0, "q": 2}, "colour": 1, "blades": {"1": "1"}})J") == ErrorCode::SchemaError);
  CHECK(code_of(R"J({"signature": {"p": 0}, "blades": {"1": "1"}})J") == ErrorCode::SchemaError);
  CHECK(code_of(R"J({"signature": {"p": 0, "q": 2}, "blades": {"1": "x3"}})J") == ErrorCode::UnknownCoordinate);
  CHECK(code_of(R"J([1, 2])J") == ErrorCode::SchemaError);
  try {
    field_from_json(json::parse(R"J({"signature": {"p": 0, "q": 2}, "blades": {"e9": "1"}})J"));
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("$.blades.e9") != std::string::npos);
  }
}

TEST_CASE("sampled field with wrong value count is rejected") {
  const Signature sig(0, 1);
  const std::vector<double> kappa{0.0};
  SampledField s(sig, make_grid(kappa, 1.0, 2, 2));
  json j = sampled_to_json(s, kappa);
  j["blades"]["1"].push_back(1.0);
  CHECK_THROWS_AS(field_from_json(j), Error);
}

TEST_CASE("CSV rows and columns") {
  const Signature sig(0, 2);
  const std::vector<double> kappa{0.0, 0.5};
  auto grid = make_grid(kappa, 1.0, 2, 2);
  REQUIRE(grid->size() == 16);
  SampledField s(sig, grid);
  for (std::size_t i = 0; i < grid->size(); ++i) s.node(i)[0] = 1.0 + i;
  std::istringstream in(grid_csv(s));
  std::string line;
  int rows = -1;
  while (std::getline(in, line)) {
    if (rows < 0) CHECK(line == "x1,x2,1");
    else CHECK(std::count(line.begin(), line.end(), ',') == 2);
    ++rows;
  }
  CHECK(rows == 16);
}

TEST_CASE("claim report JSON") {
  ClaimReport r = constant_claim("c", 2.0, 3.0, 1e-6);
  r.grid = "g";
  r.sig = "0,2";
  r.kappa = {0.3, 0.7};
  r.units = "a=e1";
  CHECK(claim_from_json(to_json(r)) == r);
  const ClaimReport b = bound_claim("b", 0.0, 1.0);
  CHECK(std::isinf(b.ratio));
  const json j = to_json(b);
  CHECK(j["ratio"].is_null());
  CHECK(std::isnan(claim_from_json(j).ratio));
  for (const char* key : {"claim", "paper_value", "measured_value", "ratio", "status", "grid", "sig", "kappa", "units"})
    CHECK(j.contains(key));
}

TEST_CASE("ledger config parsing") {
  const LedgerConfig c = ledger_config_from_json(json::parse(R"J({"kappa": [0.5, 0.5], "norm": "mehta", "a": "e12"})J"));
  CHECK(c.kappa == std::vector<double>{0.5, 0.5});
  CHECK(c.norm == Normalization::Mehta);
  CHECK(c.a == "e12");
  CHECK_THROWS_AS(ledger_config_from_json(json::parse(R"J({"bogus": 1})J")), Error);
  CHECK_THROWS_AS(ledger_config_from_json(json::parse(R"J({"kappa": [0.5]})J")), Error);
  CHECK_THROWS_AS(ledger_config_from_json(json::parse(R"J({"norm": "other"})J")), Error);
}

TEST_CASE("missing files") {
  try {
    load_field(temp_path("definitely_missing.json"));
    FAIL("expected IoError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IoError);
  }
}
