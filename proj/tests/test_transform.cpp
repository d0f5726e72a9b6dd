#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

#include "cdt/claims.hpp"
#include "cdt/transform.hpp"

using namespace cdt;

namespace {

const Signature kQuat(0, 2);

oracle::Quat to_quat(std::span<const double> c) { return {c[0], c[1], c[2], c[3]}; }

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

// (1 + i) x1 g (1 + j) + 0.5 k x2^2 g + 0.7 i x2 g + 0.3 g with
// g = e^{-|x|^2/2}.
oracle::Quat quat_field(double x1, double x2) {
  using oracle::Quat;
  const double g = std::exp(-0.5 * (x1 * x1 + x2 * x2));
  const Quat l{1, 1, 0, 0}, r{1, 0, 1, 0};
  return (x1 * g) * (l * r) + Quat{0.3 * g, 0.7 * x2 * g, 0, 0.5 * x2 * x2 * g};
}

Field quat_as_field(const std::vector<double>& kappa) {
  return Field::from_function(kQuat, kappa, [](std::span<const double> x, std::span<double> out) {
    const oracle::Quat q = quat_field(x[0], x[1]);
    out[0] = q.w;
    out[1] = q.x;
    out[2] = q.y;
    out[3] = q.z;
  });
}

TransformPlan make_plan(Signature sig, std::vector<double> kappa, const char* a, const char* b, double Lx, double Ly,
                        int panels, int order, Normalization norm = Normalization::Raw, int split = -1) {
  PlanOptions opt;
  opt.norm = norm;
  const int sp = split < 0 ? MultiplicitySplit::default_split(sig) : split;
  return TransformPlan(sig, MultiplicitySplit(kappa, sp), ImaginaryUnit::parse(a, sig), ImaginaryUnit::parse(b, sig),
                       make_grid(kappa, Lx, panels, order), make_grid(kappa, Ly, 2, 3), opt);
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

void check_qft(const char* a, const char* b, oracle::Quat qa, oracle::Quat qb, TransformKind kind,
               oracle::Side side) {
  const std::vector<double> kappa{0.0, 0.0};
  const TransformPlan p = make_plan(kQuat, kappa, a, b, 8.0, 3.0, 8, 12);
  const SampledField F = forward(quat_as_field(kappa), p, kind);
  const TensorGrid& Y = *p.out_grid();
  const double scale = max_abs(F.values);
  double err = 0.0;
  std::vector<double> y(2);
  for (std::size_t i = 0; i < Y.size(); ++i) {
    Y.point(i, y);
    const oracle::Quat ref = oracle::qft(quat_field, qa, qb, y[0], y[1], 10.0, 400, side);
    const oracle::Quat got = to_quat(F.node(i));
    err = std::max({err, std::fabs(got.w - ref.w), std::fabs(got.x - ref.x), std::fabs(got.y - ref.y),
                    std::fabs(got.z - ref.z)});
  }
  CHECK(err / scale <= 1e-8);
}

}  // namespace

TEST_CASE("kappa = 0 two-sided transform is the quaternion Fourier transform") {
  check_qft("e1", "e2", {0, 1, 0, 0}, {0, 0, 1, 0}, TransformKind::TwoSided, oracle::Side::Two);
  check_qft("e12", "e1", {0, 0, 0, 1}, {0, 1, 0, 0}, TransformKind::TwoSided, oracle::Side::Two);
}

TEST_CASE("left and right sided transforms at kappa = 0") {
  check_qft("e1", "e2", {0, 1, 0, 0}, {0, 0, 1, 0}, TransformKind::Left, oracle::Side::Left);
  check_qft("e1", "e2", {0, 1, 0, 0}, {0, 0, 1, 0}, TransformKind::Right, oracle::Side::Right);
}

TEST_CASE("kappa = 0 scalar transform matches the classical Fourier integral") {
  SUBCASE("d = 1") {
    const Signature sig(0, 1);
    const std::vector<double> kappa{0.0};
    const TransformPlan p = make_plan(sig, kappa, "e1", "e1", 8.0, 3.0, 8, 12);
    auto f = [](const std::vector<double>& x) { return (1.0 + x[0] - x[0] * x[0]) * std::exp(-0.5 * x[0] * x[0]); };
    const Field field = Field::from_function(sig, kappa, [&](std::span<const double> x, std::span<double> o) {
      o[0] = f({x[0]});
      o[1] = 0.0;
    });
    const SampledField F = forward(field, p);
    for (std::size_t i = 0; i < p.out_grid()->size(); ++i) {
      const auto ref = oracle::fourier(f, p.out_grid()->point(i), 10.0, 2000);
      CHECK(std::fabs(F.node(i)[0] - ref.real()) <= 1e-9);
      CHECK(std::fabs(F.node(i)[1] - ref.imag()) <= 1e-9);
    }
  }
  SUBCASE("d = 2 with a = b = e12 in Cl(2,0)") {
    const Signature sig(2, 0);
    const std::vector<double> kappa{0.0, 0.0};
    const TransformPlan p = make_plan(sig, kappa, "e12", "e12", 8.0, 3.0, 8, 12);
    auto f = [](const std::vector<double>& x) { return (x[0] + 0.5 * x[1] * x[1]) * std::exp(-0.5 * norm2(x)); };
    const Field field = Field::from_function(sig, kappa, [&](std::span<const double> x, std::span<double> o) {
      std::fill(o.begin(), o.end(), 0.0);
      o[0] = f({x[0], x[1]});
    });
    const SampledField F = forward(field, p);
    for (std::size_t i = 0; i < p.out_grid()->size(); ++i) {
      const auto ref = oracle::fourier(f, p.out_grid()->point(i), 10.0, 400);
      CHECK(std::fabs(F.node(i)[0] - ref.real()) <= 1e-9);
      CHECK(std::fabs(F.node(i)[3] - ref.imag()) <= 1e-9);
    }
  }
}

TEST_CASE("sidedness only matters for non-scalar inputs") {
  const std::vector<double> kappa{0.3, 0.7};
  const TransformPlan p = make_plan(kQuat, kappa, "e1", "e2", 5.5, 5.4, 8, 12);
  const Field scalar = Field::from_function(kQuat, kappa, [](std::span<const double> x, std::span<double> o) {
    std::fill(o.begin(), o.end(), 0.0);
    o[0] = std::exp(-0.5 * norm2(x));
  });
  const SampledField two = forward(scalar, p), left = forward_left(scalar, p), right = forward_right(scalar, p);
  CHECK(relative_l2(left, two) <= 1e-14);
  CHECK(relative_l2(right, two) <= 1e-14);
  const Field vec = quat_as_field(kappa);
  CHECK(relative_l2(forward_left(vec, p), forward(vec, p)) > 1e-3);
}

TEST_CASE("inversion in both normalizations") {
  const std::vector<double> kappa{0.3, 0.7};
  const double Lx = std::sqrt(15.0);
  for (Normalization norm : {Normalization::Raw, Normalization::Mehta}) {
    PlanOptions opt;
    opt.norm = norm;
    const TransformPlan p(kQuat, MultiplicitySplit(kappa, 1), ImaginaryUnit::parse("e1", kQuat),
                          ImaginaryUnit::parse("e2", kQuat), make_grid(kappa, Lx, 8, 12),
                          make_grid(kappa, 30.0 / Lx, 8, 12), opt);
    const Field f = Field::from_function(kQuat, kappa, [](std::span<const double> x, std::span<double> o) {
      const double g = std::exp(-norm2(x));
      o[0] = g;
      o[1] = x[0] * g;
      o[2] = x[1] * x[1] * g;
      o[3] = -x[0] * x[1] * g;
    });
    const SampledField s = f.sample(p.in_grid());
    CHECK(relative_l2(inverse(forward(s, p), p), s) <= 1e-5);
  }
}

TEST_CASE("mehta scaling is c_p c_q times raw") {
  const std::vector<double> kappa{0.3, 0.7};
  const TransformPlan raw = make_plan(kQuat, kappa, "e1", "e2", 5.0, 3.0, 4, 8);
  const TransformPlan mehta = make_plan(kQuat, kappa, "e1", "e2", 5.0, 3.0, 4, 8, Normalization::Mehta);
  const Field f = quat_as_field(kappa);
  const SampledField a = forward(f, raw), b = forward(f, mehta);
  const double c = raw.c_p() * raw.c_q();
  for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(b.values[i] == doctest::Approx(c * a.values[i]));
  const double k0[] = {0.3}, k1[] = {0.7};
  CHECK(raw.c_p() == doctest::Approx(mehta_constant(k0)).epsilon(1e-14));
  CHECK(raw.c_q() == doctest::Approx(mehta_constant(k1)).epsilon(1e-14));
}

TEST_CASE("kappa = 0 Parseval constant") {
  const std::vector<double> kappa{0.0, 0.0};
  const double L = std::sqrt(30.0);
  const TransformPlan p = make_plan(kQuat, kappa, "e1", "e2", L, L, 8, 12);
  // Output grid of make_plan is coarse; build a full one here.
  const TransformPlan q(kQuat, p.split(), p.a(), p.b(), p.in_grid(), make_grid(kappa, L, 8, 12), p.options());
  const PlancherelResult r = plancherel_ratio(quat_as_field(kappa), q);
  CHECK(std::fabs(r.ratio / (4.0 * M_PI * M_PI) - 1.0) <= 1e-6);
}

TEST_CASE("plan validation") {
  const std::vector<double> kappa{0.3, 0.7};
  try {
    make_plan(kQuat, kappa, "e1", "e2", 10.0, 4.0, 4, 8);
    FAIL("expected ArgumentOutOfRadius");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ArgumentOutOfRadius);
  }
  const TransformPlan p = make_plan(kQuat, kappa, "e1", "e2", 4.0, 3.0, 4, 8);
  // Input sampled on a different grid.
  const SampledField other = quat_as_field(kappa).sample(make_grid(kappa, 3.0, 4, 8));
  try {
    forward(other, p);
    FAIL("expected PlanMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PlanMismatch);
  }
  // Grid built for different multiplicities.
  const std::vector<double> k2{0.0, 0.0};
  CHECK_THROWS_AS(TransformPlan(kQuat, MultiplicitySplit(kappa, 1), p.a(), p.b(), make_grid(k2, 4.0, 4, 8),
                                make_grid(kappa, 3.0, 2, 3), p.options()),
                  Error);
  CHECK_THROWS_AS(ImaginaryUnit::parse("e12", Signature(1, 1)), Error);
}

TEST_CASE("Hermite expansion recovers a basis function") {
  const std::vector<double> kappa{0.3, 0.7};
  const TransformPlan p = make_plan(kQuat, kappa, "e1", "e2", 8.0, 3.0, 8, 12);
  const std::vector<HermiteBasis> hb{hermite_basis(0.3, 4), hermite_basis(0.7, 4)};
  const Field f = Field::from_function(kQuat, kappa, [&](std::span<const double> x, std::span<double> o) {
    std::fill(o.begin(), o.end(), 0.0);
    const int v[] = {2, 1};
    o[2] = 3.0 * eval_h(v, x, hb);
  });
  for (const HermiteCoefficient& c : expand_hermite(f, 4, p)) {
    const bool hit = c.index == std::vector<int>{2, 1};
    CHECK(std::fabs(c.value[2] - (hit ? 3.0 : 0.0)) <= 1e-9);
    CHECK(std::fabs(c.value[0]) <= 1e-12);
  }
}

TEST_CASE("eigenfunctions at kappa = 0 have eigenvalue 1 in mehta mode") {
  const std::vector<double> kappa{0.0, 0.0};
  const TransformPlan p = make_plan(kQuat, kappa, "e1", "e2", 8.0, 3.0, 8, 12, Normalization::Mehta);
  const TransformPlan q(kQuat, p.split(), p.a(), p.b(), p.in_grid(), make_grid(kappa, 30.0 / 8.0, 8, 12),
                        p.options());
  const int v[] = {3}, u[] = {2};
  const EigenResult r = eigencheck(v, u, q);
  CHECK(r.lambda == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(r.shape_residual <= 1e-8);
  // (-e1)^3 = e1 and (-e2)^2 = -1.
  CHECK(r.expected_unit == MultiVector::blade(kQuat, 1, -1.0));
}

TEST_CASE("translation at kappa = 0 is a shift") {
  const std::vector<double> kappa{0.0, 0.0};
  const double Lx = std::sqrt(15.0);
  const TransformPlan p = make_plan(kQuat, kappa, "e1", "e2", Lx, 1.0, 8, 12);
  const TransformPlan q(kQuat, p.split(), p.a(), p.b(), p.in_grid(), make_grid(kappa, 30.0 / Lx, 8, 12),
                        p.options());
  const Field f = Field::from_function(kQuat, kappa, [](std::span<const double> x, std::span<double> o) {
    const double g = std::exp(-norm2(x));
    o[0] = g;
    o[1] = 0.0;
    o[2] = -0.5 * g;
    o[3] = x[0] * g;
  });
  const double z[] = {0.6, -0.3};
  const Field shifted = Field::from_function(kQuat, kappa, [&](std::span<const double> x, std::span<double> o) {
    const double xs[] = {x[0] - z[0], x[1] - z[1]};
    f.eval(xs, o);
  });
  const SampledField exact = shifted.sample(q.in_grid());
  CHECK(relative_l2(translate_explicit(f, z, q.split(), q.in_grid()), exact) <= 1e-15);
  CHECK(relative_l2(translate_spectral(f, z, q), exact) <= 1e-5);
}

TEST_CASE("explicit and spectral translation agree for kappa > 0") {
  const std::vector<double> kappa{0.5, 0.5};
  const double Lx = std::sqrt(15.0);
  const TransformPlan q(kQuat, MultiplicitySplit(kappa, 1), ImaginaryUnit::parse("e1", kQuat),
                        ImaginaryUnit::parse("e2", kQuat), make_grid(kappa, Lx, 8, 12),
                        make_grid(kappa, 30.0 / Lx, 8, 12), PlanOptions{});
  const Field f = Field::from_function(kQuat, kappa, [](std::span<const double> x, std::span<double> o) {
    std::fill(o.begin(), o.end(), 0.0);
    o[0] = std::exp(-norm2(x));
  });
  const double z[] = {0.7, -0.4};
  CHECK(relative_l2(translate_explicit(f, z, q.split(), q.in_grid()), translate_spectral(f, z, q)) <= 1e-5);
  const double x[] = {0.3, 0.2};
  const MultiVector at = translate_explicit_at(f, z, q.split(), x);
  CHECK(std::isfinite(at[0]));
  const double zero[] = {0.0, 0.0};
  CHECK(relative_l2(translate_explicit(f, zero, q.split(), q.in_grid()), f.sample(q.in_grid())) <= 1e-12);
}

TEST_CASE("convolution at kappa = 0 matches the closed form") {
  // e^{-|x|^2} * e^{-|x|^2} = (pi/2) e^{-|x|^2/2} in two dimensions.
  const std::vector<double> kappa{0.0, 0.0};
  PlanOptions opt;
  const TransformPlan p(kQuat, MultiplicitySplit(kappa, 1), ImaginaryUnit::parse("e1", kQuat),
                        ImaginaryUnit::parse("e2", kQuat), make_grid(kappa, 3.9, 4, 8), make_grid(kappa, 7.6, 8, 8),
                        opt);
  const Field g = Field::from_function(kQuat, kappa, [](std::span<const double> x, std::span<double> o) {
    std::fill(o.begin(), o.end(), 0.0);
    o[0] = std::exp(-norm2(x));
  });
  const Field expect = Field::from_function(kQuat, kappa, [](std::span<const double> x, std::span<double> o) {
    std::fill(o.begin(), o.end(), 0.0);
    o[0] = 0.5 * M_PI * std::exp(-0.5 * norm2(x));
  });
  CHECK(relative_l2(convolve(g, g, p), expect.sample(p.in_grid())) <= 1e-5);

  opt.convolution_budget = 1000;
  const TransformPlan tight(kQuat, p.split(), p.a(), p.b(), p.in_grid(), p.out_grid(), opt);
  try {
    convolve(g, g, tight);
    FAIL("expected BudgetExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BudgetExceeded);
  }
}
