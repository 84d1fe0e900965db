#include <doctest.h>

#include <cmath>
#include <string>

#include "instab/dispersion.hpp"
#include "instab/error.hpp"
#include "instab/spectral.hpp"

using namespace instab;
using doctest::Approx;

namespace {

const LatticeVector kP{3, 1};
const LatticeVector kQ{-1, 2};

// Dominant eigenvalue of the N=128 finite section (dense solve), recorded once.
constexpr double kLambdaStarNS = 0.2231536343149952;

FlowParams ns(double nu, LatticeVector q = kQ) { return make_flow_params(ModelKind::NavierStokes, kP, q, nu); }

}  // namespace

TEST_CASE("dispersion variant follows the class") {
  CHECK(make_dispersion_spec(ns(0.06)).variant == DispersionVariant::Full);
  CHECK(make_dispersion_spec(ns(0.06, {0, -2})).variant == DispersionVariant::BackwardOnly);
  CHECK(make_dispersion_spec(ns(0.06, {2, -2})).variant == DispersionVariant::ForwardOnly);
  for (LatticeVector q : {LatticeVector{-1, 1}, LatticeVector{-2, 3}, LatticeVector{6, 2}}) {
    try {
      make_dispersion_spec(ns(0.06, q));
      FAIL("expected UnsupportedClass");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::UnsupportedClass);
      CHECK(std::string(e.what()).find("class not supported") != std::string::npos);
    }
  }
}

TEST_CASE("dispersion value") {
  const DispersionSpec spec = make_dispersion_spec(ns(0.06));
  SUBCASE("large lambda is dominated by a0") {
    for (double lam : {10.0, 100.0, 1000.0}) {
      const double v = value(lam, spec, 1e-12);
      const double a0 = -(lam + 5 * 0.06);
      CHECK(v < 0.0);
      CHECK(std::abs(v - a0) < 1.0 / recurrence_coeff(1, lam, spec.params) + 1.0 / recurrence_coeff(-1, lam, spec.params));
    }
  }
  SUBCASE("value at lambda 0 against deep fixed tails") {
    const double f = eval_tail_fixed({Direction::Forward, spec.params, 0.0}, 1000);
    const double g = eval_tail_fixed({Direction::Backward, spec.params, 0.0}, 1000);
    const double v = value(0.0, spec, 1e-13);
    CHECK(v == Approx(-5 * 0.06 + f + g).epsilon(1e-12));
    CHECK(v > 0.0);
  }
  SUBCASE("parts add up") {
    DispersionFunction fn(spec);
    const DispersionParts d = fn.parts(0.3, 1e-12);
    CHECK(d.total() == Approx(d.a0 + d.forward + d.backward));
    CHECK(d.a0 == Approx(-(0.3 + 0.3)));
    CHECK(fn(0.3, 1e-12) == Approx(value(0.3, spec, 1e-12)).epsilon(1e-12));
  }
  SUBCASE("one-sided variants drop a tail") {
    DispersionFunction plus(make_dispersion_spec(ns(0.06, {0, -2})));
    CHECK(plus.parts(0.2, 1e-12).forward == 0.0);
    CHECK(plus.parts(0.2, 1e-12).backward > 0.0);
    DispersionFunction minus(make_dispersion_spec(ns(0.06, {2, -2})));
    CHECK(minus.parts(0.2, 1e-12).backward == 0.0);
    CHECK(minus.parts(0.2, 1e-12).forward > 0.0);
  }
}

TEST_CASE("root at the reference instance") {
  SUBCASE("depth-10 truncations") {
    const DispersionSpec spec = make_dispersion_spec(ns(0.06), 10);
    CHECK(value(1e-9, spec, 1e-12) > 0.0);
    CHECK(value(2.0, spec, 1e-12) < 0.0);
    const RootResult r = find_root(spec, 1e-10);
    CHECK(r.found);
    CHECK(r.lambda > 0.0);
    CHECK(r.lambda < 2.0);
  }
  SUBCASE("converged tails match the finite-section eigenvalue") {
    const RootResult r = find_root(make_dispersion_spec(ns(0.06)), 1e-12);
    REQUIRE(r.found);
    CHECK(r.bracket_lo <= r.lambda);
    CHECK(r.lambda <= r.bracket_hi);
    CHECK(std::abs(r.dispersion_residual) <= 1e-12);
    CHECK(std::abs(r.lambda - kLambdaStarNS) <= 1e-10);
    CHECK(std::abs(r.lambda - max_real_eig(ns(0.06), 128)) <= 1e-8);
  }
  SUBCASE("truncation depth brackets the root") {
    const double even = find_root(make_dispersion_spec(ns(0.06), 10), 1e-13).lambda;
    const double odd = find_root(make_dispersion_spec(ns(0.06), 11), 1e-13).lambda;
    const double deeper = find_root(make_dispersion_spec(ns(0.06), 20), 1e-13).lambda;
    const double lo = std::min(even, odd), hi = std::max(even, odd);
    CHECK(lo <= kLambdaStarNS + 1e-12);
    CHECK(kLambdaStarNS <= hi + 1e-12);
    CHECK(std::abs(deeper - kLambdaStarNS) <= hi - lo + 1e-12);
  }
}

TEST_CASE("large viscosity has no root") {
  const DispersionSpec spec = make_dispersion_spec(ns(10.0));
  const RootResult r = find_root(spec, 1e-10);
  CHECK_FALSE(r.found);
  CHECK_FALSE(r.diagnostic.empty());
  const double cap = default_lambda_cap(spec.params);
  for (double lam = 1e-10; lam <= cap; lam *= 1.5) CHECK(value(lam, spec, 1e-10) < 0.0);
}

TEST_CASE("critical viscosity") {
  const FlowParams fp = ns(0.06);
  const double nu0 = nu0_estimate(fp, 1e-10);
  CHECK(nu0 > 0.06);

  DispersionFunction fn(make_dispersion_spec(fp));
  CHECK(nu0_h(0.0, fn, 1e-12) == 0.0);
  CHECK(nu0_h(0.98 * nu0, fn, 1e-12) > 0.0);
  CHECK(nu0_h(1.02 * nu0, fn, 1e-12) < 0.0);

  // Sufficient slope condition at k=2: b2+b4+b-2+b-4 > -||q||²/rho0 = 5.
  const double slope = b(2, fp) + b(4, fp) + b(-2, fp) + b(-4, fp);
  CHECK(slope > 5.0);

  CHECK(find_root(make_dispersion_spec(ns(0.9 * nu0)), 1e-10).found);
  const DispersionSpec above = make_dispersion_spec(ns(1.1 * nu0));
  CHECK(value(1e-10, above, 1e-12) < 0.0);
  CHECK_FALSE(find_root(above, 1e-10).found);
}

TEST_CASE("mirrored one-sided instances share their root") {
  // -q of an I+ point is I-, with the tails exchanged.
  for (ModelKind m : {ModelKind::NavierStokes, ModelKind::SecondGrade}) {
    const std::optional<double> a = m == ModelKind::NavierStokes ? std::nullopt : std::optional<double>(1.0);
    const FlowParams plus = make_flow_params(m, kP, {0, -2}, 0.06, a);
    const FlowParams minus = make_flow_params(m, kP, {0, 2}, 0.06, a);
    REQUIRE(plus.point_class == PointClass::TypeIPlus);
    REQUIRE(minus.point_class == PointClass::TypeIMinus);
    const RootResult rp = find_root(make_dispersion_spec(plus), 1e-12);
    const RootResult rm = find_root(make_dispersion_spec(minus), 1e-12);
    REQUIRE(rp.found);
    REQUIRE(rm.found);
    CHECK(rp.lambda == Approx(rm.lambda).epsilon(1e-11));
  }
}

TEST_CASE("lambda cap") {
  CHECK(default_lambda_cap(ns(0.06)) == Approx(10.0 * (10.0 + 0.06 * 17.0)));
  const FlowParams a = make_flow_params(ModelKind::NSAlpha, kP, kQ, 0.06, 1.0);
  CHECK(default_lambda_cap(a) == Approx(10.0 * (11.0 * 10.0 + 0.06 * 17.0)));
}

TEST_CASE("invalid inputs") {
  CHECK_THROWS_AS(find_root(make_dispersion_spec(ns(0.06)), 0.0), Error);
  CHECK_THROWS_AS(nu0_estimate(ns(0.06), -1.0), Error);
  // No crossing below a tiny cap.
  Nu0Options o;
  o.nu_cap = 2e-4;
  CHECK_THROWS_AS(nu0_estimate(ns(0.06), 1e-8, o), Error);
}
