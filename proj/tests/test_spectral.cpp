#include <doctest.h>

#include <cmath>

#include "instab/dispersion.hpp"
#include "instab/eigensystem.hpp"
#include "instab/error.hpp"
#include "instab/spectral.hpp"

using namespace instab;
using doctest::Approx;

namespace {

const LatticeVector kP{3, 1};
const LatticeVector kQ{-1, 2};

FlowParams ns(double nu, LatticeVector q = kQ) { return make_flow_params(ModelKind::NavierStokes, kP, q, nu); }

double cf_root(const FlowParams& fp) {
  const RootResult r = find_root(make_dispersion_spec(fp), 1e-12);
  REQUIRE(r.found);
  return r.lambda;
}

}  // namespace

TEST_CASE("finite section assembly") {
  const double nu = 0.06;
  const TruncatedOperator L = build_L(ns(nu), 1);
  REQUIRE(L.size() == 3);
  const double r_m1 = 7.0 / 17.0, r0 = -1.0, r1 = 3.0 / 13.0;
  CHECK(L.diag[0] == Approx(-17 * nu));
  CHECK(L.diag[1] == Approx(-5 * nu));
  CHECK(L.diag[2] == Approx(-13 * nu));
  CHECK(L.sup[0] == Approx(-r0));
  CHECK(L.sub[1] == Approx(r_m1));
  CHECK(L.sup[1] == Approx(-r1));
  CHECK(L.sub[2] == Approx(r0));

  const std::vector<double> x{1.0, 2.0, 3.0};
  std::vector<double> y;
  L.apply(x, y);
  CHECK(y[0] == Approx(-17 * nu * 1 - r0 * 2));
  CHECK(y[1] == Approx(r_m1 * 1 - 5 * nu * 2 - r1 * 3));
  CHECK(y[2] == Approx(r0 * 2 - 13 * nu * 3));
}

TEST_CASE("parallel q has no advection bands") {
  const FlowParams fp = make_flow_params(ModelKind::NavierStokes, {2, 0}, {1, 0}, 0.3);
  REQUIRE(fp.point_class == PointClass::Parallel);
  const TruncatedOperator L = build_L(fp, 5);
  for (std::size_t i = 0; i < L.size(); ++i) {
    CHECK(L.sub[i] == 0.0);
    CHECK(L.sup[i] == 0.0);
  }
  // Diagonal matrix: λ_max = -ν min c_n = -0.3 · 1.
  CHECK(max_real_eig(fp, 5) == Approx(-0.3).epsilon(1e-14));
  // det(I + K) ≡ 1, so there is nothing to bisect.
  CHECK(det_I_plus_K(0.4, fp, 8).value == 1.0);
  CHECK_THROWS_AS(det_root(fp, 8, {0.1, 1.0}, 1e-10), Error);
}

TEST_CASE("alpha -> 0 finite section tends to Navier-Stokes") {
  const TruncatedOperator ref = build_L(ns(0.06), 10);
  double prev = INFINITY;
  for (double alpha : {1e-2, 1e-3, 1e-4}) {
    const TruncatedOperator L = build_L(make_flow_params(ModelKind::NSAlpha, kP, kQ, 0.06, alpha), 10);
    double err = 0.0;
    for (std::size_t i = 0; i < L.size(); ++i) {
      err = std::max({err, std::abs(L.diag[i] - ref.diag[i]), std::abs(L.sub[i] - ref.sub[i]),
                      std::abs(L.sup[i] - ref.sup[i])});
    }
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 1e-6);
}

TEST_CASE("dominant eigenvalue") {
  CHECK(max_real_eig(ns(0.06), 128) > 0.0);
  CHECK(max_real_eig(ns(10.0), 128) < 0.0);
  const DominantEigen d = max_real_eig_converged(ns(0.06), 1e-12);
  CHECK(d.lambda == Approx(max_real_eig(ns(0.06), 128)).epsilon(1e-12));
  CHECK(d.imag == 0.0);
  CHECK_THROWS_AS(max_real_eig(ns(0.06), 513), Error);
  CHECK_THROWS_AS(max_real_eig(ns(0.06), 0), Error);
}

TEST_CASE("K matrix") {
  const FlowParams fp = ns(0.06);
  const KMatrix K = build_K(0.2, fp, 200);
  for (std::int64_t n = -200; n <= 200; ++n) {
    const std::size_t i = static_cast<std::size_t>(n + 200);
    CHECK(K.k[i] == Approx(1.0 / (-0.06 * static_cast<double>(fp.c(n)) - 0.2)));
    CHECK(K.sub[i] == Approx(K.k[i] * rho(n - 1, fp)));
    CHECK(K.sup[i] == Approx(-K.k[i] * rho(n + 1, fp)));
    // k_n = O(n^-2)
    if (n != 0) CHECK(std::abs(K.k[i]) * static_cast<double>(n * n) < 10.0);
  }
}

TEST_CASE("perturbation determinant") {
  const FlowParams fp = ns(0.06);
  CHECK(det_I_plus_K(0.3, fp, 0).value == 1.0);

  const double lam = 0.3;
  auto k = [&](std::int64_t n) { return 1.0 / (-0.06 * static_cast<double>(fp.c(n)) - lam); };
  const double r_m1 = rho(-1, fp), r0 = rho(0, fp), r1 = rho(1, fp);
  const double expected = 1.0 + r0 * r1 * k(0) * k(1) + r_m1 * r0 * k(-1) * k(0);
  CHECK(det_I_plus_K(lam, fp, 1).value == Approx(expected).epsilon(1e-14));

  CHECK_THROWS_AS(det_I_plus_K(0.0, fp, 4), Error);

  const double root = cf_root(fp);
  CHECK(std::abs(det_I_plus_K(root, fp, 128).value) <= 1e-6);

  // Convergence in N at fixed λ.
  double prev = INFINITY;
  for (std::int64_t N : {4, 8, 16, 32}) {
    const double diff = std::abs(det_I_plus_K(lam, fp, 2 * N).value - det_I_plus_K(lam, fp, N).value);
    CHECK(diff <= prev);
    prev = diff;
  }
}

TEST_CASE("determinant scaling survives deep windows") {
  // Second grade K is not trace class: the section determinant grows with N
  // past the double range; the scaled form keeps its magnitude.
  const FlowParams sg = make_flow_params(ModelKind::SecondGrade, kP, kQ, 0.06, 1.0);
  const DeterminantSample d = det_I_plus_K(0.2, sg, 400);
  CHECK(std::isfinite(d.mantissa));
  CHECK(std::abs(d.mantissa) >= 0.5);
  CHECK(std::abs(d.mantissa) < 1.0);
  CHECK(d.exponent > 1024);
  // Small windows agree with the plain value.
  const DeterminantSample s = det_I_plus_K(0.2, sg, 20);
  CHECK(std::ldexp(s.mantissa, static_cast<int>(s.exponent)) == s.value);
}

TEST_CASE("determinant zero matches the continued-fraction root") {
  const FlowParams fp = ns(0.06);
  const double root = cf_root(fp);
  const double d128 = det_root(fp, 128, {0.9 * root, 1.1 * root}, 1e-14);
  const double d32 = det_root(fp, 32, {0.9 * root, 1.1 * root}, 1e-14);
  CHECK(std::abs(d128 - root) <= 1e-8);
  CHECK(std::abs(d32 - d128) < 1e-6);
  CHECK_THROWS_AS(det_root(fp, 128, {1.5 * root, 2.0 * root}, 1e-12), Error);
}

TEST_CASE("oracle triangle across models and classes") {
  struct Case {
    ModelKind model;
    LatticeVector q;
    double nu;
  };
  const Case cases[] = {
      {ModelKind::NavierStokes, {-1, 2}, 0.06}, {ModelKind::NavierStokes, {0, -2}, 0.06},
      {ModelKind::SecondGrade, {-1, 2}, 0.06},  {ModelKind::SecondGrade, {2, -2}, 0.06},
      {ModelKind::NSAlpha, {0, -2}, 0.06},      {ModelKind::NSVoigt, {-1, 2}, 0.06},
  };
  for (const Case& c : cases) {
    const std::optional<double> a = c.model == ModelKind::NavierStokes ? std::nullopt : std::optional<double>(1.0);
    const FlowParams fp = make_flow_params(c.model, kP, c.q, c.nu, a);
    const double lam = cf_root(fp);
    const double scale = std::max(1.0, lam);
    CHECK(std::abs(lam - max_real_eig(fp, 128)) <= 1e-8 * scale);
    CHECK(std::abs(lam - det_root(fp, 128, {0.9 * lam, 1.1 * lam}, 1e-14)) <= 1e-8 * scale);
  }
}

TEST_CASE("dense eigenvector matches the continued-fraction eigenvector") {
  for (LatticeVector q : {kQ, LatticeVector{0, -2}}) {
    const FlowParams fp = ns(0.06, q);
    const double lam = cf_root(fp);
    const DominantEigen d = max_real_eig_full(fp, 128);
    REQUIRE(d.vector.size() == 257);
    EigenOptions o;
    o.root_tol = 1e-12;
    const EigenvectorResult w = build_w(lam, fp, 128, o);
    double dot = 0, nw = 0, nd = 0;
    for (std::size_t i = 0; i < 257; ++i) {
      dot += w.w[i] * d.vector[i];
      nw += w.w[i] * w.w[i];
      nd += d.vector[i] * d.vector[i];
    }
    CHECK(std::abs(dot) / std::sqrt(nw * nd) >= 1.0 - 1e-8);
  }
}

TEST_CASE("growth rate") {
  const FlowParams fp = ns(0.06);
  const double lam = cf_root(fp);
  const double dt = max_stable_dt(build_L(fp, 32));
  const double rate = growth_rate(fp, 32, 60.0, dt);
  CHECK(std::abs(rate - lam) <= 1e-3 * lam);

  const FlowParams stable = ns(10.0);
  const double dt_s = max_stable_dt(build_L(stable, 16));
  CHECK(growth_rate(stable, 16, 2.0, dt_s) < 0.0);

  CHECK_THROWS_AS(growth_rate(fp, 4, 1.0, dt, std::vector<double>(9, 0.0)), Error);
  CHECK_THROWS_AS(growth_rate(fp, 4, 1.0, 1.0), Error);
  CHECK_THROWS_AS(growth_rate(fp, 4, 1.0, dt, std::vector<double>(3, 1.0)), Error);
}
