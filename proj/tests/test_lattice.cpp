#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "instab/error.hpp"
#include "instab/lattice.hpp"
#include "instab/models.hpp"

using namespace instab;

namespace {

// Brute force over a wide shift window; independent of the vertex formula.
LatticeVector brute_rep(LatticeVector q, LatticeVector p) {
  LatticeVector best = q + (-200) * p;
  for (std::int64_t n = -200; n <= 200; ++n) {
    const LatticeVector c = q + n * p;
    if (c.norm_sq() <= best.norm_sq()) best = c;  // <= keeps the larger n on ties
  }
  return best;
}

int brute_inside(LatticeVector q, LatticeVector p) {
  int k = 0;
  for (std::int64_t n = -200; n <= 200; ++n)
    if ((q + n * p).norm_sq() < p.norm_sq()) ++k;
  return k;
}

PointClass mirror(PointClass c) {
  if (c == PointClass::TypeIPlus) return PointClass::TypeIMinus;
  if (c == PointClass::TypeIMinus) return PointClass::TypeIPlus;
  return c;
}

}  // namespace

TEST_CASE("wedge") {
  CHECK(wedge({3, 1}, {-1, 2}) == 7);
  CHECK(wedge({3, 1}, {3, 1}) == 0);
  CHECK(wedge({3, 1}, {6, 2}) == 0);
}

TEST_CASE("canonical representative") {
  const OrbitRep r = canonical_rep({2, 3}, {3, 1});
  CHECK(r.rep == LatticeVector{-1, 2});
  CHECK(r.shift == -1);

  const OrbitRep tie = canonical_rep({-1, 1}, {2, 0});
  CHECK(tie.rep == LatticeVector{1, 1});
  CHECK(tie.shift == 1);

  const OrbitRep zero = canonical_rep({0, 0}, {3, 1});
  CHECK(zero.rep == LatticeVector{0, 0});
  CHECK(zero.shift == 0);

  CHECK_THROWS_AS(canonical_rep({1, 1}, {0, 0}), Error);
}

TEST_CASE("canonical representative agrees with brute force and is idempotent") {
  for (LatticeVector p : {LatticeVector{3, 1}, LatticeVector{0, 1}, LatticeVector{2, 0}, LatticeVector{2, 2},
                          LatticeVector{-1, 3}, LatticeVector{5, -2}}) {
    for (std::int64_t x = -8; x <= 8; ++x) {
      for (std::int64_t y = -8; y <= 8; ++y) {
        const LatticeVector q{x, y};
        const OrbitRep r = canonical_rep(q, p);
        CHECK(r.rep == brute_rep(q, p));
        CHECK(r.rep == q + r.shift * p);
        CHECK(canonical_rep(r.rep, p).rep == r.rep);
        CHECK(canonical_rep(r.rep, p).shift == 0);
      }
    }
  }
}

TEST_CASE("classification of the five reference points for p=(3,1)") {
  const LatticeVector p{3, 1};
  CHECK(classify({-1, 2}, p) == PointClass::TypeI0);
  CHECK(classify({0, -2}, p) == PointClass::TypeIPlus);
  CHECK(classify({2, -2}, p) == PointClass::TypeIMinus);
  CHECK(classify({-1, 1}, p) == PointClass::TypeII);
  CHECK(classify({-2, 3}, p) == PointClass::Type0);
  CHECK(classify({6, 2}, p) == PointClass::Parallel);
  // Any orbit member gives the same answer.
  CHECK(classify({2, 3}, p) == PointClass::TypeI0);
  CHECK(classify({-4, 1}, p) == PointClass::TypeI0);
}

TEST_CASE("classification counts match a brute-force orbit scan") {
  for (LatticeVector p : {LatticeVector{3, 1}, LatticeVector{0, 1}, LatticeVector{2, 2}, LatticeVector{4, -1}}) {
    for (std::int64_t x = -8; x <= 8; ++x) {
      for (std::int64_t y = -8; y <= 8; ++y) {
        const LatticeVector q{x, y};
        const PointClass c = classify(q, p);
        if (wedge(p, q) == 0) {
          CHECK(c == PointClass::Parallel);
          continue;
        }
        const int k = brute_inside(q, p);
        const LatticeVector r = brute_rep(q, p);
        const std::int64_t P = p.norm_sq();
        switch (k) {
          case 0: CHECK(c == PointClass::Type0); break;
          case 2: CHECK(c == PointClass::TypeII); break;
          default:
            REQUIRE(k == 1);
            if ((r + p).norm_sq() == P) CHECK(c == PointClass::TypeIPlus);
            else if ((r - p).norm_sq() == P) CHECK(c == PointClass::TypeIMinus);
            else CHECK(c == PointClass::TypeI0);
        }
      }
    }
  }
}

TEST_CASE("classification symmetry under q -> -q") {
  for (LatticeVector p : {LatticeVector{3, 1}, LatticeVector{0, 1}, LatticeVector{1, 2}, LatticeVector{2, 2},
                          LatticeVector{5, 3}}) {
    for (std::int64_t x = -8; x <= 8; ++x)
      for (std::int64_t y = -8; y <= 8; ++y) CHECK(classify({-x, -y}, p) == mirror(classify({x, y}, p)));
  }
}

TEST_CASE("rho signs follow the class for every model") {
  const LatticeVector p{3, 1};
  for (ModelKind m : {ModelKind::NavierStokes, ModelKind::SecondGrade, ModelKind::NSAlpha, ModelKind::NSVoigt}) {
    const std::optional<double> a = m == ModelKind::NavierStokes ? std::nullopt : std::optional<double>(0.7);
    for (std::int64_t x = -6; x <= 6; ++x) {
      for (std::int64_t y = -6; y <= 6; ++y) {
        const PointClass c = classify({x, y}, p);
        if (c != PointClass::TypeI0 && c != PointClass::TypeIPlus && c != PointClass::TypeIMinus) continue;
        const FlowParams fp = make_flow_params(m, p, {x, y}, 0.1, a);
        CHECK(rho(0, fp) < 0.0);
        for (std::int64_t n = -30; n <= 30; ++n) {
          if (n == 0) continue;
          if (c == PointClass::TypeIPlus && n == 1) CHECK(rho(n, fp) == 0.0);
          else if (c == PointClass::TypeIMinus && n == -1) CHECK(rho(n, fp) == 0.0);
          else CHECK(rho(n, fp) > 0.0);
        }
      }
    }
  }
}

TEST_CASE("enumerate_classes") {
  SUBCASE("p=(3,1), radius sqrt(10)") {
    const auto list = enumerate_classes({3, 1}, std::sqrt(10.0));
    auto find = [&](LatticeVector q) {
      return std::find_if(list.begin(), list.end(), [&](const auto& e) { return e.first.rep == q; });
    };
    REQUIRE(find({-1, 2}) != list.end());
    CHECK(find({-1, 2})->second == PointClass::TypeI0);
    REQUIRE(find({0, -2}) != list.end());
    CHECK(find({0, -2})->second == PointClass::TypeIPlus);
    REQUIRE(find({2, -2}) != list.end());
    CHECK(find({2, -2})->second == PointClass::TypeIMinus);
    REQUIRE(find({-1, 1}) != list.end());
    CHECK(find({-1, 1})->second == PointClass::TypeII);
  }
  SUBCASE("p=(0,1), radius 0.5 has nothing besides the excluded zero orbit") {
    // Brute force: every point with |x|,|y| <= 3 lies in an orbit whose
    // representative has norm >= 1 unless it is on the y axis (the zero orbit).
    std::set<std::pair<std::int64_t, std::int64_t>> expected;
    for (std::int64_t x = -3; x <= 3; ++x)
      for (std::int64_t y = -3; y <= 3; ++y) {
        const LatticeVector r = brute_rep({x, y}, {0, 1});
        if (!r.is_zero() && r.norm_sq() <= 0.25) expected.insert({r.x, r.y});
      }
    CHECK(expected.empty());
    CHECK(enumerate_classes({0, 1}, 0.5).empty());
  }
  SUBCASE("each orbit appears once and every rep is canonical") {
    const LatticeVector p{3, 1};
    const auto list = enumerate_classes(p, 6.0);
    std::set<std::pair<std::int64_t, std::int64_t>> seen;
    for (const auto& [r, c] : list) {
      CHECK(canonical_rep(r.rep, p).rep == r.rep);
      CHECK(r.rep.norm_sq() <= 36);
      CHECK(seen.insert({r.rep.x, r.rep.y}).second);
      CHECK(c == classify(r.rep, p));
    }
    // Every lattice point in the disk belongs to a listed orbit, except the zero orbit.
    for (std::int64_t x = -6; x <= 6; ++x)
      for (std::int64_t y = -6; y <= 6; ++y) {
        const LatticeVector r = canonical_rep({x, y}, p).rep;
        if (r.is_zero() || r.norm_sq() > 36) continue;
        CHECK(seen.count({r.x, r.y}) == 1);
      }
  }
  CHECK_THROWS_AS(enumerate_classes({3, 1}, 0.0), Error);
  CHECK_THROWS_AS(enumerate_classes({0, 0}, 1.0), Error);
}
