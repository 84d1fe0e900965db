#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace instab {

/// Point of the integer lattice Z^2. All arithmetic is exact.
struct LatticeVector {
  std::int64_t x = 0;
  std::int64_t y = 0;

  constexpr bool is_zero() const { return x == 0 && y == 0; }
  constexpr std::int64_t norm_sq() const { return x * x + y * y; }

  friend constexpr bool operator==(const LatticeVector&, const LatticeVector&) = default;
  friend constexpr LatticeVector operator+(LatticeVector a, LatticeVector b) {
    return {a.x + b.x, a.y + b.y};
  }
  friend constexpr LatticeVector operator-(LatticeVector a, LatticeVector b) {
    return {a.x - b.x, a.y - b.y};
  }
  friend constexpr LatticeVector operator-(LatticeVector a) { return {-a.x, -a.y}; }
  friend constexpr LatticeVector operator*(std::int64_t n, LatticeVector a) {
    return {n * a.x, n * a.y};
  }
};

constexpr std::int64_t dot(LatticeVector a, LatticeVector b) { return a.x * b.x + a.y * b.y; }

/// p ∧ q = p.x q.y − p.y q.x
constexpr std::int64_t wedge(LatticeVector p, LatticeVector q) { return p.x * q.y - p.y * q.x; }

enum class PointClass { Type0, TypeI0, TypeIPlus, TypeIMinus, TypeII, Parallel };

std::string_view to_string(PointClass c);

/// Smallest-norm point of the orbit {q + n p}; `shift` is the n reaching it.
struct OrbitRep {
  LatticeVector rep;
  std::int64_t shift = 0;

  friend bool operator==(const OrbitRep&, const OrbitRep&) = default;
};

/// Minimizes ||q + n p|| over n. Ties go to the larger n. Requires p != 0.
OrbitRep canonical_rep(LatticeVector q, LatticeVector p);

/// Type 0 / I0 / I+ / I- / II according to how many orbit points fall strictly
/// inside the open disk of radius ||p||, or Parallel when p ∧ q = 0.
PointClass classify(LatticeVector q, LatticeVector p);

/// All orbit representatives with ||rep|| <= radius (the zero orbit excluded),
/// ordered by norm, then x, then y.
std::vector<std::pair<OrbitRep, PointClass>> enumerate_classes(LatticeVector p, double radius);

}  // namespace instab
