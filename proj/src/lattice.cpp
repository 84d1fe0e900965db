#include "instab/lattice.hpp"

#include <algorithm>
#include <cmath>

#include "instab/error.hpp"

namespace instab {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

std::string_view to_string(PointClass c) {
  switch (c) {
    case PointClass::Type0: return "0";
    case PointClass::TypeI0: return "I0";
    case PointClass::TypeIPlus: return "I+";
    case PointClass::TypeIMinus: return "I-";
    case PointClass::TypeII: return "II";
    case PointClass::Parallel: return "parallel";
  }
  return "?";
}

OrbitRep canonical_rep(LatticeVector q, LatticeVector p) {
  if (p.is_zero()) throw Error(ErrorCode::InvalidArgument, "canonical_rep: p must be non-zero");
  // ||q + n p||^2 is a convex quadratic in n with real vertex -(q.p)/||p||^2.
  const std::int64_t base = floor_div(-dot(q, p), p.norm_sq());
  OrbitRep best{q + base * p, base};
  for (std::int64_t n = base - 1; n <= base + 2; ++n) {
    const LatticeVector v = q + n * p;
    const std::int64_t nv = v.norm_sq();
    const std::int64_t nb = best.rep.norm_sq();
    if (nv < nb || (nv == nb && n > best.shift)) best = {v, n};
  }
  return best;
}

PointClass classify(LatticeVector q, LatticeVector p) {
  if (p.is_zero()) throw Error(ErrorCode::InvalidArgument, "classify: p must be non-zero");
  if (wedge(p, q) == 0) return PointClass::Parallel;

  const LatticeVector rep = canonical_rep(q, p).rep;
  const std::int64_t radius_sq = p.norm_sq();
  int inside = 0;
  // A chord of the disk not through the origin is shorter than 2||p||, so at
  // most two orbit points (adjacent to the representative) can lie inside.
  for (std::int64_t n = -2; n <= 2; ++n) {
    if ((rep + n * p).norm_sq() < radius_sq) ++inside;
  }
  if (inside == 0) return PointClass::Type0;
  if (inside >= 2) return PointClass::TypeII;
  if ((rep + p).norm_sq() == radius_sq) return PointClass::TypeIPlus;
  if ((rep - p).norm_sq() == radius_sq) return PointClass::TypeIMinus;
  return PointClass::TypeI0;
}

std::vector<std::pair<OrbitRep, PointClass>> enumerate_classes(LatticeVector p, double radius) {
  if (p.is_zero()) throw Error(ErrorCode::InvalidArgument, "enumerate_classes: p must be non-zero");
  if (!(radius > 0)) throw Error(ErrorCode::InvalidArgument, "enumerate_classes: radius must be positive");

  const auto bound = static_cast<std::int64_t>(std::floor(radius));
  const double radius_sq = radius * radius;
  std::vector<std::pair<OrbitRep, PointClass>> out;
  for (std::int64_t x = -bound; x <= bound; ++x) {
    for (std::int64_t y = -bound; y <= bound; ++y) {
      const LatticeVector v{x, y};
      if (v.is_zero() || static_cast<double>(v.norm_sq()) > radius_sq) continue;
      const OrbitRep r = canonical_rep(v, p);
      // Each orbit is listed once: only through its own representative.
      if (r.rep == v) out.emplace_back(OrbitRep{v, 0}, classify(v, p));
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    const auto& u = a.first.rep;
    const auto& v = b.first.rep;
    if (u.norm_sq() != v.norm_sq()) return u.norm_sq() < v.norm_sq();
    if (u.x != v.x) return u.x < v.x;
    return u.y < v.y;
  });
  return out;
}

}  // namespace instab
