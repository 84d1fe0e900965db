#include "instab/contfrac.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "instab/error.hpp"

namespace instab {

double eval_trunc(std::span<const double> coeffs) {
  if (coeffs.empty()) throw Error(ErrorCode::InvalidArgument, "eval_trunc: empty coefficient list");
  double t = coeffs.back();
  for (std::size_t i = coeffs.size() - 1; i-- > 0;) {
    if (t == 0.0) throw Error(ErrorCode::DegenerateFraction, "eval_trunc: zero denominator");
    t = coeffs[i] + 1.0 / t;
  }
  if (t == 0.0) throw Error(ErrorCode::DegenerateFraction, "eval_trunc: zero denominator");
  return 1.0 / t;
}

BracketedValue eval_adaptive(const std::function<double(std::int64_t)>& coeff, double tol,
                             std::int64_t max_depth, std::int64_t start_depth) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "eval_adaptive: tol must be positive");
  if (max_depth < 2) throw Error(ErrorCode::InvalidArgument, "eval_adaptive: max_depth must be >= 2");

  std::vector<double> a;
  auto extend = [&](std::int64_t n) {
    a.reserve(static_cast<std::size_t>(n));
    while (static_cast<std::int64_t>(a.size()) < n) a.push_back(coeff(static_cast<std::int64_t>(a.size()) + 1));
  };

  // Even depth k: the k-th truncation is the lower bound, the (k+1)-th the upper.
  const std::int64_t k_cap = (max_depth - 1) - ((max_depth - 1) % 2);
  std::int64_t k = std::min(k_cap, std::max<std::int64_t>(2, start_depth + (start_depth % 2)));
  BracketedValue out;
  while (true) {
    extend(k + 1);
    const std::span<const double> all(a);
    const double even = eval_trunc(all.first(static_cast<std::size_t>(k)));
    const double odd = eval_trunc(all.first(static_cast<std::size_t>(k + 1)));
    out.lower = std::min(even, odd);
    out.upper = std::max(even, odd);
    out.value = 0.5 * (out.lower + out.upper);
    out.depth = k + 1;
    if (out.width() <= tol) return out;
    if (k >= k_cap)
      throw Error(ErrorCode::NoConvergence,
                  "continued fraction not converged at depth " + std::to_string(max_depth) +
                      " (bracket width " + std::to_string(out.width()) + ")");
    k = std::min(k_cap, 2 * k);
  }
}

namespace {

std::int64_t signed_index(Direction d, std::int64_t i) { return d == Direction::Forward ? i : -i; }

}  // namespace

void TailCoefficients::grow(std::int64_t i) {
  while (static_cast<std::int64_t>(rho_.size()) < i) {
    const std::int64_t n = signed_index(direction_, static_cast<std::int64_t>(rho_.size()) + 1);
    rho_.push_back(rho(n, params_));
    weight_.push_back(diag_weight(n, params_));
  }
}

double TailCoefficients::coeff(std::int64_t i, double lambda, double nu) {
  grow(i);
  const double r = rho_[static_cast<std::size_t>(i - 1)];
  if (r == 0.0)
    throw Error(ErrorCode::IndexUndefined, "recurrence coefficient undefined at n=" +
                                               std::to_string(signed_index(direction_, i)) + " (rho_n = 0)");
  return (lambda + nu * weight_[static_cast<std::size_t>(i - 1)]) / r;
}

BracketedValue eval_adaptive(TailCoefficients& tail, double lambda, double nu, double tol,
                             std::int64_t max_depth) {
  return eval_adaptive([&](std::int64_t i) { return tail.coeff(i, lambda, nu); }, tol, max_depth);
}

double eval_fixed(TailCoefficients& tail, double lambda, double nu, std::int64_t depth) {
  if (depth < 1) throw Error(ErrorCode::InvalidArgument, "eval_fixed: depth must be >= 1");
  std::vector<double> a;
  a.reserve(static_cast<std::size_t>(depth));
  for (std::int64_t i = 1; i <= depth; ++i) a.push_back(tail.coeff(i, lambda, nu));
  return eval_trunc(a);
}

BracketedValue eval_adaptive(const TailSpec& spec, double tol, std::int64_t max_depth) {
  const FlowParams& fp = spec.params;
  return eval_adaptive(
      [&](std::int64_t i) { return recurrence_coeff(signed_index(spec.direction, i), spec.lambda, fp); },
      tol, max_depth);
}

std::vector<double> tail_coefficients(const TailSpec& spec, std::int64_t depth) {
  std::vector<double> a;
  a.reserve(static_cast<std::size_t>(std::max<std::int64_t>(depth, 0)));
  for (std::int64_t i = 1; i <= depth; ++i)
    a.push_back(recurrence_coeff(signed_index(spec.direction, i), spec.lambda, spec.params));
  return a;
}

double eval_tail_fixed(const TailSpec& spec, std::int64_t depth) {
  if (depth < 1) throw Error(ErrorCode::InvalidArgument, "eval_tail_fixed: depth must be >= 1");
  const auto a = tail_coefficients(spec, depth);
  return eval_trunc(a);
}

double even_trunc_slope_at_zero(int k, Direction direction, const FlowParams& params) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "even_trunc_slope_at_zero: k must be >= 1");
  double sum = 0.0;
  for (int j = 1; j <= k; ++j) sum += b(signed_index(direction, 2 * j), params);
  return sum;
}

double second_grade_u_limit(double lambda, const FlowParams& params) {
  if (params.model != ModelKind::SecondGrade)
    throw Error(ErrorCode::InvalidArgument, "second_grade_u_limit: second grade model required");
  const double half = 0.5 * (lambda + params.nu / (params.alpha * params.alpha));
  return half + std::sqrt(half * half + 1.0);
}

}  // namespace instab
