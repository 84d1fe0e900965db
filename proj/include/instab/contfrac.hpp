#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "instab/models.hpp"

namespace instab {

/// Which half of the lattice orbit a tail runs over: Forward uses indices
/// 1, 2, ... (the fraction f), Backward uses -1, -2, ... (the fraction g).
enum class Direction { Forward, Backward };

struct TailSpec {
  Direction direction = Direction::Forward;
  FlowParams params;
  double lambda = 0.0;
};

/// Continued-fraction value enclosed between its last even and odd truncations.
struct BracketedValue {
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  std::int64_t depth = 0;

  double width() const { return upper - lower; }
};

inline constexpr std::int64_t kDefaultMaxDepth = 100000;

/// [a1; a2; ...; ak] = 1/(a1 + 1/(a2 + ... + 1/ak)), innermost term first.
/// Throws DegenerateFraction if an intermediate denominator vanishes.
double eval_trunc(std::span<const double> coeffs);

/// Adaptive evaluation of [a(1); a(2); ...] for a generic coefficient source.
/// Depth doubles from `start_depth` until the even/odd bracket is narrower
/// than `tol`; throws NoConvergence once `max_depth` is exceeded.
BracketedValue eval_adaptive(const std::function<double(std::int64_t)>& coeff, double tol,
                             std::int64_t max_depth = kDefaultMaxDepth, std::int64_t start_depth = 8);

/// f (Forward) or g (Backward) for the model of `spec.params`.
BracketedValue eval_adaptive(const TailSpec& spec, double tol, std::int64_t max_depth = kDefaultMaxDepth);

/// Lazily grown cache of the λ- and ν-independent pieces (rho_n, d_n) of one
/// tail, so repeated evaluations during root finding and viscosity scans only
/// redo the cheap (λ + ν d_n)/rho_n step. Not safe for concurrent mutation.
class TailCoefficients {
 public:
  TailCoefficients(const FlowParams& params, Direction direction)
      : params_(params), direction_(direction) {}

  /// Coefficient at position i >= 1 (orbit index ±i) for the given λ and ν.
  double coeff(std::int64_t i, double lambda, double nu);
  const FlowParams& params() const { return params_; }
  Direction direction() const { return direction_; }

 private:
  void grow(std::int64_t i);

  FlowParams params_;
  Direction direction_;
  std::vector<double> rho_;
  std::vector<double> weight_;
};

/// Adaptive tail evaluation reusing a cache; ν overrides params.nu.
BracketedValue eval_adaptive(TailCoefficients& tail, double lambda, double nu, double tol,
                             std::int64_t max_depth = kDefaultMaxDepth);
double eval_fixed(TailCoefficients& tail, double lambda, double nu, std::int64_t depth);

/// Coefficients a(±1), ..., a(±depth) of a tail.
std::vector<double> tail_coefficients(const TailSpec& spec, std::int64_t depth);

/// The depth-th truncation of a tail.
double eval_tail_fixed(const TailSpec& spec, std::int64_t depth);

/// d/dν of the 2k-th truncation of f(0,ν) (resp. g(0,ν)) at ν = 0:
/// b2 + b4 + ... + b2k (resp. b-2 + ... + b-2k). Navier-Stokes only.
double even_trunc_slope_at_zero(int k, Direction direction, const FlowParams& params);

/// Second grade: fixed point u = e∞/2 + sqrt((e∞/2)² + 1) of the tail
/// recurrence with e∞ = λ + ν/α², the limit of u_n as n → +∞.
double second_grade_u_limit(double lambda, const FlowParams& params);

}  // namespace instab
