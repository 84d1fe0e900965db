#pragma once

#include <cstdint>
#include <vector>

#include "instab/contfrac.hpp"
#include "instab/models.hpp"

namespace instab {

struct EigenOptions {
  /// Tolerance the root was certified to. The u0 consistency check allows
  /// `match_factor` times this.
  double root_tol = 1e-10;
  double match_factor = 100.0;
  /// Absolute tolerance of the deep tails that seed the u recurrences.
  double seed_tol = 1e-15;
  std::int64_t max_depth = kDefaultMaxDepth;
};

/// u_n on the window [-N, N], stored at position n + N. For I0 every entry is
/// filled; for I+ only n <= 0, for I- only n >= 0 (the others are NaN).
struct UValues {
  std::int64_t window = 0;
  std::vector<double> u;
  /// a0 + f and -g (either may be NaN when the class has no such tail).
  double u0_forward = 0.0;
  double u0_backward = 0.0;

  double at(std::int64_t n) const { return u[static_cast<std::size_t>(n + window)]; }
};

/// u_n^(1) for n >= 1 (forward tails) and u_n^(2) for n <= 0 (backward tails).
/// Throws MatchFailure when the two expressions for u0 disagree, i.e. λ does
/// not solve the dispersion equation of the class.
UValues build_u(double lambda, const FlowParams& params, std::int64_t window, const EigenOptions& options = {});

struct EigenvectorResult {
  double lambda = 0.0;
  std::int64_t window = 0;
  /// w_n at position n + N. Entries far out may underflow to zero; the exact
  /// magnitude is kept in log_abs_w and the sign in sign.
  std::vector<double> w;
  std::vector<double> log_abs_w;
  std::vector<int> sign;
  double residual = 0.0;
  double decay_rate = 0.0;
  double decay_r_squared = 0.0;
  bool sign_ok = false;

  double at(std::int64_t n) const { return w[static_cast<std::size_t>(n + window)]; }
  int sign_at(std::int64_t n) const { return sign[static_cast<std::size_t>(n + window)]; }
};

/// z0 = 1, z_n = 1/(u1...un), z_-n = u0 u-1 ... u-n+1, w_n = z_n / rho_n,
/// with the structural zeros and the extra entry w_1 (I+) or w_-1 (I-).
/// Products are accumulated as log-magnitude and sign.
EigenvectorResult build_w(double lambda, const FlowParams& params, std::int64_t window,
                          const EigenOptions& options = {});

/// Largest defect of the eigenvalue recurrence over the interior of the
/// window, each scaled by max(1, |w_n|).
double residual(const EigenvectorResult& result, const FlowParams& params);

/// True when every stored entry is zero.
bool is_degenerate(const EigenvectorResult& result);

struct DecayFit {
  double rate = 0.0;
  double r_squared = 0.0;
};

/// Least-squares fit of log|w_n| ≈ c - δ|n| over |n| in [N/4, 3N/4], done per
/// decaying side; reports the smaller rate and the smaller R².
DecayFit fit_decay(const EigenvectorResult& result, PointClass point_class);

/// Sign pattern of the class (I0, I+ or I-), up to a global sign.
bool sign_pattern_ok(const EigenvectorResult& result, PointClass point_class);

/// Σ (1 + |n|^{2s}) w_n² over the window.
double weighted_norm_sq(const EigenvectorResult& result, int s);

}  // namespace instab
