#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "instab/models.hpp"

namespace instab {

/// Finite section of L_{B,q} on n in [-N, N], entries stored at n + N.
/// Row n reads sub[n] w_{n-1} + diag[n] w_n + sup[n] w_{n+1}; the bands
/// reaching outside the window are kept in the arrays but never used.
struct TruncatedOperator {
  std::int64_t window = 0;
  std::vector<double> diag;
  std::vector<double> sub;
  std::vector<double> sup;

  std::size_t size() const { return diag.size(); }
  /// y = L x, Dirichlet truncation.
  void apply(const std::vector<double>& x, std::vector<double>& y) const;
};

TruncatedOperator build_L(const FlowParams& params, std::int64_t window);

inline constexpr std::int64_t kDenseCap = 512;

struct DominantEigen {
  double lambda = 0.0;
  double imag = 0.0;
  std::int64_t window = 0;
  /// Real eigenvector for lambda when the dominant eigenvalue is real, else empty.
  std::vector<double> vector;
};

/// Eigenvalue with the largest real part of the finite section (dense solve).
DominantEigen max_real_eig_full(const FlowParams& params, std::int64_t window, std::int64_t dense_cap = kDenseCap);
double max_real_eig(const FlowParams& params, std::int64_t window, std::int64_t dense_cap = kDenseCap);

/// Doubles N from `start` until two consecutive windows agree to `tol`
/// (relative to max(1, |λ|)). Throws NoConvergence when the cap is reached first.
DominantEigen max_real_eig_converged(const FlowParams& params, double tol, std::int64_t start = 16,
                                     std::int64_t dense_cap = kDenseCap);

struct KMatrix {
  std::int64_t window = 0;
  std::vector<double> k;
  std::vector<double> sub;
  std::vector<double> sup;
};

/// k_n = 1/(-ν d_n - λ), sub_n = k_n ρ_{n-1}, sup_n = -k_n ρ_{n+1}.
KMatrix build_K(double lambda, const FlowParams& params, std::int64_t window);

struct DeterminantSample {
  double lambda = 0.0;
  double value = 0.0;
  std::int64_t window = 0;
  /// value = mantissa · 2^exponent; kept separately because value saturates
  /// for sections whose determinant leaves the double range.
  double mantissa = 0.0;
  std::int64_t exponent = 0;
};

/// det of the (2N+1) section of I + K_λ. Requires λ > 0.
DeterminantSample det_I_plus_K(double lambda, const FlowParams& params, std::int64_t window);

/// Bisection zero of λ ↦ det(I + K_λ) on the bracket. Throws NoSignChange.
double det_root(const FlowParams& params, std::int64_t window, std::pair<double, double> bracket, double tol);

struct GrowthOptions {
  std::uint64_t seed = 12345;
};

/// Integrates dw/dt = L w (RK4, Dirichlet section) and returns the least-squares
/// slope of log‖w(t)‖ over the second half of [0, t_final].
double growth_rate(const FlowParams& params, std::int64_t window, double t_final, double dt,
                   const GrowthOptions& options = {});
double growth_rate(const FlowParams& params, std::int64_t window, double t_final, double dt,
                   std::vector<double> initial);

/// Largest step the integrator accepts: 1/(4·max|diag| + 4).
double max_stable_dt(const TruncatedOperator& op);

}  // namespace instab
