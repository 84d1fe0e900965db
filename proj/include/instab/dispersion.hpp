#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "instab/contfrac.hpp"
#include "instab/models.hpp"

namespace instab {

/// Which tails enter the dispersion function: both for I0, only the backward
/// tail g for I+ (rho_1 = 0), only the forward tail f for I- (rho_-1 = 0).
enum class DispersionVariant { Full, BackwardOnly, ForwardOnly };

struct DispersionSpec {
  FlowParams params;
  DispersionVariant variant = DispersionVariant::Full;
  /// Evaluate the tails at this fixed truncation depth instead of adaptively.
  std::optional<std::int64_t> fixed_depth;
  std::int64_t max_depth = kDefaultMaxDepth;
};

/// Rejects Type0, TypeII and Parallel with UnsupportedClass.
DispersionSpec make_dispersion_spec(const FlowParams& params, std::optional<std::int64_t> fixed_depth = std::nullopt);

/// The pieces of a0 + f + g at one λ. Missing tails are zero.
struct DispersionParts {
  double a0 = 0.0;
  double forward = 0.0;
  double backward = 0.0;
  std::int64_t depth = 0;

  double tails() const { return forward + backward; }
  double total() const { return a0 + forward + backward; }
};

struct RootResult {
  bool found = false;
  double lambda = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double dispersion_residual = 0.0;
  std::int64_t cf_depth = 0;
  std::string diagnostic;
};

/// Stateful evaluator; caches rho_n and d_n along both tails so a root
/// search or ν scan does not recompute them. One instance per thread.
class DispersionFunction {
 public:
  explicit DispersionFunction(DispersionSpec spec);

  const DispersionSpec& spec() const { return spec_; }

  /// Tails at tolerance tol/4 each. `nu` overrides the viscosity of the spec.
  DispersionParts parts(double lambda, double tol, std::optional<double> nu = std::nullopt);
  double operator()(double lambda, double tol, std::optional<double> nu = std::nullopt) {
    return parts(lambda, tol, nu).total();
  }

 private:
  DispersionSpec spec_;
  TailCoefficients forward_;
  TailCoefficients backward_;
};

double value(double lambda, const DispersionSpec& spec, double tol);

/// Upper end of the λ search: 10 (m_p ||p||² + ν max_{|n|<=1} d_n), where
/// m_p = 1 + α²||p||² for the α-models and 1 otherwise.
double default_lambda_cap(const FlowParams& params);

struct RootSearchOptions {
  double lambda_cap = 0.0;  // <= 0 selects default_lambda_cap
  double scan_ratio = 2.0;  // geometric scan λ_{k+1} = ratio * λ_k
  int max_bisections = 400;
};

/// Positive root of the dispersion function. Checks value(tol) > 0, scans
/// λ = tol, ratio*tol, ... up to the cap for the first sign change, then
/// bisects until the bracket is no wider than tol and |value| <= tol (or the
/// bracket reaches floating-point resolution). found = false when no sign
/// change is seen; that is reported, not taken as proof of stability.
RootResult find_root(const DispersionSpec& spec, double tol, const RootSearchOptions& options = {});

/// h(ν) = value(λ = 0; ν) = f(0,ν) + g(0,ν) + a0(0,ν) for the spec's variant;
/// defined as 0 at ν = 0.
double nu0_h(double nu, DispersionFunction& fn, double tol);

struct Nu0Options {
  double nu_start = 1e-4;
  double nu_cap = 1e3;
  double scan_ratio = 1.25;
  /// Depth cap for the tails; small ν makes second-grade tails converge slowly.
  std::int64_t max_depth = kDefaultMaxDepth;
};

/// Smallest ν > 0 where h changes sign from positive to non-positive, found by
/// a geometric scan from nu_start and bisection to tol. Throws NotFound if h
/// is already non-positive at nu_start or stays positive up to nu_cap.
double nu0_estimate(const FlowParams& params, double tol, const Nu0Options& options = {});

}  // namespace instab
