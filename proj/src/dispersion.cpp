#include "instab/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "instab/error.hpp"

namespace instab {

DispersionSpec make_dispersion_spec(const FlowParams& params, std::optional<std::int64_t> fixed_depth) {
  DispersionSpec spec;
  spec.params = params;
  spec.fixed_depth = fixed_depth;
  switch (params.point_class) {
    case PointClass::TypeI0: spec.variant = DispersionVariant::Full; break;
    case PointClass::TypeIPlus: spec.variant = DispersionVariant::BackwardOnly; break;
    case PointClass::TypeIMinus: spec.variant = DispersionVariant::ForwardOnly; break;
    default:
      throw Error(ErrorCode::UnsupportedClass,
                  "class not supported: q is of type " + std::string(to_string(params.point_class)));
  }
  if (fixed_depth && *fixed_depth < 1) throw Error(ErrorCode::InvalidArgument, "fixed depth must be >= 1");
  return spec;
}

DispersionFunction::DispersionFunction(DispersionSpec spec)
    : spec_(std::move(spec)),
      forward_(spec_.params, Direction::Forward),
      backward_(spec_.params, Direction::Backward) {}

DispersionParts DispersionFunction::parts(double lambda, double tol, std::optional<double> nu_override) {
  const double nu = nu_override.value_or(spec_.params.nu);
  DispersionParts out;
  const double r0 = rho(0, spec_.params);
  out.a0 = (lambda + nu * diag_weight(0, spec_.params)) / r0;

  auto tail = [&](TailCoefficients& t) {
    if (spec_.fixed_depth) {
      out.depth = std::max(out.depth, *spec_.fixed_depth);
      return eval_fixed(t, lambda, nu, *spec_.fixed_depth);
    }
    const BracketedValue v = eval_adaptive(t, lambda, nu, tol / 4.0, spec_.max_depth);
    out.depth = std::max(out.depth, v.depth);
    return v.value;
  };
  if (spec_.variant != DispersionVariant::BackwardOnly) out.forward = tail(forward_);
  if (spec_.variant != DispersionVariant::ForwardOnly) out.backward = tail(backward_);
  return out;
}

double value(double lambda, const DispersionSpec& spec, double tol) {
  DispersionFunction fn(spec);
  return fn(lambda, tol);
}

double default_lambda_cap(const FlowParams& params) {
  const double np = static_cast<double>(params.p_norm_sq());
  const double m = params.is_alpha_model() ? 1.0 + params.alpha * params.alpha * np : 1.0;
  double d = 0.0;
  for (std::int64_t n = -1; n <= 1; ++n) d = std::max(d, diag_weight(n, params));
  return 10.0 * (m * np + params.nu * d);
}

RootResult find_root(const DispersionSpec& spec, double tol, const RootSearchOptions& options) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "find_root: tol must be positive");
  if (!(options.scan_ratio > 1.0)) throw Error(ErrorCode::InvalidArgument, "find_root: scan ratio must exceed 1");
  const double cap = options.lambda_cap > 0.0 ? options.lambda_cap : default_lambda_cap(spec.params);

  DispersionFunction fn(spec);
  RootResult res;

  double lo = tol;
  double v_lo = fn(lo, tol);
  if (!(v_lo > 0.0)) {
    std::ostringstream msg;
    msg << "no root found on (0, " << cap << "]: dispersion value at lambda=" << lo << " is " << v_lo
        << " (not positive)";
    res.diagnostic = msg.str();
    res.bracket_lo = 0.0;
    res.bracket_hi = cap;
    return res;
  }

  double hi = lo;
  double v_hi = v_lo;
  while (v_hi > 0.0) {
    if (hi >= cap) {
      std::ostringstream msg;
      msg << "no root found on (0, " << cap << "]: no sign change on the scan grid";
      res.diagnostic = msg.str();
      res.bracket_lo = 0.0;
      res.bracket_hi = cap;
      return res;
    }
    lo = hi;
    v_lo = v_hi;
    hi = std::min(cap, hi * options.scan_ratio);
    v_hi = fn(hi, tol);
  }

  double mid = 0.5 * (lo + hi);
  DispersionParts p_mid = fn.parts(mid, tol);
  for (int it = 0; it < options.max_bisections; ++it) {
    const bool narrow = (hi - lo) <= tol;
    const bool small = std::abs(p_mid.total()) <= tol;
    const bool resolved = (hi - lo) <= 4.0 * std::numeric_limits<double>::epsilon() * hi;
    if ((narrow && small) || resolved) break;
    if (p_mid.total() > 0.0) lo = mid;
    else hi = mid;
    mid = 0.5 * (lo + hi);
    p_mid = fn.parts(mid, tol);
  }

  res.found = true;
  res.lambda = mid;
  res.bracket_lo = lo;
  res.bracket_hi = hi;
  res.dispersion_residual = p_mid.total();
  res.cf_depth = p_mid.depth;
  return res;
}

double nu0_h(double nu, DispersionFunction& fn, double tol) {
  if (nu == 0.0) return 0.0;
  return fn(0.0, tol, nu);
}

double nu0_estimate(const FlowParams& params, double tol, const Nu0Options& options) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "nu0_estimate: tol must be positive");
  if (!(options.nu_start > 0.0) || !(options.nu_cap > options.nu_start) || !(options.scan_ratio > 1.0))
    throw Error(ErrorCode::InvalidArgument, "nu0_estimate: invalid scan options");
  DispersionSpec spec = make_dispersion_spec(params);
  spec.max_depth = options.max_depth;
  DispersionFunction fn(spec);

  const double h_tol = std::min(tol, 1e-10);
  double lo = options.nu_start;
  if (!(nu0_h(lo, fn, h_tol) > 0.0)) {
    std::ostringstream msg;
    msg << "nu0: h is not positive at the scan start nu=" << lo;
    throw Error(ErrorCode::NotFound, msg.str());
  }
  double hi = lo;
  while (nu0_h(hi, fn, h_tol) > 0.0) {
    if (hi >= options.nu_cap) {
      std::ostringstream msg;
      msg << "nu0: no crossing below the viscosity cap " << options.nu_cap;
      throw Error(ErrorCode::NotFound, msg.str());
    }
    lo = hi;
    hi = std::min(options.nu_cap, hi * options.scan_ratio);
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (nu0_h(mid, fn, h_tol) > 0.0) lo = mid;
    else hi = mid;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace instab
