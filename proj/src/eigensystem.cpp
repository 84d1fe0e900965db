#include "instab/eigensystem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "instab/error.hpp"

namespace instab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool has_forward(PointClass c) { return c == PointClass::TypeI0 || c == PointClass::TypeIMinus; }
bool has_backward(PointClass c) { return c == PointClass::TypeI0 || c == PointClass::TypeIPlus; }

void require_type_one(const FlowParams& params) {
  const PointClass c = params.point_class;
  if (c != PointClass::TypeI0 && c != PointClass::TypeIPlus && c != PointClass::TypeIMinus)
    throw Error(ErrorCode::UnsupportedClass,
                "class not supported: eigenvectors are built for type I only, got " + std::string(to_string(c)));
}

std::size_t slot(std::int64_t n, std::int64_t window) { return static_cast<std::size_t>(n + window); }

}  // namespace

UValues build_u(double lambda, const FlowParams& params, std::int64_t window, const EigenOptions& options) {
  require_type_one(params);
  if (window < 1) throw Error(ErrorCode::InvalidArgument, "build_u: window must be >= 1");
  const PointClass cls = params.point_class;
  auto a = [&](std::int64_t n) { return recurrence_coeff(n, lambda, params); };

  UValues out;
  out.window = window;
  out.u.assign(static_cast<std::size_t>(2 * window + 1), kNaN);
  out.u0_forward = kNaN;
  out.u0_backward = kNaN;

  if (has_forward(cls)) {
    // Seed u_N = a_N + [a_{N+1}; ...], then u_n = a_n + 1/u_{n+1} downwards.
    const BracketedValue seed =
        eval_adaptive([&](std::int64_t i) { return a(window + i); }, options.seed_tol, options.max_depth);
    double u = a(window) + seed.value;
    out.u[slot(window, window)] = u;
    for (std::int64_t n = window - 1; n >= 1; --n) {
      u = a(n) + 1.0 / u;
      out.u[slot(n, window)] = u;
    }
    out.u0_forward = a(0) + 1.0 / u;
  }
  if (has_backward(cls)) {
    // Seed u_-N = -[a_{-N-1}; a_{-N-2}; ...], then u_{n+1} = -1/(a_n - u_n) upwards.
    const BracketedValue seed =
        eval_adaptive([&](std::int64_t i) { return a(-window - i); }, options.seed_tol, options.max_depth);
    double u = -seed.value;
    out.u[slot(-window, window)] = u;
    for (std::int64_t n = -window; n <= -1; ++n) {
      u = -1.0 / (a(n) - u);
      out.u[slot(n + 1, window)] = u;
    }
    out.u0_backward = u;
  }

  // The two expressions for u0 must agree: u0^(1) = u0^(2) for I0, u0^(2) = a0
  // for I+ and u0^(1) = 0 for I-.
  double mismatch = 0.0;
  switch (cls) {
    case PointClass::TypeI0:
      mismatch = out.u0_forward - out.u0_backward;
      out.u[slot(0, window)] = out.u0_backward;
      break;
    case PointClass::TypeIPlus:
      mismatch = out.u0_backward - a(0);
      out.u[slot(0, window)] = out.u0_backward;
      break;
    default:
      mismatch = out.u0_forward;
      out.u[slot(0, window)] = 0.0;
      break;
  }
  const double match_tol = options.match_factor * options.root_tol;
  if (!(std::abs(mismatch) <= match_tol)) {
    std::ostringstream msg;
    msg << "u0 mismatch " << mismatch << " exceeds " << match_tol << ": lambda=" << lambda
        << " does not solve the dispersion equation";
    throw Error(ErrorCode::MatchFailure, msg.str());
  }
  return out;
}

EigenvectorResult build_w(double lambda, const FlowParams& params, std::int64_t window, const EigenOptions& options) {
  const UValues uv = build_u(lambda, params, window, options);
  const PointClass cls = params.point_class;
  const std::size_t size = static_cast<std::size_t>(2 * window + 1);

  // z_n as (sign, log|z_n|), with z_0 = 1.
  std::vector<double> log_z(size, -std::numeric_limits<double>::infinity());
  std::vector<int> sign_z(size, 0);
  log_z[slot(0, window)] = 0.0;
  sign_z[slot(0, window)] = 1;
  if (has_forward(cls)) {
    for (std::int64_t n = 1; n <= window; ++n) {
      const double u = uv.at(n);
      log_z[slot(n, window)] = log_z[slot(n - 1, window)] - std::log(std::abs(u));
      sign_z[slot(n, window)] = sign_z[slot(n - 1, window)] * (u > 0 ? 1 : -1);
    }
  }
  if (has_backward(cls)) {
    for (std::int64_t n = -1; n >= -window; --n) {
      const double u = uv.at(n + 1);
      log_z[slot(n, window)] = log_z[slot(n + 1, window)] + std::log(std::abs(u));
      sign_z[slot(n, window)] = sign_z[slot(n + 1, window)] * (u > 0 ? 1 : -1);
    }
  }

  EigenvectorResult res;
  res.lambda = lambda;
  res.window = window;
  res.w.assign(size, 0.0);
  res.log_abs_w.assign(size, -std::numeric_limits<double>::infinity());
  res.sign.assign(size, 0);
  for (std::int64_t n = -window; n <= window; ++n) {
    const std::size_t i = slot(n, window);
    if (sign_z[i] == 0) continue;
    const double r = rho(n, params);
    res.log_abs_w[i] = log_z[i] - std::log(std::abs(r));
    res.sign[i] = sign_z[i] * (r > 0 ? 1 : -1);
  }
  // The entry next to the vanishing rho comes from the recurrence row that
  // no longer couples to it: w_1 = z_0/(λ + ν d_1) for I+, w_-1 = -z_0/(λ + ν d_-1) for I-.
  if (cls == PointClass::TypeIPlus && window >= 1) {
    const double v = 1.0 / (lambda + params.nu * diag_weight(1, params));
    res.log_abs_w[slot(1, window)] = std::log(std::abs(v));
    res.sign[slot(1, window)] = v > 0 ? 1 : -1;
  }
  if (cls == PointClass::TypeIMinus && window >= 1) {
    const double v = -1.0 / (lambda + params.nu * diag_weight(-1, params));
    res.log_abs_w[slot(-1, window)] = std::log(std::abs(v));
    res.sign[slot(-1, window)] = v > 0 ? 1 : -1;
  }
  for (std::size_t i = 0; i < size; ++i)
    if (res.sign[i] != 0) res.w[i] = res.sign[i] * std::exp(res.log_abs_w[i]);

  res.residual = residual(res, params);
  const DecayFit fit = fit_decay(res, cls);
  res.decay_rate = fit.rate;
  res.decay_r_squared = fit.r_squared;
  res.sign_ok = sign_pattern_ok(res, cls);
  return res;
}

double residual(const EigenvectorResult& result, const FlowParams& params) {
  const std::int64_t N = result.window;
  double worst = 0.0;
  for (std::int64_t n = -N + 1; n <= N - 1; ++n) {
    const double wm = result.at(n - 1);
    const double w0 = result.at(n);
    const double wp = result.at(n + 1);
    const double defect = rho(n - 1, params) * wm - rho(n + 1, params) * wp -
                          (result.lambda + params.nu * diag_weight(n, params)) * w0;
    worst = std::max(worst, std::abs(defect) / std::max(1.0, std::abs(w0)));
  }
  return worst;
}

bool is_degenerate(const EigenvectorResult& result) {
  return std::all_of(result.w.begin(), result.w.end(), [](double v) { return v == 0.0; });
}

DecayFit fit_decay(const EigenvectorResult& result, PointClass point_class) {
  const std::int64_t N = result.window;
  const std::int64_t from = std::max<std::int64_t>(1, N / 4);
  const std::int64_t to = (3 * N) / 4;

  auto fit_side = [&](int side) -> DecayFit {
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    int count = 0;
    for (std::int64_t k = from; k <= to; ++k) {
      const std::size_t i = slot(side * k, N);
      if (result.sign[i] == 0) continue;  // structural zero
      const double x = static_cast<double>(k);
      const double y = result.log_abs_w[i];
      sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y;
      ++count;
    }
    if (count < 3) return {0.0, 0.0};
    const double mx = sx / count;
    const double my = sy / count;
    const double vxx = sxx / count - mx * mx;
    const double vyy = syy / count - my * my;
    const double vxy = sxy / count - mx * my;
    const double slope = vxy / vxx;
    const double r2 = vyy > 0 ? (vxy * vxy) / (vxx * vyy) : 1.0;
    return {-slope, r2};
  };

  DecayFit out{std::numeric_limits<double>::infinity(), 1.0};
  bool any = false;
  if (has_forward(point_class)) {
    const DecayFit f = fit_side(+1);
    out.rate = std::min(out.rate, f.rate);
    out.r_squared = std::min(out.r_squared, f.r_squared);
    any = true;
  }
  if (has_backward(point_class)) {
    const DecayFit f = fit_side(-1);
    out.rate = std::min(out.rate, f.rate);
    out.r_squared = std::min(out.r_squared, f.r_squared);
    any = true;
  }
  if (!any) return {0.0, 0.0};
  return out;
}

bool sign_pattern_ok(const EigenvectorResult& result, PointClass point_class) {
  const std::int64_t N = result.window;
  auto matches = [&](int g) {
    for (std::int64_t n = -N; n <= N; ++n) {
      const int s = g * result.sign_at(n);
      int want = 0;
      switch (point_class) {
        case PointClass::TypeI0:
          want = n > 0 ? 1 : (n >= -1 ? -1 : ((-n) % 2 == 0 ? 1 : -1));
          break;
        case PointClass::TypeIPlus:
          want = n > 1 ? 0 : (n == 1 ? 1 : (n >= -1 ? -1 : ((-n) % 2 == 0 ? 1 : -1)));
          break;
        case PointClass::TypeIMinus:
          want = n < -1 ? 0 : (n > 0 ? 1 : -1);
          break;
        default:
          return false;
      }
      if (s != want) return false;
    }
    return true;
  };
  return matches(1) || matches(-1);
}

double weighted_norm_sq(const EigenvectorResult& result, int s) {
  double sum = 0.0;
  for (std::int64_t n = -result.window; n <= result.window; ++n) {
    const double w = result.at(n);
    sum += (1.0 + std::pow(static_cast<double>(std::abs(n)), 2 * s)) * w * w;
  }
  return sum;
}

}  // namespace instab
