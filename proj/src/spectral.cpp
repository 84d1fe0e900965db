#include "instab/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "instab/error.hpp"

namespace instab {

namespace {

std::size_t slot(std::int64_t n, std::int64_t window) { return static_cast<std::size_t>(n + window); }

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

void TruncatedOperator::apply(const std::vector<double>& x, std::vector<double>& y) const {
  const std::size_t m = size();
  y.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    double v = diag[i] * x[i];
    if (i > 0) v += sub[i] * x[i - 1];
    if (i + 1 < m) v += sup[i] * x[i + 1];
    y[i] = v;
  }
}

TruncatedOperator build_L(const FlowParams& params, std::int64_t window) {
  if (window < 0) throw Error(ErrorCode::InvalidArgument, "build_L: window must be >= 0");
  TruncatedOperator op;
  op.window = window;
  const std::size_t m = static_cast<std::size_t>(2 * window + 1);
  op.diag.resize(m);
  op.sub.resize(m);
  op.sup.resize(m);
  for (std::int64_t n = -window; n <= window; ++n) {
    const std::size_t i = slot(n, window);
    op.diag[i] = -params.nu * diag_weight(n, params);
    op.sub[i] = rho(n - 1, params);
    op.sup[i] = -rho(n + 1, params);
  }
  return op;
}

DominantEigen max_real_eig_full(const FlowParams& params, std::int64_t window, std::int64_t dense_cap) {
  if (window < 1 || window > dense_cap) {
    std::ostringstream msg;
    msg << "max_real_eig: window " << window << " outside [1, " << dense_cap << "]";
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
  const TruncatedOperator op = build_L(params, window);
  const Eigen::Index m = static_cast<Eigen::Index>(op.size());
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    L(i, i) = op.diag[static_cast<std::size_t>(i)];
    if (i > 0) L(i, i - 1) = op.sub[static_cast<std::size_t>(i)];
    if (i + 1 < m) L(i, i + 1) = op.sup[static_cast<std::size_t>(i)];
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(L, true);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "max_real_eig: dense eigensolver failed");
  const auto& values = solver.eigenvalues();
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < m; ++i)
    if (values(i).real() > values(best).real()) best = i;

  DominantEigen out;
  out.lambda = values(best).real();
  out.imag = values(best).imag();
  out.window = window;
  if (out.imag == 0.0) {
    const Eigen::VectorXcd vec = solver.eigenvectors().col(best);
    out.vector.resize(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) out.vector[static_cast<std::size_t>(i)] = vec(i).real();
  }
  return out;
}

double max_real_eig(const FlowParams& params, std::int64_t window, std::int64_t dense_cap) {
  return max_real_eig_full(params, window, dense_cap).lambda;
}

DominantEigen max_real_eig_converged(const FlowParams& params, double tol, std::int64_t start, std::int64_t dense_cap) {
  std::int64_t n = std::max<std::int64_t>(1, std::min(start, dense_cap));
  DominantEigen prev = max_real_eig_full(params, n, dense_cap);
  while (n < dense_cap) {
    n = std::min(dense_cap, 2 * n);
    DominantEigen next = max_real_eig_full(params, n, dense_cap);
    if (std::abs(next.lambda - prev.lambda) <= tol * std::max(1.0, std::abs(next.lambda))) return next;
    prev = std::move(next);
  }
  std::ostringstream msg;
  msg << "max_real_eig: no agreement to " << tol << " before window cap " << dense_cap;
  throw Error(ErrorCode::NoConvergence, msg.str());
}

KMatrix build_K(double lambda, const FlowParams& params, std::int64_t window) {
  KMatrix km;
  km.window = window;
  const std::size_t m = static_cast<std::size_t>(2 * window + 1);
  km.k.resize(m);
  km.sub.resize(m);
  km.sup.resize(m);
  for (std::int64_t n = -window; n <= window; ++n) {
    const std::size_t i = slot(n, window);
    const double denom = -params.nu * diag_weight(n, params) - lambda;
    if (denom == 0.0) throw Error(ErrorCode::DivisionByZero, "build_K: -nu*d_n - lambda vanishes");
    km.k[i] = 1.0 / denom;
    km.sub[i] = km.k[i] * rho(n - 1, params);
    km.sup[i] = -km.k[i] * rho(n + 1, params);
  }
  return km;
}

DeterminantSample det_I_plus_K(double lambda, const FlowParams& params, std::int64_t window) {
  if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "det_I_plus_K: lambda must be > 0");
  if (window < 0) throw Error(ErrorCode::InvalidArgument, "det_I_plus_K: window must be >= 0");
  const KMatrix km = build_K(lambda, params, window);
  const std::size_t m = km.k.size();

  // D_m = D_{m-1} - sub_m sup_{m-1} D_{m-2}; both terms share one binary
  // exponent which is pulled out whenever the mantissas drift.
  double d_prev2 = 1.0;  // D_{-1}
  double d_prev = 1.0;   // D_0
  std::int64_t exponent = 0;
  for (std::size_t i = 1; i < m; ++i) {
    const double d = d_prev - km.sub[i] * km.sup[i - 1] * d_prev2;
    d_prev2 = d_prev;
    d_prev = d;
    const double mag = std::max(std::abs(d_prev), std::abs(d_prev2));
    if (mag != 0.0 && (mag > 0x1p+256 || mag < 0x1p-256)) {
      int e = 0;
      std::frexp(mag, &e);
      d_prev = std::ldexp(d_prev, -e);
      d_prev2 = std::ldexp(d_prev2, -e);
      exponent += e;
    }
  }
  DeterminantSample out;
  out.lambda = lambda;
  out.window = window;
  int e = 0;
  out.mantissa = std::frexp(d_prev, &e);
  out.exponent = exponent + e;
  out.value = out.exponent > std::numeric_limits<int>::max() / 2 ? std::copysign(HUGE_VAL, out.mantissa)
              : out.exponent < std::numeric_limits<int>::min() / 2
                  ? 0.0
                  : std::ldexp(out.mantissa, static_cast<int>(out.exponent));
  return out;
}

double det_root(const FlowParams& params, std::int64_t window, std::pair<double, double> bracket, double tol) {
  double lo = bracket.first;
  double hi = bracket.second;
  if (lo > hi) std::swap(lo, hi);
  double f_lo = det_I_plus_K(lo, params, window).value;
  const double f_hi = det_I_plus_K(hi, params, window).value;
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0) == (f_hi > 0)) {
    std::ostringstream msg;
    msg << "det_root: no sign change on [" << lo << ", " << hi << "]";
    throw Error(ErrorCode::NoSignChange, msg.str());
  }
  for (int it = 0; it < 400 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = det_I_plus_K(mid, params, window).value;
    if (f_mid == 0.0) return mid;
    if ((f_mid > 0) == (f_lo > 0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double max_stable_dt(const TruncatedOperator& op) {
  double worst = 0.0;
  for (double d : op.diag) worst = std::max(worst, std::abs(d));
  return 1.0 / (4.0 * worst + 4.0);
}

double growth_rate(const FlowParams& params, std::int64_t window, double t_final, double dt,
                   const GrowthOptions& options) {
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> init(static_cast<std::size_t>(2 * window + 1));
  for (double& x : init) x = normal(rng);
  return growth_rate(params, window, t_final, dt, std::move(init));
}

double growth_rate(const FlowParams& params, std::int64_t window, double t_final, double dt,
                   std::vector<double> w) {
  const TruncatedOperator op = build_L(params, window);
  if (w.size() != op.size()) throw Error(ErrorCode::InvalidArgument, "growth_rate: initial data has wrong length");
  double norm = norm2(w);
  if (norm == 0.0) throw Error(ErrorCode::InvalidArgument, "growth_rate: zero initial data");
  if (!(t_final > 0.0)) throw Error(ErrorCode::InvalidArgument, "growth_rate: t_final must be > 0");
  const double dt_max = max_stable_dt(op);
  if (!(dt > 0.0) || dt > dt_max) {
    std::ostringstream msg;
    msg << "growth_rate: dt must lie in (0, " << dt_max << "]";
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }

  const auto steps = static_cast<std::int64_t>(std::ceil(t_final / dt));
  const double h = t_final / static_cast<double>(steps);
  const std::size_t m = w.size();
  std::vector<double> k1(m), k2(m), k3(m), k4(m), tmp(m);

  for (double& x : w) x /= norm;
  double log_scale = std::log(norm);

  // Running sums for the fit over t in [t_final/2, t_final].
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::int64_t count = 0;
  for (std::int64_t s = 1; s <= steps; ++s) {
    op.apply(w, k1);
    for (std::size_t i = 0; i < m; ++i) tmp[i] = w[i] + 0.5 * h * k1[i];
    op.apply(tmp, k2);
    for (std::size_t i = 0; i < m; ++i) tmp[i] = w[i] + 0.5 * h * k2[i];
    op.apply(tmp, k3);
    for (std::size_t i = 0; i < m; ++i) tmp[i] = w[i] + h * k3[i];
    op.apply(tmp, k4);
    for (std::size_t i = 0; i < m; ++i) w[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

    const double nrm = norm2(w);
    if (nrm == 0.0 || !std::isfinite(nrm))
      throw Error(ErrorCode::NoConvergence, "growth_rate: solution norm degenerated");
    // Renormalize every step; the shift is accumulated so log‖w‖ is exact.
    for (double& x : w) x /= nrm;
    log_scale += std::log(nrm);

    const double t = h * static_cast<double>(s);
    if (2 * s >= steps) {
      sx += t;
      sy += log_scale;
      sxx += t * t;
      sxy += t * log_scale;
      ++count;
    }
  }
  const double n = static_cast<double>(count);
  const double mx = sx / n;
  return (sxy / n - mx * (sy / n)) / (sxx / n - mx * mx);
}

}  // namespace instab
