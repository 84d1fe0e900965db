#include "instab/models.hpp"

#include <cmath>
#include <string>

#include "instab/error.hpp"

namespace instab {

namespace {

double alpha_factor(double alpha, std::int64_t norm_sq) {
  return 1.0 + alpha * alpha * static_cast<double>(norm_sq);
}

// Model-dependent part of the normalization: 1 for NS, 1+α²||p||² otherwise.
double prefactor_weight(const FlowParams& fp) {
  return fp.is_alpha_model() ? alpha_factor(fp.alpha, fp.p_norm_sq()) : 1.0;
}

// Γ (q∧p) / (2 ||p||² m_p); identically one under the default normalization.
double rho_scale(const FlowParams& fp) {
  if (fp.gamma_strategy.is_normalized()) return 1.0;
  const double qp = static_cast<double>(wedge(fp.q, fp.p));
  return *fp.gamma_strategy.explicit_value * qp /
         (2.0 * static_cast<double>(fp.p_norm_sq()) * prefactor_weight(fp));
}

}  // namespace

std::string_view to_string(ModelKind m) {
  switch (m) {
    case ModelKind::NavierStokes: return "ns";
    case ModelKind::SecondGrade: return "sg";
    case ModelKind::NSAlpha: return "nsa";
    case ModelKind::NSVoigt: return "voigt";
  }
  return "?";
}

ModelKind parse_model(std::string_view name) {
  if (name == "ns" || name == "navier-stokes") return ModelKind::NavierStokes;
  if (name == "sg" || name == "second-grade") return ModelKind::SecondGrade;
  if (name == "nsa" || name == "ns-alpha") return ModelKind::NSAlpha;
  if (name == "voigt" || name == "ns-voigt") return ModelKind::NSVoigt;
  throw Error(ErrorCode::InvalidArgument, "unknown model '" + std::string(name) + "'");
}

FlowParams make_flow_params(ModelKind model, LatticeVector p, LatticeVector q, double nu,
                            std::optional<double> alpha, GammaStrategy gamma_strategy) {
  if (p.is_zero()) throw Error(ErrorCode::InvalidArgument, "p must be non-zero");
  if (!(nu >= 0.0) || !std::isfinite(nu)) throw Error(ErrorCode::InvalidArgument, "nu must be finite and >= 0");
  FlowParams fp;
  fp.model = model;
  fp.p = p;
  fp.nu = nu;
  if (model != ModelKind::NavierStokes) {
    if (!alpha || !(*alpha > 0.0) || !std::isfinite(*alpha))
      throw Error(ErrorCode::InvalidArgument, "alpha > 0 is required for " + std::string(to_string(model)));
    fp.alpha = *alpha;
  }
  if (gamma_strategy.explicit_value && !std::isfinite(*gamma_strategy.explicit_value))
    throw Error(ErrorCode::InvalidArgument, "explicit gamma must be finite");
  fp.gamma_strategy = gamma_strategy;
  const OrbitRep r = canonical_rep(q, p);
  fp.q = r.rep;
  fp.shift = r.shift;
  fp.point_class = classify(fp.q, p);
  return fp;
}

double beta(LatticeVector p, LatticeVector k, ModelKind model, double alpha) {
  if (p.is_zero() || k.is_zero()) return 0.0;
  const double np = static_cast<double>(p.norm_sq());
  const double nk = static_cast<double>(k.norm_sq());
  const double w = static_cast<double>(wedge(p, k));
  switch (model) {
    case ModelKind::NavierStokes:
      return 0.5 * (1.0 / nk - 1.0 / np) * w;
    case ModelKind::SecondGrade:
    case ModelKind::NSAlpha:
      return 0.5 * (1.0 / (nk * alpha_factor(alpha, k.norm_sq())) -
                    1.0 / (np * alpha_factor(alpha, p.norm_sq()))) * w;
    case ModelKind::NSVoigt:
      return 0.5 * (1.0 / nk - 1.0 / np) * w /
             (alpha_factor(alpha, p.norm_sq()) * alpha_factor(alpha, k.norm_sq()));
  }
  return 0.0;
}

double gamma(const FlowParams& fp) {
  if (fp.gamma_strategy.explicit_value) return *fp.gamma_strategy.explicit_value;
  const std::int64_t qp = wedge(fp.q, fp.p);
  if (qp == 0) throw Error(ErrorCode::DivisionByZero, "gamma: q is parallel to p");
  return 2.0 * static_cast<double>(fp.p_norm_sq()) * prefactor_weight(fp) / static_cast<double>(qp);
}

SteadyState steady_state(const FlowParams& fp) {
  const double g = gamma(fp);
  const double np = static_cast<double>(fp.p_norm_sq());
  const double m = prefactor_weight(fp);
  SteadyState s;
  s.vorticity_amplitude = g;
  switch (fp.model) {
    case ModelKind::NavierStokes:
      s.forcing_amplitude = np * g;
      s.stream_amplitude = g / np;
      break;
    case ModelKind::NSAlpha:
      s.forcing_amplitude = np * g;
      s.stream_amplitude = g / (np * m);
      break;
    case ModelKind::SecondGrade:
    case ModelKind::NSVoigt:
      s.forcing_amplitude = np * g / m;
      s.stream_amplitude = g / (np * m);
      break;
  }
  return s;
}

double rho(std::int64_t n, const FlowParams& fp) {
  if (fp.point_class == PointClass::Parallel) return 0.0;
  const std::int64_t cn = fp.c(n);
  const std::int64_t pn = fp.p_norm_sq();
  if (cn == pn) return 0.0;
  const double c = static_cast<double>(cn);
  const double np = static_cast<double>(pn);
  double shape = 0.0;
  switch (fp.model) {
    case ModelKind::NavierStokes:
      shape = 1.0 - np / c;
      break;
    case ModelKind::SecondGrade:
    case ModelKind::NSAlpha:
      shape = 1.0 - alpha_factor(fp.alpha, pn) * np / (alpha_factor(fp.alpha, cn) * c);
      break;
    case ModelKind::NSVoigt:
      shape = (1.0 - np / c) / alpha_factor(fp.alpha, cn);
      break;
  }
  return rho_scale(fp) * shape;
}

double diag_weight(std::int64_t n, const FlowParams& fp) {
  const std::int64_t cn = fp.c(n);
  switch (fp.model) {
    case ModelKind::NavierStokes:
    case ModelKind::NSAlpha:
      return static_cast<double>(cn);
    case ModelKind::SecondGrade:
    case ModelKind::NSVoigt:
      return static_cast<double>(cn) / alpha_factor(fp.alpha, cn);
  }
  return 0.0;
}

double recurrence_coeff(std::int64_t n, double lambda, const FlowParams& fp) {
  const double r = rho(n, fp);
  if (r == 0.0)
    throw Error(ErrorCode::IndexUndefined,
                "recurrence coefficient undefined at n=" + std::to_string(n) + " (rho_n = 0)");
  return (lambda + fp.nu * diag_weight(n, fp)) / r;
}

double b(std::int64_t n, const FlowParams& fp) {
  if (fp.model != ModelKind::NavierStokes)
    throw Error(ErrorCode::InvalidArgument, "b_n is defined for the Navier-Stokes model only");
  const std::int64_t cn = fp.c(n);
  const std::int64_t den = cn - fp.p_norm_sq();
  if (den == 0) throw Error(ErrorCode::DivisionByZero, "b_n: c_n equals ||p||^2 at n=" + std::to_string(n));
  const double c = static_cast<double>(cn);
  return c * c / static_cast<double>(den);
}

}  // namespace instab
