#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "instab/lattice.hpp"

namespace instab {

enum class ModelKind { NavierStokes, SecondGrade, NSAlpha, NSVoigt };

std::string_view to_string(ModelKind m);
/// Accepts "ns", "sg"/"second-grade", "nsa"/"ns-alpha", "voigt"/"ns-voigt".
ModelKind parse_model(std::string_view name);

/// How the steady-state amplitude Γ is fixed. The normalized choice
/// makes the scalar prefactor of rho_n equal to one.
struct GammaStrategy {
  std::optional<double> explicit_value;

  static GammaStrategy normalized() { return {}; }
  static GammaStrategy fixed(double gamma) { return {gamma}; }
  bool is_normalized() const { return !explicit_value.has_value(); }
};

/// One problem instance: a model, the forcing mode p and the orbit through q.
/// Built by make_flow_params, which replaces q by its orbit representative.
struct FlowParams {
  ModelKind model = ModelKind::NavierStokes;
  LatticeVector p;
  LatticeVector q;  // canonical representative
  double nu = 0.0;
  double alpha = 0.0;  // zero for NavierStokes
  GammaStrategy gamma_strategy;
  PointClass point_class = PointClass::Parallel;
  std::int64_t shift = 0;  // the user's q equals q - shift*p

  std::int64_t p_norm_sq() const { return p.norm_sq(); }
  /// c_n = ||q + n p||^2
  std::int64_t c(std::int64_t n) const { return (q + n * p).norm_sq(); }
  bool is_alpha_model() const { return model != ModelKind::NavierStokes; }
};

FlowParams make_flow_params(ModelKind model, LatticeVector p, LatticeVector q, double nu,
                            std::optional<double> alpha = std::nullopt,
                            GammaStrategy gamma = GammaStrategy::normalized());

/// Amplitudes of the steady vorticity, forcing and stream function.
struct SteadyState {
  double vorticity_amplitude = 0.0;
  double forcing_amplitude = 0.0;
  double stream_amplitude = 0.0;
};

/// Interaction coefficient β (NS), β1 (second grade, NS-α) or β2 (Voigt).
double beta(LatticeVector p, LatticeVector k, ModelKind model, double alpha = 0.0);

double gamma(const FlowParams& params);
SteadyState steady_state(const FlowParams& params);

double rho(std::int64_t n, const FlowParams& params);

/// Viscous weight d_n of the diagonal: c_n for NS and NS-α, c_n/(1+α²c_n) for
/// second grade and Voigt.
double diag_weight(std::int64_t n, const FlowParams& params);

/// a_n, e_n, l_n or i_n: (λ + ν d_n) / rho_n. Throws IndexUndefined where rho_n = 0.
double recurrence_coeff(std::int64_t n, double lambda, const FlowParams& params);

/// b_n = c_n² / (c_n − ||p||²), Navier-Stokes only.
double b(std::int64_t n, const FlowParams& params);

/// n ↦ rho_n and n ↦ coefficient at a fixed λ.
class CoefficientStream {
 public:
  CoefficientStream(const FlowParams& params, double lambda) : params_(&params), lambda_(lambda) {}

  double rho(std::int64_t n) const { return instab::rho(n, *params_); }
  double coeff(std::int64_t n) const { return recurrence_coeff(n, lambda_, *params_); }
  std::int64_t c(std::int64_t n) const { return params_->c(n); }
  double lambda() const { return lambda_; }
  const FlowParams& params() const { return *params_; }

 private:
  const FlowParams* params_;
  double lambda_;
};

}  // namespace instab
