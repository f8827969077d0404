#pragma once

// Modified-energy diagnostics for the fully discrete trigonometric integrator.
//
//   𝓔(e, ė, u) = ⫼(e, ė)⫼₁² + κ 𝓤(Φe, Φu)
//   𝓤(e, u)    = ⟨cos(τΩ)∂ₓ²e, a(u)∂ₓ²e⟩₀ - ¼τ²κ ‖Ψ₁ 𝒫^K(a(u)∂ₓ²e)‖₁²
//
// In the fully discrete variant a is replaced by its interpolant a^K and the
// projection 𝒫^K is applied inside the norm; the semi-discrete variant keeps
// a resolved to degree 2K and drops the projection.

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qlwave/integrator.hpp"

namespace qlwave {

enum class Discretization { Full, Semi };

struct EnergyReport {
  double pair_norm_sq = 0.0;
  double U_value = 0.0;
  double E_value = 0.0;
  /// Filled in by callers that also run a positivity check; NaN otherwise.
  double positivity_margin = std::numeric_limits<double>::quiet_NaN();
  double identity_residual = std::numeric_limits<double>::quiet_NaN();
};

double U_term(const SpectralField& e, const SpectralField& u, const ProblemSpec& p,
              const IntegratorConfig& cfg, Discretization d = Discretization::Full);

EnergyReport modified_energy(const SpectralField& e, const SpectralField& edot,
                             const SpectralField& u, const ProblemSpec& p,
                             const IntegratorConfig& cfg, Discretization d = Discretization::Full);

/// 𝓛(u)v = κΦ a(u) cos(τΩ) Φv - ¼κ² Φ a(u) sin²(τΩ) Φ² a(u) Φv, truncated to degree K.
SpectralField L_apply(const SpectralField& u, const SpectralField& v, const ProblemSpec& p,
                      const IntegratorConfig& cfg, Discretization d = Discretization::Full);

/// |κ𝓤(Φe, Φu) - ⟨𝓛(Φu)∂ₓ²e, ∂ₓ²e⟩₀| / (1 + |κ𝓤(Φe, Φu)|).
double representation_residual(const SpectralField& e, const SpectralField& u,
                               const ProblemSpec& p, const IntegratorConfig& cfg,
                               Discretization d = Discretization::Full);

struct ProbeMargin {
  std::string label;  // "random:<i>", "cos:<j>" or "sin:<j>"
  double margin;      // Rayleigh quotient minus δ/8
};

struct PositivityReport {
  double worst_margin = 0.0;
  std::string worst_probe;
  double delta = 0.0;
  double A0 = 0.0;
  std::vector<ProbeMargin> probes;
};

struct PositivityOptions {
  int n_samples = 1000;
  bool single_mode_probes = true;
  std::uint64_t seed = 20240611;
  /// Overrides for δ and A₀; by default both come from ellipticity_report(u).
  std::optional<double> delta;
  std::optional<double> A0;
};

/// Samples (‖v‖₀² + ⟨𝓛(Φu)v, v⟩₀)/‖v‖₀² - δ/8 over random and single-mode v.
/// Throws PreconditionError if 1 + κa(u) ≥ δ/2 or κa(u) ≤ A₀ + δ/2 fails.
PositivityReport positivity_check(const SpectralField& u, const ProblemSpec& p,
                                  const IntegratorConfig& cfg,
                                  const PositivityOptions& options = {});

/// Advances u_n and v_n one step and compares
/// 𝓔(u₊-v₊, u̇₊-v̇₊, u₊) with 𝓔(u-v, u̇-v̇, u) + κ𝓡(Φu₊, Φu, Φv₊, Φv).
/// Returns |LHS - RHS| / (1 + |LHS|). Requires g ≡ 0.
double energy_change_residual(const StatePair& un, const StatePair& vn, const ProblemSpec& p,
                              const IntegratorConfig& cfg);

/// The remainder 𝓡(u, u', v, v') = 𝓡̃ + 𝓡*(u, v) - 𝓡*(u', v') (arguments
/// already filtered). Exposed for testing.
double energy_remainder(const SpectralField& u, const SpectralField& u_prev,
                        const SpectralField& v, const SpectralField& v_prev,
                        const ProblemSpec& p, const IntegratorConfig& cfg);

}  // namespace qlwave
