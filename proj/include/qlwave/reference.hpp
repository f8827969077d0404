#pragma once

// Reference solutions at the same spectral degree, for isolating temporal
// errors, plus error measurement in H²×H¹.

#include <limits>

#include "qlwave/integrator.hpp"

namespace qlwave {

struct ReferenceConfig {
  /// τ_ref = τ_base / refine_factor.
  int refine_factor = 64;
  /// Also integrate with the gh filter and compare.
  bool cross_check = false;
  FilterSpec filter = FilterSpec::sinc_c(2.0);
  /// The τ_ref vs 2τ_ref difference must stay below
  /// tolerance · max(1, ⫼ref⫼₁); otherwise ReferenceError.
  double tolerance = 1e-6;
  double max_norm = 1e6;

  void validate() const;
};

struct ReferenceResult {
  StatePair state;
  double tau_ref = 0.0;
  long n_steps = 0;
  /// ⫼ref(τ_ref) - ref(2τ_ref)⫼₁.
  double refinement_change = 0.0;
  /// Richardson estimate of the reference error, refinement_change / 3.
  double estimated_error = 0.0;
  /// ⫼ref - ref_crosscheck⫼₁, NaN when cross_check is off.
  double cross_difference = std::numeric_limits<double>::quiet_NaN();
  bool reliable = true;
};

/// Integrates to time T with τ_ref = T / n_ref, n_ref even and
/// n_ref ≥ T·refine_factor/base_tau.
ReferenceResult reference_solution(const ProblemSpec& p, const StatePair& state0, double T,
                                   double base_tau, const ReferenceConfig& rc = {});

/// ⫼state - ref⫼₁; throws ConfigError on degree mismatch.
double error_H2H1(const StatePair& state, const StatePair& ref);

/// One step of the method minus the reference over [0, τ], in ⫼·⫼₁.
/// Requires the last 10% of modes of u and u̇ to carry < 1e-8 of their L² norm.
/// The one-step reference is cheap, so the default refinement is finer.
double local_error(const ProblemSpec& p, const StatePair& state0, double tau,
                   const FilterSpec& filter,
                   const ReferenceConfig& rc = ReferenceConfig{.refine_factor = 512});

/// 𝒫^K applied to both components (zero-pads when degree grows).
StatePair project_state(const StatePair& s, int degree);

/// Fraction of ‖f‖₀ carried by the modes |j| > 0.9·degree.
double spectral_tail_fraction(const SpectralField& f);

}  // namespace qlwave
