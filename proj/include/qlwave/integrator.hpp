#pragma once

// Fully discrete trigonometric integrator for ∂ₜ²u = -Ω²u + κ f(u) with a
// Fourier spectral Galerkin discretization of degree K.
//
// One step reads
//
//   u₁ = cos(τΩ)u₀ + τ sinc(τΩ)u̇₀ + ½τ² sinc(τΩ) κ f̂(u₀)
//   u̇₁ = -Ω sin(τΩ)u₀ + cos(τΩ)u̇₀ + ½τ cos(τΩ) κ f̂(u₀) + ½τ κ f̂(u₁)
//
// with f̂(u) = 𝒫^K Ψ₁ f^K(Φu), f^K(u) = a^K(u)∂ₓ²u + g^K(u, ∂ₓu), Φ = φ(τΩ),
// Ψ₁ = ψ₁(τΩ), and a^K, g^K trigonometric interpolants on 2K+1 nodes.

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "qlwave/filters.hpp"
#include "qlwave/problem.hpp"
#include "qlwave/spectral.hpp"

namespace qlwave {

struct IntegratorConfig {
  double tau = 0.1;
  int K = 32;
  FilterSpec filter = FilterSpec::sinc_c(2.0);
  /// Grid size for the exact a^K(u)·∂ₓ²u product; 0 picks a transform-friendly
  /// size ≥ 4K+1 (direct convolution for small K).
  int dealias_nodes = 0;
  /// User guard standing in for the non-constructive step-size bound τ₀.
  double tau_max = std::numeric_limits<double>::infinity();
  /// Reuse f̂(u_{n+1}) from step n as f̂(u_n) in step n+1.
  bool fsal = true;
  /// evolve() aborts once ⫼(u, u̇)⫼₁ exceeds this value.
  double max_norm = 1e6;

  /// Throws ConfigError on invalid settings.
  void validate() const;
};

/// Per-|j| multiplier tables for a fixed τ and degree.
struct PropagatorSymbols {
  std::vector<double> cos;        // cos(τ⟨j⟩)
  std::vector<double> tau_sinc;   // τ sinc(τ⟨j⟩)
  std::vector<double> omega_sin;  // ⟨j⟩ sin(τ⟨j⟩)
  std::vector<double> sinc;       // sinc(τ⟨j⟩)
  std::vector<double> phi;        // φ(τ⟨j⟩)
  std::vector<double> psi1;       // ψ₁(τ⟨j⟩), up to degree 2K

  static PropagatorSymbols make(double tau, int degree, const FilterSpec& filter);
};

/// Called after each completed step n ≥ 1 with t = nτ.
using StepObserver = std::function<void(long n, double t, const StatePair& state)>;

class TrigonometricIntegrator {
 public:
  TrigonometricIntegrator(ProblemSpec problem, IntegratorConfig config);

  const ProblemSpec& problem() const noexcept { return problem_; }
  const IntegratorConfig& config() const noexcept { return config_; }
  const PropagatorSymbols& symbols() const noexcept { return symbols_; }

  /// a^K(u) = 𝓘^K(a ∘ u).
  SpectralField interpolated_a(const SpectralField& u) const;
  /// f^K(u), degree 2K.
  SpectralField nonlinearity(const SpectralField& u) const;
  /// f̂^K(u) = 𝒫^K(Ψ₁ f^K(Φu)), degree K.
  SpectralField filtered_nonlinearity(const SpectralField& u) const;

  /// One step of the one-step form. With fsal enabled the trailing f̂
  /// evaluation is kept for the next call on the returned state.
  StatePair step(const StatePair& state);
  /// The same step as kick, exact rotation, kick.
  StatePair step_split(const StatePair& state) const;

  /// n_steps steps; throws DivergenceError with the failing step index.
  StatePair evolve(StatePair state, long n_steps, const StepObserver& observer = {});

  void clear_cache() { cache_.reset(); }

 private:
  struct Cached {
    SpectralField u;
    SpectralField fhat;
  };

  ProblemSpec problem_;
  IntegratorConfig config_;
  PropagatorSymbols symbols_;
  std::optional<Cached> cache_;
};

/// f^K(u) with default dealiasing.
SpectralField f_K(const SpectralField& u, const ProblemSpec& p);
SpectralField fhat_K(const SpectralField& u, const ProblemSpec& p, const IntegratorConfig& cfg);

/// Exact flow of ∂ₜ²u = -Ω²u over time t:
/// (cos(tΩ)u + t sinc(tΩ)u̇, -Ω sin(tΩ)u + cos(tΩ)u̇).
StatePair linear_propagator(const StatePair& state, double t);

StatePair step(const StatePair& state, const ProblemSpec& p, const IntegratorConfig& cfg);
StatePair evolve(const StatePair& state0, const ProblemSpec& p, const IntegratorConfig& cfg,
                 long n_steps, const StepObserver& observer = {});

/// True when every coefficient of u and u̇ is finite.
bool is_finite(const StatePair& state) noexcept;

}  // namespace qlwave
