#pragma once

// Quasilinear wave problems ∂ₜ²u = ∂ₓ²u - u + κ a(u) ∂ₓ²u + κ g(u, ∂ₓu).

#include <functional>
#include <string>

#include "qlwave/spectral.hpp"

namespace qlwave {

struct StatePair {
  SpectralField u;
  SpectralField udot;

  int degree() const noexcept { return u.degree(); }

  StatePair& operator-=(const StatePair& o) {
    u -= o.u;
    udot -= o.udot;
    return *this;
  }
  friend StatePair operator-(StatePair a, const StatePair& b) { return a -= b; }
  friend bool operator==(const StatePair&, const StatePair&) = default;
};

using ScalarFunction = std::function<double(double)>;
using SlopeFunction = std::function<double(double, double)>;

class ProblemSpec {
 public:
  /// g may be empty, meaning g ≡ 0. Derivative closures are optional.
  /// Throws ConfigError unless a(0) = 0 and g(0,0) = 0.
  ProblemSpec(std::string name, double kappa, ScalarFunction a, SlopeFunction g = {},
              ScalarFunction a_prime = {});

  const std::string& name() const noexcept { return name_; }
  double kappa() const noexcept { return kappa_; }

  double a(double u) const { return a_(u); }
  double g(double u, double ux) const { return g_ ? g_(u, ux) : 0.0; }
  bool has_g() const noexcept { return static_cast<bool>(g_); }
  const ScalarFunction& a_prime() const noexcept { return a_prime_; }

 private:
  std::string name_;
  double kappa_;
  ScalarFunction a_;
  SlopeFunction g_;
  ScalarFunction a_prime_;
};

/// a(u) = u, g(u, uₓ) = uₓ² + κu³.
ProblemSpec model_problem(double kappa);

/// a(u) = u, g ≡ 0; the setting of the energy identities.
ProblemSpec quasilinear_problem(double kappa);

/// Looks up "model" or "quasilinear".
ProblemSpec make_problem(const std::string& name, double kappa);

/// û₀_j = (1+|j|^{11.02})^{-1/2}, u̇₀_j = (1+|j|^{9.02})^{-1/2}, |j| ≤ K.
/// Lies in H⁵×H⁴ but not in H^{5.01}×H^{4.01}.
StatePair paper_initial_data(int degree);

/// Analytic data û₀_j = ½·2^{-|j|}, u̇₀_j = ¼·2^{-|j|}, |j| ≤ K; used where a
/// fully resolved start is required.
StatePair smooth_initial_data(int degree);

struct EllipticityReport {
  double delta_est = 1.0;  // min 1 + κ a(u)
  double A0_est = 0.0;     // max κ a(u)
  int grid_size = 0;
  bool hyperbolicity_lost = false;  // delta_est ≤ 0
};

/// Samples κ a(u) on N equispaced nodes; N = 0 selects 4K+1.
EllipticityReport ellipticity_report(const ProblemSpec& p, const SpectralField& u, int nodes = 0);

}  // namespace qlwave
