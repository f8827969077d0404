#pragma once

// Filter functions φ and ψ₁ of the trigonometric integrator, and sampled
// checks of the admissibility conditions they must satisfy.

#include <string>
#include <string_view>
#include <vector>

namespace qlwave {

/// sin(ξ)/ξ with sinc(0) = 1; Taylor polynomial near zero.
double sinc(double xi) noexcept;

enum class FilterKind { Impulse, HairerLubich, GrimmHochbruck, SincC };

class FilterSpec {
 public:
  static FilterSpec impulse();
  static FilterSpec hairer_lubich();
  static FilterSpec grimm_hochbruck();
  /// φ(ξ) = sinc(cξ), ψ₁(ξ) = sinc(ξ)·sinc(cξ).
  static FilterSpec sinc_c(double c);

  /// Parses "impulse", "hl", "gh" or "sinc:<c>".
  static FilterSpec parse(std::string_view text);

  FilterKind kind() const noexcept { return kind_; }
  double c() const noexcept { return c_; }
  /// Constant c₀ in |1-φ(ξ)| ≤ c₀ξ² and |1-ψ₁(ξ)| ≤ c₀ξ².
  double c0() const noexcept { return c0_; }

  double phi(double xi) const noexcept;
  double psi1(double xi) const noexcept;

  /// Inverse of parse(): "impulse", "hl", "gh", "sinc:2", ...
  std::string id() const;

  friend bool operator==(const FilterSpec&, const FilterSpec&) = default;

 private:
  FilterSpec(FilterKind kind, double c, double c0) : kind_(kind), c_(c), c0_(c0) {}

  FilterKind kind_;
  double c_;
  double c0_;
};

/// 10⁴ log-spaced points in [1e-6, 1e3] plus ξ = 0.
std::vector<double> default_xi_grid();

struct AdmissibilityReport {
  bool assumption1_ok = false;  // boundedness and |1-φ|, |1-ψ₁| ≤ c₀ξ²
  bool assumption2_ok = false;  // ψ₁ = sinc·φ
  bool assumption3_ok = false;  // A₀ sin(ξ/2)² φ(ξ)² ≤ 1-δ
  double worst_margin = 0.0;    // smallest slack over all sampled checks
  double worst_xi = 0.0;
  double assumption3_margin = 0.0;
  double assumption3_xi = 0.0;
  double delta = 0.0;
  double A0 = 0.0;

  bool all_ok() const noexcept { return assumption1_ok && assumption2_ok && assumption3_ok; }
};

/// Checks the three filter assumptions on the sampled ξ grid.
/// Throws ConfigError unless 0 < δ < 1, A₀ ≥ 0 and the grid is nonempty.
AdmissibilityReport check_assumptions(const FilterSpec& spec, double delta, double A0,
                                      const std::vector<double>& xi_grid = default_xi_grid());

/// Smallest c for which sinc:c satisfies the large-data condition: ½√(A₀/(1-δ)).
double min_c_for(double A0, double delta);

struct ScalarInequalityReport {
  double min_margin = 0.0;  // min of LHS - (-1 + δ/2)
  double worst_A = 0.0;
  double worst_xi = 0.0;
  bool certified() const noexcept { return min_margin >= 0.0; }
};

/// Left-hand side A cos(ξ)φ(ξ)² - ¼A² sin(ξ)² φ(ξ)⁴.
double scalar_inequality_lhs(const FilterSpec& spec, double A, double xi) noexcept;

/// Samples A cos(ξ)φ(ξ)² - ¼A² sin(ξ)²φ(ξ)⁴ ≥ -1 + δ/2 on the product grid.
ScalarInequalityReport lemma_scalar_inequality(const FilterSpec& spec, double delta,
                                               const std::vector<double>& A_grid,
                                               const std::vector<double>& xi_grid);

/// n equispaced values covering [-1 + δ/2, A₀ + δ/2].
std::vector<double> coefficient_grid(double A0, double delta, int n);

/// n equispaced values in [lo, hi].
std::vector<double> linear_grid(double lo, double hi, int n);

}  // namespace qlwave
