#include "qlwave/filters.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <limits>

#include "qlwave/errors.hpp"

namespace qlwave {

double sinc(double xi) noexcept {
  if (std::abs(xi) < 1e-2) {
    const double x2 = xi * xi;
    return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0));
  }
  return std::sin(xi) / xi;
}

namespace {

constexpr double kSlack = 1e-15;

// c₀ estimated as sup |1-φ|/ξ², |1-ψ₁|/ξ² on the default grid.
double estimate_c0(const FilterSpec& spec) {
  double c0 = 0.0;
  for (double xi : default_xi_grid()) {
    if (xi == 0.0) continue;
    const double x2 = xi * xi;
    c0 = std::max({c0, std::abs(1.0 - spec.phi(xi)) / x2, std::abs(1.0 - spec.psi1(xi)) / x2});
  }
  return c0;
}

}  // namespace

FilterSpec FilterSpec::impulse() {
  FilterSpec spec(FilterKind::Impulse, 0.0, 0.0);
  spec.c0_ = estimate_c0(spec);
  return spec;
}

FilterSpec FilterSpec::hairer_lubich() { return {FilterKind::HairerLubich, 0.0, 1.0}; }

FilterSpec FilterSpec::grimm_hochbruck() { return {FilterKind::GrimmHochbruck, 1.0, 1.0}; }

FilterSpec FilterSpec::sinc_c(double c) {
  if (!std::isfinite(c) || c < 0.0) throw ConfigError("sinc filter: c must be finite and >= 0");
  return {FilterKind::SincC, c, std::max(1.0, (c * c + 1.0) / 6.0)};
}

FilterSpec FilterSpec::parse(std::string_view text) {
  if (text == "impulse") return impulse();
  if (text == "hl") return hairer_lubich();
  if (text == "gh") return grimm_hochbruck();
  if (text.starts_with("sinc:")) {
    const std::string_view num = text.substr(5);
    double c = 0.0;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), c);
    if (ec == std::errc() && ptr == num.data() + num.size() && !num.empty()) return sinc_c(c);
  }
  throw ConfigError(fmt::format("unknown filter '{}' (expected impulse, hl, gh or sinc:<c>)", text));
}

double FilterSpec::phi(double xi) const noexcept {
  switch (kind_) {
    case FilterKind::Impulse:
    case FilterKind::HairerLubich: return 1.0;
    case FilterKind::GrimmHochbruck: return sinc(xi);
    case FilterKind::SincC: return sinc(c_ * xi);
  }
  return 1.0;
}

double FilterSpec::psi1(double xi) const noexcept {
  switch (kind_) {
    case FilterKind::Impulse: return 1.0;
    case FilterKind::HairerLubich: return sinc(xi);
    case FilterKind::GrimmHochbruck: return sinc(xi) * sinc(xi);
    case FilterKind::SincC: return sinc(xi) * sinc(c_ * xi);
  }
  return 1.0;
}

std::string FilterSpec::id() const {
  switch (kind_) {
    case FilterKind::Impulse: return "impulse";
    case FilterKind::HairerLubich: return "hl";
    case FilterKind::GrimmHochbruck: return "gh";
    case FilterKind::SincC: return fmt::format("sinc:{}", c_);
  }
  return "?";
}

std::vector<double> default_xi_grid() {
  constexpr int n = 10000;
  std::vector<double> grid;
  grid.reserve(n + 1);
  grid.push_back(0.0);
  const double lo = std::log(1e-6), hi = std::log(1e3);
  for (int i = 0; i < n; ++i) grid.push_back(std::exp(lo + (hi - lo) * i / (n - 1)));
  return grid;
}

AdmissibilityReport check_assumptions(const FilterSpec& spec, double delta, double A0,
                                      const std::vector<double>& xi_grid) {
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("check_assumptions: need 0 < delta < 1");
  if (!(A0 >= 0.0) || !std::isfinite(A0)) throw ConfigError("check_assumptions: need A0 >= 0");
  if (xi_grid.empty()) throw ConfigError("check_assumptions: empty xi grid");

  AdmissibilityReport r;
  r.delta = delta;
  r.A0 = A0;
  r.worst_margin = std::numeric_limits<double>::infinity();
  r.assumption3_margin = std::numeric_limits<double>::infinity();
  double m1 = std::numeric_limits<double>::infinity();
  double m2 = std::numeric_limits<double>::infinity();

  auto track = [&](double margin, double xi) {
    if (margin < r.worst_margin) {
      r.worst_margin = margin;
      r.worst_xi = xi;
    }
  };

  for (double xi : xi_grid) {
    const double phi = spec.phi(xi), psi = spec.psi1(xi);
    const double quad = spec.c0() * xi * xi;
    const double a1 = std::min({1.0 - std::abs(phi), quad - std::abs(1.0 - phi),
                                1.0 - std::abs(psi), quad - std::abs(1.0 - psi)});
    m1 = std::min(m1, a1);
    track(a1, xi);

    const double a2 = 1e-12 - std::abs(psi - sinc(xi) * phi);
    m2 = std::min(m2, a2);
    track(a2, xi);

    const double s = std::sin(0.5 * xi);
    const double a3 = (1.0 - delta) - A0 * s * s * phi * phi;
    if (a3 < r.assumption3_margin) {
      r.assumption3_margin = a3;
      r.assumption3_xi = xi;
    }
    track(a3, xi);
  }
  r.assumption1_ok = m1 >= -kSlack;
  r.assumption2_ok = m2 >= 0.0;
  r.assumption3_ok = r.assumption3_margin >= 0.0;
  return r;
}

double min_c_for(double A0, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("min_c_for: need 0 < delta < 1");
  if (!(A0 >= 0.0)) throw ConfigError("min_c_for: need A0 >= 0");
  return 0.5 * std::sqrt(A0 / (1.0 - delta));
}

double scalar_inequality_lhs(const FilterSpec& spec, double A, double xi) noexcept {
  const double phi2 = spec.phi(xi) * spec.phi(xi);
  const double s = std::sin(xi);
  return A * std::cos(xi) * phi2 - 0.25 * A * A * s * s * phi2 * phi2;
}

ScalarInequalityReport lemma_scalar_inequality(const FilterSpec& spec, double delta,
                                               const std::vector<double>& A_grid,
                                               const std::vector<double>& xi_grid) {
  ScalarInequalityReport r;
  r.min_margin = std::numeric_limits<double>::infinity();
  const double rhs = -1.0 + 0.5 * delta;
  for (double xi : xi_grid) {
    for (double A : A_grid) {
      const double margin = scalar_inequality_lhs(spec, A, xi) - rhs;
      if (margin < r.min_margin) {
        r.min_margin = margin;
        r.worst_A = A;
        r.worst_xi = xi;
      }
    }
  }
  return r;
}

std::vector<double> linear_grid(double lo, double hi, int n) {
  if (n < 1) throw ConfigError("linear_grid: need n >= 1");
  if (n == 1) return {lo};
  std::vector<double> grid(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) grid[static_cast<size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  return grid;
}

std::vector<double> coefficient_grid(double A0, double delta, int n) {
  return linear_grid(-1.0 + 0.5 * delta, A0 + 0.5 * delta, n);
}

}  // namespace qlwave
