#include "qlwave/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "qlwave/errors.hpp"

namespace qlwave {

SpectralField::SpectralField(int degree) : degree_(degree) {
  if (degree < 0) throw ConfigError("SpectralField: negative degree " + std::to_string(degree));
  coeffs_.assign(static_cast<size_t>(2 * degree + 1), Complex{});
}

SpectralField SpectralField::from_coefficients(std::vector<Complex> coeffs) {
  if (coeffs.size() % 2 == 0)
    throw ConfigError("SpectralField: coefficient count must be odd (j = -K..K)");
  const int k = static_cast<int>(coeffs.size() / 2);
  SpectralField f(k);
  for (int j = 0; j <= k; ++j) {
    const Complex pos = coeffs[static_cast<size_t>(k + j)];
    const Complex neg = coeffs[static_cast<size_t>(k - j)];
    f.set(j, pos == std::conj(neg) ? pos : 0.5 * (pos + std::conj(neg)));
  }
  return f;
}

SpectralField SpectralField::from_nonnegative(std::span<const Complex> coeffs) {
  if (coeffs.empty()) return SpectralField(0);
  SpectralField f(static_cast<int>(coeffs.size()) - 1);
  for (int j = 0; j <= f.degree_; ++j) f.set(j, coeffs[static_cast<size_t>(j)]);
  return f;
}

void SpectralField::set(int j, Complex value) {
  if (j < -degree_ || j > degree_)
    throw ConfigError("SpectralField::set: mode " + std::to_string(j) + " outside degree " +
                      std::to_string(degree_));
  if (j == 0) {
    coeffs_[static_cast<size_t>(degree_)] = {value.real(), 0.0};
    return;
  }
  if (j < 0) {
    j = -j;
    value = std::conj(value);
  }
  coeffs_[static_cast<size_t>(degree_ + j)] = value;
  coeffs_[static_cast<size_t>(degree_ - j)] = std::conj(value);
}

void SpectralField::scale_modes(std::span<const double> symbol) {
  if (static_cast<int>(symbol.size()) <= degree_)
    throw ConfigError("scale_modes: symbol shorter than field degree");
  for (int j = -degree_; j <= degree_; ++j)
    coeffs_[static_cast<size_t>(j + degree_)] *= symbol[static_cast<size_t>(std::abs(j))];
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  if (other.degree_ > degree_) *this = project(*this, other.degree_);
  for (int j = -other.degree_; j <= other.degree_; ++j)
    coeffs_[static_cast<size_t>(j + degree_)] += other[j];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  if (other.degree_ > degree_) *this = project(*this, other.degree_);
  for (int j = -other.degree_; j <= other.degree_; ++j)
    coeffs_[static_cast<size_t>(j + degree_)] -= other[j];
  return *this;
}

SpectralField& SpectralField::operator*=(double factor) {
  for (auto& c : coeffs_) c *= factor;
  return *this;
}

double GridFunction::node(int k, int n) { return 2.0 * std::numbers::pi * k / n; }

NormOrder::NormOrder(double s) : s_(s) {
  if (!std::isfinite(s) || s < 0.0) throw ConfigError("NormOrder: s must be finite and >= 0");
}

double bracket(int j) noexcept { return std::sqrt(static_cast<double>(j) * j + 1.0); }

int transform_size(int n) {
  for (int m = std::max(n, 1);; ++m) {
    int r = m;
    for (int p : {2, 3, 5})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

namespace {

std::vector<Complex> half_of(const SpectralField& f) {
  const auto c = f.coeffs();
  return {c.begin() + f.degree(), c.end()};
}

GridFunction to_grid(const SpectralField& f, int n) {
  GridFunction g;
  g.values.resize(static_cast<size_t>(n));
  detail::half_spectrum_to_grid(half_of(f), n, g.values);
  return g;
}

SpectralField from_grid(std::span<const double> values, int degree) {
  std::vector<Complex> half(values.size() / 2 + 1);
  detail::grid_to_half_spectrum(values, half);
  half.resize(static_cast<size_t>(degree + 1));
  return SpectralField::from_nonnegative(half);
}

}  // namespace

GridFunction synthesize(const SpectralField& f, int n) {
  if (n < 2 * f.degree() + 1)
    throw AliasingError("synthesize: " + std::to_string(n) + " nodes cannot resolve degree " +
                        std::to_string(f.degree()));
  return to_grid(f, n);
}

SpectralField interpolate(const GridFunction& g, int degree) {
  if (degree < 0 || g.nodes() != 2 * degree + 1)
    throw ConfigError("interpolate: degree-" + std::to_string(degree) + " interpolation needs " +
                      std::to_string(2 * degree + 1) + " nodes, got " +
                      std::to_string(g.nodes()));
  return from_grid(g.values, degree);
}

SpectralField project(const SpectralField& f, int degree) {
  SpectralField out(degree);
  const int common = std::min(degree, f.degree());
  for (int j = 0; j <= common; ++j) out.set(j, f[j]);
  return out;
}

std::vector<double> multiplier_symbol(const std::function<double(double)>& m, int max_degree,
                                      double scale) {
  std::vector<double> symbol(static_cast<size_t>(max_degree + 1));
  for (int j = 0; j <= max_degree; ++j) {
    const double arg = scale * bracket(j);
    const double v = m(arg);
    if (!std::isfinite(v))
      throw NumericError("multiplier: non-finite value at argument " + std::to_string(arg));
    symbol[static_cast<size_t>(j)] = v;
  }
  return symbol;
}

SpectralField multiplier(const std::function<double(double)>& m, const SpectralField& f,
                         double scale) {
  SpectralField out = f;
  out.scale_modes(multiplier_symbol(m, f.degree(), scale));
  return out;
}

SpectralField derivative(const SpectralField& f, int order) {
  if (order < 1) throw ConfigError("derivative: order must be >= 1");
  SpectralField out(f.degree());
  for (int j = 1; j <= f.degree(); ++j) {
    // (ij)^order is exactly ±j^order or ±i·j^order.
    const double mag = std::pow(static_cast<double>(j), order);
    Complex factor;
    switch (order % 4) {
      case 0: factor = {mag, 0.0}; break;
      case 1: factor = {0.0, mag}; break;
      case 2: factor = {-mag, 0.0}; break;
      default: factor = {0.0, -mag}; break;
    }
    out.set(j, factor * f[j]);
  }
  return out;
}

SpectralField product_direct(const SpectralField& f, const SpectralField& g) {
  const int kf = f.degree(), kg = g.degree();
  SpectralField out(kf + kg);
  std::vector<Complex> acc(static_cast<size_t>(kf + kg + 1));
  for (int p = -kf; p <= kf; ++p) {
    const Complex fp = f[p];
    for (int q = std::max(-kg, -p); q <= kg; ++q) acc[static_cast<size_t>(p + q)] += fp * g[q];
  }
  for (int j = 0; j <= kf + kg; ++j) out.set(j, acc[static_cast<size_t>(j)]);
  return out;
}

SpectralField product_transform(const SpectralField& f, const SpectralField& g, int nodes) {
  const int degree = f.degree() + g.degree();
  const int needed = 2 * degree + 1;
  const int n = transform_size(std::max(nodes, needed));
  GridFunction gf = to_grid(f, n);
  const GridFunction gg = to_grid(g, n);
  for (size_t k = 0; k < gf.values.size(); ++k) gf.values[k] *= gg.values[k];
  return from_grid(gf.values, degree);
}

SpectralField dealiased_product(const SpectralField& f, const SpectralField& g) {
  if (f.degree() + g.degree() <= 32) return product_direct(f, g);
  return product_transform(f, g);
}

double sobolev_norm_squared(const SpectralField& f, NormOrder s) {
  double sum = std::norm(f[0]);
  for (int j = 1; j <= f.degree(); ++j)
    sum += 2.0 * std::pow(bracket(j), 2.0 * s.value()) * std::norm(f[j]);
  return sum;
}

double sobolev_norm(const SpectralField& f, NormOrder s) {
  return std::sqrt(sobolev_norm_squared(f, s));
}

double pair_norm(const SpectralField& u, const SpectralField& udot, NormOrder s) {
  return std::sqrt(sobolev_norm_squared(u, NormOrder(s.value() + 1.0)) +
                   sobolev_norm_squared(udot, s));
}

double inner_product(const SpectralField& f, const SpectralField& g, NormOrder s) {
  const int k = std::min(f.degree(), g.degree());
  double sum = (std::conj(f[0]) * g[0]).real();
  for (int j = 1; j <= k; ++j)
    sum += 2.0 * std::pow(bracket(j), 2.0 * s.value()) * (std::conj(f[j]) * g[j]).real();
  return sum;
}

}  // namespace qlwave
