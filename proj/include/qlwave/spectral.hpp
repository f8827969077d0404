#pragma once

// Real trigonometric polynomials on the 2π-periodic torus.
//
// A SpectralField of degree K stores the full coefficient range j = -K..K
// of v(x) = Σ_j v̂_j e^{ijx}. Fields are always real-valued, so the
// coefficients satisfy v̂_{-j} = conj(v̂_j); every constructor and mutator
// maintains that symmetry.

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace qlwave {

using Complex = std::complex<double>;

class SpectralField {
 public:
  SpectralField() : SpectralField(0) {}
  explicit SpectralField(int degree);

  /// Builds a field from coefficients ordered j = -K..K (size 2K+1).
  /// Input that is not exactly Hermitian is replaced by its real part
  /// (c_j + conj(c_{-j})) / 2.
  static SpectralField from_coefficients(std::vector<Complex> coeffs);

  /// Builds a field from c_0..c_K; negative modes are mirrored.
  /// The imaginary part of c_0 is dropped.
  static SpectralField from_nonnegative(std::span<const Complex> coeffs);

  int degree() const noexcept { return degree_; }

  /// Coefficient of mode j; zero outside -K..K.
  Complex operator[](int j) const noexcept {
    return (j < -degree_ || j > degree_) ? Complex{} : coeffs_[j + degree_];
  }

  /// Sets mode j and its mirror -j. Setting mode 0 keeps the real part only.
  void set(int j, Complex value);

  /// Coefficients ordered j = -K..K.
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }

  /// Applies a per-|j| real factor. symbol.size() must be > degree().
  /// Used for all Fourier multipliers; keeps the field real.
  void scale_modes(std::span<const double> symbol);

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double factor);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(SpectralField a, double s) { return a *= s; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }
  friend SpectralField operator-(SpectralField a) { return a *= -1.0; }

  /// Exact (bitwise) coefficient equality, including the degree.
  friend bool operator==(const SpectralField& a, const SpectralField& b) = default;

 private:
  int degree_;
  std::vector<Complex> coeffs_;
};

/// Values of a real field at the equispaced nodes x_k = 2πk/N.
struct GridFunction {
  std::vector<double> values;

  int nodes() const noexcept { return static_cast<int>(values.size()); }
  static double node(int k, int n);
};

/// Sobolev index s ≥ 0.
class NormOrder {
 public:
  explicit NormOrder(double s);
  double value() const noexcept { return s_; }

 private:
  double s_;
};

/// ⟨j⟩ = √(j²+1).
double bracket(int j) noexcept;

/// Evaluates f at N equispaced nodes. Requires N ≥ 2·degree(f)+1.
GridFunction synthesize(const SpectralField& f, int n);

/// Degree-K trigonometric interpolant through samples on N = 2K+1 nodes.
SpectralField interpolate(const GridFunction& g, int degree);

/// L²-orthogonal projection onto degree K (modes |j| ≤ K kept). If K
/// exceeds the degree of f the field is zero-padded instead.
SpectralField project(const SpectralField& f, int degree);

/// Fourier multiplier m(scale·⟨j⟩) applied mode by mode; throws
/// NumericError if m is not finite at one of the arguments.
SpectralField multiplier(const std::function<double(double)>& m, const SpectralField& f,
                         double scale = 1.0);

/// Precomputed multiplier table m(scale·⟨j⟩), j = 0..max_degree.
std::vector<double> multiplier_symbol(const std::function<double(double)>& m, int max_degree,
                                      double scale = 1.0);

/// ∂ₓ^order f.
SpectralField derivative(const SpectralField& f, int order);

/// Exact product of two fields (degree K₁+K₂, no aliasing).
SpectralField dealiased_product(const SpectralField& f, const SpectralField& g);

/// Product by direct coefficient convolution, O(K₁K₂).
SpectralField product_direct(const SpectralField& f, const SpectralField& g);

/// Product through transforms on a grid of at least `nodes` points;
/// nodes = 0 chooses a transform-friendly size ≥ 2(K₁+K₂)+1.
SpectralField product_transform(const SpectralField& f, const SpectralField& g, int nodes = 0);

/// ‖f‖_s² = Σ ⟨j⟩^{2s} |f̂_j|².
double sobolev_norm(const SpectralField& f, NormOrder s);
double sobolev_norm_squared(const SpectralField& f, NormOrder s);

/// ⫼(u, u̇)⫼_s = (‖u‖²_{s+1} + ‖u̇‖²_s)^{1/2}.
double pair_norm(const SpectralField& u, const SpectralField& udot, NormOrder s);

/// ⟨f, g⟩_s = Σ ⟨j⟩^{2s} conj(f̂_j) ĝ_j (real for real fields).
double inner_product(const SpectralField& f, const SpectralField& g, NormOrder s);

/// Smallest size ≥ n whose prime factors are 2, 3 and 5.
int transform_size(int n);

}  // namespace qlwave
