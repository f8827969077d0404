#include "qlwave/problem.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include "qlwave/errors.hpp"

namespace qlwave {

ProblemSpec::ProblemSpec(std::string name, double kappa, ScalarFunction a, SlopeFunction g,
                         ScalarFunction a_prime)
    : name_(std::move(name)),
      kappa_(kappa),
      a_(std::move(a)),
      g_(std::move(g)),
      a_prime_(std::move(a_prime)) {
  if (!std::isfinite(kappa_)) throw ConfigError("problem: kappa must be finite");
  if (!a_) throw ConfigError("problem: a(u) is required");
  if (std::abs(a_(0.0)) > 1e-14) throw ConfigError("problem: a(0) must vanish");
  if (g_ && std::abs(g_(0.0, 0.0)) > 1e-14) throw ConfigError("problem: g(0,0) must vanish");
}

ProblemSpec model_problem(double kappa) {
  return ProblemSpec(
      "model", kappa, [](double u) { return u; },
      [kappa](double u, double ux) { return ux * ux + kappa * u * u * u; },
      [](double) { return 1.0; });
}

ProblemSpec quasilinear_problem(double kappa) {
  return ProblemSpec(
      "quasilinear", kappa, [](double u) { return u; }, {}, [](double) { return 1.0; });
}

ProblemSpec make_problem(const std::string& name, double kappa) {
  if (name == "model") return model_problem(kappa);
  if (name == "quasilinear") return quasilinear_problem(kappa);
  throw ConfigError("unknown problem '" + name + "' (expected model or quasilinear)");
}

StatePair paper_initial_data(int degree) {
  if (degree < 1) throw ConfigError("paper_initial_data: need K >= 1");
  SpectralField u(degree), udot(degree);
  for (int j = 0; j <= degree; ++j) {
    const double aj = static_cast<double>(j);
    u.set(j, 1.0 / std::sqrt(1.0 + std::pow(aj, 11.0 + 1.0 / 50.0)));
    udot.set(j, 1.0 / std::sqrt(1.0 + std::pow(aj, 9.0 + 1.0 / 50.0)));
  }
  return {std::move(u), std::move(udot)};
}

StatePair smooth_initial_data(int degree) {
  if (degree < 1) throw ConfigError("smooth_initial_data: need K >= 1");
  SpectralField u(degree), udot(degree);
  for (int j = 0; j <= degree; ++j) {
    const double w = std::ldexp(1.0, -j);
    u.set(j, 0.5 * w);
    udot.set(j, 0.25 * w);
  }
  return {std::move(u), std::move(udot)};
}

namespace {

// u(x) by direct summation.
double evaluate(const SpectralField& u, double x) {
  double v = u[0].real();
  for (int j = 1; j <= u.degree(); ++j) {
    const Complex c = u[j];
    v += 2.0 * (c.real() * std::cos(j * x) - c.imag() * std::sin(j * x));
  }
  return v;
}

// Golden-section search for the largest h on [lo, hi].
double refine_max(const std::function<double(double)>& h, double lo, double hi) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  double f1 = h(x1), f2 = h(x2);
  for (int it = 0; it < 80 && b - a > 1e-14; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = h(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = h(x1);
    }
  }
  return std::max(f1, f2);
}

// Largest value of h, from samples on the grid polished around the best
// few local maxima.
double polished_max(const std::vector<double>& samples, const std::function<double(double)>& h) {
  const int n = static_cast<int>(samples.size());
  auto at = [&](int k) { return samples[static_cast<size_t>((k % n + n) % n)]; };
  std::vector<int> peaks;
  for (int k = 0; k < n; ++k)
    if (at(k) >= at(k - 1) && at(k) >= at(k + 1)) peaks.push_back(k);
  std::sort(peaks.begin(), peaks.end(), [&](int a, int b) { return at(a) > at(b); });
  double best = *std::max_element(samples.begin(), samples.end());
  const double step = 2.0 * std::numbers::pi / n;
  for (size_t i = 0; i < std::min<size_t>(peaks.size(), 4); ++i) {
    const double x = GridFunction::node(peaks[i], n);
    best = std::max(best, refine_max(h, x - step, x + step));
  }
  return best;
}

}  // namespace

EllipticityReport ellipticity_report(const ProblemSpec& p, const SpectralField& u, int nodes) {
  if (nodes == 0) nodes = 4 * u.degree() + 1;
  const GridFunction g = synthesize(u, nodes);
  EllipticityReport r;
  r.grid_size = nodes;
  std::vector<double> ka(g.values.size());
  for (size_t k = 0; k < ka.size(); ++k) {
    ka[k] = p.kappa() * p.a(g.values[k]);
    if (!std::isfinite(ka[k])) throw NumericError("ellipticity_report: non-finite kappa*a(u)");
  }
  auto value = [&](double x) { return p.kappa() * p.a(evaluate(u, x)); };
  r.A0_est = polished_max(ka, value);
  std::vector<double> neg(ka.size());
  for (size_t k = 0; k < ka.size(); ++k) neg[k] = -ka[k];
  r.delta_est = 1.0 - polished_max(neg, [&](double x) { return -value(x); });
  r.hyperbolicity_lost = r.delta_est <= 0.0;
  return r;
}

}  // namespace qlwave
