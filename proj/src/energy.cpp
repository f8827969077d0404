#include "qlwave/energy.hpp"

#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <random>

#include "qlwave/errors.hpp"

namespace qlwave {
namespace {

const NormOrder L2(0.0);
const NormOrder H1(1.0);

void require_degree(const SpectralField& f, int k, const char* what) {
  if (f.degree() != k)
    throw ConfigError(fmt::format("{}: field degree {} != K = {}", what, f.degree(), k));
}

// a(u) as a trigonometric polynomial: the degree-K interpolant (fully
// discrete) or an interpolant of degree 2K (semi-discrete).
SpectralField coefficient_field(const SpectralField& u, const ProblemSpec& p, Discretization d) {
  const int degree = d == Discretization::Full ? u.degree() : 2 * u.degree();
  GridFunction g = synthesize(u, 2 * degree + 1);
  for (double& v : g.values) v = p.a(v);
  for (double v : g.values)
    if (!std::isfinite(v)) throw NumericError("non-finite samples of a(u)");
  return interpolate(g, degree);
}

std::vector<double> symbol(double tau, int degree, auto&& m) {
  std::vector<double> s(static_cast<size_t>(degree + 1));
  for (int j = 0; j <= degree; ++j) s[static_cast<size_t>(j)] = m(tau * bracket(j));
  return s;
}

SpectralField scaled(SpectralField f, const std::vector<double>& s) {
  f.scale_modes(s);
  return f;
}

// 𝒫^K in the fully discrete variant, identity otherwise.
SpectralField restrict_to(const SpectralField& f, int k, Discretization d) {
  return d == Discretization::Full ? project(f, k) : f;
}

struct Multipliers {
  Multipliers(const IntegratorConfig& cfg, int degree)
      : cos(symbol(cfg.tau, degree, [](double x) { return std::cos(x); })),
        phi(symbol(cfg.tau, degree, [&](double x) { return cfg.filter.phi(x); })),
        psi1(symbol(cfg.tau, degree, [&](double x) { return cfg.filter.psi1(x); })),
        sin2_phi2(symbol(cfg.tau, degree, [&](double x) {
          const double s = std::sin(x) * cfg.filter.phi(x);
          return s * s;
        })) {}

  std::vector<double> cos, phi, psi1, sin2_phi2;
};

}  // namespace

double U_term(const SpectralField& e, const SpectralField& u, const ProblemSpec& p,
              const IntegratorConfig& cfg, Discretization d) {
  const int k = cfg.K;
  require_degree(e, k, "U_term");
  require_degree(u, k, "U_term");
  const Multipliers m(cfg, 4 * k);

  const SpectralField a = coefficient_field(u, p, d);
  const SpectralField exx = derivative(e, 2);
  const SpectralField prod = dealiased_product(a, exx);

  const double first = inner_product(scaled(exx, m.cos), prod, L2);
  const SpectralField w = scaled(restrict_to(prod, k, d), m.psi1);
  const double second = sobolev_norm_squared(w, H1);
  return first - 0.25 * cfg.tau * cfg.tau * p.kappa() * second;
}

EnergyReport modified_energy(const SpectralField& e, const SpectralField& edot,
                             const SpectralField& u, const ProblemSpec& p,
                             const IntegratorConfig& cfg, Discretization d) {
  const Multipliers m(cfg, cfg.K);
  EnergyReport r;
  const double pn = pair_norm(e, edot, H1);
  r.pair_norm_sq = pn * pn;
  r.U_value = U_term(scaled(e, m.phi), scaled(u, m.phi), p, cfg, d);
  r.E_value = r.pair_norm_sq + p.kappa() * r.U_value;
  return r;
}

SpectralField L_apply(const SpectralField& u, const SpectralField& v, const ProblemSpec& p,
                      const IntegratorConfig& cfg, Discretization d) {
  const int k = cfg.K;
  require_degree(u, k, "L_apply");
  require_degree(v, k, "L_apply");
  const Multipliers m(cfg, 8 * k);
  const double kappa = p.kappa();

  const SpectralField a = coefficient_field(u, p, d);
  const SpectralField phi_v = scaled(v, m.phi);

  SpectralField first = restrict_to(dealiased_product(a, scaled(phi_v, m.cos)), k, d);
  first = project(scaled(first, m.phi), k);

  SpectralField inner = restrict_to(dealiased_product(a, phi_v), k, d);
  inner.scale_modes(m.sin2_phi2);
  SpectralField second = restrict_to(dealiased_product(a, inner), k, d);
  second = project(scaled(second, m.phi), k);

  return kappa * first - 0.25 * kappa * kappa * second;
}

double representation_residual(const SpectralField& e, const SpectralField& u,
                               const ProblemSpec& p, const IntegratorConfig& cfg,
                               Discretization d) {
  const Multipliers m(cfg, cfg.K);
  const double lhs = p.kappa() * U_term(scaled(e, m.phi), scaled(u, m.phi), p, cfg, d);
  const SpectralField exx = derivative(e, 2);
  const double rhs = inner_product(L_apply(scaled(u, m.phi), exx, p, cfg, d), exx, L2);
  return std::abs(lhs - rhs) / (1.0 + std::abs(lhs));
}

PositivityReport positivity_check(const SpectralField& u, const ProblemSpec& p,
                                  const IntegratorConfig& cfg, const PositivityOptions& options) {
  const int k = cfg.K;
  require_degree(u, k, "positivity_check");
  const EllipticityReport ell = ellipticity_report(p, u);

  PositivityReport r;
  r.delta = options.delta.value_or(std::min(ell.delta_est, 1.0));
  r.A0 = options.A0.value_or(std::max(ell.A0_est, 0.0));
  if (!(r.delta > 0.0))
    throw PreconditionError(
        fmt::format("positivity_check: 1 + kappa*a(u) >= delta/2 > 0 fails (min 1 + kappa*a(u) "
                    "= {:.6g})",
                    ell.delta_est));
  if (ell.delta_est < 0.5 * r.delta)
    throw PreconditionError(fmt::format(
        "positivity_check: 1 + kappa*a(u) >= delta/2 fails ({:.6g} < {:.6g})", ell.delta_est,
        0.5 * r.delta));
  if (ell.A0_est > r.A0 + 0.5 * r.delta)
    throw PreconditionError(fmt::format(
        "positivity_check: kappa*a(u) <= A0 + delta/2 fails ({:.6g} > {:.6g})", ell.A0_est,
        r.A0 + 0.5 * r.delta));

  const Multipliers m(cfg, k);
  const SpectralField phi_u = scaled(u, m.phi);
  r.worst_margin = std::numeric_limits<double>::infinity();

  auto probe = [&](const SpectralField& v, std::string label) {
    const double nrm = sobolev_norm_squared(v, L2);
    const double q = (nrm + inner_product(L_apply(phi_u, v, p, cfg), v, L2)) / nrm;
    const double margin = q - r.delta / 8.0;
    if (margin < r.worst_margin) {
      r.worst_margin = margin;
      r.worst_probe = label;
    }
    r.probes.push_back({std::move(label), margin});
  };

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  for (int i = 0; i < options.n_samples; ++i) {
    SpectralField v(k);
    v.set(0, normal(rng));
    for (int j = 1; j <= k; ++j) {
      const double re = normal(rng);
      v.set(j, {re, normal(rng)});
    }
    probe(v * (1.0 / sobolev_norm(v, L2)), fmt::format("random:{}", i));
  }
  if (options.single_mode_probes) {
    for (int j = 0; j <= k; ++j) {
      SpectralField c(k);
      c.set(j, j == 0 ? 1.0 : 0.5);
      probe(c, fmt::format("cos:{}", j));
      if (j > 0) {
        SpectralField s(k);
        s.set(j, {0.0, -0.5});
        probe(s, fmt::format("sin:{}", j));
      }
    }
  }
  return r;
}

namespace {

double remainder_star(const SpectralField& u, const SpectralField& v,
                      const TrigonometricIntegrator& integ, const Multipliers& m) {
  const int k = integ.config().K;
  const double tau = integ.config().tau;
  const double kappa = integ.problem().kappa();

  const SpectralField au = integ.interpolated_a(u);
  const SpectralField av = integ.interpolated_a(v);
  const SpectralField diff = u - v;
  const SpectralField cos_diff = scaled(diff, m.cos);

  const SpectralField A = dealiased_product(au, derivative(diff, 2));
  const SpectralField B = dealiased_product(au - av, derivative(v, 2));
  const SpectralField pA = scaled(project(A, k), m.psi1);
  const SpectralField pB = scaled(project(B, k), m.psi1);

  return inner_product(cos_diff, A, L2) + inner_product(cos_diff, B, H1) +
         0.5 * tau * tau * kappa * inner_product(pA, pB, H1) +
         0.25 * tau * tau * kappa * sobolev_norm_squared(pB, H1);
}

double remainder_impl(const SpectralField& u, const SpectralField& u_prev, const SpectralField& v,
                      const SpectralField& v_prev, const TrigonometricIntegrator& integ,
                      const Multipliers& m) {
  const double tilde =
      inner_product(u - v, integ.nonlinearity(u_prev) - integ.nonlinearity(v_prev), H1) -
      inner_product(u_prev - v_prev, integ.nonlinearity(u) - integ.nonlinearity(v), H1);
  return tilde + remainder_star(u, v, integ, m) - remainder_star(u_prev, v_prev, integ, m);
}

}  // namespace

double energy_remainder(const SpectralField& u, const SpectralField& u_prev,
                        const SpectralField& v, const SpectralField& v_prev,
                        const ProblemSpec& p, const IntegratorConfig& cfg) {
  if (p.has_g()) throw UnsupportedError("energy_remainder: only g == 0 is supported");
  const TrigonometricIntegrator integ(p, cfg);
  return remainder_impl(u, u_prev, v, v_prev, integ, Multipliers(cfg, cfg.K));
}

double energy_change_residual(const StatePair& un, const StatePair& vn, const ProblemSpec& p,
                              const IntegratorConfig& cfg) {
  if (p.has_g())
    throw UnsupportedError(
        "energy_change_residual: the energy identity is implemented for g == 0 only");
  TrigonometricIntegrator integ(p, cfg);
  const StatePair u1 = integ.step(un);
  integ.clear_cache();
  const StatePair v1 = integ.step(vn);

  const Multipliers m(cfg, cfg.K);
  const StatePair d0 = un - vn;
  const StatePair d1 = u1 - v1;
  const double lhs = modified_energy(d1.u, d1.udot, u1.u, p, cfg).E_value;
  const double rhs =
      modified_energy(d0.u, d0.udot, un.u, p, cfg).E_value +
      p.kappa() * remainder_impl(scaled(u1.u, m.phi), scaled(un.u, m.phi), scaled(v1.u, m.phi),
                                 scaled(vn.u, m.phi), integ, m);
  return std::abs(lhs - rhs) / (1.0 + std::abs(lhs));
}

}  // namespace qlwave
