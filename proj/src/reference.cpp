#include "qlwave/reference.hpp"

#include <cmath>
#include <fmt/format.h>

#include "qlwave/errors.hpp"

namespace qlwave {

void ReferenceConfig::validate() const {
  if (refine_factor < 2) throw ConfigError("reference: refine_factor must be >= 2");
  if (!(tolerance > 0.0)) throw ConfigError("reference: tolerance must be > 0");
}

namespace {

StatePair run(const ProblemSpec& p, const StatePair& s0, const FilterSpec& filter, double tau,
              long n, double max_norm) {
  IntegratorConfig cfg;
  cfg.tau = tau;
  cfg.K = s0.degree();
  cfg.filter = filter;
  cfg.max_norm = max_norm;
  return TrigonometricIntegrator(p, cfg).evolve(s0, n);
}

}  // namespace

ReferenceResult reference_solution(const ProblemSpec& p, const StatePair& state0, double T,
                                   double base_tau, const ReferenceConfig& rc) {
  rc.validate();
  if (!(T > 0.0)) throw ConfigError("reference_solution: T must be > 0");
  if (!(base_tau > 0.0)) throw ConfigError("reference_solution: base tau must be > 0");

  long n = static_cast<long>(std::ceil(T * rc.refine_factor / base_tau - 1e-9));
  if (n % 2 != 0) ++n;

  ReferenceResult r;
  r.n_steps = n;
  r.tau_ref = T / static_cast<double>(n);
  try {
    r.state = run(p, state0, rc.filter, r.tau_ref, n, rc.max_norm);
    const StatePair coarse = run(p, state0, rc.filter, 2.0 * r.tau_ref, n / 2, rc.max_norm);
    r.refinement_change = error_H2H1(r.state, coarse);
  } catch (const DivergenceError& e) {
    throw ReferenceError(fmt::format("reference solution diverged: {}", e.what()));
  }
  r.estimated_error = r.refinement_change / 3.0;

  const double scale = std::max(1.0, pair_norm(r.state.u, r.state.udot, NormOrder(1.0)));
  if (!(r.refinement_change <= rc.tolerance * scale))
    throw ReferenceError(fmt::format(
        "reference not converged: halving tau_ref = {:.3g} changes the result by {:.3e} "
        "(tolerance {:.3e})",
        r.tau_ref, r.refinement_change, rc.tolerance * scale));

  if (rc.cross_check) {
    try {
      const StatePair other =
          run(p, state0, FilterSpec::grimm_hochbruck(), r.tau_ref, n, rc.max_norm);
      r.cross_difference = error_H2H1(r.state, other);
      r.reliable = r.cross_difference <= 10.0 * r.refinement_change;
    } catch (const DivergenceError&) {
      r.reliable = false;
    }
  }
  return r;
}

double error_H2H1(const StatePair& state, const StatePair& ref) {
  if (state.u.degree() != ref.u.degree() || state.udot.degree() != ref.udot.degree())
    throw ConfigError(fmt::format("error_H2H1: degree mismatch ({} vs {})", state.degree(),
                                  ref.degree()));
  const StatePair d = state - ref;
  return pair_norm(d.u, d.udot, NormOrder(1.0));
}

StatePair project_state(const StatePair& s, int degree) {
  return {project(s.u, degree), project(s.udot, degree)};
}

double spectral_tail_fraction(const SpectralField& f) {
  const double total = sobolev_norm_squared(f, NormOrder(0.0));
  if (total == 0.0) return 0.0;
  const int start = static_cast<int>(std::floor(0.9 * f.degree())) + 1;
  double tail = 0.0;
  for (int j = std::max(start, 1); j <= f.degree(); ++j) tail += 2.0 * std::norm(f[j]);
  return std::sqrt(tail / total);
}

double local_error(const ProblemSpec& p, const StatePair& state0, double tau,
                   const FilterSpec& filter, const ReferenceConfig& rc) {
  for (const SpectralField* f : {&state0.u, &state0.udot}) {
    const double tail = spectral_tail_fraction(*f);
    if (!(tail < 1e-8))
      throw PreconditionError(fmt::format(
          "local_error: initial data not resolved (spectral tail fraction {:.3e} >= 1e-8)", tail));
  }
  IntegratorConfig cfg;
  cfg.tau = tau;
  cfg.K = state0.degree();
  cfg.filter = filter;
  const StatePair one = TrigonometricIntegrator(p, cfg).step(state0);
  const ReferenceResult ref = reference_solution(p, state0, tau, tau, rc);
  return error_H2H1(one, ref.state);
}

}  // namespace qlwave
