#include "qlwave/integrator.hpp"

#include <cmath>
#include <fmt/format.h>

#include "qlwave/errors.hpp"

namespace qlwave {

void IntegratorConfig::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ConfigError("integrator: tau must be > 0");
  if (tau > tau_max)
    throw ConfigError(fmt::format("integrator: tau = {} exceeds guard tau_max = {}", tau, tau_max));
  if (K < 1) throw ConfigError("integrator: K must be >= 1");
  if (dealias_nodes != 0 && dealias_nodes < 4 * K + 1)
    throw ConfigError(fmt::format("integrator: dealias_nodes = {} < 4K+1 = {}", dealias_nodes,
                                  4 * K + 1));
  if (!(max_norm > 0.0)) throw ConfigError("integrator: max_norm must be > 0");
}

PropagatorSymbols PropagatorSymbols::make(double tau, int degree, const FilterSpec& filter) {
  PropagatorSymbols s;
  const auto n = static_cast<size_t>(degree + 1);
  s.cos.resize(n);
  s.tau_sinc.resize(n);
  s.omega_sin.resize(n);
  s.sinc.resize(n);
  s.phi.resize(n);
  for (int j = 0; j <= degree; ++j) {
    const auto i = static_cast<size_t>(j);
    const double w = bracket(j);
    const double x = tau * w;
    s.cos[i] = std::cos(x);
    s.sinc[i] = qlwave::sinc(x);
    s.tau_sinc[i] = tau * s.sinc[i];
    s.omega_sin[i] = w * std::sin(x);
    s.phi[i] = filter.phi(x);
  }
  s.psi1.resize(static_cast<size_t>(2 * degree + 1));
  for (int j = 0; j <= 2 * degree; ++j)
    s.psi1[static_cast<size_t>(j)] = filter.psi1(tau * bracket(j));
  return s;
}

namespace {

void require_finite(const GridFunction& g, const char* what) {
  for (double v : g.values)
    if (!std::isfinite(v))
      throw DivergenceError(DivergenceError::Kind::NonFinite, -1,
                            fmt::format("non-finite samples of {}", what));
}

SpectralField nonlinearity_impl(const SpectralField& u, const ProblemSpec& p, int dealias_nodes) {
  const int k = u.degree();
  const int n = 2 * k + 1;
  GridFunction ug = synthesize(u, n);

  GridFunction ag{ug.values};
  for (double& v : ag.values) v = p.a(v);
  require_finite(ag, "a(u)");
  const SpectralField aK = interpolate(ag, k);

  const SpectralField uxx = derivative(u, 2);
  SpectralField f = dealias_nodes > 0 ? product_transform(aK, uxx, dealias_nodes)
                                      : dealiased_product(aK, uxx);
  if (p.has_g()) {
    const GridFunction uxg = synthesize(derivative(u, 1), n);
    GridFunction gg{ug.values};
    for (size_t i = 0; i < gg.values.size(); ++i) gg.values[i] = p.g(ug.values[i], uxg.values[i]);
    require_finite(gg, "g(u, u_x)");
    f += interpolate(gg, k);
  }
  return f;
}

}  // namespace

TrigonometricIntegrator::TrigonometricIntegrator(ProblemSpec problem, IntegratorConfig config)
    : problem_(std::move(problem)), config_(std::move(config)) {
  config_.validate();
  symbols_ = PropagatorSymbols::make(config_.tau, config_.K, config_.filter);
}

SpectralField TrigonometricIntegrator::interpolated_a(const SpectralField& u) const {
  GridFunction g = synthesize(u, 2 * u.degree() + 1);
  for (double& v : g.values) v = problem_.a(v);
  require_finite(g, "a(u)");
  return interpolate(g, u.degree());
}

SpectralField TrigonometricIntegrator::nonlinearity(const SpectralField& u) const {
  return nonlinearity_impl(u, problem_, config_.dealias_nodes);
}

SpectralField TrigonometricIntegrator::filtered_nonlinearity(const SpectralField& u) const {
  if (u.degree() != config_.K)
    throw ConfigError(fmt::format("filtered_nonlinearity: field degree {} != K = {}", u.degree(),
                                  config_.K));
  SpectralField w = u;
  w.scale_modes(symbols_.phi);
  SpectralField f = nonlinearity(w);
  f.scale_modes(symbols_.psi1);
  return project(f, config_.K);
}

StatePair TrigonometricIntegrator::step(const StatePair& state) {
  const int k = config_.K;
  if (state.u.degree() != k || state.udot.degree() != k)
    throw ConfigError(fmt::format("step: state degree ({}, {}) != K = {}", state.u.degree(),
                                  state.udot.degree(), k));
  const double tau = config_.tau;
  const double kappa = problem_.kappa();
  const auto& s = symbols_;

  SpectralField f0 = (config_.fsal && cache_ && cache_->u == state.u)
                         ? cache_->fhat
                         : filtered_nonlinearity(state.u);

  SpectralField u1(k);
  for (int j = 0; j <= k; ++j) {
    const auto i = static_cast<size_t>(j);
    u1.set(j, s.cos[i] * state.u[j] + s.tau_sinc[i] * state.udot[j] +
                  0.5 * tau * kappa * s.tau_sinc[i] * f0[j]);
  }
  SpectralField f1 = filtered_nonlinearity(u1);

  SpectralField v1(k);
  for (int j = 0; j <= k; ++j) {
    const auto i = static_cast<size_t>(j);
    v1.set(j, -s.omega_sin[i] * state.u[j] + s.cos[i] * state.udot[j] +
                  0.5 * tau * kappa * s.cos[i] * f0[j] + 0.5 * tau * kappa * f1[j]);
  }

  StatePair next{std::move(u1), std::move(v1)};
  if (!is_finite(next))
    throw DivergenceError(DivergenceError::Kind::NonFinite, -1, "step produced non-finite state");
  if (config_.fsal)
    cache_ = Cached{next.u, std::move(f1)};
  else
    cache_.reset();
  return next;
}

StatePair TrigonometricIntegrator::step_split(const StatePair& state) const {
  const int k = config_.K;
  const double half_kick = 0.5 * config_.tau * problem_.kappa();
  const auto& s = symbols_;

  SpectralField vplus = state.udot + half_kick * filtered_nonlinearity(state.u);
  SpectralField u1(k), vminus(k);
  for (int j = 0; j <= k; ++j) {
    const auto i = static_cast<size_t>(j);
    u1.set(j, s.cos[i] * state.u[j] + s.tau_sinc[i] * vplus[j]);
    vminus.set(j, -s.omega_sin[i] * state.u[j] + s.cos[i] * vplus[j]);
  }
  SpectralField v1 = vminus + half_kick * filtered_nonlinearity(u1);
  return {std::move(u1), std::move(v1)};
}

StatePair TrigonometricIntegrator::evolve(StatePair state, long n_steps,
                                          const StepObserver& observer) {
  if (n_steps < 0) throw ConfigError("evolve: n_steps must be >= 0");
  const NormOrder h1(1.0);
  for (long n = 1; n <= n_steps; ++n) {
    try {
      state = step(state);
    } catch (const DivergenceError& e) {
      throw DivergenceError(e.kind(), n, fmt::format("step {}: {}", n, e.what()));
    }
    const double norm = pair_norm(state.u, state.udot, h1);
    if (!(norm <= config_.max_norm))
      throw DivergenceError(
          DivergenceError::Kind::NormGuard, n,
          fmt::format("step {}: norm {:.6g} exceeds guard {:.6g}", n, norm, config_.max_norm));
    if (observer) observer(n, static_cast<double>(n) * config_.tau, state);
  }
  return state;
}

SpectralField f_K(const SpectralField& u, const ProblemSpec& p) {
  return nonlinearity_impl(u, p, 0);
}

SpectralField fhat_K(const SpectralField& u, const ProblemSpec& p, const IntegratorConfig& cfg) {
  return TrigonometricIntegrator(p, cfg).filtered_nonlinearity(u);
}

StatePair linear_propagator(const StatePair& state, double t) {
  const int k = std::max(state.u.degree(), state.udot.degree());
  SpectralField u(k), v(k);
  for (int j = 0; j <= k; ++j) {
    const double w = bracket(j);
    const double c = std::cos(t * w), sn = std::sin(t * w);
    u.set(j, c * state.u[j] + t * sinc(t * w) * state.udot[j]);
    v.set(j, -w * sn * state.u[j] + c * state.udot[j]);
  }
  return {std::move(u), std::move(v)};
}

StatePair step(const StatePair& state, const ProblemSpec& p, const IntegratorConfig& cfg) {
  return TrigonometricIntegrator(p, cfg).step(state);
}

StatePair evolve(const StatePair& state0, const ProblemSpec& p, const IntegratorConfig& cfg,
                 long n_steps, const StepObserver& observer) {
  return TrigonometricIntegrator(p, cfg).evolve(state0, n_steps, observer);
}

bool is_finite(const StatePair& state) noexcept {
  for (const auto& f : {&state.u, &state.udot})
    for (const Complex& c : f->coeffs())
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

}  // namespace qlwave
