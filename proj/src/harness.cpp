#include "qlwave/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fmt/format.h>
#include <map>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <thread>

#include "qlwave/errors.hpp"

namespace qlwave {

void ExperimentPlan::validate() const {
  if (K_list.empty()) throw ConfigError("plan: K list is empty");
  if (tau_list.empty()) throw ConfigError("plan: tau list is empty");
  if (filters.empty()) throw ConfigError("plan: filter list is empty");
  if (!(T > 0.0)) throw ConfigError("plan: T must be > 0");
  for (int k : K_list)
    if (k < 1) throw ConfigError("plan: K values must be >= 1");
  for (double tau : tau_list) {
    if (!(tau > 0.0)) throw ConfigError("plan: tau values must be > 0");
    const double steps = T / tau;
    if (std::abs(steps - std::round(steps)) > 1e-9 * steps)
      throw ConfigError(fmt::format("plan: T/tau = {} is not an integer (tau = {})", steps, tau));
  }
  reference.validate();
}

std::string to_string(RowStatus status) {
  switch (status) {
    case RowStatus::Ok: return "ok";
    case RowStatus::Diverged: return "diverged";
    case RowStatus::Guard: return "guard";
    case RowStatus::NoReference: return "no_reference";
  }
  return "?";
}

std::vector<ConvergenceRow> ConvergenceTable::select(const std::string& filter, int K) const {
  std::vector<ConvergenceRow> out;
  for (const auto& r : rows)
    if (r.filter == filter && r.K == K) out.push_back(r);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.tau < b.tau; });
  return out;
}

int worker_count() {
  if (const char* env = std::getenv("QLWAVE_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(int n, const std::function<void(int)>& job) {
  const int workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

namespace {

long step_count(double T, double tau) { return std::lround(T / tau); }

void sort_rows(std::vector<ConvergenceRow>& rows) {
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.filter != b.filter) return a.filter < b.filter;
    if (a.K != b.K) return a.K < b.K;
    return a.tau < b.tau;
  });
}

// Evolves one cell; divergence becomes a row status.
ConvergenceRow run_cell(const ExperimentPlan& plan, const FilterSpec& filter, int K, double tau,
                        const StatePair& start, const StatePair& ref) {
  ConvergenceRow row{filter.id(), K, tau, 0.0, RowStatus::Ok};
  IntegratorConfig cfg;
  cfg.tau = tau;
  cfg.K = K;
  cfg.filter = filter;
  cfg.max_norm = plan.max_norm;
  try {
    const StatePair end = TrigonometricIntegrator(plan.problem, cfg).evolve(start, step_count(plan.T, tau));
    row.err = error_H2H1(project_state(end, ref.degree()), ref);
  } catch (const DivergenceError& e) {
    row.err = std::numeric_limits<double>::quiet_NaN();
    row.status = e.kind() == DivergenceError::Kind::NormGuard ? RowStatus::Guard
                                                              : RowStatus::Diverged;
  }
  return row;
}

}  // namespace

ConvergenceTable run_convergence_time(const ExperimentPlan& plan) {
  plan.validate();
  const double tau_min = *std::min_element(plan.tau_list.begin(), plan.tau_list.end());

  const int nk = static_cast<int>(plan.K_list.size());
  std::vector<StatePair> starts(static_cast<size_t>(nk));
  std::vector<std::optional<StatePair>> refs(static_cast<size_t>(nk));
  std::vector<ReferenceSummary> summaries(static_cast<size_t>(nk));

  parallel_for(nk, [&](int i) {
    const int K = plan.K_list[static_cast<size_t>(i)];
    starts[static_cast<size_t>(i)] = plan.initial_data(K);
    ReferenceSummary& s = summaries[static_cast<size_t>(i)];
    s.filter = plan.reference.filter.id();
    s.K = K;
    try {
      const ReferenceResult r = reference_solution(plan.problem, starts[static_cast<size_t>(i)],
                                                   plan.T, tau_min, plan.reference);
      s.tau_ref = r.tau_ref;
      s.estimated_error = r.estimated_error;
      s.ok = r.reliable;
      if (!r.reliable) s.message = "cross-check disagreement";
      refs[static_cast<size_t>(i)] = r.state;
    } catch (const ReferenceError& e) {
      s.ok = false;
      s.message = e.what();
    }
  });

  struct Cell {
    size_t filter, k, tau;
  };
  std::vector<Cell> cells;
  for (size_t f = 0; f < plan.filters.size(); ++f)
    for (size_t k = 0; k < plan.K_list.size(); ++k)
      for (size_t t = 0; t < plan.tau_list.size(); ++t) cells.push_back({f, k, t});

  ConvergenceTable table;
  table.rows.resize(cells.size());
  parallel_for(static_cast<int>(cells.size()), [&](int i) {
    const Cell& c = cells[static_cast<size_t>(i)];
    const FilterSpec& filter = plan.filters[c.filter];
    const int K = plan.K_list[c.k];
    const double tau = plan.tau_list[c.tau];
    if (!refs[c.k]) {
      table.rows[static_cast<size_t>(i)] = {filter.id(), K, tau,
                                            std::numeric_limits<double>::quiet_NaN(),
                                            RowStatus::NoReference};
      return;
    }
    table.rows[static_cast<size_t>(i)] = run_cell(plan, filter, K, tau, starts[c.k], *refs[c.k]);
  });
  sort_rows(table.rows);
  table.references = std::move(summaries);
  return table;
}

ConvergenceTable run_convergence_space(const ExperimentPlan& plan) {
  plan.validate();
  const int k_max = *std::max_element(plan.K_list.begin(), plan.K_list.end());
  const int k_ref = plan.K_ref > 0 ? plan.K_ref : 4 * k_max;
  if (k_ref < 4 * k_max)
    throw ConfigError(fmt::format("plan: K_ref = {} must be >= 4 * max K = {}", k_ref, 4 * k_max));
  const double tau = plan.tau_list.front();
  const StatePair fine_start = plan.initial_data(k_ref);

  const int nf = static_cast<int>(plan.filters.size());
  std::vector<std::optional<StatePair>> refs(static_cast<size_t>(nf));
  std::vector<ReferenceSummary> summaries(static_cast<size_t>(nf));
  parallel_for(nf, [&](int i) {
    const FilterSpec& filter = plan.filters[static_cast<size_t>(i)];
    ReferenceSummary& s = summaries[static_cast<size_t>(i)];
    s.filter = filter.id();
    s.K = k_ref;
    s.tau_ref = tau;
    IntegratorConfig cfg;
    cfg.tau = tau;
    cfg.K = k_ref;
    cfg.filter = filter;
    cfg.max_norm = plan.max_norm;
    try {
      refs[static_cast<size_t>(i)] =
          TrigonometricIntegrator(plan.problem, cfg).evolve(fine_start, step_count(plan.T, tau));
    } catch (const DivergenceError& e) {
      s.ok = false;
      s.message = e.what();
    }
  });

  struct Cell {
    size_t filter, k;
  };
  std::vector<Cell> cells;
  for (size_t f = 0; f < plan.filters.size(); ++f)
    for (size_t k = 0; k < plan.K_list.size(); ++k) cells.push_back({f, k});

  ConvergenceTable table;
  table.rows.resize(cells.size());
  parallel_for(static_cast<int>(cells.size()), [&](int i) {
    const Cell& c = cells[static_cast<size_t>(i)];
    const FilterSpec& filter = plan.filters[c.filter];
    const int K = plan.K_list[c.k];
    if (!refs[c.filter]) {
      table.rows[static_cast<size_t>(i)] = {filter.id(), K, tau,
                                            std::numeric_limits<double>::quiet_NaN(),
                                            RowStatus::NoReference};
      return;
    }
    table.rows[static_cast<size_t>(i)] =
        run_cell(plan, filter, K, tau, project_state(fine_start, K), *refs[c.filter]);
  });
  sort_rows(table.rows);
  table.references = std::move(summaries);
  return table;
}

OrderEstimate fit_power_law(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw EstimationError("fit_power_law: need at least two (x, y) pairs");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  std::vector<double> lx, ly;
  for (size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw EstimationError("fit_power_law: values must be positive");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
    sx += lx.back();
    sy += ly.back();
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) throw EstimationError("fit_power_law: x values are all equal");
  OrderEstimate est;
  est.slope = sxy / sxx;
  est.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  est.points = static_cast<int>(lx.size());
  return est;
}

namespace {

OrderEstimate fit_rows(std::span<const ConvergenceRow> rows, bool over_tau) {
  std::vector<double> x, y;
  for (const auto& r : rows) {
    if (r.status != RowStatus::Ok || !(r.err > 0.0)) continue;
    x.push_back(over_tau ? r.tau : static_cast<double>(r.K));
    y.push_back(r.err);
  }
  if (x.size() < 3)
    throw EstimationError(fmt::format("need at least 3 usable rows, have {}", x.size()));
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  if (*hi < 4.0 * *lo)
    throw EstimationError("usable rows must span at least a factor of 4");
  return fit_power_law(x, y);
}

}  // namespace

OrderEstimate estimate_order(std::span<const ConvergenceRow> rows) { return fit_rows(rows, true); }

OrderEstimate estimate_spatial_order(std::span<const ConvergenceRow> rows) {
  OrderEstimate e = fit_rows(rows, false);
  e.slope = -e.slope;
  return e;
}

std::vector<double> dyadic_steps(double T, int m_min, int m_max) {
  if (m_min > m_max) throw ConfigError("dyadic_steps: m_min > m_max");
  std::vector<double> taus;
  for (int m = m_min; m <= m_max; ++m) taus.push_back(std::ldexp(T, -m));
  return taus;
}

void write_csv(std::ostream& out, std::span<const ConvergenceRow> rows) {
  out << "filter,K,tau,err_h2h1,status\n";
  for (const auto& r : rows)
    out << fmt::format("{},{},{:.17g},{:.17g},{}\n", r.filter, r.K, r.tau, r.err,
                       to_string(r.status));
}

void write_gnuplot(std::ostream& out, std::span<const ConvergenceRow> rows) {
  std::map<std::pair<std::string, int>, std::vector<const ConvergenceRow*>> blocks;
  for (const auto& r : rows) blocks[{r.filter, r.K}].push_back(&r);
  bool first = true;
  for (const auto& [key, block] : blocks) {
    if (!first) out << "\n\n";
    first = false;
    out << fmt::format("# filter={} K={}\n", key.first, key.second);
    for (const auto* r : block)
      if (r->status == RowStatus::Ok) out << fmt::format("{:.17g} {:.17g}\n", r->tau, r->err);
  }
}

}  // namespace qlwave
