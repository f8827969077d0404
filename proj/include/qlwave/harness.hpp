#pragma once

// Convergence sweeps and order estimation.

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qlwave/reference.hpp"

namespace qlwave {

using InitialData = std::function<StatePair(int degree)>;

struct ExperimentPlan {
  ProblemSpec problem = model_problem(0.01);
  InitialData initial_data = paper_initial_data;
  std::vector<int> K_list;
  std::vector<double> tau_list;
  double T = 1.0;
  std::vector<FilterSpec> filters;
  /// Spatial sweeps only: degree of the high-resolution reference (0 → 4·max K).
  int K_ref = 0;
  ReferenceConfig reference;
  double max_norm = 1e6;

  /// Lists nonempty and every T/τ an integer (to 1e-9 relative).
  void validate() const;
};

enum class RowStatus { Ok, Diverged, Guard, NoReference };

std::string to_string(RowStatus status);

struct ConvergenceRow {
  std::string filter;
  int K = 0;
  double tau = 0.0;
  double err = 0.0;  // ⫼·⫼₁ at the final time
  RowStatus status = RowStatus::Ok;
};

struct ReferenceSummary {
  std::string filter;  // filter of the reference integrator
  int K = 0;
  double tau_ref = 0.0;
  double estimated_error = 0.0;
  bool ok = true;
  std::string message;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;  // sorted by (filter, K, τ)
  std::vector<ReferenceSummary> references;

  /// Rows for one (filter, K) pair, ordered by τ.
  std::vector<ConvergenceRow> select(const std::string& filter, int K) const;
};

/// Temporal error at time T against a same-K reference, for each (filter, K, τ).
ConvergenceTable run_convergence_time(const ExperimentPlan& plan);

/// Error at time T for each (filter, K) against a degree-K_ref solution with
/// the same filter and τ = tau_list.front(). The degree-K solution is
/// zero-padded, so the error includes the unresolved tail.
ConvergenceTable run_convergence_space(const ExperimentPlan& plan);

struct OrderEstimate {
  double slope = 0.0;
  double r_squared = 0.0;
  int points = 0;
};

/// Least-squares slope of log y against log x.
OrderEstimate fit_power_law(std::span<const double> x, std::span<const double> y);

/// Slope of log err vs log τ over rows with status ok. Needs ≥ 3 rows
/// spanning at least a factor 4 in τ; throws EstimationError otherwise.
OrderEstimate estimate_order(std::span<const ConvergenceRow> rows);

/// Order of decay of err in K (the negated slope of log err vs log K).
OrderEstimate estimate_spatial_order(std::span<const ConvergenceRow> rows);

/// Dyadic step sizes T/2^m for m = m_min..m_max (coarsest first).
std::vector<double> dyadic_steps(double T, int m_min, int m_max);

/// CSV with header filter,K,tau,err_h2h1,status; floats with 17 significant digits.
void write_csv(std::ostream& out, std::span<const ConvergenceRow> rows);
/// gnuplot blocks "tau err" per (filter, K), separated by blank lines.
void write_gnuplot(std::ostream& out, std::span<const ConvergenceRow> rows);

/// Runs jobs 0..n-1 on a bounded worker pool (QLWAVE_THREADS, default
/// hardware concurrency). Callers store results by index.
void parallel_for(int n, const std::function<void(int)>& job);

/// Worker count from QLWAVE_THREADS (≥ 1).
int worker_count();

}  // namespace qlwave
