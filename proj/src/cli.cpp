#include "qlwave/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>

#include "qlwave/energy.hpp"
#include "qlwave/errors.hpp"

namespace qlwave {

namespace fs = std::filesystem;

ProblemSpec problem_from(const Config& c) {
  return make_problem(c.get_string("problem.name", "model"), c.get_double("problem.kappa", 0.01));
}

FilterSpec filter_from(const Config& c) {
  const std::string kind = c.get_string("filter.kind", "sinc:2");
  if (kind == "sinc") return FilterSpec::sinc_c(c.get_double("filter.c", 2.0));
  return FilterSpec::parse(kind);
}

IntegratorConfig integrator_from(const Config& c) {
  IntegratorConfig cfg;
  cfg.tau = c.get_double("time.tau", cfg.tau);
  cfg.K = c.get_int("grid.K", cfg.K);
  cfg.dealias_nodes = c.get_int("grid.dealias_nodes", 0);
  cfg.filter = filter_from(c);
  cfg.max_norm = c.get_double("guard.max_norm", cfg.max_norm);
  cfg.tau_max = c.get_double("guard.tau_max", cfg.tau_max);
  cfg.validate();
  return cfg;
}

ReferenceConfig reference_from(const Config& c) {
  ReferenceConfig rc;
  rc.refine_factor = c.get_int("reference.refine_factor", rc.refine_factor);
  rc.cross_check = c.get_bool("reference.cross_check", rc.cross_check);
  rc.tolerance = c.get_double("reference.tolerance", rc.tolerance);
  rc.max_norm = c.get_double("guard.max_norm", rc.max_norm);
  rc.validate();
  return rc;
}

InitialData initial_data_from(const Config& c, const std::string& fallback) {
  const std::string name = c.get_string("initial.data", fallback);
  if (name == "h5") return paper_initial_data;
  if (name == "smooth") return smooth_initial_data;
  throw ConfigError(fmt::format("initial.data: unknown data '{}' (expected h5 or smooth)", name));
}

std::vector<double> tau_list_from(const Config& c) {
  if (c.has("sweep.tau") && c.has("sweep.tau_dyadic"))
    throw ConfigError("set only one of sweep.tau and sweep.tau_dyadic");
  if (c.has("sweep.tau")) return c.get_doubles("sweep.tau");
  if (c.has("sweep.tau_dyadic")) {
    const std::string range = c.get_string("sweep.tau_dyadic", "");
    const auto colon = range.find(':');
    if (colon == std::string::npos)
      throw ConfigError(fmt::format("sweep.tau_dyadic: expected m0:m1, got '{}'", range));
    Config tmp;
    tmp.set("sweep.K", range.substr(0, colon) + "," + range.substr(colon + 1));
    const auto m = tmp.get_ints("sweep.K");
    const double base = c.get_double("sweep.tau_base", c.get_double("time.T", 1.0));
    return dyadic_steps(base, m[0], m[1]);
  }
  return {c.get_double("time.tau", 0.1)};
}

long step_count_from(const Config& c) {
  if (c.has("time.n_steps")) {
    const long n = c.get_long("time.n_steps", 0);
    if (n < 0) throw ConfigError("time.n_steps must be >= 0");
    return n;
  }
  const double T = c.get_double("time.T", 1.0);
  const double tau = c.get_double("time.tau", 0.1);
  const double steps = T / tau;
  if (!(T >= 0.0) || std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps))
    throw ConfigError(fmt::format("time.T / time.tau = {} is not an integer", steps));
  return std::lround(steps);
}

ExperimentPlan plan_from(const Config& c) {
  ExperimentPlan plan;
  plan.problem = problem_from(c);
  plan.initial_data = initial_data_from(c);
  plan.K_list = c.has("sweep.K") ? c.get_ints("sweep.K") : std::vector<int>{c.get_int("grid.K", 32)};
  plan.tau_list = tau_list_from(c);
  plan.T = c.get_double("time.T", 1.0);
  if (c.has("sweep.filters")) {
    for (const auto& id : c.get_list("sweep.filters")) plan.filters.push_back(FilterSpec::parse(id));
  } else {
    plan.filters.push_back(filter_from(c));
  }
  plan.K_ref = c.get_int("sweep.K_ref", 0);
  plan.reference = reference_from(c);
  plan.max_norm = c.get_double("guard.max_norm", plan.max_norm);
  plan.validate();
  return plan;
}

namespace {

struct Options {
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> assignments;
  std::map<std::string, std::string> flags;  // config key -> value
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config,-c", o.config_path, "flat key = value config file");
  sub->add_option("--out,-o", o.out_dir, "output directory (out.dir)");
  sub->add_option("--set", o.assignments, "override any config key: key=value");
  const std::pair<const char*, const char*> shortcuts[] = {
      {"--problem", "problem.name"},  {"--kappa", "problem.kappa"},
      {"--tau", "time.tau"},          {"--T", "time.T"},
      {"--steps", "time.n_steps"},    {"--K", "grid.K"},
      {"--filter", "filter.kind"},    {"--data", "initial.data"},
      {"--A0", "check.A0"},           {"--delta", "check.delta"},
      {"--Ks", "sweep.K"},            {"--taus", "sweep.tau"},
      {"--filters", "sweep.filters"}, {"--K-ref", "sweep.K_ref"}};
  for (const auto& [flag, key] : shortcuts) {
    const std::string k = key;
    sub->add_option_function<std::string>(
        flag, [&o, k](const std::string& v) { o.flags[k] = v; }, "sets " + k);
  }
}

Config build_config(const Options& o) {
  Config c = o.config_path.empty() ? Config{} : Config::load(o.config_path);
  for (const auto& [key, value] : o.flags) c.set(key, value);
  for (const auto& a : o.assignments) c.set_assignment(a);
  if (!o.out_dir.empty()) c.set("out.dir", o.out_dir);
  return c;
}

fs::path output_dir(const Config& c) {
  const fs::path dir = c.get_string("out.dir", ".");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError(fmt::format("cannot create output directory '{}': {}", dir.string(),
                                        ec.message()));
  return dir;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError(fmt::format("cannot write '{}'", path.string()));
  return f;
}

int run_simulate(const Config& c, std::ostream& out) {
  const ProblemSpec p = problem_from(c);
  const IntegratorConfig cfg = integrator_from(c);
  const long n = step_count_from(c);
  const long every = std::max(1L, c.get_long("out.every", std::max(1L, n / 100)));
  const fs::path dir = output_dir(c);

  std::ofstream traj = open_output(dir / "trajectory.csv");
  traj << "step,t,norm_h2h1,max_kappa_a,min_one_plus_kappa_a\n";
  auto record = [&](long i, double t, const StatePair& s) {
    const EllipticityReport e = ellipticity_report(p, s.u);
    traj << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g}\n", i, t,
                        pair_norm(s.u, s.udot, NormOrder(1.0)), e.A0_est, e.delta_est);
  };
  const StatePair start = initial_data_from(c)(cfg.K);
  record(0, 0.0, start);
  TrigonometricIntegrator integ(p, cfg);
  const StatePair end = integ.evolve(start, n, [&](long i, double t, const StatePair& s) {
    if (i % every == 0 || i == n) record(i, t, s);
  });

  std::ofstream state = open_output(dir / "final_state.csv");
  state << "j,u_re,u_im,udot_re,udot_im\n";
  for (int j = 0; j <= end.degree(); ++j)
    state << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g}\n", j, end.u[j].real(),
                         end.u[j].imag(), end.udot[j].real(), end.udot[j].imag());

  const EllipticityReport e = ellipticity_report(p, end.u);
  out << fmt::format("simulate: problem={} kappa={} K={} tau={} filter={} steps={}\n", p.name(),
                     p.kappa(), cfg.K, cfg.tau, cfg.filter.id(), n);
  out << fmt::format("  t = {:.6g}  |||(u, u')|||_1 = {:.6e}  max kappa a(u) = {:.4f}  "
                     "min 1 + kappa a(u) = {:.4f}\n",
                     static_cast<double>(n) * cfg.tau, pair_norm(end.u, end.udot, NormOrder(1.0)),
                     e.A0_est, e.delta_est);
  out << fmt::format("  wrote {} and {}\n", (dir / "trajectory.csv").string(),
                     (dir / "final_state.csv").string());
  return kExitOk;
}

void print_references(const ConvergenceTable& table, std::ostream& out) {
  for (const auto& r : table.references) {
    if (r.ok)
      out << fmt::format("  reference K={} filter={} tau_ref={:.4g} est. error={:.2e}\n", r.K,
                         r.filter, r.tau_ref, r.estimated_error);
    else
      out << fmt::format("  reference K={} filter={} FAILED: {}\n", r.K, r.filter, r.message);
  }
}

void write_table(const ConvergenceTable& table, const fs::path& dir, const std::string& stem,
                 std::ostream& out) {
  std::ofstream csv = open_output(dir / (stem + ".csv"));
  write_csv(csv, table.rows);
  std::ofstream dat = open_output(dir / (stem + ".dat"));
  write_gnuplot(dat, table.rows);
  out << fmt::format("  wrote {} and {}\n", (dir / (stem + ".csv")).string(),
                     (dir / (stem + ".dat")).string());
}

int run_conv_time(const Config& c, std::ostream& out) {
  const ExperimentPlan plan = plan_from(c);
  const fs::path dir = output_dir(c);
  const ConvergenceTable table = run_convergence_time(plan);
  out << fmt::format("conv-time: problem={} kappa={} T={}\n", plan.problem.name(),
                     plan.problem.kappa(), plan.T);
  print_references(table, out);
  for (const auto& f : plan.filters) {
    for (int K : plan.K_list) {
      const auto rows = table.select(f.id(), K);
      int bad = 0;
      for (const auto& r : rows) bad += r.status != RowStatus::Ok;
      try {
        const OrderEstimate e = estimate_order(rows);
        out << fmt::format("  {:>8} K={:<4} order {:.3f} (R^2 {:.4f}, {} points, {} not ok)\n",
                           f.id(), K, e.slope, e.r_squared, e.points, bad);
      } catch (const EstimationError& e) {
        out << fmt::format("  {:>8} K={:<4} order n/a: {} ({} not ok)\n", f.id(), K, e.what(),
                           bad);
      }
    }
  }
  write_table(table, dir, "conv_time", out);
  return kExitOk;
}

int run_conv_space(const Config& c, std::ostream& out) {
  const ExperimentPlan plan = plan_from(c);
  const fs::path dir = output_dir(c);
  const ConvergenceTable table = run_convergence_space(plan);
  out << fmt::format("conv-space: problem={} kappa={} T={} tau={}\n", plan.problem.name(),
                     plan.problem.kappa(), plan.T, plan.tau_list.front());
  print_references(table, out);
  for (const auto& f : plan.filters) {
    std::vector<ConvergenceRow> rows;
    for (const auto& r : table.rows)
      if (r.filter == f.id()) rows.push_back(r);
    try {
      const OrderEstimate e = estimate_spatial_order(rows);
      out << fmt::format("  {:>8} spatial order {:.3f} (R^2 {:.4f})\n", f.id(), e.slope,
                         e.r_squared);
    } catch (const EstimationError& e) {
      out << fmt::format("  {:>8} spatial order n/a: {}\n", f.id(), e.what());
    }
  }
  write_table(table, dir, "conv_space", out);
  return kExitOk;
}

int run_filter_check(const Config& c, std::ostream& out) {
  const FilterSpec filter = filter_from(c);
  const double A0 = c.get_double("check.A0", 13.0);
  const double delta = c.get_double("check.delta", 0.15);
  const AdmissibilityReport r = check_assumptions(filter, delta, A0);
  const ScalarInequalityReport s =
      lemma_scalar_inequality(filter, delta, coefficient_grid(A0, delta, 1000),
                              linear_grid(0.0, 4.0 * M_PI, 1000));
  auto verdict = [](bool ok) { return ok ? "pass" : "FAIL"; };
  out << fmt::format("filter-check: filter={} A0={} delta={}\n", filter.id(), A0, delta);
  out << fmt::format("  bounds and consistency (c0 = {}): {}\n", filter.c0(),
                     verdict(r.assumption1_ok));
  out << fmt::format("  psi1 = sinc * phi: {}\n", verdict(r.assumption2_ok));
  out << fmt::format("  A0 sin^2(xi/2) phi^2 <= 1 - delta: {} (margin {:.4g} at xi = {:.4g})\n",
                     verdict(r.assumption3_ok), r.assumption3_margin, r.assumption3_xi);
  out << fmt::format("  scalar inequality: {} (min margin {:.4g} at A = {:.4g}, xi = {:.4g})\n",
                     verdict(s.certified()), s.min_margin, s.worst_A, s.worst_xi);
  out << fmt::format("  smallest admissible c for sinc filters: {:.6f}\n", min_c_for(A0, delta));
  return r.all_ok() && s.certified() ? kExitOk : kExitCheck;
}

int run_energy_check(const Config& c, std::ostream& out) {
  const ProblemSpec p = problem_from(c);
  const IntegratorConfig cfg = integrator_from(c);
  const double t = c.get_double("energy.t", 0.0);
  const double steps = t / cfg.tau;
  if (!(t >= 0.0) || std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps))
    throw ConfigError(fmt::format("energy.t / time.tau = {} is not an integer", steps));
  const StatePair state =
      TrigonometricIntegrator(p, cfg).evolve(initial_data_from(c)(cfg.K), std::lround(steps));

  PositivityOptions opts;
  opts.n_samples = c.get_int("energy.n_samples", opts.n_samples);
  opts.seed = static_cast<std::uint64_t>(c.get_long("energy.seed", static_cast<long>(opts.seed)));
  if (c.has("check.delta")) opts.delta = c.get_double("check.delta", 0.0);
  if (c.has("check.A0")) opts.A0 = c.get_double("check.A0", 0.0);
  const PositivityReport r = positivity_check(state.u, p, cfg, opts);

  const fs::path dir = output_dir(c);
  std::ofstream csv = open_output(dir / "energy_margins.csv");
  csv << "probe,margin\n";
  for (const auto& m : r.probes) csv << fmt::format("{},{:.17g}\n", m.label, m.margin);

  out << fmt::format("energy-check: problem={} kappa={} K={} tau={} filter={} t={}\n", p.name(),
                     p.kappa(), cfg.K, cfg.tau, cfg.filter.id(), t);
  out << fmt::format("  delta = {:.4g}  A0 = {:.4g}  probes = {}\n", r.delta, r.A0,
                     r.probes.size());
  out << fmt::format("  worst Rayleigh margin {:.6g} ({})\n", r.worst_margin, r.worst_probe);
  out << fmt::format("  representation identity residual {:.3e}\n",
                     representation_residual(state.udot, state.u, p, cfg));
  out << fmt::format("  wrote {}\n", (dir / "energy_margins.csv").string());
  out << (r.worst_margin >= 0.0 ? "  positivity: pass\n" : "  positivity: FAIL\n");
  return r.worst_margin >= 0.0 ? kExitOk : kExitCheck;
}

int run_local_error(const Config& c, std::ostream& out) {
  const ProblemSpec p = problem_from(c);
  const FilterSpec filter = filter_from(c);
  const int K = c.get_int("grid.K", 64);
  ReferenceConfig rc = reference_from(c);
  if (!c.has("reference.refine_factor")) rc.refine_factor = 512;
  std::vector<double> taus = tau_list_from(c);
  if (!c.has("sweep.tau") && !c.has("sweep.tau_dyadic")) taus = dyadic_steps(1.0, 4, 9);
  const StatePair start = initial_data_from(c, "smooth")(K);

  const fs::path dir = output_dir(c);
  std::ofstream csv = open_output(dir / "local_error.csv");
  csv << "tau,err_h2h1\n";
  std::vector<double> errs(taus.size());
  parallel_for(static_cast<int>(taus.size()), [&](int i) {
    errs[static_cast<size_t>(i)] = local_error(p, start, taus[static_cast<size_t>(i)], filter, rc);
  });
  out << fmt::format("local-error: problem={} kappa={} K={} filter={}\n", p.name(), p.kappa(), K,
                     filter.id());
  for (size_t i = 0; i < taus.size(); ++i) {
    csv << fmt::format("{:.17g},{:.17g}\n", taus[i], errs[i]);
    out << fmt::format("  tau = {:<12.6g} error = {:.6e}\n", taus[i], errs[i]);
  }
  if (taus.size() >= 2) {
    try {
      const OrderEstimate e = fit_power_law(taus, errs);
      out << fmt::format("  order {:.3f} (R^2 {:.5f})\n", e.slope, e.r_squared);
    } catch (const EstimationError& e) {
      out << fmt::format("  order n/a: {}\n", e.what());
    }
  }
  out << fmt::format("  wrote {}\n", (dir / "local_error.csv").string());
  return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"qlwave: trigonometric integrators for quasilinear wave equations"};
  app.require_subcommand(1);
  using Runner = int (*)(const Config&, std::ostream&);
  const std::pair<const char*, std::pair<const char*, Runner>> commands[] = {
      {"simulate", {"integrate one configuration and write the trajectory", run_simulate}},
      {"conv-time", {"temporal convergence sweep against same-K references", run_conv_time}},
      {"conv-space", {"spatial convergence sweep against a high-K reference", run_conv_space}},
      {"filter-check", {"check the filter admissibility conditions", run_filter_check}},
      {"energy-check", {"Rayleigh positivity probes of the energy operator", run_energy_check}},
      {"local-error", {"one-step error against a refined reference", run_local_error}}};

  std::vector<std::unique_ptr<Options>> options;
  std::vector<std::pair<CLI::App*, Runner>> subs;
  for (const auto& [name, info] : commands) {
    options.push_back(std::make_unique<Options>());
    CLI::App* sub = app.add_subcommand(name, info.first);
    add_common(sub, *options.back());
    subs.emplace_back(sub, info.second);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::string help = app.help();
    for (const auto& sub : subs)
      if (sub.first->parsed()) help = sub.first->help();
    out << help;
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  for (size_t i = 0; i < subs.size(); ++i) {
    if (!subs[i].first->parsed()) continue;
    try {
      const Config config = build_config(*options[i]);
      return subs[i].second(config, out);
    } catch (const DivergenceError& e) {
      err << "diverged: " << e.what() << "\n";
      return kExitDivergence;
    } catch (const ConfigError& e) {
      err << "config error: " << e.what() << "\n";
      return kExitConfig;
    } catch (const PreconditionError& e) {
      err << "check failed: " << e.what() << "\n";
      return kExitCheck;
    } catch (const ReferenceError& e) {
      err << "check failed: " << e.what() << "\n";
      return kExitCheck;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kExitConfig;
    }
  }
  return kExitConfig;
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("qlwave");
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace qlwave
