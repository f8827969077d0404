#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qlwave/cli.hpp"
#include "qlwave/errors.hpp"
#include "qlwave/harness.hpp"

using namespace qlwave;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("qlwave_tests_" + name);
  fs::remove_all(dir);
  return dir;
}

struct ThreadsOverride {
  explicit ThreadsOverride(const char* n) { setenv("QLWAVE_THREADS", n, 1); }
  ~ThreadsOverride() { unsetenv("QLWAVE_THREADS"); }
};

int run_cli(std::vector<std::string> args, std::string* out_text = nullptr) {
  std::ostringstream out, err;
  const int code = cli_main(args, out, err);
  if (out_text) *out_text = out.str() + err.str();
  return code;
}

ExperimentPlan linear_plan() {
  ExperimentPlan plan;
  plan.problem = model_problem(0.0);
  plan.K_list = {8, 16};
  plan.tau_list = dyadic_steps(1.0, 2, 5);
  plan.T = 1.0;
  plan.filters = {FilterSpec::parse("hl"), FilterSpec::parse("sinc:2")};
  return plan;
}

}  // namespace

TEST_CASE("power-law fits") {
  std::vector<double> x, y2, y3;
  for (int m = 1; m <= 6; ++m) {
    x.push_back(std::ldexp(1.0, -m));
    y2.push_back(7.0 * x.back() * x.back());
    y3.push_back(0.3 * std::pow(x.back(), 3.0));
  }
  CHECK(fit_power_law(x, y2).slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit_power_law(x, y3).slope == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(fit_power_law(x, y3).r_squared == doctest::Approx(1.0).epsilon(1e-12));

  std::vector<ConvergenceRow> rows;
  for (size_t i = 0; i < x.size(); ++i) rows.push_back({"hl", 8, x[i], y2[i], RowStatus::Ok});
  CHECK(estimate_order(rows).slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(estimate_order(rows).points == 6);

  rows[0].status = RowStatus::Guard;
  rows[0].err = std::nan("");
  CHECK(estimate_order(rows).points == 5);

  const std::vector<ConvergenceRow> few(rows.begin() + 4, rows.end());
  CHECK_THROWS_AS(estimate_order(few), EstimationError);
  std::vector<ConvergenceRow> narrow = {{"hl", 8, 1.0, 1.0, RowStatus::Ok},
                                        {"hl", 8, 0.8, 0.64, RowStatus::Ok},
                                        {"hl", 8, 0.5, 0.25, RowStatus::Ok}};
  CHECK_THROWS_AS(estimate_order(narrow), EstimationError);

  std::vector<ConvergenceRow> space;
  for (int K : {8, 16, 32, 64}) space.push_back({"hl", K, 0.1, std::pow(K, -3.5), RowStatus::Ok});
  CHECK(estimate_spatial_order(space).slope == doctest::Approx(3.5).epsilon(1e-12));
}

TEST_CASE("dyadic steps and plan validation") {
  const auto taus = dyadic_steps(0.25, 3, 5);
  REQUIRE(taus.size() == 3);
  CHECK(taus[0] == 0.25 / 8);
  CHECK(taus[2] == 0.25 / 32);

  auto plan = linear_plan();
  CHECK_NOTHROW(plan.validate());
  plan.tau_list = {0.3};
  CHECK_THROWS_AS(plan.validate(), ConfigError);
  plan = linear_plan();
  plan.filters.clear();
  CHECK_THROWS_AS(plan.validate(), ConfigError);
}

TEST_CASE("temporal sweep on the linear problem") {
  const auto table = run_convergence_time(linear_plan());
  CHECK(table.rows.size() == 2 * 2 * 4);
  CHECK(table.references.size() == 2);
  for (const auto& r : table.rows) {
    CHECK(r.status == RowStatus::Ok);
    CHECK(r.err <= 1e-11);
  }
  const auto sel = table.select("sinc:2", 16);
  REQUIRE(sel.size() == 4);
  CHECK(sel.front().tau < sel.back().tau);
}

TEST_CASE("temporal sweep output") {
  ExperimentPlan plan;
  plan.K_list = {8};
  plan.tau_list = dyadic_steps(1.0, 2, 4);
  plan.filters = {FilterSpec::parse("gh"), FilterSpec::parse("impulse")};
  const auto a = run_convergence_time(plan);
  ConvergenceTable b;
  {
    ThreadsOverride one("1");
    b = run_convergence_time(plan);
  }
  std::ostringstream ca, cb;
  write_csv(ca, a.rows);
  write_csv(cb, b.rows);
  CHECK(ca.str() == cb.str());
  CHECK(ca.str().rfind("filter,K,tau,err_h2h1,status\n", 0) == 0);
  CHECK(ca.str().find(",ok\n") != std::string::npos);

  std::ostringstream gp;
  write_gnuplot(gp, a.rows);
  CHECK(gp.str().find("\n\n") != std::string::npos);

  CHECK(to_string(RowStatus::Guard) == "guard");
  CHECK(to_string(RowStatus::NoReference) == "no_reference");
}

TEST_CASE("spatial sweep") {
  SUBCASE("linear problem: the error is the discarded tail") {
    ExperimentPlan plan = linear_plan();
    plan.K_list = {4, 8, 16};
    plan.tau_list = {0.125};
    plan.K_ref = 64;
    const auto table = run_convergence_space(plan);
    for (const auto& r : table.rows) {
      double tail = 0.0;
      for (int j = r.K + 1; j <= 64; ++j) {
        const double w = j * j + 1.0;
        const double u = 1.0 / (1.0 + std::pow(j, 11.02)), v = 1.0 / (1.0 + std::pow(j, 9.02));
        tail += 2.0 * w * (w * u + v);
      }
      CHECK(r.err == doctest::Approx(std::sqrt(tail)).epsilon(1e-9));
    }
  }
  SUBCASE("error decreases with K") {
    ExperimentPlan plan;
    plan.K_list = {8, 16, 32};
    plan.tau_list = {0.01};
    plan.filters = {FilterSpec::sinc_c(2)};
    const auto table = run_convergence_space(plan);
    REQUIRE(table.rows.size() == 3);
    CHECK(table.rows[1].err < table.rows[0].err);
    CHECK(table.rows[2].err < table.rows[1].err);
    CHECK(estimate_spatial_order(table.rows).slope > 2.0);
  }
  SUBCASE("reference degree too small") {
    ExperimentPlan plan = linear_plan();
    plan.K_ref = 32;
    CHECK_THROWS_AS(run_convergence_space(plan), ConfigError);
  }
}

TEST_CASE("config files") {
  std::istringstream in("# comment\nproblem.kappa = 0.5   # trailing\n\ngrid.K=16\nsweep.K = 8, 16,32\n");
  const auto c = Config::parse(in, "test.cfg");
  CHECK(c.get_double("problem.kappa", 0.0) == 0.5);
  CHECK(c.get_int("grid.K", 0) == 16);
  CHECK(c.get_ints("sweep.K") == std::vector<int>{8, 16, 32});
  CHECK(c.get_double("time.tau", 0.25) == 0.25);
  CHECK_FALSE(c.has("time.tau"));

  std::istringstream bad_key("problem.kapa = 1\n");
  try {
    Config::parse(bad_key, "typo.cfg");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("typo.cfg:1:") != std::string::npos);
  }
  std::istringstream no_eq("grid.K 16\n");
  CHECK_THROWS_AS(Config::parse(no_eq), ConfigError);

  Config d;
  d.set("grid.K", "sixteen");
  CHECK_THROWS_AS(d.get_int("grid.K", 0), ConfigError);
  d.set("reference.cross_check", "maybe");
  CHECK_THROWS_AS(d.get_bool("reference.cross_check", false), ConfigError);
  d.set("sweep.K", "8,,16");
  CHECK_THROWS_AS(d.get_ints("sweep.K"), ConfigError);
  CHECK_THROWS_AS(Config::load("/nonexistent/qlwave.cfg"), ConfigError);
}

TEST_CASE("config builders") {
  Config c;
  c.set("sweep.tau_dyadic", "1:3");
  c.set("sweep.tau_base", "0.5");
  CHECK(tau_list_from(c) == std::vector<double>{0.25, 0.125, 0.0625});
  c.set("sweep.tau", "0.1");
  CHECK_THROWS_AS(tau_list_from(c), ConfigError);

  Config f;
  f.set("filter.kind", "sinc");
  f.set("filter.c", "3");
  CHECK(filter_from(f).id() == "sinc:3");
  f.set("filter.kind", "bogus");
  CHECK_THROWS(filter_from(f));

  Config s;
  s.set("time.T", "1");
  s.set("time.tau", "0.3");
  CHECK_THROWS_AS(step_count_from(s), ConfigError);
  s.set("time.tau", "0.25");
  CHECK(step_count_from(s) == 4);

  Config p;
  p.set("problem.name", "nope");
  CHECK_THROWS_AS(problem_from(p), ConfigError);
  Config d;
  d.set("initial.data", "random");
  CHECK_THROWS_AS(initial_data_from(d), ConfigError);
}

TEST_CASE("command line") {
  std::string text;
  CHECK(run_cli({"--help"}, &text) == kExitOk);
  CHECK(run_cli({}, &text) == kExitConfig);
  CHECK(run_cli({"frobnicate"}, &text) == kExitConfig);
  CHECK(run_cli({"simulate", "--set", "grid.KK=3"}, &text) == kExitConfig);
  CHECK(run_cli({"simulate", "--config", "/nonexistent.cfg"}, &text) == kExitConfig);

  SUBCASE("filter-check") {
    CHECK(run_cli({"filter-check", "--filter", "sinc:2"}, &text) == kExitOk);
    CHECK(text.find("scalar inequality: pass") != std::string::npos);
    CHECK(run_cli({"filter-check", "--filter", "hl"}, &text) == kExitCheck);
    CHECK(run_cli({"filter-check", "--filter", "gh"}, &text) == kExitCheck);
    CHECK(run_cli({"filter-check", "--filter", "impulse"}, &text) == kExitCheck);
    CHECK(run_cli({"filter-check", "--filter", "gh", "--A0", "1", "--delta", "0.5"}, &text) ==
          kExitOk);
  }
  SUBCASE("simulate") {
    const fs::path dir = scratch("simulate");
    CHECK(run_cli({"simulate", "-o", dir.string(), "--K", "16", "--tau", "0.1", "--T", "1"},
                  &text) == kExitOk);
    const std::string traj = read_file(dir / "trajectory.csv");
    CHECK(traj.rfind("step,t,norm_h2h1,max_kappa_a,min_one_plus_kappa_a\n", 0) == 0);
    CHECK(read_file(dir / "final_state.csv").rfind("j,u_re,u_im,udot_re,udot_im\n", 0) == 0);

    CHECK(run_cli({"simulate", "-o", dir.string(), "--K", "128", "--tau", "0.25", "--T", "100",
                   "--filter", "impulse"},
                  &text) == kExitDivergence);
    CHECK(run_cli({"simulate", "-o", dir.string(), "--tau", "0.3", "--T", "1"}, &text) ==
          kExitConfig);
  }
  SUBCASE("conv-time on the linear problem") {
    const fs::path dir = scratch("conv_time");
    const fs::path cfg = dir.string() + ".cfg";
    {
      std::ofstream f(cfg);
      f << "problem.kappa = 0\nsweep.K = 8\nsweep.tau_dyadic = 2:5\nsweep.filters = hl, gh\n";
    }
    CHECK(run_cli({"conv-time", "-c", cfg.string(), "-o", dir.string()}, &text) == kExitOk);
    CHECK(fs::exists(dir / "conv_time.csv"));
    CHECK(fs::exists(dir / "conv_time.dat"));
    fs::remove(cfg);
  }
  SUBCASE("conv-space, local-error and energy-check") {
    const fs::path dir = scratch("misc");
    CHECK(run_cli({"conv-space", "-o", dir.string(), "--Ks", "8,16", "--taus", "0.05", "--T",
                   "0.5"},
                  &text) == kExitOk);
    CHECK(fs::exists(dir / "conv_space.csv"));
    CHECK(run_cli({"local-error", "-o", dir.string(), "--K", "32", "--taus", "0.0625,0.03125"},
                  &text) == kExitOk);
    CHECK(read_file(dir / "local_error.csv").rfind("tau,err_h2h1\n", 0) == 0);
    CHECK(run_cli({"energy-check", "-o", dir.string(), "--kappa", "1", "--K", "16", "--tau",
                   "0.001", "--set", "energy.t=0.01", "--set", "energy.n_samples=50"},
                  &text) == kExitOk);
    CHECK(text.find("positivity: pass") != std::string::npos);
  }
}

TEST_CASE("shipped configurations") {
  int seen = 0;
  for (const auto& entry : fs::directory_iterator(QLWAVE_CONFIG_DIR)) {
    if (entry.path().extension() != ".cfg") continue;
    ++seen;
    CAPTURE(entry.path().string());
    const Config c = Config::load(entry.path());
    CHECK_NOTHROW(problem_from(c));
    CHECK_NOTHROW(integrator_from(c).validate());
    if (c.has("sweep.K")) CHECK_NOTHROW(plan_from(c).validate());
  }
  CHECK(seen >= 5);
}
