#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qlwave/errors.hpp"
#include "qlwave/problem.hpp"

using namespace qlwave;

TEST_CASE("problem definitions") {
  const auto p = model_problem(0.01);
  CHECK(p.name() == "model");
  CHECK(p.kappa() == 0.01);
  CHECK(p.a(0.0) == 0.0);
  CHECK(p.g(0.0, 0.0) == 0.0);
  CHECK(p.a(3.0) == 3.0);
  CHECK(p.g(2.0, 3.0) == doctest::Approx(9.0 + 0.01 * 8.0));
  CHECK(p.has_g());
  CHECK(model_problem(1.0).g(2.0, 0.0) == doctest::Approx(8.0));

  const auto q = quasilinear_problem(1.0);
  CHECK_FALSE(q.has_g());
  CHECK(q.g(5.0, 5.0) == 0.0);
  CHECK(make_problem("model", 1.0).name() == "model");
  CHECK(make_problem("quasilinear", 1.0).name() == "quasilinear");
  CHECK_THROWS_AS(make_problem("burgers", 1.0), ConfigError);

  CHECK_THROWS_AS(ProblemSpec("bad", 1.0, [](double u) { return u + 1.0; }), ConfigError);
  CHECK_THROWS_AS(ProblemSpec("bad", 1.0, [](double u) { return u; },
                              [](double, double) { return 1e-3; }),
                  ConfigError);
  CHECK_NOTHROW(ProblemSpec("ok", 1.0, [](double u) { return std::sin(u); }));
}

TEST_CASE("H5 initial data") {
  const auto s = paper_initial_data(64);
  CHECK(s.degree() == 64);
  CHECK(s.u[0] == Complex(1.0, 0.0));
  CHECK(s.udot[0] == Complex(1.0, 0.0));
  CHECK(s.u[1].real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(s.u[-1] == s.u[1]);
  CHECK(s.udot[3].real() == doctest::Approx(1.0 / std::sqrt(1.0 + std::pow(3.0, 9.02))));
  for (int j = 1; j <= 64; ++j) {
    CHECK(s.u[j].imag() == 0.0);
    CHECK(s.u[j].real() > 0.0);
    CHECK(s.u[j].real() < s.u[j - 1].real());
    CHECK(s.udot[j].real() < s.udot[j - 1].real());
  }
  CHECK_THROWS_AS(paper_initial_data(0), ConfigError);

  SUBCASE("H5 x H4 partial sums settle, H5.01 x H4.01 sums keep growing") {
    auto partial = [](int K, double s) {
      const auto d = paper_initial_data(K);
      return pair_norm(d.u, d.udot, NormOrder(s - 1.0));
    };
    // increments of the H^5 x H^4 sums shrink like K^{-0.02}, the others like K^{0}
    const double a1 = partial(1 << 10, 5.0), a2 = partial(1 << 14, 5.0);
    const double b1 = partial(1 << 10, 5.01), b2 = partial(1 << 14, 5.01);
    CHECK(std::isfinite(a2));
    CHECK(b2 - b1 > a2 - a1);
    // the squared H^{5.01} sum grows at least logarithmically
    CHECK(b2 * b2 - b1 * b1 > 2.0 * std::log(16.0) * 0.9);
  }
}

TEST_CASE("smooth initial data is resolved") {
  const auto s = smooth_initial_data(32);
  CHECK(s.u[0].real() == 0.5);
  CHECK(s.udot[2].real() == doctest::Approx(0.25 / 4));
}

TEST_CASE("ellipticity report") {
  const auto p = model_problem(1.0);
  const auto zero = ellipticity_report(p, SpectralField(8));
  CHECK(zero.delta_est == 1.0);
  CHECK(zero.A0_est == 0.0);
  CHECK(zero.grid_size == 33);
  CHECK_FALSE(zero.hyperbolicity_lost);

  SpectralField two(2);
  two.set(0, 2.0);
  const auto neg = ellipticity_report(model_problem(-1.0), two);
  CHECK(neg.delta_est == doctest::Approx(-1.0));
  CHECK(neg.hyperbolicity_lost);
  CHECK_THROWS_AS(ellipticity_report(p, two, 4), AliasingError);

  SUBCASE("H5 data at K = 512 stays well below 13") {
    const auto r = ellipticity_report(p, paper_initial_data(512).u);
    CHECK(r.A0_est <= 13.0);
    CHECK(r.A0_est == doctest::Approx(2.463).epsilon(1e-3));
    CHECK(r.delta_est <= 1.0 + r.A0_est);
  }
  SUBCASE("refining the grid beyond resolution changes little") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
      const auto u = oracle::random_field(12, rng, 0.7);
      const auto a = ellipticity_report(p, u);
      const auto b = ellipticity_report(p, u, 2 * a.grid_size);
      CHECK(std::abs(a.A0_est - b.A0_est) <= 1e-10);
      CHECK(std::abs(a.delta_est - b.delta_est) <= 1e-10);
    }
  }
}
