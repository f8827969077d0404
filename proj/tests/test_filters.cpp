#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qlwave/errors.hpp"
#include "qlwave/filters.hpp"

using namespace qlwave;

namespace {
const double kPi = std::numbers::pi;

std::vector<FilterSpec> catalog() {
  return {FilterSpec::impulse(), FilterSpec::hairer_lubich(), FilterSpec::grimm_hochbruck(),
          FilterSpec::sinc_c(2.0), FilterSpec::sinc_c(3.0), FilterSpec::sinc_c(0.5)};
}
}  // namespace

TEST_CASE("sinc") {
  CHECK(sinc(0.0) == 1.0);
  CHECK(sinc(kPi) == doctest::Approx(0.0).epsilon(1e-15));
  for (double x : {1e-12, 1e-8, 1e-5, 3e-3, 9.99e-3, 1e-2, 0.5, 2.0, 100.0}) {
    // long double reference
    const long double lx = x;
    const double ref = static_cast<double>(std::sin(lx) / lx);
    CHECK(std::abs(sinc(x) - ref) <= 2e-16 * std::abs(ref));
    CHECK(sinc(-x) == sinc(x));
  }
}

TEST_CASE("catalog filter functions") {
  for (const auto& f : catalog()) {
    CHECK(f.phi(0.0) == 1.0);
    CHECK(f.psi1(0.0) == 1.0);
  }
  CHECK(std::abs(FilterSpec::grimm_hochbruck().phi(kPi)) < 1e-16);

  const auto sinc2 = FilterSpec::sinc_c(2.0);
  CHECK(sinc2.c0() == 1.0);
  CHECK(FilterSpec::sinc_c(3.0).c0() == doctest::Approx(10.0 / 6.0));
  CHECK(FilterSpec::hairer_lubich().c0() == 1.0);
  CHECK(FilterSpec::grimm_hochbruck().c0() == 1.0);
  CHECK(FilterSpec::impulse().c0() == 0.0);

  SUBCASE("sinc:1 coincides with Grimm-Hochbruck") {
    const auto gh = FilterSpec::grimm_hochbruck();
    const auto s1 = FilterSpec::sinc_c(1.0);
    for (double xi : linear_grid(0.0, 1000.0, 10000)) {
      CHECK(std::abs(gh.phi(xi) - s1.phi(xi)) <= 1e-15);
      CHECK(std::abs(gh.psi1(xi) - s1.psi1(xi)) <= 1e-15);
    }
  }
  SUBCASE("against the oracle formulas") {
    for (const char* id : {"impulse", "hl", "gh", "sinc:2", "sinc:3"}) {
      const auto f = FilterSpec::parse(id);
      const auto o = oracle::filter(id);
      for (double xi : {0.05, 0.3, 1.0, 2.5, 7.0, 40.0}) {
        CHECK(f.phi(xi) == doctest::Approx(o.phi(xi)).epsilon(1e-14));
        CHECK(f.psi1(xi) == doctest::Approx(o.psi1(xi)).epsilon(1e-14));
      }
    }
  }
  SUBCASE("psi1 = sinc * phi except for the impulse method") {
    for (const auto& f : catalog()) {
      if (f.kind() == FilterKind::Impulse) continue;
      for (double xi : default_xi_grid()) CHECK(std::abs(f.psi1(xi) - sinc(xi) * f.phi(xi)) <= 1e-15);
    }
  }
  SUBCASE("|1 - phi| <= max(1, (c^2+1)/6) xi^2 for sinc filters") {
    for (double c : {0.5, 1.0, 2.0, 3.0, 4.0}) {
      const auto f = FilterSpec::sinc_c(c);
      for (double xi : linear_grid(0.0, 3.0, 3001))
        CHECK(std::abs(1.0 - f.phi(xi)) <= f.c0() * xi * xi + 1e-16);
    }
  }
  SUBCASE("bound A0 sin^2(xi/2) phi^2 <= A0 / (4c^2)") {
    for (double c : {1.0, 2.0, 3.0}) {
      const auto f = FilterSpec::sinc_c(c);
      for (double xi : default_xi_grid()) {
        const double s = std::sin(xi / 2) * f.phi(xi);
        CHECK(13.0 * s * s <= 13.0 / (4 * c * c) * (1 + 1e-14));
      }
    }
  }
}

TEST_CASE("filter ids") {
  for (const auto& f : catalog()) CHECK(FilterSpec::parse(f.id()) == f);
  CHECK(FilterSpec::sinc_c(2.0).id() == "sinc:2");
  CHECK(FilterSpec::parse("sinc:2.5").c() == 2.5);
  CHECK_THROWS_AS(FilterSpec::parse("sinc:"), ConfigError);
  CHECK_THROWS_AS(FilterSpec::parse("sinc:-1"), ConfigError);
  CHECK_THROWS_AS(FilterSpec::parse("sinc:abc"), ConfigError);
  CHECK_THROWS_AS(FilterSpec::parse("gautschi"), ConfigError);
}

TEST_CASE("check_assumptions") {
  SUBCASE("Hairer-Lubich with A0 = 0") {
    const auto r = check_assumptions(FilterSpec::hairer_lubich(), 0.5, 0.0);
    CHECK(r.all_ok());
  }
  SUBCASE("impulse fails the consistency relation") {
    const auto r = check_assumptions(FilterSpec::impulse(), 0.5, 0.0);
    CHECK(r.assumption1_ok);
    CHECK_FALSE(r.assumption2_ok);
  }
  SUBCASE("A0 = 13, delta = 0.15") {
    CHECK(check_assumptions(FilterSpec::sinc_c(2.0), 0.15, 13.0).all_ok());
    CHECK(check_assumptions(FilterSpec::sinc_c(3.0), 0.15, 13.0).all_ok());
    const auto hl = check_assumptions(FilterSpec::hairer_lubich(), 0.15, 13.0);
    CHECK_FALSE(hl.assumption3_ok);
    CHECK(hl.assumption3_margin < 0);
    const auto gh = check_assumptions(FilterSpec::grimm_hochbruck(), 0.15, 13.0);
    CHECK_FALSE(gh.assumption3_ok);
    CHECK(gh.assumption1_ok);
    CHECK(gh.assumption2_ok);
  }
  SUBCASE("report fields") {
    const auto grid = default_xi_grid();
    const auto r = check_assumptions(FilterSpec::sinc_c(2.0), 0.15, 13.0, grid);
    CHECK(r.delta == 0.15);
    CHECK(r.A0 == 13.0);
    CHECK(std::isfinite(r.worst_margin));
    CHECK(r.worst_xi >= grid.front());
    CHECK(r.worst_xi <= grid.back());
  }
  SUBCASE("invalid parameters") {
    CHECK_THROWS_AS(check_assumptions(FilterSpec::sinc_c(2.0), 0.0, 1.0), ConfigError);
    CHECK_THROWS_AS(check_assumptions(FilterSpec::sinc_c(2.0), 1.0, 1.0), ConfigError);
    CHECK_THROWS_AS(check_assumptions(FilterSpec::sinc_c(2.0), 0.5, -1.0), ConfigError);
    CHECK_THROWS_AS(check_assumptions(FilterSpec::sinc_c(2.0), 0.5, 1.0, {}), ConfigError);
  }
  SUBCASE("admissibility agrees with the min_c threshold") {
    for (double A0 : {1.0, 4.0, 13.0, 30.0}) {
      const double cmin = min_c_for(A0, 0.15);
      CHECK(check_assumptions(FilterSpec::sinc_c(cmin * 1.01), 0.15, A0).assumption3_ok);
    }
  }
}

TEST_CASE("min_c_for") {
  CHECK(min_c_for(0.0, 0.5) == 0.0);
  CHECK(min_c_for(13.0, 1e-12) == doctest::Approx(0.5 * std::sqrt(13.0)).epsilon(1e-9));
  CHECK(std::abs(min_c_for(13.0, 1e-12) - 1.8028) < 1e-3);
  CHECK(min_c_for(3.0, 0.25) == doctest::Approx(1.0));
  CHECK_THROWS_AS(min_c_for(1.0, 0.0), ConfigError);
  CHECK_THROWS_AS(min_c_for(1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(min_c_for(-1.0, 0.5), ConfigError);
}

TEST_CASE("scalar inequality") {
  const double delta = 0.15;
  CHECK(scalar_inequality_lhs(FilterSpec::sinc_c(2.0), 0.0, 1.3) == 0.0);
  CHECK(scalar_inequality_lhs(FilterSpec::impulse(), 13.0, kPi) == doctest::Approx(-13.0));

  const auto impulse = lemma_scalar_inequality(FilterSpec::impulse(), delta, {13.0}, {kPi});
  CHECK_FALSE(impulse.certified());
  CHECK(impulse.min_margin == doctest::Approx(-13.0 + 1.0 - delta / 2));

  const auto A = coefficient_grid(13.0, delta, 1000);
  CHECK(A.front() == doctest::Approx(-1.0 + delta / 2));
  CHECK(A.back() == doctest::Approx(13.0 + delta / 2));
  const auto xi = linear_grid(0.0, 4.0 * kPi, 1000);
  const auto r = lemma_scalar_inequality(FilterSpec::sinc_c(2.0), delta, A, xi);
  CHECK(r.certified());
  CHECK_FALSE(lemma_scalar_inequality(FilterSpec::hairer_lubich(), delta, A, xi).certified());

  SUBCASE("boundary values of A decide the whole interval") {
    // the left-hand side is concave in A, so its minimum over an interval sits at an end
    for (const char* id : {"hl", "gh", "sinc:2", "sinc:1.5"}) {
      const auto f = FilterSpec::parse(id);
      for (double x : linear_grid(0.0, 10.0, 200)) {
        const bool ends = scalar_inequality_lhs(f, A.front(), x) >= -1 + delta / 2 &&
                          scalar_inequality_lhs(f, A.back(), x) >= -1 + delta / 2;
        if (!ends) continue;
        for (double a : linear_grid(A.front(), A.back(), 200))
          CHECK(scalar_inequality_lhs(f, a, x) >= -1 + delta / 2 - 1e-12);
      }
    }
  }
}

TEST_CASE("sampling grids") {
  const auto g = default_xi_grid();
  CHECK(g.size() == 10001);
  CHECK(g.front() == 0.0);
  CHECK(g[1] == doctest::Approx(1e-6));
  CHECK(g.back() == doctest::Approx(1e3));
  const auto l = linear_grid(-1.0, 1.0, 5);
  CHECK(l == std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0});
}
