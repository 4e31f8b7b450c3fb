// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "oracle_helpers.hpp"
#include "wavediv/divergence.hpp"
#include "wavediv/error.hpp"
#include "wavediv/synthetic.hpp"

using wavediv::density_by_id;
using wavediv::DivergenceKind;
using wavediv::Errc;
using wavediv::Error;
using wavediv::oracle_divergence;
using wavediv::SyntheticDensity;

TEST_CASE("the catalog holds the four reference densities") {
  const std::vector<SyntheticDensity>& densities = wavediv::catalog();
  REQUIRE(densities.size() == 4);
  std::set<std::string> ids;
  for (const SyntheticDensity& d : densities) ids.insert(d.id);
  CHECK(ids == std::set<std::string>{"uniform", "lin", "bump", "cos"});
  CHECK(density_by_id("lin").id == "lin");
  try {
    density_by_id("gauss");
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::unknown_density_id);
    CHECK(std::string(e.what()).find("gauss") != std::string::npos);
  }
}

TEST_CASE("catalog densities are normalized, bounded, and consistent") {
  for (const SyntheticDensity& d : wavediv::catalog()) {
    CAPTURE(d.id);
    const double total = oracle::integrate(d.pdf, 0.0, 1.0);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-8));

    CHECK(d.cdf(0.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(d.cdf(1.0) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK(d.kappa1 > 0.0);
    for (int i = 0; i <= (1 << 14); ++i) {
      const double x = static_cast<double>(i) / (1 << 14);
      const double p = d.pdf(x);
      if (p < d.kappa1 - 1e-12 || p > d.kappa2 + 1e-12) {
        CAPTURE(x);
        REQUIRE(p >= d.kappa1 - 1e-12);
        REQUIRE(p <= d.kappa2 + 1e-12);
      }
    }

    // cdf' = pdf by central differences
    for (const double x : {0.1, 0.35, 0.62, 0.9}) {
      const double fd = (d.cdf(x + 1e-6) - d.cdf(x - 1e-6)) / 2e-6;
      CHECK(fd == doctest::Approx(d.pdf(x)).epsilon(1e-5));
    }

    // the inverse cdf really inverts
    for (int i = 1; i <= 99; ++i) {
      const double u = static_cast<double>(i) / 100.0;
      const double x = d.inv_cdf(u);
      CHECK(x >= 0.0);
      CHECK(x <= 1.0);
      CHECK(d.cdf(x) == doctest::Approx(u).epsilon(1e-8).scale(1.0));
    }
    CHECK(d.inv_cdf(0.2) < d.inv_cdf(0.8));
  }
}

TEST_CASE("the lin density has its closed-form quantiles") {
  const SyntheticDensity& lin = density_by_id("lin");
  CHECK(lin.pdf(0.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(lin.pdf(1.0) == doctest::Approx(1.5).epsilon(1e-14));
  // median solves x^2/2 + x/2 = 1/2: x = (sqrt(5) - 1) / 2
  CHECK(lin.inv_cdf(0.5) ==
        doctest::Approx(0.6180339887498949).epsilon(1e-12));
}

TEST_CASE("sampling is deterministic in the seed") {
  const SyntheticDensity& bump = density_by_id("bump");
  const std::vector<double> a = wavediv::sample(bump, 64, 123);
  const std::vector<double> b = wavediv::sample(bump, 64, 123);
  CHECK(a == b);
  const std::vector<double> c = wavediv::sample(bump, 64, 124);
  CHECK(a != c);
  for (const double x : a) {
    CHECK(x >= 0.0);
    CHECK(x <= 1.0);
  }
  CHECK_THROWS_AS(wavediv::sample(bump, 0, 1), Error);
}

TEST_CASE("lin samples have the right mean") {
  const SyntheticDensity& lin = density_by_id("lin");
  const long n = 100000;
  const std::vector<double> xs = wavediv::sample(lin, n, 2026);
  const double mean = oracle::mean(xs);
  // E X = 7/12, Var X = 11/144
  const double sd = std::sqrt(11.0 / 144.0);
  CHECK(std::abs(mean - 7.0 / 12.0) <=
        3.0 * sd / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("bump samples pass a KS check against their own cdf") {
  const SyntheticDensity& bump = density_by_id("bump");
  const long n = 4096;
  const std::vector<double> xs = wavediv::sample(bump, n, 31337);
  const double d = oracle::ks_distance(xs, bump.cdf);
  CHECK(d <= 1.95 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("oracle divergences hit the frozen closed forms") {
  const SyntheticDensity& uniform = density_by_id("uniform");
  const SyntheticDensity& lin = density_by_id("lin");

  CHECK(oracle_divergence({DivergenceKind::kullback_leibler, 0.0}, uniform,
                          lin) ==
        doctest::Approx(0.04522874755778078).epsilon(1e-7));
  CHECK(oracle_divergence({DivergenceKind::l2, 0.0}, uniform, lin) ==
        doctest::Approx(1.0 / 12.0).epsilon(1e-9));
  CHECK(oracle_divergence({DivergenceKind::hellinger_integral, 2.0}, uniform,
                          lin) == doctest::Approx(std::log(3.0)).epsilon(1e-9));
  CHECK(oracle_divergence({DivergenceKind::tsallis, 2.0}, uniform, lin) ==
        doctest::Approx(std::log(3.0) - 1.0).epsilon(1e-8));
  CHECK(oracle_divergence({DivergenceKind::renyi, 2.0}, uniform, lin) ==
        doctest::Approx(std::log(std::log(3.0))).epsilon(1e-8));
}

TEST_CASE("oracle divergences are cached and self-consistent") {
  const SyntheticDensity& bump = density_by_id("bump");
  const SyntheticDensity& cosd = density_by_id("cos");
  const double first =
      oracle_divergence({DivergenceKind::l2, 0.0}, bump, cosd);
  const double second =
      oracle_divergence({DivergenceKind::l2, 0.0}, bump, cosd);
  CHECK(first == second);
  CHECK(first > 0.0);

  for (const SyntheticDensity& d : wavediv::catalog()) {
    CHECK(std::abs(oracle_divergence({DivergenceKind::kullback_leibler, 0.0},
                                     d, d)) <= 1e-12);
    for (const SyntheticDensity& e : wavediv::catalog())
      CHECK(oracle_divergence({DivergenceKind::kullback_leibler, 0.0}, d, e) >=
            -1e-12);
  }
}

TEST_CASE("the bump L2 oracle matches its closed form") {
  // int (bump - 1)^2 = 16/125
  const SyntheticDensity& bump = density_by_id("bump");
  const SyntheticDensity& uniform = density_by_id("uniform");
  CHECK(oracle_divergence({DivergenceKind::l2, 0.0}, bump, uniform) ==
        doctest::Approx(16.0 / 125.0).epsilon(1e-9));
}
