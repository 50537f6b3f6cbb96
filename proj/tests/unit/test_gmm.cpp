#include "doctest.h"

#include <cmath>
#include <random>

#include "kgpat/gmm.hpp"
#include "kgpat/range_model.hpp"

using namespace kgpat;

namespace {

std::vector<double> normal_draws(std::uint64_t seed, std::size_t n, double mean, double sigma) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(mean, sigma);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

}  // namespace

TEST_CASE("single gaussian selects one mode") {
  auto x = normal_draws(11, 1000, 0.0, 1.0);
  auto fit = fit_gmm(x, 5, 3, 42);
  REQUIRE(fit);
  CHECK(fit->modes == 1);
  CHECK(std::fabs(fit->components[0].mean) < 0.1);
  CHECK(std::fabs(fit->components[0].sigma() - 1.0) < 0.1);
  CHECK(std::isfinite(fit->bic));
}

TEST_CASE("one mode wins on most single-gaussian samples") {
  int wins = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto fit = fit_gmm(normal_draws(100 + s, 500, 3.0, 2.0), 3, 2, s);
    wins += fit && fit->modes == 1;
  }
  CHECK(wins >= 19);
}

TEST_CASE("two separated modes are recovered") {
  auto x = normal_draws(5, 500, -5.0, 1.0);
  auto y = normal_draws(6, 500, 5.0, 1.0);
  x.insert(x.end(), y.begin(), y.end());
  auto fit = fit_gmm(x, 5, 3, 1);
  REQUIRE(fit);
  REQUIRE(fit->modes == 2);
  CHECK(std::fabs(fit->components[0].mean + 5.0) < 0.3);
  CHECK(std::fabs(fit->components[1].mean - 5.0) < 0.3);
  CHECK(fit->components[0].weight == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("constant sample gives one floor-variance component") {
  std::vector<double> x(50, 7.0);
  auto fit = fit_gmm(x, 5, 3, 0);
  REQUIRE(fit);
  CHECK(fit->modes == 1);
  CHECK(fit->components[0].mean == 7.0);
  CHECK(fit->components[0].variance == GmmOptions{}.variance_floor);
}

TEST_CASE("too few values give no fit") {
  GmmOptions o;
  o.min_samples = 20;
  auto x = normal_draws(1, 19, 0.0, 1.0);
  CHECK_FALSE(fit_gmm(x, o));
  x.push_back(0.5);
  CHECK(fit_gmm(x, o));
}

TEST_CASE("EM log-likelihood never decreases") {
  auto x = normal_draws(3, 300, 0.0, 1.0);
  auto y = normal_draws(4, 200, 4.0, 0.5);
  x.insert(x.end(), y.begin(), y.end());
  for (int modes = 1; modes <= 4; ++modes) {
    std::mt19937_64 rng(modes);
    auto r = run_em(x, modes, rng, GmmOptions{});
    REQUIRE(!r.trace.empty());
    for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i] >= r.trace[i - 1] - 1e-8);
  }
}

TEST_CASE("results are reported in original units") {
  // Same shape, shifted and scaled: means map through the affine change.
  auto x = normal_draws(9, 400, 0.0, 1.0);
  std::vector<double> z;
  for (double v : x) z.push_back(1000.0 + 50.0 * v);
  auto a = fit_gmm(x, 1, 1, 3);
  auto b = fit_gmm(z, 1, 1, 3);
  REQUIRE(a);
  REQUIRE(b);
  CHECK(b->components[0].mean == doctest::Approx(1000.0 + 50.0 * a->components[0].mean).epsilon(1e-6));
  CHECK(b->components[0].variance == doctest::Approx(2500.0 * a->components[0].variance).epsilon(1e-6));
}

TEST_CASE("fits are deterministic for a seed") {
  auto x = normal_draws(21, 300, 2.0, 3.0);
  auto a = fit_gmm(x, 4, 3, 99);
  auto b = fit_gmm(x, 4, 3, 99);
  REQUIRE(a);
  REQUIRE(b);
  CHECK(a->components == b->components);
  CHECK(a->bic == b->bic);
}

TEST_CASE("bic formula") {
  // k = 3m - 1 free parameters.
  CHECK(bic(-100.0, 2, 100) == doctest::Approx(5.0 * std::log(100.0) + 200.0));
}

TEST_CASE("mixture membership is the one-sigma band of any component") {
  RangeModel r{GaussianMixtureRange{{{0.5, 0.0, 1.0}, {0.5, 10.0, 4.0}}, 0, 1, false, xsd::double_}};
  CHECK(membership(r, Resource::literal("0.9", xsd::double_)));
  CHECK(membership(r, Resource::literal("-1", xsd::integer)));
  CHECK_FALSE(membership(r, Resource::literal("1.5", xsd::double_)));
  CHECK(membership(r, Resource::literal("11.9", xsd::decimal)));
  CHECK_FALSE(membership(r, Resource::literal("5")));
  CHECK_FALSE(membership(r, Resource::literal("abc", xsd::double_)));
}

TEST_CASE("fixed formatting rounds to two decimals") {
  CHECK(format_fixed(24.5 - std::sqrt(1.32), 2) == "23.35");
  CHECK(format_fixed(24.5 + std::sqrt(1.32), 2) == "25.65");
  CHECK(format_fixed(-0.001, 2) == "0.00");
}
