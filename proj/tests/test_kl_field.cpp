#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "sgpc/kl_field.hpp"
#include "test_support.hpp"

using namespace sgpc;

// Reference eigenvalues, frozen from the closed form
// eta_{j,k} = 1/4 exp(-pi (j^2+k^2) l^2) at l = 0.5.
namespace {
constexpr double kEta11 = 0.05196989408769048;       // (1,1)
constexpr double kEta12 = 0.0049257182466542785;     // (1,2) and (2,1)
constexpr double kCLoose = 0.7499930252722438;       // 1 - sum exp(-pi s l^2)
constexpr double kCConservative = 0.1642182823966326;  // 1 - sum 2 sqrt(eta)
}  // namespace

TEST_SUITE("kl_field") {

TEST_CASE("eigenpairs are sorted by descending eigenvalue with lexicographic ties") {
  const KlSpec spec = build_kl_spec(20, 0.5, 1.0);
  REQUIRE(spec.eigenpairs.size() == 20);

  CHECK(spec.eigenpairs[0].j == 1);
  CHECK(spec.eigenpairs[0].k == 1);
  CHECK(spec.eigenpairs[0].eigenvalue == doctest::Approx(kEta11).epsilon(1e-15));
  CHECK(spec.eigenpairs[1].j == 1);
  CHECK(spec.eigenpairs[1].k == 2);
  CHECK(spec.eigenpairs[2].j == 2);
  CHECK(spec.eigenpairs[2].k == 1);
  CHECK(spec.eigenpairs[1].eigenvalue == doctest::Approx(kEta12).epsilon(1e-15));
  CHECK(spec.eigenpairs[19].j == 4);
  CHECK(spec.eigenpairs[19].k == 4);

  for (std::size_t i = 1; i < spec.eigenpairs.size(); ++i)
    CHECK(spec.eigenpairs[i].eigenvalue <= spec.eigenpairs[i - 1].eigenvalue);
}

TEST_CASE("retained pairs match a brute-force enumeration") {
  // Oracle: enumerate a generous block, sort by (j^2+k^2, j, k), keep 20.
  std::vector<std::tuple<int, int, int>> all;
  for (int j = 1; j <= 12; ++j)
    for (int k = 1; k <= 12; ++k) all.emplace_back(j * j + k * k, j, k);
  std::sort(all.begin(), all.end());

  const KlSpec spec = build_kl_spec(20, 0.5, 1.0);
  for (int i = 0; i < 20; ++i) {
    CHECK(spec.eigenpairs[i].j == std::get<1>(all[i]));
    CHECK(spec.eigenpairs[i].k == std::get<2>(all[i]));
    const double eta = 0.25 * std::exp(-std::numbers::pi * std::get<0>(all[i]) * 0.25);
    CHECK(spec.eigenpairs[i].eigenvalue == doctest::Approx(eta).epsilon(1e-15));
  }
}

TEST_CASE("term count other than 20 still keeps the largest eigenvalues") {
  const KlSpec spec = build_kl_spec(7, 0.5, 1.0);
  REQUIRE(spec.eigenpairs.size() == 7);
  // j^2+k^2 sequence: 2, 5, 5, 8, 10, 10, 13
  const int sums[] = {2, 5, 5, 8, 10, 10, 13};
  for (int i = 0; i < 7; ++i) {
    const auto& p = spec.eigenpairs[i];
    CHECK(p.j * p.j + p.k * p.k == sums[i]);
  }
}

TEST_CASE("invalid construction parameters throw") {
  CHECK_THROWS_AS(build_kl_spec(0, 0.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_kl_spec(20, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_kl_spec(20, -1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_kl_spec(20, 0.5, 0.0), std::invalid_argument);
  // mean too small for the fluctuation amplitude: uniform ellipticity is lost
  CHECK_THROWS_AS(build_kl_spec(20, 0.5, 0.5), std::invalid_argument);
}

TEST_CASE("ellipticity bounds match the frozen closed forms") {
  const KlSpec spec = build_kl_spec(20, 0.5, 1.0);
  const EllipticityBounds b = ellipticity_bounds(spec);
  CHECK(b.c_loose == doctest::Approx(kCLoose).epsilon(1e-14));
  CHECK(b.c_conservative == doctest::Approx(kCConservative).epsilon(1e-14));
  // the conservative bound is the one all diagnostics rely on
  CHECK(tight_lower_bound(spec) == doctest::Approx(kCConservative).epsilon(1e-14));
  CHECK(b.c_conservative < b.c_loose);
}

TEST_CASE("zero fluctuation reproduces the mean coefficient") {
  const KlSpec spec = build_kl_spec(20, 0.5, 1.0);
  RandomSample zero;
  zero.xi = Eigen::VectorXd::Zero(20);
  SplitMix64 rng(7);
  for (int i = 0; i < 50; ++i) {
    const Eigen::Vector2d x(rng.uniform01(), rng.uniform01());
    CHECK(evaluate_coefficient(spec, zero, x) == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("corner evaluation equals the mean plus sum of 2 sqrt(eta) xi") {
  // every eigenfunction attains 2 at the origin
  const KlSpec spec = build_kl_spec(20, 0.5, 1.0);
  SplitMix64 rng(11);
  const RandomSample s = draw_sample(rng, spec);
  double expected = 1.0;
  for (int i = 0; i < 20; ++i)
    expected += 2.0 * std::sqrt(spec.eigenpairs[i].eigenvalue) * s.xi[i];
  CHECK(evaluate_coefficient(spec, s, {0.0, 0.0}) ==
        doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("swapping coordinates swaps the (j,k) roles") {
  // activate a single asymmetric mode: (j,k) = (1,2)
  const KlSpec spec = build_kl_spec(20, 0.5, 1.0);
  RandomSample s;
  s.xi = Eigen::VectorXd::Zero(20);
  s.xi[1] = 1.0;  // eigenpair (1,2)
  RandomSample swapped;
  swapped.xi = Eigen::VectorXd::Zero(20);
  swapped.xi[2] = 1.0;  // eigenpair (2,1)
  const Eigen::Vector2d x(0.3, 0.8);
  const Eigen::Vector2d xs(0.8, 0.3);
  CHECK(evaluate_coefficient(spec, s, x) ==
        doctest::Approx(evaluate_coefficient(spec, swapped, xs)).epsilon(1e-14));
}

TEST_CASE("evaluation validates its inputs") {
  const KlSpec spec = build_kl_spec(20, 0.5, 1.0);
  RandomSample bad;
  bad.xi = Eigen::VectorXd::Zero(19);
  CHECK_THROWS_AS(evaluate_coefficient(spec, bad, {0.5, 0.5}), std::invalid_argument);
  RandomSample ok;
  ok.xi = Eigen::VectorXd::Zero(20);
  CHECK_THROWS_AS(evaluate_coefficient(spec, ok, {-0.1, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(evaluate_coefficient(spec, ok, {0.5, 1.1}), std::invalid_argument);
}

TEST_CASE("samples are uniform in [-1,1) and reproducible") {
  const KlSpec spec = build_kl_spec(20, 0.5, 1.0);
  SplitMix64 rng_a(42), rng_b(42);
  const RandomSample a = draw_sample(rng_a, spec);
  const RandomSample b = draw_sample(rng_b, spec);
  REQUIRE(a.xi.size() == 20);
  CHECK((a.xi - b.xi).cwiseAbs().maxCoeff() == 0.0);
  for (int i = 0; i < 20; ++i) {
    CHECK(a.xi[i] >= -1.0);
    CHECK(a.xi[i] < 1.0);
  }
}

TEST_CASE("realizations respect the conservative lower bound") {
  const KlSpec spec = build_kl_spec(20, 0.5, 1.0);
  const double c = tight_lower_bound(spec);
  SplitMix64 rng(3);
  double min_seen = 1e30;
  for (int s = 0; s < 50; ++s) {
    const RandomSample sample = draw_sample(rng, spec);
    for (int p = 0; p < 20; ++p) {
      const Eigen::Vector2d x(rng.uniform01(), rng.uniform01());
      min_seen = std::min(min_seen, evaluate_coefficient(spec, sample, x));
    }
  }
  CHECK(min_seen >= c);
  CHECK(min_seen < 1.0);  // fluctuations do push below the mean
}

}  // TEST_SUITE
