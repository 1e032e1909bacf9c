#include "sgpc/kl_field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sgpc {

namespace {

double eigenvalue_of(int j, int k, double l) {
  return 0.25 * std::exp(-std::numbers::pi * double(j * j + k * k) * l * l);
}

}  // namespace

KlSpec build_kl_spec(int n_terms, double correlation_length, double a0) {
  if (n_terms < 1) throw std::invalid_argument("build_kl_spec: n_terms must be >= 1");
  if (!(correlation_length > 0.0))
    throw std::invalid_argument("build_kl_spec: correlation_length must be > 0");
  if (!(a0 > 0.0)) throw std::invalid_argument("build_kl_spec: a0 must be > 0");

  // Enumerate (j,k) in a square block large enough that the n_terms smallest
  // values of j^2+k^2 are all inside it: every excluded pair has
  // j^2+k^2 >= (m+1)^2 + 1.
  int m = 2;
  std::vector<KlEigenpair> pairs;
  for (;;) {
    pairs.clear();
    pairs.reserve(static_cast<std::size_t>(m) * m);
    for (int j = 1; j <= m; ++j)
      for (int k = 1; k <= m; ++k)
        pairs.push_back({eigenvalue_of(j, k, correlation_length), j, k});
    std::sort(pairs.begin(), pairs.end(), [](const KlEigenpair& a, const KlEigenpair& b) {
      const int sa = a.j * a.j + a.k * a.k;
      const int sb = b.j * b.j + b.k * b.k;
      if (sa != sb) return sa < sb;
      if (a.j != b.j) return a.j < b.j;
      return a.k < b.k;
    });
    if (static_cast<int>(pairs.size()) >= n_terms) {
      const KlEigenpair& last = pairs[static_cast<std::size_t>(n_terms) - 1];
      if (last.j * last.j + last.k * last.k < (m + 1) * (m + 1) + 1) break;
    }
    ++m;
  }
  pairs.resize(static_cast<std::size_t>(n_terms));

  KlSpec spec{a0, n_terms, correlation_length, std::move(pairs)};

  double fluctuation = 0.0;
  for (const KlEigenpair& p : spec.eigenpairs) fluctuation += 2.0 * std::sqrt(p.eigenvalue);
  if (!(a0 - fluctuation > 0.0))
    throw std::invalid_argument(
        "build_kl_spec: truncation too large, coefficient loses uniform ellipticity");
  return spec;
}

double evaluate_coefficient(const KlSpec& spec, const RandomSample& sample,
                            const Eigen::Vector2d& x) {
  if (sample.xi.size() != spec.n_terms)
    throw std::invalid_argument("evaluate_coefficient: sample length mismatch");
  if (x.x() < 0.0 || x.x() > 1.0 || x.y() < 0.0 || x.y() > 1.0)
    throw std::invalid_argument("evaluate_coefficient: point outside the unit square");

  double value = spec.a0;
  for (int i = 0; i < spec.n_terms; ++i) {
    const KlEigenpair& p = spec.eigenpairs[static_cast<std::size_t>(i)];
    const double phi = 2.0 * std::cos(p.j * std::numbers::pi * x.y()) *
                       std::cos(p.k * std::numbers::pi * x.x());
    value += std::sqrt(p.eigenvalue) * phi * sample.xi[i];
  }
  return value;
}

EllipticityBounds ellipticity_bounds(const KlSpec& spec) {
  double loose = 0.0, conservative = 0.0;
  const double l = spec.correlation_length;
  for (const KlEigenpair& p : spec.eigenpairs) {
    loose += std::exp(-std::numbers::pi * double(p.j * p.j + p.k * p.k) * l * l);
    conservative += 2.0 * std::sqrt(p.eigenvalue);
  }
  return {spec.a0 - loose, spec.a0 - conservative};
}

double tight_lower_bound(const KlSpec& spec) {
  const EllipticityBounds b = ellipticity_bounds(spec);
  if (b.c_loose <= 0.0 && b.c_conservative <= 0.0)
    throw std::domain_error("tight_lower_bound: coefficient is not uniformly elliptic");
  return b.c_conservative;
}

RandomSample draw_sample(SplitMix64& rng, const KlSpec& spec) {
  RandomSample s;
  s.xi.resize(spec.n_terms);
  for (int i = 0; i < spec.n_terms; ++i) s.xi[i] = rng.uniform_pm1();
  return s;
}

}  // namespace sgpc
