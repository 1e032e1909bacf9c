#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "sgpc/benchmark.hpp"
#include "sgpc/oracle.hpp"
#include "test_support.hpp"

using namespace sgpc;
namespace st = sgpc::testing;

TEST_SUITE("oracle") {

TEST_CASE("sample evaluation reports the tracking objective it solved") {
  const ProblemSpec spec = make_benchmark_problem(3, 0.25);
  SplitMix64 rng(41);
  const RandomSample s = draw_sample(rng, spec.kl);
  const Eigen::VectorXd u = st::random_vector(rng, spec.space->mesh().n_nodes(), 2.0);

  const SampleEvaluation eval = evaluate_sample(spec, u, s);
  const Eigen::VectorXd misfit = eval.state - spec.y_target;
  const double expected = 0.5 * l2_inner(*spec.space, misfit, misfit) +
                          0.5 * spec.lambda * l2_inner(*spec.space, u, u);
  CHECK(eval.objective == doctest::Approx(expected).epsilon(1e-13));
  CHECK(eval.objective == doctest::Approx(objective_sample(spec, u, s)).epsilon(1e-11));
}

TEST_CASE("adjoint gradient matches central finite differences") {
  SolverTolerances tol;
  tol.newton_tol = 1e-12;
  const ProblemSpec spec = make_benchmark_problem(4, 0.1, tol);
  const int n = spec.space->mesh().n_nodes();
  SplitMix64 rng(43);
  const RandomSample s = draw_sample(rng, spec.kl);
  const Eigen::VectorXd u = st::random_vector(rng, n);
  const Eigen::VectorXd g = stochastic_gradient(spec, u, s);

  const double h = 1e-4;
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::VectorXd d = st::random_vector(rng, n);
    d /= l2_norm(*spec.space, d);
    const double fd =
        (objective_sample(spec, u + h * d, s) - objective_sample(spec, u - h * d, s)) /
        (2.0 * h);
    const double directional = l2_inner(*spec.space, g, d);
    CHECK(std::abs(directional - fd) / std::max(1.0, std::abs(fd)) < 1e-5);
  }
}

TEST_CASE("with zero regularization the gradient is minus the adjoint") {
  const ProblemSpec spec = make_benchmark_problem(3, 0.0);
  SplitMix64 rng(5);
  const RandomSample s = draw_sample(rng, spec.kl);
  const Eigen::VectorXd u = st::random_vector(rng, spec.space->mesh().n_nodes());

  const SampleEvaluation eval = evaluate_sample(spec, u, s);
  const Eigen::VectorXd p =
      solve_adjoint(*spec.space, spec.kl, s, eval.state, spec.y_target);
  CHECK((eval.gradient + p).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("frozen sample sets are ordered and reproducible") {
  const KlSpec kl = build_kl_spec(20, 0.5, 1.0);
  SplitMix64 rng_a = derive_stream(10, 1);
  SplitMix64 rng_b = derive_stream(10, 1);
  const SaaSet a = make_saa_set(kl, 8, rng_a);
  const SaaSet b = make_saa_set(kl, 8, rng_b);
  REQUIRE(a.size() == 8);
  for (int i = 0; i < 8; ++i) {
    CHECK(a.samples[i].seed_id == i);
    CHECK((a.samples[i].xi - b.samples[i].xi).cwiseAbs().maxCoeff() == 0.0);
  }
  SplitMix64 rng_c(10);
  CHECK_THROWS_AS(make_saa_set(kl, 0, rng_c), std::invalid_argument);
}

TEST_CASE("sample average equals the mean of per-sample evaluations") {
  const ProblemSpec spec = make_benchmark_problem(3, 0.5);
  const int n = spec.space->mesh().n_nodes();
  SplitMix64 rng = derive_stream(10, 1);
  const SaaSet saa = make_saa_set(spec.kl, 5, rng);
  SplitMix64 urng(77);
  const Eigen::VectorXd u = st::random_vector(urng, n);

  double obj = 0.0;
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(n);
  for (const RandomSample& s : saa.samples) {
    const SampleEvaluation eval = evaluate_sample(spec, u, s);
    obj += eval.objective;
    grad += eval.gradient;
  }
  obj /= saa.size();
  grad /= saa.size();

  const SaaEvaluation mean = saa_evaluate(spec, u, saa);
  CHECK(mean.objective == doctest::Approx(obj).epsilon(1e-13));
  CHECK((mean.gradient - grad).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(saa_objective(spec, u, saa) == doctest::Approx(obj).epsilon(1e-12));
  CHECK(grad_norm(spec, mean.gradient) ==
        doctest::Approx(l2_norm(*spec.space, grad)).epsilon(1e-12));
}

TEST_CASE("workspace reuse changes nothing but the cost") {
  const ProblemSpec spec = make_benchmark_problem(3, 0.5);
  SplitMix64 rng = derive_stream(10, 1);
  const SaaSet saa = make_saa_set(spec.kl, 4, rng);
  SplitMix64 urng(13);
  const Eigen::VectorXd u1 = st::random_vector(urng, spec.space->mesh().n_nodes());
  const Eigen::VectorXd u2 = u1 + 0.01 * st::random_vector(urng, spec.space->mesh().n_nodes());

  SaaWorkspace ws;
  const SaaEvaluation cold1 = saa_evaluate(spec, u1, saa);
  const SaaEvaluation warm1 = saa_evaluate(spec, u1, saa, &ws);
  CHECK((cold1.gradient - warm1.gradient).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(ws.states.size() == 4);
  CHECK(ws.stiffnesses.size() == 4);
  CHECK(ws.stiffnesses[0].nonZeros() > 0);

  // second evaluation warm-starts from the stored states
  const SaaEvaluation cold2 = saa_evaluate(spec, u2, saa);
  const SaaEvaluation warm2 = saa_evaluate(spec, u2, saa, &ws);
  CHECK(std::abs(cold2.objective - warm2.objective) < 1e-9);
  CHECK((cold2.gradient - warm2.gradient).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("empty sample sets are rejected with the failing context") {
  const ProblemSpec spec = make_benchmark_problem(2, 0.5);
  const Eigen::VectorXd u = Eigen::VectorXd::Zero(spec.space->mesh().n_nodes());
  CHECK_THROWS_AS(saa_evaluate(spec, u, SaaSet{}), std::invalid_argument);

  // a sample of the wrong length fails inside the sweep and names its index
  SaaSet bad;
  bad.samples.push_back(RandomSample{Eigen::VectorXd::Zero(3), 0});
  CHECK_THROWS_WITH_AS(saa_evaluate(spec, u, bad),
                       doctest::Contains("sample 0"), std::runtime_error);
}

}  // TEST_SUITE
