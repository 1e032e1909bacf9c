#include "sgpc/oracle.hpp"

#include <stdexcept>
#include <string>

namespace sgpc {

SaaSet make_saa_set(const KlSpec& kl, int n, SplitMix64& rng) {
  if (n < 1) throw std::invalid_argument("make_saa_set: n must be >= 1");
  SaaSet saa;
  saa.samples.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    RandomSample s = draw_sample(rng, kl);
    s.seed_id = i;
    saa.samples.push_back(std::move(s));
  }
  return saa;
}

SampleEvaluation evaluate_sample(const ProblemSpec& spec, const Eigen::VectorXd& u,
                                 const RandomSample& sample, const Eigen::VectorXd* warm_start,
                                 const SparseMatrix* stiffness_in) {
  const FemSpace& space = *spec.space;
  SparseMatrix assembled;
  if (!stiffness_in) {
    assembled = assemble_sample_stiffness(space, spec.kl, sample);
    stiffness_in = &assembled;
  }
  const SparseMatrix& stiffness = *stiffness_in;
  StateSolveReport state = solve_state(space, stiffness, u, spec.tolerances, warm_start);
  const Eigen::VectorXd p = solve_adjoint(space, stiffness, state.y, spec.y_target);

  SampleEvaluation eval;
  const Eigen::VectorXd misfit = state.y - spec.y_target;
  eval.objective = 0.5 * l2_inner(space, misfit, misfit) +
                   0.5 * spec.lambda * l2_inner(space, u, u);
  eval.gradient = spec.lambda * u - p;
  eval.state = std::move(state.y);
  return eval;
}

double objective_sample(const ProblemSpec& spec, const Eigen::VectorXd& u,
                        const RandomSample& sample) {
  const FemSpace& space = *spec.space;
  const StateSolveReport state = solve_state(space, spec.kl, sample, u, spec.tolerances);
  const Eigen::VectorXd misfit = state.y - spec.y_target;
  return 0.5 * l2_inner(space, misfit, misfit) + 0.5 * spec.lambda * l2_inner(space, u, u);
}

Eigen::VectorXd stochastic_gradient(const ProblemSpec& spec, const Eigen::VectorXd& u,
                                    const RandomSample& sample) {
  return evaluate_sample(spec, u, sample).gradient;
}

SaaEvaluation saa_evaluate(const ProblemSpec& spec, const Eigen::VectorXd& u, const SaaSet& saa,
                           SaaWorkspace* workspace) {
  if (saa.size() < 1) throw std::invalid_argument("saa_evaluate: empty sample set");
  if (workspace && workspace->states.empty())
    workspace->states.resize(static_cast<std::size_t>(saa.size()));
  if (workspace && workspace->stiffnesses.empty())
    workspace->stiffnesses.resize(static_cast<std::size_t>(saa.size()));

  SaaEvaluation result;
  result.gradient = Eigen::VectorXd::Zero(spec.space->mesh().n_nodes());
  for (int i = 0; i < saa.size(); ++i) {
    const std::size_t idx = static_cast<std::size_t>(i);
    const Eigen::VectorXd* warm =
        (workspace && workspace->states[idx].size() > 0) ? &workspace->states[idx] : nullptr;
    const SparseMatrix* stiffness = nullptr;
    if (workspace) {
      if (workspace->stiffnesses[idx].nonZeros() == 0)
        workspace->stiffnesses[idx] = assemble_sample_stiffness(*spec.space, spec.kl, saa.samples[idx]);
      stiffness = &workspace->stiffnesses[idx];
    }
    SampleEvaluation eval;
    try {
      eval = evaluate_sample(spec, u, saa.samples[idx], warm, stiffness);
    } catch (const std::exception& e) {
      throw std::runtime_error("saa_evaluate: sample " + std::to_string(i) +
                               " failed: " + e.what());
    }
    result.objective += eval.objective;
    result.gradient += eval.gradient;
    if (workspace) workspace->states[idx] = std::move(eval.state);
  }
  result.objective /= saa.size();
  result.gradient /= saa.size();
  return result;
}

double saa_objective(const ProblemSpec& spec, const Eigen::VectorXd& u, const SaaSet& saa,
                     SaaWorkspace* workspace) {
  return saa_evaluate(spec, u, saa, workspace).objective;
}

Eigen::VectorXd saa_gradient(const ProblemSpec& spec, const Eigen::VectorXd& u, const SaaSet& saa,
                             SaaWorkspace* workspace) {
  return saa_evaluate(spec, u, saa, workspace).gradient;
}

double grad_norm(const ProblemSpec& spec, const Eigen::VectorXd& g) {
  return l2_norm(*spec.space, g);
}

}  // namespace sgpc
