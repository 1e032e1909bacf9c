#ifndef SGPC_ORACLE_HPP
#define SGPC_ORACLE_HPP

#include <memory>
#include <vector>

#include "sgpc/pde.hpp"

namespace sgpc {

/// Everything that defines one instance of the tracking problem
/// min E[ 1/2 ||y_u - y_target||^2 ] + lambda/2 ||u||^2.
struct ProblemSpec {
  KlSpec kl;
  std::shared_ptr<const FemSpace> space;
  Eigen::VectorXd y_target;
  double lambda = 0.0;
  SolverTolerances tolerances;
};

/// Frozen ordered sample set for sample-average approximation.
struct SaaSet {
  std::vector<RandomSample> samples;
  int size() const { return static_cast<int>(samples.size()); }
};

SaaSet make_saa_set(const KlSpec& kl, int n, SplitMix64& rng);

/// Per-sample reusable data, keyed by sample index: warm-start states for
/// nearby controls and the control-independent stiffness matrices. Owning it
/// is the caller's job.
struct SaaWorkspace {
  std::vector<Eigen::VectorXd> states;
  std::vector<SparseMatrix> stiffnesses;
};

struct SampleEvaluation {
  double objective = 0.0;
  Eigen::VectorXd gradient;
  Eigen::VectorXd state;
};

/// One state solve + one adjoint solve: objective value
/// 1/2||y-y_target||^2 + lambda/2||u||^2 and gradient lambda u - p.
/// A pre-assembled stiffness for this sample may be passed to skip assembly.
SampleEvaluation evaluate_sample(const ProblemSpec& spec, const Eigen::VectorXd& u,
                                 const RandomSample& sample,
                                 const Eigen::VectorXd* warm_start = nullptr,
                                 const SparseMatrix* stiffness = nullptr);

double objective_sample(const ProblemSpec& spec, const Eigen::VectorXd& u,
                        const RandomSample& sample);

Eigen::VectorXd stochastic_gradient(const ProblemSpec& spec, const Eigen::VectorXd& u,
                                    const RandomSample& sample);

struct SaaEvaluation {
  double objective = 0.0;
  Eigen::VectorXd gradient;
};

/// Arithmetic mean over the frozen sample list, accumulated in sample order.
/// A per-sample failure is rethrown with the failing sample index.
SaaEvaluation saa_evaluate(const ProblemSpec& spec, const Eigen::VectorXd& u, const SaaSet& saa,
                           SaaWorkspace* workspace = nullptr);

double saa_objective(const ProblemSpec& spec, const Eigen::VectorXd& u, const SaaSet& saa,
                     SaaWorkspace* workspace = nullptr);

Eigen::VectorXd saa_gradient(const ProblemSpec& spec, const Eigen::VectorXd& u, const SaaSet& saa,
                             SaaWorkspace* workspace = nullptr);

/// Control-space (L2) norm of a gradient representative.
double grad_norm(const ProblemSpec& spec, const Eigen::VectorXd& g);

}  // namespace sgpc

#endif
