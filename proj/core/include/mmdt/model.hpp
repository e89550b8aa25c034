#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "mmdt/dataset.hpp"
#include "mmdt/hinge_solver.hpp"
#include "mmdt/hyperplanes.hpp"
#include "mmdt/transform.hpp"

namespace mmdt {

enum class TransformInit { Zero, IdentityPad };

struct TrainConfig {
  double c_source = 1.0;
  double c_target = 1.0;
  int max_outer_iters = 50;
  double outer_tol = 1e-4;  // relative decrease of J between outer iterations
  double solver_tol = 1e-6;
  int solver_max_passes = 10000;
  std::uint64_t seed = 0;  // reserved for experiment harnesses; fit is deterministic
  TransformInit init = TransformInit::Zero;
  bool pin_augmented_row = false;

  /// Throws ValidationError when a field is out of range.
  void validate() const;

  hinge::SolverOptions solver_options() const { return {solver_tol, solver_max_passes}; }
};

enum class HalfStep { Classifier, Transform };

const char* to_string(HalfStep step);

struct MmdtModel {
  TransformMatrix transform;
  HyperplaneSet hyperplanes;
  TrainConfig config;
  std::vector<double> objective_history;  // J after every half-step, classifier first
  bool converged = false;
  int outer_iters_run = 0;
  LabelMap label_map;  // class index -> label value of the training files

  int num_classes() const { return hyperplanes.num_classes(); }
  Eigen::Index d_source() const { return transform.d_source(); }
  Eigen::Index d_target() const { return transform.d_target(); }
};

/// J(W, theta, b) = 1/2|W|_F^2 + sum_k [1/2|theta_k|^2 + C_S sum_i L(source) + C_T sum_i L(target)].
/// b_k is not regularised. Either dataset may be empty.
double joint_cost(const TransformMatrix& w, const HyperplaneSet& planes, const LabeledDataset& source,
                  const LabeledDataset& target_train, double c_source, double c_target);

/// The K one-vs-all problems of the classifier half-step for fixed W, sharing
/// one set of solver rows: source points (weight C_S) followed by projected
/// target points (weight C_T).
std::vector<hinge::HingeProblem> build_classifier_problems(const TransformMatrix& w, const LabeledDataset& source,
                                                           const LabeledDataset& target_train, double c_source,
                                                           double c_target);

/// Minimises J over all (theta_k, b_k) for fixed W. Each of the K problems is
/// solved to solver_tol / K so the whole step is within solver_tol.
HyperplaneSet solve_classifier_step(const TransformMatrix& w, const LabeledDataset& source,
                                    const LabeledDataset& target_train, const TrainConfig& config);

using ProgressCallback = std::function<void(int outer_iter, HalfStep step, double objective)>;

/// Alternating minimisation from W = 0 (or the configured init): classifier
/// step, then transform step, until the relative decrease of J over an outer
/// iteration drops below outer_tol or max_outer_iters is reached. Throws
/// DescentViolation if any half-step raises J by more than 2 * solver_tol.
MmdtModel fit(const LabeledDataset& source, const LabeledDataset& target_train, const TrainConfig& config,
              const ProgressCallback& progress = {});

int predict_target(const MmdtModel& model, const Eigen::Ref<const Eigen::VectorXd>& x_target);
int predict_source(const MmdtModel& model, const Eigen::Ref<const Eigen::VectorXd>& x_source);

std::vector<int> predict_target_rows(const MmdtModel& model, const RowMatrix& target_features);
std::vector<int> predict_source_rows(const MmdtModel& model, const RowMatrix& source_features);

}  // namespace mmdt
