#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mmdt/dataset.hpp"
#include "mmdt/hinge_solver.hpp"
#include "mmdt/hyperplanes.hpp"

namespace mmdt {

/// One-vs-all linear SVM on source features (svm_s). Each class problem is
/// solved to options.tol / K.
HyperplaneSet train_svm_source(const LabeledDataset& source, double c, const hinge::SolverOptions& options = {});

/// One-vs-all linear SVM on the labelled target points (svm_t), in target space.
HyperplaneSet train_svm_target(const LabeledDataset& target_train, double c,
                               const hinge::SolverOptions& options = {});

/// Applies a source-space classifier to target features. Throws
/// ValidationError when the dimensions differ.
std::vector<int> predict_svm_source_on_target(const HyperplaneSet& svm_source, const RowMatrix& target_features);

/// Fraction of positions where predictions equal labels.
double multiclass_accuracy(std::span<const int> predictions, std::span<const int> labels);

enum class TransformMethod { Mmdt, Arct };

/// Constraints the transform learner has to satisfy: K * n_T for the
/// max-margin transform, n_S * n_T for pairwise similarity constraints.
std::int64_t constraint_count(TransformMethod method, std::int64_t num_classes, std::int64_t n_source,
                              std::int64_t n_target);

struct Summary {
  double mean = 0.0;
  double stddev = 0.0;  // sample (n - 1) standard deviation; 0 for a single value
  std::size_t count = 0;
};

Summary summarize(std::span<const double> values);

}  // namespace mmdt
