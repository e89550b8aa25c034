#include "mmdt/baselines.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "mmdt/error.hpp"

namespace mmdt {

namespace {

HyperplaneSet one_vs_all(const LabeledDataset& data, double c, const hinge::SolverOptions& options) {
  if (data.empty()) throw ValidationError("one-vs-all training: dataset is empty");
  if (!(c > 0.0)) throw ValidationError("one-vs-all training: C must be positive");
  const int K = data.num_classes();
  const hinge::ExampleStorage shared(std::make_shared<const hinge::DenseExamples>(data.features()));
  hinge::SolverOptions per_class = options;
  per_class.tol /= static_cast<double>(K);
  const std::vector<double> weights(static_cast<std::size_t>(data.size()), c);
  RowMatrix planes(K, data.dim() + 1);
  for (int k = 0; k < K; ++k) {
    std::vector<double> signs(static_cast<std::size_t>(data.size()));
    for (Eigen::Index i = 0; i < data.size(); ++i) signs[static_cast<std::size_t>(i)] = hinge::class_sign(data.label(i), k);
    const auto solution = hinge::solve(hinge::HingeProblem(shared, std::move(signs), weights, true), per_class);
    planes.row(k).head(data.dim()) = solution.w.transpose();
    planes(k, data.dim()) = solution.b;
  }
  return HyperplaneSet(std::move(planes));
}

}  // namespace

HyperplaneSet train_svm_source(const LabeledDataset& source, double c, const hinge::SolverOptions& options) {
  return one_vs_all(source, c, options);
}

HyperplaneSet train_svm_target(const LabeledDataset& target_train, double c, const hinge::SolverOptions& options) {
  return one_vs_all(target_train, c, options);
}

std::vector<int> predict_svm_source_on_target(const HyperplaneSet& svm_source, const RowMatrix& target_features) {
  if (target_features.cols() != svm_source.dim()) {
    throw ValidationError("heterogeneous features unsupported by svm_s: target has dimension " +
                          std::to_string(target_features.cols()) + ", source model has " +
                          std::to_string(svm_source.dim()));
  }
  return svm_source.predict_rows(target_features);
}

double multiclass_accuracy(std::span<const int> predictions, std::span<const int> labels) {
  if (predictions.size() != labels.size()) throw ValidationError("accuracy: length mismatch");
  if (predictions.empty()) throw ValidationError("accuracy: no predictions");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) correct += predictions[i] == labels[i] ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(labels.size());
}

std::int64_t constraint_count(TransformMethod method, std::int64_t num_classes, std::int64_t n_source,
                              std::int64_t n_target) {
  if (num_classes < 0 || n_source < 0 || n_target < 0) throw ValidationError("constraint_count: negative count");
  return method == TransformMethod::Mmdt ? num_classes * n_target : n_source * n_target;
}

Summary summarize(std::span<const double> values) {
  Summary out;
  out.count = values.size();
  if (values.empty()) return out;
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return out;
}

}  // namespace mmdt
