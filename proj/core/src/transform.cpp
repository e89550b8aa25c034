#include "mmdt/transform.hpp"

#include <string>

#include "mmdt/error.hpp"
#include "mmdt/hyperplanes.hpp"

namespace mmdt {

TransformMatrix::TransformMatrix(Eigen::Index d_source, Eigen::Index d_target) {
  if (d_source < 0 || d_target < 0) throw ValidationError("transform: negative dimension");
  w_ = RowMatrix::Zero(d_source + 1, d_target + 1);
}

TransformMatrix::TransformMatrix(RowMatrix w) : w_(std::move(w)) {
  if (w_.rows() < 1 || w_.cols() < 1) throw ValidationError("transform: shape must be at least 1x1");
  if (!w_.allFinite()) throw ValidationError("transform: non-finite entries");
}

TransformMatrix TransformMatrix::identity_pad(Eigen::Index d_source, Eigen::Index d_target) {
  TransformMatrix out(d_source, d_target);
  const Eigen::Index n = std::min(d_source, d_target);
  for (Eigen::Index i = 0; i < n; ++i) out.w_(i, i) = 1.0;
  out.w_(d_source, d_target) = 1.0;
  return out;
}

TransformMatrix TransformMatrix::unflatten(const Eigen::Ref<const Eigen::VectorXd>& vec, Eigen::Index d_source,
                                           Eigen::Index d_target) {
  if (vec.size() != (d_source + 1) * (d_target + 1)) {
    throw ValidationError("transform: cannot unflatten a vector of length " + std::to_string(vec.size()));
  }
  const Eigen::VectorXd copy = vec;
  return TransformMatrix(RowMatrix(Eigen::Map<const RowMatrix>(copy.data(), d_source + 1, d_target + 1)));
}

Eigen::VectorXd TransformMatrix::flatten() const {
  return Eigen::Map<const Eigen::VectorXd>(w_.data(), w_.size());
}

Eigen::VectorXd project(const TransformMatrix& w, const Eigen::Ref<const Eigen::VectorXd>& x_target) {
  if (x_target.size() != w.d_target()) {
    throw ValidationError("project: target vector has length " + std::to_string(x_target.size()) +
                          ", transform expects " + std::to_string(w.d_target()));
  }
  return w.matrix() * augment(x_target);
}

RowMatrix project_rows(const TransformMatrix& w, const RowMatrix& target_features) {
  if (target_features.cols() != w.d_target()) {
    throw ValidationError("project: target features have dimension " + std::to_string(target_features.cols()) +
                          ", transform expects " + std::to_string(w.d_target()));
  }
  return augment_rows(target_features) * w.matrix().transpose();
}

hinge::HingeProblem build_transform_problem(const LabeledDataset& target_train, const HyperplaneSet& planes,
                                            double c_target, bool pin_augmented_row) {
  if (target_train.empty()) throw ValidationError("transform step: target training set is empty");
  if (!(c_target > 0.0)) throw ValidationError("transform step: C_T must be positive");
  if (target_train.num_classes() > planes.num_classes()) {
    throw ValidationError("transform step: target has more classes than the hyperplane set");
  }
  const int K = planes.num_classes();
  auto examples = std::make_shared<hinge::OuterProductExamples>();
  examples->left = pin_augmented_row ? RowMatrix(planes.planes().leftCols(planes.dim())) : planes.planes();
  examples->right = augment_rows(target_train.features());

  const auto m = static_cast<std::size_t>(target_train.size() * K);
  std::vector<double> signs(m), weights(m, c_target), offsets;
  if (pin_augmented_row) offsets.resize(m);
  for (Eigen::Index i = 0; i < target_train.size(); ++i) {
    for (int k = 0; k < K; ++k) {
      const auto e = static_cast<std::size_t>(i * K + k);
      signs[e] = hinge::class_sign(target_train.label(i), k);
      if (pin_augmented_row) offsets[e] = planes.bias(k);
    }
  }
  return hinge::HingeProblem(hinge::ExampleStorage(std::shared_ptr<const hinge::OuterProductExamples>(std::move(examples))),
                             std::move(signs), std::move(weights), false, std::move(offsets));
}

TransformMatrix solve_transform_step(const LabeledDataset& target_train, const HyperplaneSet& planes,
                                     double c_target, const hinge::SolverOptions& options,
                                     bool pin_augmented_row, hinge::HingeSolution* info) {
  const auto problem = build_transform_problem(target_train, planes, c_target, pin_augmented_row);
  auto solution = hinge::solve(problem, options);
  const Eigen::Index d_s = planes.dim(), d_t = target_train.dim();
  TransformMatrix out = [&] {
    if (!pin_augmented_row) return TransformMatrix::unflatten(solution.w, d_s, d_t);
    RowMatrix w(d_s + 1, d_t + 1);
    w.topRows(d_s) = Eigen::Map<const RowMatrix>(solution.w.data(), d_s, d_t + 1);
    w.row(d_s).setZero();
    w(d_s, d_t) = 1.0;
    return TransformMatrix(std::move(w));
  }();
  if (info != nullptr) *info = std::move(solution);
  return out;
}

}  // namespace mmdt
