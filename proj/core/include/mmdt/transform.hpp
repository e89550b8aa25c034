#pragma once

#include <Eigen/Core>

#include "mmdt/dataset.hpp"
#include "mmdt/hinge_solver.hpp"

namespace mmdt {

class HyperplaneSet;

/// W in R^{(d_S+1) x (d_T+1)}: maps an augmented target point into the
/// augmented source space. vec(W) is the row-major flattening.
class TransformMatrix {
 public:
  TransformMatrix(Eigen::Index d_source, Eigen::Index d_target);  // zero
  explicit TransformMatrix(RowMatrix w);

  static TransformMatrix zero(Eigen::Index d_source, Eigen::Index d_target) {
    return TransformMatrix(d_source, d_target);
  }
  /// Ones on the leading diagonal of the feature block and W(d_S, d_T) = 1.
  static TransformMatrix identity_pad(Eigen::Index d_source, Eigen::Index d_target);
  static TransformMatrix unflatten(const Eigen::Ref<const Eigen::VectorXd>& vec, Eigen::Index d_source,
                                   Eigen::Index d_target);

  Eigen::Index d_source() const { return w_.rows() - 1; }
  Eigen::Index d_target() const { return w_.cols() - 1; }
  const RowMatrix& matrix() const { return w_; }

  Eigen::VectorXd flatten() const;
  double squared_frobenius() const { return w_.squaredNorm(); }

  bool operator==(const TransformMatrix& other) const { return w_ == other.w_; }

 private:
  RowMatrix w_;
};

/// W * [x_t; 1]
Eigen::VectorXd project(const TransformMatrix& w, const Eigen::Ref<const Eigen::VectorXd>& x_target);

/// W * [x; 1] for every row, as rows.
RowMatrix project_rows(const TransformMatrix& w, const RowMatrix& target_features);

/// The W-step as a bias-free hinge problem over vec(W). Example (i, k) is
/// vec([theta_k; b_k] [x_i; 1]^T) with sign delta(y_i, k) and weight C_T,
/// using <W, h z^T>_F = h^T W z.
///
/// With `pin_augmented_row` the last row of W is held at [0 ... 0 1]; the
/// problem is then over the first d_S rows only and each example carries
/// the fixed score b_k as an offset.
hinge::HingeProblem build_transform_problem(const LabeledDataset& target_train, const HyperplaneSet& planes,
                                            double c_target, bool pin_augmented_row = false);

TransformMatrix solve_transform_step(const LabeledDataset& target_train, const HyperplaneSet& planes,
                                     double c_target, const hinge::SolverOptions& options,
                                     bool pin_augmented_row = false, hinge::HingeSolution* info = nullptr);

}  // namespace mmdt
