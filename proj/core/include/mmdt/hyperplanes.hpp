#pragma once

#include <vector>

#include <Eigen/Core>

#include "mmdt/dataset.hpp"

namespace mmdt {

/// K affine hyperplanes in augmented space; row k is [theta_k; b_k].
class HyperplaneSet {
 public:
  explicit HyperplaneSet(RowMatrix planes);

  static HyperplaneSet zero(int num_classes, Eigen::Index dim) {
    return HyperplaneSet(RowMatrix::Zero(num_classes, dim + 1));
  }

  int num_classes() const { return static_cast<int>(planes_.rows()); }
  /// Feature dimension (plane length minus one).
  Eigen::Index dim() const { return planes_.cols() - 1; }
  const RowMatrix& planes() const { return planes_; }
  auto plane(int k) const { return planes_.row(k); }
  auto theta(int k) const { return planes_.row(k).head(dim()); }
  double bias(int k) const { return planes_(k, dim()); }

  /// plane_k . z for an augmented vector z.
  Eigen::VectorXd scores(const Eigen::Ref<const Eigen::VectorXd>& augmented) const;

  /// argmax_k over scores of an augmented vector; ties go to the lowest k.
  int argmax(const Eigen::Ref<const Eigen::VectorXd>& augmented) const;

  /// Predictions for raw (unaugmented) feature rows.
  std::vector<int> predict_rows(const RowMatrix& features) const;

  bool operator==(const HyperplaneSet& other) const { return planes_ == other.planes_; }

 private:
  RowMatrix planes_;
};

/// Lowest index of the maximum entry.
int argmax_lowest(const Eigen::Ref<const Eigen::VectorXd>& scores);

}  // namespace mmdt
