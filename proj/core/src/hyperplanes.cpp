#include "mmdt/hyperplanes.hpp"

#include <string>

#include "mmdt/error.hpp"

namespace mmdt {

HyperplaneSet::HyperplaneSet(RowMatrix planes) : planes_(std::move(planes)) {
  if (planes_.rows() < 1) throw ValidationError("hyperplane set needs at least one class");
  if (planes_.cols() < 1) throw ValidationError("hyperplanes must include the bias entry");
  if (!planes_.allFinite()) throw ValidationError("hyperplane set contains non-finite values");
}

Eigen::VectorXd HyperplaneSet::scores(const Eigen::Ref<const Eigen::VectorXd>& augmented) const {
  if (augmented.size() != planes_.cols()) {
    throw ValidationError("hyperplane scores: vector has length " + std::to_string(augmented.size()) +
                          ", planes have length " + std::to_string(planes_.cols()));
  }
  return planes_ * augmented;
}

int argmax_lowest(const Eigen::Ref<const Eigen::VectorXd>& scores) {
  int best = 0;
  for (Eigen::Index k = 1; k < scores.size(); ++k) {
    if (scores[k] > scores[best]) best = static_cast<int>(k);
  }
  return best;
}

int HyperplaneSet::argmax(const Eigen::Ref<const Eigen::VectorXd>& augmented) const {
  return argmax_lowest(scores(augmented));
}

std::vector<int> HyperplaneSet::predict_rows(const RowMatrix& features) const {
  if (features.cols() != dim()) {
    throw ValidationError("predict: features have dimension " + std::to_string(features.cols()) +
                          ", model expects " + std::to_string(dim()));
  }
  const RowMatrix scores = augment_rows(features) * planes_.transpose();
  std::vector<int> out(static_cast<std::size_t>(features.rows()));
  for (Eigen::Index i = 0; i < scores.rows(); ++i) out[static_cast<std::size_t>(i)] = argmax_lowest(scores.row(i).transpose());
  return out;
}

}  // namespace mmdt
