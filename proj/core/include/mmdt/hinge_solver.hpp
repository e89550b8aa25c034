#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "mmdt/dataset.hpp"

namespace mmdt::hinge {

/// +1 when the example belongs to class `k`, -1 otherwise (one-vs-all).
inline double class_sign(int y, int k) { return y == k ? 1.0 : -1.0; }

/// max{0, 1 - sign(y,k) * score}
double hinge_loss(int y, int k, double score);

/// Solver examples stored as explicit rows; several problems (one per class)
/// may share one instance.
struct DenseExamples {
  RowMatrix rows;

  explicit DenseExamples(RowMatrix r) : rows(std::move(r)) {}

  Eigen::Index size() const { return rows.rows(); }
  Eigen::Index dimension() const { return rows.cols(); }
};

/// Examples that are rank-1 matrices left_k * right_i^T, flattened row-major.
/// Example index e = i * left.rows() + k. Only the factors are stored.
struct OuterProductExamples {
  RowMatrix left;   // one row per k, length a
  RowMatrix right;  // one row per i, length q

  Eigen::Index size() const { return left.rows() * right.rows(); }
  Eigen::Index dimension() const { return left.cols() * right.cols(); }
};

using ExampleStorage =
    std::variant<std::shared_ptr<const DenseExamples>, std::shared_ptr<const OuterProductExamples>>;

/// min_w,b  1/2 |w|^2 + sum_i weight_i * max{0, 1 - sign_i (x_i.w + beta_i b + offset_i)}
///
/// b is only optimised when `fit_bias` is set and is never regularised.
/// Offsets are fixed per-example score shifts (default 0). beta_i is the
/// coefficient of b in example i's score (default 1); projected target points
/// whose last augmented coordinate is not 1 need it.
class HingeProblem {
 public:
  HingeProblem(ExampleStorage examples, std::vector<double> signs, std::vector<double> weights,
               bool fit_bias, std::vector<double> offsets = {}, std::vector<double> bias_coefficients = {});

  HingeProblem(RowMatrix examples, std::vector<double> signs, std::vector<double> weights,
               bool fit_bias);

  Eigen::Index num_examples() const { return num_examples_; }
  Eigen::Index dimension() const { return dimension_; }
  bool fit_bias() const { return fit_bias_; }
  const ExampleStorage& examples() const { return examples_; }
  const std::vector<double>& signs() const { return signs_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& offsets() const { return offsets_; }
  const std::vector<double>& bias_coefficients() const { return bias_coefficients_; }

  /// Example `e` materialised as a vector of length dimension().
  Eigen::VectorXd example(Eigen::Index e) const;

  /// x_e . w for every example.
  Eigen::VectorXd scores(const Eigen::Ref<const Eigen::VectorXd>& w) const;

 private:
  ExampleStorage examples_;
  std::vector<double> signs_;
  std::vector<double> weights_;
  std::vector<double> offsets_;
  std::vector<double> bias_coefficients_;
  bool fit_bias_;
  Eigen::Index num_examples_;
  Eigen::Index dimension_;
};

struct SolverOptions {
  double tol = 1e-6;     // absolute bound on primal suboptimality
  int max_passes = 10000;
};

struct HingeSolution {
  Eigen::VectorXd w;
  double b = 0.0;
  double objective = 0.0;
  double suboptimality_bound = 0.0;  // primal objective minus best dual value seen
  bool converged = false;
  int passes = 0;
};

/// Exact primal objective.
double objective(const HingeProblem& problem, const Eigen::Ref<const Eigen::VectorXd>& w, double b);

/// Minimises the problem to within `options.tol` of its optimum, certified by
/// the duality gap between the best primal point and the best dual point seen.
/// Runs a primal-dual interior point method on the dual; one pass is one
/// Newton iteration. With a bias the dual carries sum_i a_i sign_i beta_i = 0
/// and b is recovered exactly from the scores. The trajectory is a
/// deterministic function of the inputs and a smaller tol only extends it, so
/// the returned objective is monotone in tol.
HingeSolution solve(const HingeProblem& problem, const SolverOptions& options = {});

}  // namespace mmdt::hinge
