#include "mmdt/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "mmdt/error.hpp"

namespace mmdt {

void TrainConfig::validate() const {
  if (!(c_source > 0.0) || !std::isfinite(c_source)) throw ValidationError("C_S must be positive");
  if (!(c_target > 0.0) || !std::isfinite(c_target)) throw ValidationError("C_T must be positive");
  if (max_outer_iters < 1) throw ValidationError("max_outer_iters must be >= 1");
  if (!(outer_tol > 0.0)) throw ValidationError("outer_tol must be positive");
  if (!(solver_tol > 0.0)) throw ValidationError("solver_tol must be positive");
  if (solver_max_passes < 1) throw ValidationError("solver_max_passes must be >= 1");
}

const char* to_string(HalfStep step) {
  return step == HalfStep::Classifier ? "classifier" : "transform";
}

namespace {

void check_shapes(const TransformMatrix& w, const HyperplaneSet& planes, const LabeledDataset& source,
                  const LabeledDataset& target) {
  if (planes.dim() != w.d_source()) {
    throw ValidationError("hyperplanes have dimension " + std::to_string(planes.dim()) +
                          ", transform maps into dimension " + std::to_string(w.d_source()));
  }
  if (source.dim() != w.d_source()) {
    throw ValidationError("source features have dimension " + std::to_string(source.dim()) + ", expected " +
                          std::to_string(w.d_source()));
  }
  if (target.dim() != w.d_target()) {
    throw ValidationError("target features have dimension " + std::to_string(target.dim()) + ", expected " +
                          std::to_string(w.d_target()));
  }
  if (source.num_classes() > planes.num_classes() || target.num_classes() > planes.num_classes()) {
    throw ValidationError("datasets have more classes than the hyperplane set");
  }
}

double hinge_terms(const RowMatrix& scores, const std::vector<int>& labels, double weight) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    for (Eigen::Index k = 0; k < scores.cols(); ++k) {
      total += hinge::hinge_loss(labels[static_cast<std::size_t>(i)], static_cast<int>(k), scores(i, k));
    }
  }
  return weight * total;
}

}  // namespace

double joint_cost(const TransformMatrix& w, const HyperplaneSet& planes, const LabeledDataset& source,
                  const LabeledDataset& target_train, double c_source, double c_target) {
  check_shapes(w, planes, source, target_train);
  double total = 0.5 * w.squared_frobenius();
  for (int k = 0; k < planes.num_classes(); ++k) total += 0.5 * planes.theta(k).squaredNorm();
  if (!source.empty()) {
    const RowMatrix scores = augment_rows(source.features()) * planes.planes().transpose();
    total += hinge_terms(scores, source.labels(), c_source);
  }
  if (!target_train.empty()) {
    const RowMatrix scores = project_rows(w, target_train.features()) * planes.planes().transpose();
    total += hinge_terms(scores, target_train.labels(), c_target);
  }
  return total;
}

std::vector<hinge::HingeProblem> build_classifier_problems(const TransformMatrix& w, const LabeledDataset& source,
                                                           const LabeledDataset& target_train, double c_source,
                                                           double c_target) {
  const Eigen::Index d_s = w.d_source();
  check_shapes(w, HyperplaneSet::zero(std::max(source.num_classes(), target_train.num_classes()), d_s), source,
               target_train);
  const Eigen::Index n_s = source.size(), n_t = target_train.size();
  if (n_s + n_t == 0) throw ValidationError("classifier step: no training data");
  const int K = std::max(source.num_classes(), target_train.num_classes());

  // Regularised coordinates are the first d_S entries of each augmented
  // point; the last entry multiplies b.
  RowMatrix rows(n_s + n_t, d_s);
  std::vector<double> beta(static_cast<std::size_t>(n_s + n_t), 1.0);
  rows.topRows(n_s) = source.features();
  if (n_t > 0) {
    const RowMatrix projected = project_rows(w, target_train.features());
    rows.bottomRows(n_t) = projected.leftCols(d_s);
    for (Eigen::Index i = 0; i < n_t; ++i) beta[static_cast<std::size_t>(n_s + i)] = projected(i, d_s);
  }
  std::vector<double> weights(static_cast<std::size_t>(n_s + n_t), c_source);
  std::fill(weights.begin() + n_s, weights.end(), c_target);
  const hinge::ExampleStorage shared(std::make_shared<const hinge::DenseExamples>(std::move(rows)));

  std::vector<hinge::HingeProblem> problems;
  problems.reserve(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    std::vector<double> signs(static_cast<std::size_t>(n_s + n_t));
    for (Eigen::Index i = 0; i < n_s; ++i) signs[static_cast<std::size_t>(i)] = hinge::class_sign(source.label(i), k);
    for (Eigen::Index i = 0; i < n_t; ++i) {
      signs[static_cast<std::size_t>(n_s + i)] = hinge::class_sign(target_train.label(i), k);
    }
    problems.emplace_back(shared, std::move(signs), weights, true, std::vector<double>{}, beta);
  }
  return problems;
}

HyperplaneSet solve_classifier_step(const TransformMatrix& w, const LabeledDataset& source,
                                    const LabeledDataset& target_train, const TrainConfig& config) {
  config.validate();
  const auto problems = build_classifier_problems(w, source, target_train, config.c_source, config.c_target);
  const auto K = static_cast<Eigen::Index>(problems.size());
  hinge::SolverOptions options = config.solver_options();
  options.tol /= static_cast<double>(K);
  RowMatrix planes(K, w.d_source() + 1);
  for (Eigen::Index k = 0; k < K; ++k) {
    const auto solution = hinge::solve(problems[static_cast<std::size_t>(k)], options);
    planes.row(k).head(w.d_source()) = solution.w.transpose();
    planes(k, w.d_source()) = solution.b;
  }
  return HyperplaneSet(std::move(planes));
}

MmdtModel fit(const LabeledDataset& source, const LabeledDataset& target_train, const TrainConfig& config,
              const ProgressCallback& progress) {
  config.validate();
  if (source.empty()) throw ValidationError("fit: source training set is empty");
  const int K = source.num_classes();
  if (target_train.num_classes() > K) {
    throw ValidationError("fit: target uses " + std::to_string(target_train.num_classes()) +
                          " classes, source only " + std::to_string(K));
  }
  const Eigen::Index d_s = source.dim(), d_t = target_train.dim();

  TransformMatrix w = config.init == TransformInit::Zero ? TransformMatrix::zero(d_s, d_t)
                                                         : TransformMatrix::identity_pad(d_s, d_t);
  if (config.pin_augmented_row) {
    RowMatrix pinned = w.matrix();
    pinned.row(d_s).setZero();
    pinned(d_s, d_t) = 1.0;
    w = TransformMatrix(std::move(pinned));
  }
  MmdtModel model{w, HyperplaneSet::zero(K, d_s), config, {}, false, 0, source.label_map()};

  const double slack = 2.0 * config.solver_tol;
  auto record = [&](int iter, HalfStep step) {
    const double j = joint_cost(model.transform, model.hyperplanes, source, target_train, config.c_source,
                                config.c_target);
    if (!model.objective_history.empty() && j > model.objective_history.back() + slack) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "objective increased at outer iteration " << iter << " (" << to_string(step) << " step): "
          << model.objective_history.back() << " -> " << j << ", allowed slack " << slack;
      throw DescentViolation(msg.str());
    }
    model.objective_history.push_back(j);
    if (progress) progress(iter, step, j);
    return j;
  };

  double previous_outer = 0.0;
  for (int iter = 1; iter <= config.max_outer_iters; ++iter) {
    model.hyperplanes = solve_classifier_step(model.transform, source, target_train, config);
    const double after_classifier = record(iter, HalfStep::Classifier);
    if (iter == 1) previous_outer = after_classifier;

    // With no labelled target points the W-step minimiser is W = 0.
    model.transform = target_train.empty()
                          ? TransformMatrix::zero(d_s, d_t)
                          : solve_transform_step(target_train, model.hyperplanes, config.c_target,
                                                 config.solver_options(), config.pin_augmented_row);
    const double current = record(iter, HalfStep::Transform);
    model.outer_iters_run = iter;

    const double decrease = (previous_outer - current) / std::max(previous_outer, 1e-12);
    if (decrease < config.outer_tol) {
      model.converged = true;
      break;
    }
    previous_outer = current;
  }
  return model;
}

int predict_target(const MmdtModel& model, const Eigen::Ref<const Eigen::VectorXd>& x_target) {
  return model.hyperplanes.argmax(project(model.transform, x_target));
}

int predict_source(const MmdtModel& model, const Eigen::Ref<const Eigen::VectorXd>& x_source) {
  if (x_source.size() != model.d_source()) {
    throw ValidationError("predict_source: vector has length " + std::to_string(x_source.size()) +
                          ", model expects " + std::to_string(model.d_source()));
  }
  return model.hyperplanes.argmax(augment(x_source));
}

std::vector<int> predict_target_rows(const MmdtModel& model, const RowMatrix& target_features) {
  const RowMatrix scores = project_rows(model.transform, target_features) * model.hyperplanes.planes().transpose();
  std::vector<int> out(static_cast<std::size_t>(scores.rows()));
  for (Eigen::Index i = 0; i < scores.rows(); ++i) out[static_cast<std::size_t>(i)] = argmax_lowest(scores.row(i).transpose());
  return out;
}

std::vector<int> predict_source_rows(const MmdtModel& model, const RowMatrix& source_features) {
  return model.hyperplanes.predict_rows(source_features);
}

}  // namespace mmdt
