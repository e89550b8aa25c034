#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mmdt/baselines.hpp"
#include "mmdt/model.hpp"
#include "mmdt/synthgen.hpp"

namespace mmdt {

enum class Protocol { Standard, Heterogeneous, NovelCategory, Scaling };

const char* to_string(Protocol protocol);
Protocol protocol_from_string(const std::string& name);

struct ExperimentConfig {
  ShiftConfig shift;         // repeat r uses seed shift.seed + r
  TrainConfig train;
  int train_per_class = 3;   // labelled target examples per (non-held-out) class
  int repeats = 20;
  std::optional<double> baseline_c;  // C for svm_s / svm_t; defaults to train.c_source
  // novel-category
  int holdout_classes = -1;  // number of trailing classes without target labels; -1 = K / 2
  bool evaluate_all_test_points = false;
  // scaling
  std::vector<int> target_sizes{50, 100, 200, 400};  // labelled target points n_T
  int timing_repeats = 3;

  /// Checks the config against the protocol; throws ValidationError.
  void validate(Protocol protocol) const;
};

ExperimentConfig experiment_config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const ExperimentConfig& config);

struct MethodResult {
  std::string method;
  std::vector<double> accuracies;  // one per repeat, ordered by seed
  Summary summary;
  std::optional<std::string> unsupported;  // reason the method could not run
};

struct ScalingRow {
  int n_target = 0;
  std::int64_t constraints_mmdt = 0;
  std::int64_t constraints_arct = 0;
  std::vector<double> fit_ms;  // one per timing repeat
  double median_fit_ms = 0.0;
  double mmdt_accuracy = 0.0;
  int outer_iters = 0;
};

struct ExperimentReport {
  Protocol protocol = Protocol::Standard;
  ExperimentConfig config;
  std::vector<MethodResult> methods;  // mmdt first
  std::vector<ScalingRow> scaling;

  const MethodResult* find(const std::string& method) const;
  nlohmann::json to_json() const;
};

ExperimentReport run_experiment(Protocol protocol, const ExperimentConfig& config);

/// Median of a non-empty sample.
double median(std::vector<double> values);

}  // namespace mmdt
