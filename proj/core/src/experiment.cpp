#include "mmdt/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <string>

#include "mmdt/error.hpp"
#include "mmdt/serialization.hpp"

namespace mmdt {

using nlohmann::json;

const char* to_string(Protocol protocol) {
  switch (protocol) {
    case Protocol::Standard: return "standard";
    case Protocol::Heterogeneous: return "heterogeneous";
    case Protocol::NovelCategory: return "novel-category";
    case Protocol::Scaling: return "scaling";
  }
  return "unknown";
}

Protocol protocol_from_string(const std::string& name) {
  for (Protocol p : {Protocol::Standard, Protocol::Heterogeneous, Protocol::NovelCategory, Protocol::Scaling}) {
    if (name == to_string(p)) return p;
  }
  throw ValidationError("unknown protocol `" + name + "`");
}

void ExperimentConfig::validate(Protocol protocol) const {
  shift.validate();
  train.validate();
  if (repeats < 1) throw ValidationError("experiment: repeats must be >= 1");
  if (train_per_class < 1) throw ValidationError("experiment: train_per_class must be >= 1");
  if (baseline_c && !(*baseline_c > 0.0)) throw ValidationError("experiment: baseline_c must be positive");
  switch (protocol) {
    case Protocol::Standard:
      if (shift.d_source != shift.d_target) {
        throw ValidationError("standard protocol requires d_source == d_target; use heterogeneous");
      }
      break;
    case Protocol::Heterogeneous:
      if (shift.d_source == shift.d_target) throw ValidationError("heterogeneous protocol requires d_source != d_target");
      break;
    case Protocol::NovelCategory: {
      const int h = holdout_classes < 0 ? shift.num_classes / 2 : holdout_classes;
      if (h < 1 || h >= shift.num_classes) {
        throw ValidationError("novel-category protocol needs between 1 and K-1 held-out classes");
      }
      break;
    }
    case Protocol::Scaling:
      if (target_sizes.empty()) throw ValidationError("scaling protocol needs target_sizes");
      if (timing_repeats < 1) throw ValidationError("scaling protocol: timing_repeats must be >= 1");
      for (int n : target_sizes) {
        if (n < shift.num_classes || n % shift.num_classes != 0) {
          throw ValidationError("scaling protocol: target size " + std::to_string(n) +
                                " is not a positive multiple of num_classes");
        }
        if (n / shift.num_classes >= shift.target_per_class) {
          throw ValidationError("scaling protocol: target_per_class must exceed the largest n_T / K");
        }
      }
      break;
  }
  if (protocol != Protocol::Scaling && train_per_class >= shift.target_per_class) {
    throw ValidationError("experiment: target_per_class must exceed train_per_class to leave test points");
  }
}

ExperimentConfig experiment_config_from_json(const json& doc) {
  ExperimentConfig config;
  try {
    if (doc.contains("shift")) config.shift = shift_config_from_json(doc.at("shift"));
    if (doc.contains("train")) config.train = train_config_from_json(doc.at("train"));
    const json& e = doc.contains("experiment") ? doc.at("experiment") : json::object();
    if (e.contains("train_per_class")) config.train_per_class = e.at("train_per_class").get<int>();
    if (e.contains("repeats")) config.repeats = e.at("repeats").get<int>();
    if (e.contains("baseline_c")) config.baseline_c = e.at("baseline_c").get<double>();
    if (e.contains("holdout_classes")) config.holdout_classes = e.at("holdout_classes").get<int>();
    if (e.contains("evaluate_all_test_points")) config.evaluate_all_test_points = e.at("evaluate_all_test_points").get<bool>();
    if (e.contains("target_sizes")) config.target_sizes = e.at("target_sizes").get<std::vector<int>>();
    if (e.contains("timing_repeats")) config.timing_repeats = e.at("timing_repeats").get<int>();
  } catch (const json::exception& ex) {
    throw ValidationError(std::string("experiment config: ") + ex.what());
  }
  return config;
}

json to_json(const ExperimentConfig& config) {
  json e{{"train_per_class", config.train_per_class},
         {"repeats", config.repeats},
         {"holdout_classes", config.holdout_classes},
         {"evaluate_all_test_points", config.evaluate_all_test_points},
         {"target_sizes", config.target_sizes},
         {"timing_repeats", config.timing_repeats}};
  if (config.baseline_c) e["baseline_c"] = *config.baseline_c;
  return json{{"shift", to_json(config.shift)}, {"train", to_json(config.train)}, {"experiment", e}};
}

double median(std::vector<double> values) {
  if (values.empty()) throw ValidationError("median of an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

const MethodResult* ExperimentReport::find(const std::string& method) const {
  for (const auto& m : methods) {
    if (m.method == method) return &m;
  }
  return nullptr;
}

json ExperimentReport::to_json() const {
  json methods_doc = json::object();
  for (const auto& m : methods) {
    json entry{{"per_repeat", m.accuracies}};
    if (m.unsupported) {
      entry["unsupported"] = *m.unsupported;
    } else {
      entry["mean"] = m.summary.mean;
      entry["std"] = m.summary.stddev;
      entry["count"] = m.summary.count;
    }
    methods_doc[m.method] = entry;
  }
  json doc{{"format_version", kFormatVersion},
           {"kind", "experiment_report"},
           {"protocol", mmdt::to_string(protocol)},
           {"config", mmdt::to_json(config)},
           {"methods", methods_doc}};
  if (protocol == Protocol::Scaling) {
    json rows = json::array();
    for (const auto& r : scaling) {
      rows.push_back(json{{"n_target", r.n_target},
                          {"constraint_count_mmdt", r.constraints_mmdt},
                          {"constraint_count_arct", r.constraints_arct},
                          {"fit_ms", r.fit_ms},
                          {"median_fit_ms", r.median_fit_ms},
                          {"mmdt_accuracy", r.mmdt_accuracy},
                          {"outer_iters", r.outer_iters}});
    }
    doc["scaling"] = rows;
  }
  return doc;
}

namespace {

double evaluate(const std::vector<int>& predictions, const LabeledDataset& test) {
  return multiclass_accuracy(predictions, test.labels());
}

void finish(MethodResult& m) { m.summary = summarize(m.accuracies); }

ExperimentReport run_accuracy_protocol(Protocol protocol, const ExperimentConfig& config) {
  const int K = config.shift.num_classes;
  const double c_baseline = config.baseline_c.value_or(config.train.c_source);
  const hinge::SolverOptions baseline_options = config.train.solver_options();

  SplitSpec split_spec;
  split_spec.train_per_class = config.train_per_class;
  if (protocol == Protocol::NovelCategory) {
    const int h = config.holdout_classes < 0 ? K / 2 : config.holdout_classes;
    for (int k = K - h; k < K; ++k) split_spec.holdout_classes.insert(k);
  }

  MethodResult mmdt{"mmdt", {}, {}, {}};
  MethodResult svm_s{"svm_s", {}, {}, {}};
  MethodResult svm_t{"svm_t", {}, {}, {}};
  const bool with_svm_t = protocol != Protocol::NovelCategory;

  for (int r = 0; r < config.repeats; ++r) {
    ShiftConfig shift = config.shift;
    shift.seed = config.shift.seed + static_cast<std::uint64_t>(r);
    const auto domains = generate(shift);
    split_spec.seed = shift.seed;
    const auto split = make_split(domains.target, split_spec);

    LabeledDataset test = split.test;
    if (protocol == Protocol::NovelCategory && !config.evaluate_all_test_points) {
      std::vector<Eigen::Index> keep;
      for (Eigen::Index i = 0; i < test.size(); ++i) {
        if (split_spec.holdout_classes.contains(test.label(i))) keep.push_back(i);
      }
      test = test.subset(keep);
    }

    const MmdtModel model = fit(domains.source, split.train, config.train);
    mmdt.accuracies.push_back(evaluate(predict_target_rows(model, test.features()), test));

    const HyperplaneSet source_svm = train_svm_source(domains.source, c_baseline, baseline_options);
    try {
      svm_s.accuracies.push_back(evaluate(predict_svm_source_on_target(source_svm, test.features()), test));
    } catch (const ValidationError& e) {
      svm_s.unsupported = e.what();
    }
    if (with_svm_t) {
      const HyperplaneSet target_svm = train_svm_target(split.train, c_baseline, baseline_options);
      svm_t.accuracies.push_back(evaluate(target_svm.predict_rows(test.features()), test));
    }
  }

  ExperimentReport report{protocol, config, {}, {}};
  for (MethodResult* m : {&mmdt, &svm_s, &svm_t}) {
    if (m == &svm_t && !with_svm_t) continue;
    finish(*m);
    report.methods.push_back(std::move(*m));
  }
  return report;
}

ExperimentReport run_scaling(const ExperimentConfig& config) {
  const int K = config.shift.num_classes;
  ExperimentReport report{Protocol::Scaling, config, {}, {}};
  MethodResult mmdt{"mmdt", {}, {}, {}};
  for (int n_target : config.target_sizes) {
    ScalingRow row;
    row.n_target = n_target;
    row.constraints_mmdt = constraint_count(TransformMethod::Mmdt, K, 0, n_target);
    std::vector<double> accuracies;
    for (int r = 0; r < config.timing_repeats; ++r) {
      ShiftConfig shift = config.shift;
      shift.seed = config.shift.seed + static_cast<std::uint64_t>(r);
      const auto domains = generate(shift);
      row.constraints_arct = constraint_count(TransformMethod::Arct, K, domains.source.size(), n_target);
      SplitSpec spec;
      spec.train_per_class = n_target / K;
      spec.seed = shift.seed;
      const auto split = make_split(domains.target, spec);

      const auto start = std::chrono::steady_clock::now();
      const MmdtModel model = fit(domains.source, split.train, config.train);
      const auto stop = std::chrono::steady_clock::now();
      row.fit_ms.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
      row.outer_iters = std::max(row.outer_iters, model.outer_iters_run);
      accuracies.push_back(evaluate(predict_target_rows(model, split.test.features()), split.test));
    }
    row.median_fit_ms = median(row.fit_ms);
    row.mmdt_accuracy = summarize(accuracies).mean;
    mmdt.accuracies.push_back(row.mmdt_accuracy);
    report.scaling.push_back(std::move(row));
  }
  finish(mmdt);
  report.methods.push_back(std::move(mmdt));
  return report;
}

}  // namespace

ExperimentReport run_experiment(Protocol protocol, const ExperimentConfig& config) {
  config.validate(protocol);
  return protocol == Protocol::Scaling ? run_scaling(config) : run_accuracy_protocol(protocol, config);
}

}  // namespace mmdt
