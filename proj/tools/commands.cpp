#include "commands.hpp"

#include <charconv>
#include <filesystem>
#include <map>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mmdt/baselines.hpp"
#include "mmdt/error.hpp"
#include "mmdt/experiment.hpp"
#include "mmdt/serialization.hpp"

namespace mmdt::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string shortest(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

struct DataFlags {
  std::string format = "dense";
  Eigen::Index source_dim = -1;
  Eigen::Index target_dim = -1;
};

LabeledDataset load(const fs::path& path, Domain domain, const DataFlags& flags, Eigen::Index dim,
                    const LabelMap* labels) {
  if (flags.format == "dense") return load_dense(path, domain, labels);
  if (dim < 0) throw ValidationError("sparse input needs an explicit dimension flag");
  return load_sparse(path, dim, domain, labels);
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir)) throw std::runtime_error("cannot create directory " + dir.string());
}

// --- generate ---------------------------------------------------------------

struct GenerateArgs {
  std::string config;
  std::string out_dir;
};

void cmd_generate(const GenerateArgs& args, std::ostream& out) {
  const json doc = read_json_file(args.config);
  const ShiftConfig shift = shift_config_from_json(doc.contains("shift") ? doc.at("shift") : doc);
  SplitSpec split;
  const json split_doc = doc.contains("split") ? doc.at("split") : json::object();
  try {
    split.train_per_class = split_doc.value("train_per_class", 3);
    split.seed = split_doc.value("seed", shift.seed);
    for (int k : split_doc.value("holdout_classes", std::vector<int>{})) split.holdout_classes.insert(k);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("split config: ") + e.what());
  }

  const auto domains = generate(shift);
  const auto target = make_split(domains.target, split);
  const fs::path dir(args.out_dir);
  ensure_dir(dir);
  save_dense(domains.source, dir / "source.csv");
  save_dense(target.train, dir / "target_train.csv");
  save_dense(target.test, dir / "target_test.csv");
  write_json_file(to_json(domains.shift), dir / "shift.json");
  out << "wrote " << domains.source.size() << " source, " << target.train.size() << " target train, "
      << target.test.size() << " target test examples to " << dir.string() << '\n';
}

// --- train ------------------------------------------------------------------

struct TrainArgs {
  std::string source, target, out, config;
  std::optional<double> c_s, c_t, tol, solver_tol;
  std::optional<int> max_iter;
  std::string init;
  bool pin_row = false;
  DataFlags data;
};

void cmd_train(const TrainArgs& args, std::ostream& out) {
  TrainConfig config = args.config.empty() ? TrainConfig{} : train_config_from_json(read_json_file(args.config));
  if (args.c_s) config.c_source = *args.c_s;
  if (args.c_t) config.c_target = *args.c_t;
  if (args.tol) config.outer_tol = *args.tol;
  if (args.solver_tol) config.solver_tol = *args.solver_tol;
  if (args.max_iter) config.max_outer_iters = *args.max_iter;
  if (!args.init.empty()) config.init = args.init == "identity_pad" ? TransformInit::IdentityPad : TransformInit::Zero;
  if (args.pin_row) config.pin_augmented_row = true;
  config.validate();

  const auto source = load(args.source, Domain::Source, args.data, args.data.source_dim, nullptr);
  const auto target = load(args.target, Domain::Target, args.data, args.data.target_dim, &source.label_map());
  const MmdtModel model = fit(source, target, config, [&out](int iter, HalfStep step, double j) {
    out << "iter=" << iter << " step=" << to_string(step) << " J=" << shortest(j) << '\n';
  });
  save_model(model, args.out);
  out << (model.converged ? "converged" : "stopped") << " after " << model.outer_iters_run
      << " outer iterations; model written to " << args.out << '\n';
}

// --- eval -------------------------------------------------------------------

struct EvalArgs {
  std::string model, test, domain = "target", out;
  DataFlags data;
};

void cmd_eval(const EvalArgs& args, std::ostream& out) {
  const MmdtModel model = load_model(args.model);
  const bool target = args.domain == "target";
  const Eigen::Index dim = target ? model.d_target() : model.d_source();
  const auto test = load(args.test, target ? Domain::Target : Domain::Source, args.data, dim, &model.label_map);
  if (test.dim() != dim) {
    throw ValidationError("test features have dimension " + std::to_string(test.dim()) + ", model expects " +
                          std::to_string(dim) + " for the " + args.domain + " domain");
  }
  const auto predictions =
      target ? predict_target_rows(model, test.features()) : predict_source_rows(model, test.features());
  const double accuracy = multiclass_accuracy(predictions, test.labels());

  std::map<int, std::pair<int, int>> per_class;  // class -> (correct, total)
  for (Eigen::Index i = 0; i < test.size(); ++i) {
    auto& [correct, total] = per_class[test.label(i)];
    ++total;
    correct += predictions[static_cast<std::size_t>(i)] == test.label(i) ? 1 : 0;
  }
  json per_class_doc = json::object();
  for (const auto& [k, counts] : per_class) {
    per_class_doc[std::to_string(model.label_map.original(k))] =
        static_cast<double>(counts.first) / static_cast<double>(counts.second);
  }
  const json report{{"format_version", kFormatVersion},
                    {"kind", "eval_report"},
                    {"domain", args.domain},
                    {"accuracy", accuracy},
                    {"n", test.size()},
                    {"per_class_accuracy", per_class_doc}};
  out << report.dump(2) << '\n';
  if (!args.out.empty()) write_json_file(report, args.out);
}

// --- experiment -------------------------------------------------------------

struct ExperimentArgs {
  std::string protocol, config, out;
  std::optional<int> repeats;
};

void cmd_experiment(const ExperimentArgs& args, std::ostream& out) {
  const Protocol protocol = protocol_from_string(args.protocol);
  ExperimentConfig config = experiment_config_from_json(read_json_file(args.config));
  if (args.repeats) config.repeats = *args.repeats;
  const ExperimentReport report = run_experiment(protocol, config);
  for (const auto& m : report.methods) {
    out << m.method << ": ";
    if (m.unsupported) {
      out << "unsupported (" << *m.unsupported << ")\n";
    } else {
      out << "mean " << 100.0 * m.summary.mean << " +/- " << 100.0 * m.summary.stddev << " over "
          << m.summary.count << '\n';
    }
  }
  for (const auto& row : report.scaling) {
    out << "n_T=" << row.n_target << " constraints(mmdt)=" << row.constraints_mmdt
        << " constraints(arct)=" << row.constraints_arct << " median_fit_ms=" << row.median_fit_ms << '\n';
  }
  write_json_file(report.to_json(), args.out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Max-margin domain transforms: training, evaluation and experiment harness", "mmdt"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate_cmd = app.add_subcommand("generate", "Write a synthetic source/target dataset pair");
  generate_cmd->add_option("config", gen.config, "Shift config (JSON)")->required()->check(CLI::ExistingFile);
  generate_cmd->add_option("--out,out_dir", gen.out_dir, "Output directory")->required();

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Fit W and the class hyperplanes");
  train_cmd->add_option("source", train.source, "Source training data")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("target", train.target, "Labelled target data")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--out", train.out, "Model output path (JSON)")->required();
  train_cmd->add_option("--config", train.config, "Train config (JSON); flags override it")->check(CLI::ExistingFile);
  train_cmd->add_option("--c-s", train.c_s, "Source hinge penalty C_S")->check(CLI::PositiveNumber);
  train_cmd->add_option("--c-t", train.c_t, "Target hinge penalty C_T")->check(CLI::PositiveNumber);
  train_cmd->add_option("--max-iter", train.max_iter, "Maximum outer iterations")->check(CLI::PositiveNumber);
  train_cmd->add_option("--tol", train.tol, "Relative objective decrease that stops the outer loop")
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--solver-tol", train.solver_tol, "Sub-problem suboptimality bound")
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--init", train.init, "Initial transform")->check(CLI::IsMember({"zero", "identity_pad"}));
  train_cmd->add_flag("--pin-augmented-row", train.pin_row, "Hold the last row of W at [0 ... 0 1]");
  train_cmd->add_option("--format", train.data.format, "Input format")->check(CLI::IsMember({"dense", "sparse"}));
  train_cmd->add_option("--source-dim", train.data.source_dim, "Source dimension (sparse input)");
  train_cmd->add_option("--target-dim", train.data.target_dim, "Target dimension (sparse input)");

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Accuracy of a trained model on a labelled test set");
  eval_cmd->add_option("model", eval.model, "Model file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("test", eval.test, "Test data")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--domain", eval.domain, "Domain of the test data")
      ->check(CLI::IsMember({"source", "target"}));
  eval_cmd->add_option("--out", eval.out, "Report output path (JSON)");
  eval_cmd->add_option("--format", eval.data.format, "Input format")->check(CLI::IsMember({"dense", "sparse"}));

  ExperimentArgs exp;
  auto* experiment_cmd = app.add_subcommand("experiment", "Run a seeded multi-split experiment protocol");
  experiment_cmd->add_option("protocol", exp.protocol, "standard | heterogeneous | novel-category | scaling")
      ->required()
      ->check(CLI::IsMember({"standard", "heterogeneous", "novel-category", "scaling"}));
  experiment_cmd->add_option("config", exp.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  experiment_cmd->add_option("--repeats", exp.repeats, "Number of seeded splits")->check(CLI::PositiveNumber);
  experiment_cmd->add_option("--out", exp.out, "Report output path (JSON)")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (app.exit(e, out, err) == 0) return kSuccess;
    return kUsageError;
  }

  try {
    if (*generate_cmd) cmd_generate(gen, out);
    if (*train_cmd) cmd_train(train, out);
    if (*eval_cmd) cmd_eval(eval, out);
    if (*experiment_cmd) cmd_experiment(exp, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kSuccess;
}

}  // namespace mmdt::cli
