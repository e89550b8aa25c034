// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "commands.hpp"
#include "fixtures.hpp"
#include "mmdt/baselines.hpp"
#include "mmdt/error.hpp"
#include "mmdt/experiment.hpp"
#include "mmdt/model.hpp"
#include "mmdt/serialization.hpp"
#include "oracles.hpp"

using namespace mmdt;
using namespace mmdt::testing;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Verdict {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Verdict()>& check) {
  Verdict v;
  try {
    v = check();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  if (!v.pass) ++failures;
  std::cout << "criterion " << id << ": " << (v.pass ? "PASS" : "FAIL") << "  " << title << "  [" << v.detail << "]"
            << std::endl;
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream s;
  s.precision(precision);
  s << v;
  return s.str();
}

double relative_gap(double ours, double reference) {
  return std::abs(ours - reference) / std::max(std::abs(reference), 1e-8);
}

// --- 1 ----------------------------------------------------------------------

Verdict descent() {
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<int> dim(1, 10), per_class(1, 30);
  std::uniform_real_distribution<double> log_c(-1.0, 1.0), unit(0.0, 1.0);
  const double tol = 1e-6;
  const auto start = Clock::now();
  std::size_t half_steps = 0;
  double worst = -INFINITY;
  for (int cfg = 0; cfg < 50; ++cfg) {
    ShiftConfig shift;
    shift.num_classes = cfg % 2 == 0 ? 2 : 5;
    // five means on a line cannot keep the generator's spacing
    shift.d_source = shift.num_classes == 5 ? std::max(2, dim(rng)) : dim(rng);
    shift.kind = unit(rng) < 0.5 ? ShiftKind::Affine : ShiftKind::Projection;
    shift.d_target = shift.kind == ShiftKind::Affine ? shift.d_source : dim(rng);
    shift.mean_scale = 1.0 + 5.0 * unit(rng);
    shift.noise = 0.2 + unit(rng);
    shift.translation_scale = shift.kind == ShiftKind::Affine ? 3.0 * unit(rng) : 0.0;
    shift.source_per_class = per_class(rng);
    shift.target_per_class = per_class(rng);
    shift.seed = rng();
    const auto domains = generate(shift);

    TrainConfig config;
    config.c_source = std::pow(10.0, log_c(rng));
    config.c_target = std::pow(10.0, log_c(rng));
    config.solver_tol = tol;
    const auto model = fit(domains.source, domains.target, config);
    const auto& h = model.objective_history;
    for (std::size_t i = 1; i < h.size(); ++i) {
      ++half_steps;
      worst = std::max(worst, h[i] - h[i - 1]);
      if (h[i] > h[i - 1] + 2 * tol) return {false, "config " + std::to_string(cfg) + " rose by " + fmt(h[i] - h[i - 1])};
    }
    for (double j : h) {
      if (j < 0.0) return {false, "negative objective"};
    }
  }
  const double elapsed = seconds_since(start);
  return {elapsed <= 120.0, std::to_string(half_steps) + " half-steps, largest change " + fmt(worst) + ", " +
                                fmt(elapsed, 3) + " s (limit 120 s)"};
}

// --- 2 ----------------------------------------------------------------------

Verdict classifier_oracle() {
  std::mt19937_64 rng(777);
  std::uniform_int_distribution<int> count(1, 6), d(1, 4), cls(0, 2);
  double worst = 0.0;
  for (int inst = 0; inst < 20; ++inst) {
    const int ds = d(rng), dt = d(rng), n_s = count(rng), n_t = count(rng);  // m <= 12, p <= 4
    std::vector<int> ys, yt;
    for (int i = 0; i < n_s; ++i) ys.push_back(cls(rng));
    for (int i = 0; i < n_t; ++i) yt.push_back(cls(rng));
    const LabeledDataset source(random_matrix(rng, n_s, ds, 2.0), ys, Domain::Source, 3);
    const LabeledDataset target(random_matrix(rng, n_t, dt, 2.0), yt, Domain::Target, 3);
    const TransformMatrix w(random_matrix(rng, ds + 1, dt + 1));
    TrainConfig config;
    config.c_source = 0.5 + 2.0 * std::abs(random_matrix(rng, 1, 1)(0, 0));
    config.c_target = 0.5 + 2.0 * std::abs(random_matrix(rng, 1, 1)(0, 0));
    const auto problems = build_classifier_problems(w, source, target, config.c_source, config.c_target);
    const auto& problem = problems[static_cast<std::size_t>(inst % 3)];
    const auto ours = hinge::solve(problem, config.solver_options());
    const auto oracle = dual_projected_gradient(materialise(problem));
    const double gap = relative_gap(ours.objective, oracle.primal);
    worst = std::max(worst, gap);
    if (gap > 1e-4) return {false, "instance " + std::to_string(inst) + " relative gap " + fmt(gap)};
  }
  return {true, "20 instances, worst relative gap " + fmt(worst) + " (limit 1e-4)"};
}

// --- 3 ----------------------------------------------------------------------

double step_objective(const TransformMatrix& w, const HyperplaneSet& planes, const LabeledDataset& target, double c) {
  double total = 0.5 * w.squared_frobenius();
  for (Eigen::Index i = 0; i < target.size(); ++i) {
    const Eigen::VectorXd z = project(w, target.row(i).transpose());
    for (int k = 0; k < planes.num_classes(); ++k) {
      total += c * hinge::hinge_loss(target.label(i), k, planes.plane(k).dot(z.transpose()));
    }
  }
  return total;
}

Verdict transform_oracle() {
  std::mt19937_64 rng(4242);
  double worst = 0.0;
  for (int inst = 0; inst < 10; ++inst) {
    const LabeledDataset target(random_matrix(rng, 4, 2, 2.0), {0, 1, inst % 2, 1}, Domain::Target, 2);
    const HyperplaneSet planes(random_matrix(rng, 2, 3));
    const double c = 0.5 + inst * 0.25;
    const auto w = solve_transform_step(target, planes, c, hinge::SolverOptions{});
    const double ours = step_objective(w, planes, target, c);
    const auto explicit_problem = materialise(build_transform_problem(target, planes, c));
    const auto dual = dual_projected_gradient(explicit_problem);
    const auto sub = primal_subgradient(explicit_problem);
    const double oracle_w = step_objective(TransformMatrix::unflatten(dual.w, 2, 2), planes, target, c);
    const double gap = relative_gap(ours, oracle_w);
    worst = std::max(worst, gap);
    if (gap > 1e-4) return {false, "instance " + std::to_string(inst) + " relative gap " + fmt(gap)};
    if (ours > sub.primal * (1.0 + 1e-4)) {
      return {false, "instance " + std::to_string(inst) + " worse than the subgradient oracle"};
    }
  }
  return {true, "10 instances, worst relative gap " + fmt(worst) + " (limit 1e-4)"};
}

// --- 4 ----------------------------------------------------------------------

Verdict reduction() {
  std::mt19937_64 rng(99);
  double worst = 0.0;
  for (int inst = 0; inst < 5; ++inst) {
    const int K = 2 + inst;
    const auto source = blobs(rng, random_matrix(rng, K, 4, 3.0), 10, 1.0, Domain::Source);
    const auto empty = LabeledDataset::empty(3, Domain::Target, K);
    TrainConfig config;
    config.max_outer_iters = 1;
    const auto model = fit(source, empty, config);
    const auto svm = train_svm_source(source, config.c_source, config.solver_options());
    const auto zero = TransformMatrix::zero(4, 3);
    const auto problems = build_classifier_problems(zero, source, empty, config.c_source, config.c_target);
    for (int k = 0; k < K; ++k) {
      const auto& p = problems[static_cast<std::size_t>(k)];
      const double diff = std::abs(hinge::objective(p, model.hyperplanes.theta(k).transpose(), model.hyperplanes.bias(k)) -
                                   hinge::objective(p, svm.theta(k).transpose(), svm.bias(k)));
      worst = std::max(worst, diff);
    }
  }
  return {worst <= 10 * 1e-6, "largest per-plane objective difference " + fmt(worst) + " (limit 1e-5)"};
}

// --- 5-7 --------------------------------------------------------------------

ExperimentConfig standard_config() {
  ExperimentConfig c;
  c.shift.num_classes = 10;
  c.shift.d_source = c.shift.d_target = 20;
  c.shift.mean_scale = 6.0;
  c.shift.mean_rank = 3;
  c.shift.noise = 1.0;
  c.shift.translation_scale = 3.0;
  c.shift.kind = ShiftKind::Affine;
  c.shift.source_per_class = 20;
  c.shift.target_per_class = 20;
  c.shift.seed = 1;
  c.train.c_source = c.train.c_target = 0.1;
  c.train_per_class = 3;
  c.repeats = 20;
  return c;
}

std::string pct(const MethodResult* m) { return m == nullptr ? "n/a" : fmt(100.0 * m->summary.mean, 3); }

Verdict adaptation_benefit() {
  const auto start = Clock::now();
  const auto report = run_experiment(Protocol::Standard, standard_config());
  const double elapsed = seconds_since(start);
  const double mmdt = report.find("mmdt")->summary.mean, svm_s = report.find("svm_s")->summary.mean,
               svm_t = report.find("svm_t")->summary.mean;
  const bool pass = mmdt >= svm_s + 0.05 && mmdt >= svm_t + 0.05 && svm_s < 0.70 && elapsed <= 300.0;
  return {pass, "mmdt " + pct(report.find("mmdt")) + ", svm_s " + pct(report.find("svm_s")) + ", svm_t " +
                    pct(report.find("svm_t")) + " over 20 seeds, " + fmt(elapsed, 3) + " s (limit 300 s)"};
}

Verdict heterogeneous() {
  ExperimentConfig c = standard_config();
  c.shift.kind = ShiftKind::Projection;
  c.shift.d_target = 12;
  c.shift.translation_scale = 0.0;
  const auto report = run_experiment(Protocol::Heterogeneous, c);
  const auto* svm_s = report.find("svm_s");
  const bool refused = svm_s != nullptr && svm_s->unsupported.has_value() && svm_s->accuracies.empty();
  const double mmdt = report.find("mmdt")->summary.mean, svm_t = report.find("svm_t")->summary.mean;
  return {refused && mmdt >= svm_t + 0.03 && report.find("mmdt")->summary.count == 20,
          "mmdt " + pct(report.find("mmdt")) + ", svm_t " + pct(report.find("svm_t")) + ", svm_s " +
              (refused ? "refused" : "did not refuse")};
}

Verdict novel_categories() {
  ExperimentConfig c = standard_config();
  c.shift.noise = 0.5;
  const auto report = run_experiment(Protocol::NovelCategory, c);
  const double mmdt = report.find("mmdt")->summary.mean, svm_s = report.find("svm_s")->summary.mean;
  const double chance = 1.0 / c.shift.num_classes;
  return {mmdt >= chance + 0.03 && mmdt >= svm_s + 0.03 && report.find("svm_t") == nullptr,
          "held-out classes: mmdt " + pct(report.find("mmdt")) + ", svm_s " + pct(report.find("svm_s")) +
              ", chance " + fmt(100.0 * chance, 3)};
}

// --- 8 ----------------------------------------------------------------------

Verdict scaling() {
  ExperimentConfig c;
  c.shift.num_classes = 20;
  c.shift.d_source = c.shift.d_target = 50;
  c.shift.mean_scale = 6.0;
  c.shift.mean_rank = 3;
  c.shift.noise = 1.0;
  c.shift.translation_scale = 3.0;
  c.shift.source_per_class = 20;
  c.shift.target_per_class = 41;
  c.shift.seed = 1;
  c.train.c_source = c.train.c_target = 0.1;
  c.train.solver_tol = 1e-4;
  c.train.max_outer_iters = 4;
  c.train.outer_tol = 1e-12;
  c.target_sizes = {100, 200, 400, 800};
  c.timing_repeats = 3;
  const auto report = run_experiment(Protocol::Scaling, c);
  bool pass = true;
  std::string detail;
  const std::int64_t n_s = 20 * 20;
  for (std::size_t i = 0; i < report.scaling.size(); ++i) {
    const auto& row = report.scaling[i];
    pass &= row.constraints_mmdt == 20 * row.n_target && row.constraints_arct == n_s * row.n_target;
    detail += "n_T=" + std::to_string(row.n_target) + " " + fmt(row.median_fit_ms / 1000.0, 3) + " s";
    if (i > 0) {
      const double ratio = row.median_fit_ms / report.scaling[i - 1].median_fit_ms;
      pass &= ratio <= 3.0;
      detail += " (x" + fmt(ratio, 3) + ")";
    }
    detail += i + 1 < report.scaling.size() ? ", " : "";
  }
  return {pass && report.scaling.size() == 4, detail + "; constraint counts K*n_T and n_S*n_T"};
}

// --- 9 ----------------------------------------------------------------------

Verdict determinism() {
  TempDir dir;
  std::ostringstream sink;
  write_text(dir / "shift.json", json{{"shift", to_json(standard_config().shift)}}.dump());
  if (cli::run({"generate", (dir / "shift.json").string(), "--out", dir.path().string()}, sink, sink) != 0) {
    return {false, "generate failed: " + sink.str()};
  }
  for (const char* out : {"a.json", "b.json"}) {
    if (cli::run({"train", (dir / "source.csv").string(), (dir / "target_train.csv").string(), "--c-s", "0.1", "--c-t",
                  "0.1", "--out", (dir / out).string()},
                 sink, sink) != 0) {
      return {false, "train failed: " + sink.str()};
    }
  }
  const bool identical = read_bytes(dir / "a.json") == read_bytes(dir / "b.json");
  const MmdtModel model = load_model(dir / "a.json");
  save_model(model, dir / "c.json");
  const MmdtModel again = model_from_json(to_json(model));
  const bool lossless = read_bytes(dir / "a.json") == read_bytes(dir / "c.json") &&
                        again.transform == model.transform && again.hyperplanes == model.hyperplanes &&
                        again.objective_history == model.objective_history;
  return {identical && lossless, std::string("repeated train ") + (identical ? "byte-identical" : "differs") +
                                     ", JSON round-trip " + (lossless ? "lossless" : "lossy")};
}

}  // namespace

int main() {
  report(1, "descent over 50 random configurations", descent);
  report(2, "classifier-step solver vs oracle", classifier_oracle);
  report(3, "transform-step solver vs oracle", transform_oracle);
  report(4, "empty target reduces to svm_s", reduction);
  report(5, "adaptation benefit, affine shift", adaptation_benefit);
  report(6, "heterogeneous dimensions", heterogeneous);
  report(7, "novel categories", novel_categories);
  report(8, "fit time scaling", scaling);
  report(9, "determinism and lossless model files", determinism);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
