#include "mmdt/serialization.hpp"

#include <fstream>

#include "mmdt/error.hpp"

namespace mmdt {

using nlohmann::json;

namespace {

template <class T>
void read_opt(const json& doc, const char* key, T& out) {
  if (doc.contains(key)) out = doc.at(key).get<T>();
}

const char* to_string(TransformInit init) { return init == TransformInit::Zero ? "zero" : "identity_pad"; }

TransformInit init_from_string(const std::string& name) {
  if (name == "zero") return TransformInit::Zero;
  if (name == "identity_pad") return TransformInit::IdentityPad;
  throw ValidationError("unknown init `" + name + "` (expected zero or identity_pad)");
}

}  // namespace

json to_json(const TrainConfig& config) {
  return json{{"c_source", config.c_source},
              {"c_target", config.c_target},
              {"max_outer_iters", config.max_outer_iters},
              {"outer_tol", config.outer_tol},
              {"solver_tol", config.solver_tol},
              {"solver_max_passes", config.solver_max_passes},
              {"seed", config.seed},
              {"init", to_string(config.init)},
              {"pin_augmented_row", config.pin_augmented_row}};
}

TrainConfig train_config_from_json(const json& doc) {
  TrainConfig config;
  try {
    read_opt(doc, "c_source", config.c_source);
    read_opt(doc, "c_target", config.c_target);
    read_opt(doc, "max_outer_iters", config.max_outer_iters);
    read_opt(doc, "outer_tol", config.outer_tol);
    read_opt(doc, "solver_tol", config.solver_tol);
    read_opt(doc, "solver_max_passes", config.solver_max_passes);
    read_opt(doc, "seed", config.seed);
    if (doc.contains("init")) config.init = init_from_string(doc.at("init").get<std::string>());
    read_opt(doc, "pin_augmented_row", config.pin_augmented_row);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("train config: ") + e.what());
  }
  config.validate();
  return config;
}

json matrix_to_json(const RowMatrix& m) {
  return json{{"rows", m.rows()},
              {"cols", m.cols()},
              {"data", std::vector<double>(m.data(), m.data() + m.size())}};
}

RowMatrix matrix_from_json(const json& doc) {
  const auto rows = doc.at("rows").get<Eigen::Index>();
  const auto cols = doc.at("cols").get<Eigen::Index>();
  const auto data = doc.at("data").get<std::vector<double>>();
  if (rows < 0 || cols < 0 || static_cast<Eigen::Index>(data.size()) != rows * cols) {
    throw ValidationError("matrix: data length does not match shape");
  }
  return Eigen::Map<const RowMatrix>(data.data(), rows, cols);
}

json to_json(const ShiftConfig& config) {
  json doc{{"num_classes", config.num_classes},
           {"d_source", config.d_source},
           {"d_target", config.d_target},
           {"mean_scale", config.mean_scale},
           {"noise", config.noise},
           {"mean_rank", config.mean_rank},
           {"target_noise", config.target_noise},
           {"translation_scale", config.translation_scale},
           {"kind", to_string(config.kind)},
           {"source_per_class", config.source_per_class},
           {"target_per_class", config.target_per_class},
           {"seed", config.seed}};
  if (config.matrix) doc["matrix"] = matrix_to_json(*config.matrix);
  if (config.translation) {
    doc["translation"] = std::vector<double>(config.translation->data(),
                                             config.translation->data() + config.translation->size());
  }
  return doc;
}

ShiftConfig shift_config_from_json(const json& doc) {
  ShiftConfig config;
  try {
    read_opt(doc, "num_classes", config.num_classes);
    read_opt(doc, "d_source", config.d_source);
    read_opt(doc, "d_target", config.d_target);
    read_opt(doc, "mean_scale", config.mean_scale);
    read_opt(doc, "noise", config.noise);
    read_opt(doc, "mean_rank", config.mean_rank);
    read_opt(doc, "target_noise", config.target_noise);
    read_opt(doc, "translation_scale", config.translation_scale);
    if (doc.contains("kind")) config.kind = shift_kind_from_string(doc.at("kind").get<std::string>());
    read_opt(doc, "source_per_class", config.source_per_class);
    read_opt(doc, "target_per_class", config.target_per_class);
    read_opt(doc, "seed", config.seed);
    if (doc.contains("matrix")) config.matrix = matrix_from_json(doc.at("matrix"));
    if (doc.contains("translation")) {
      const auto t = doc.at("translation").get<std::vector<double>>();
      config.translation = Eigen::Map<const Eigen::VectorXd>(t.data(), static_cast<Eigen::Index>(t.size()));
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("shift config: ") + e.what());
  }
  config.validate();
  return config;
}

json to_json(const GroundTruthShift& shift) {
  json doc{{"format_version", kFormatVersion},
           {"kind", to_string(shift.kind)},
           {"matrix", matrix_to_json(shift.matrix)},
           {"translation", std::vector<double>(shift.translation.data(),
                                               shift.translation.data() + shift.translation.size())},
           {"class_means", matrix_to_json(shift.class_means)},
           {"condition_number", invertibility_check(shift)}};
  if (shift.inverse) doc["inverse_transform"] = matrix_to_json(shift.inverse->matrix());
  return doc;
}

json to_json(const MmdtModel& model) {
  return json{{"format_version", kFormatVersion},
              {"kind", "mmdt_model"},
              {"num_classes", model.num_classes()},
              {"d_source", model.d_source()},
              {"d_target", model.d_target()},
              {"labels", model.label_map.originals()},
              {"transform", matrix_to_json(model.transform.matrix())},
              {"planes", matrix_to_json(model.hyperplanes.planes())},
              {"config", to_json(model.config)},
              {"objective_history", model.objective_history},
              {"converged", model.converged},
              {"outer_iters_run", model.outer_iters_run}};
}

MmdtModel model_from_json(const json& doc) {
  try {
    if (doc.at("format_version").get<int>() != kFormatVersion) {
      throw ValidationError("model: unsupported format_version " + doc.at("format_version").dump());
    }
    TransformMatrix transform(matrix_from_json(doc.at("transform")));
    HyperplaneSet planes(matrix_from_json(doc.at("planes")));
    const auto K = doc.at("num_classes").get<int>();
    if (planes.num_classes() != K || transform.d_source() != doc.at("d_source").get<Eigen::Index>() ||
        transform.d_target() != doc.at("d_target").get<Eigen::Index>() || planes.dim() != transform.d_source()) {
      throw ValidationError("model: inconsistent shapes");
    }
    LabelMap labels(doc.at("labels").get<std::vector<std::int64_t>>());
    if (labels.num_classes() != K) throw ValidationError("model: label list does not match num_classes");
    MmdtModel model{std::move(transform),
                    std::move(planes),
                    train_config_from_json(doc.at("config")),
                    doc.at("objective_history").get<std::vector<double>>(),
                    doc.at("converged").get<bool>(),
                    doc.at("outer_iters_run").get<int>(),
                    std::move(labels)};
    return model;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("model: ") + e.what());
  }
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_json_file(const json& doc, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void save_model(const MmdtModel& model, const std::filesystem::path& path) { write_json_file(to_json(model), path); }

MmdtModel load_model(const std::filesystem::path& path) { return model_from_json(read_json_file(path)); }

}  // namespace mmdt
