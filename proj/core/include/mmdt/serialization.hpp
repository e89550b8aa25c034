#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "mmdt/model.hpp"
#include "mmdt/synthgen.hpp"

namespace mmdt {

/// Version written into every model and report document.
inline constexpr int kFormatVersion = 1;

nlohmann::json to_json(const TrainConfig& config);
TrainConfig train_config_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const ShiftConfig& config);
ShiftConfig shift_config_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const GroundTruthShift& shift);

/// Matrices are stored as {"rows", "cols", "data"} with row-major data.
nlohmann::json matrix_to_json(const RowMatrix& m);
RowMatrix matrix_from_json(const nlohmann::json& doc);

/// Doubles are written in shortest round-trip form, so a save/load cycle is
/// lossless.
nlohmann::json to_json(const MmdtModel& model);
MmdtModel model_from_json(const nlohmann::json& doc);

void save_model(const MmdtModel& model, const std::filesystem::path& path);
MmdtModel load_model(const std::filesystem::path& path);

nlohmann::json read_json_file(const std::filesystem::path& path);
/// Pretty-printed with a trailing newline.
void write_json_file(const nlohmann::json& doc, const std::filesystem::path& path);

}  // namespace mmdt
