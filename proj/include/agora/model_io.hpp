#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "agora/models.hpp"

namespace agora::sml {

inline constexpr int kModelFormatVersion = 1;

// Versioned JSON: {format, version, kind, mode, hyperparameters, vocabulary,
// parameters}. Doubles are written with round-trip precision, so a reloaded
// model predicts bit-identically.
std::string model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const std::string& json_text);

// Missing keys keep their defaults.
Hyperparameters hyperparameters_from_json(const nlohmann::json& j);
nlohmann::json hyperparameters_to_json(const Hyperparameters& h);

void save_model(const std::filesystem::path& path, const TrainedModel& model);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace agora::sml
