#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "levyma/harness.hpp"

namespace levyma {

// Reads a JSON or TOML document (chosen by extension, JSON first otherwise).
nlohmann::json load_document(const std::string& path);

ExperimentConfig experiment_from_json(const nlohmann::json& j);
nlohmann::json experiment_to_json(const ExperimentConfig& cfg);

ExperimentConfig load_experiment(const std::string& path);

}  // namespace levyma
