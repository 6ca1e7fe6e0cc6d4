#pragma once

#include <filesystem>

#include "json.hpp"
#include "wrom/rom/reduced_model.hpp"

namespace wrom::rom {

/// Writes manifest.json plus one binary array file per projected block.
/// `metadata` is stored verbatim under the manifest's "metadata" key.
void save_model(const std::filesystem::path& dir, const ReducedModel& model,
                const nlohmann::json& metadata = nlohmann::json::object());

/// Reloads a model written by save_model; online solves reproduce bit for bit.
ReducedModel load_model(const std::filesystem::path& dir);

/// The manifest of a saved model.
nlohmann::json read_manifest(const std::filesystem::path& dir);

}  // namespace wrom::rom
