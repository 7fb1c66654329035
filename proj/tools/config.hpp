#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "qnoise/psd.hpp"

namespace qnoise::cli {

using nlohmann::json;

// Full configuration with every key present; user documents are merged onto it.
json default_config();

// Checks keys and types against the defaults, merges, and validates values.
// Relative file paths are resolved against `base_dir`. Throws qnoise::Error (InvalidInput).
json resolve_config(const json& user, const std::string& base_dir);

struct NoiseSpec {
    NoisePsd psd;
    bool is_ou = false;
    double c = 0.0, tau_c = 0.0;
};

// "none" | "ou" | "file"; nullopt for an absent amplitude process
std::optional<NoiseSpec> noise_from_config(const json& node);

// explicit list or a uniform grid t_max / n_times, ..., t_max
std::vector<double> time_grid(const json& drive);

std::string sha256_hex(const std::string& data);
std::string sha256_file(const std::string& path);

// Writes manifest.json in `dir`: command, version, config hash, seeds, output hashes.
void write_manifest(const std::string& dir, const std::string& command, const json& config,
                    const std::vector<std::string>& outputs);

}  // namespace qnoise::cli
