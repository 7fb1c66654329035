#pragma once

#include <string>

#include "config.hpp"

namespace qnoise::cli {

// Each command writes its outputs plus manifest.json into config["outputs"]["directory"].
void cmd_predict(const json& config);
void cmd_validate(const json& config);
void cmd_tomography(const json& config);
void cmd_rb(const json& config);
// csv/sidecar override the paths in config["noise"]
void cmd_ingest_psd(const json& config, const std::string& csv, const std::string& sidecar);

}  // namespace qnoise::cli
