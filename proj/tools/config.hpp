#pragma once

#include <filesystem>

#include "json.hpp"
#include "sdct/recovery.hpp"
#include "sdct/trm.hpp"

namespace sdct::cli {

using Json = nlohmann::json;

/// Reads a JSON object; a missing path yields an empty object.
Json load_json(const std::filesystem::path& path);

/// Overrides TrmConfig fields present in `j`. Unknown keys are rejected.
void apply_trm(const Json& j, TrmConfig& cfg);

/// Pipeline keys: mu, precondition, theta_source ("known" | "pilot") and a
/// nested "trm" object.
void apply_pipeline(const Json& j, PipelineConfig& cfg);

Json to_json(const TrmConfig& cfg);

}  // namespace sdct::cli
