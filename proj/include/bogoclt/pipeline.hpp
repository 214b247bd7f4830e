#pragma once

#include <filesystem>
#include <optional>

#include <nlohmann/json.hpp>

#include "bogoclt/config.hpp"

namespace bogoclt::pipeline {

struct RunContext {
    RunConfig cfg;
    std::filesystem::path out_dir = "out";
    std::optional<std::filesystem::path> cache_dir;
};

// Each stage writes its artifacts under out_dir and returns the JSON bundle
// it wrote. Configuration problems throw ConfigError, solver problems
// NumericError; run_verify reports threshold failures in summary.pass
// rather than throwing.
nlohmann::ordered_json run_scattering(const RunContext& ctx);
nlohmann::ordered_json run_coefficients(const RunContext& ctx);
nlohmann::ordered_json run_limit(const RunContext& ctx);
nlohmann::ordered_json run_verify(const RunContext& ctx);
nlohmann::ordered_json run_sweep(const RunContext& ctx);
// Collates whatever stage bundles exist under out_dir into one summary.
nlohmann::ordered_json run_report(const std::filesystem::path& out_dir);

}  // namespace bogoclt::pipeline
