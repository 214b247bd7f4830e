#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace bogoclt::io {

// Full-precision scientific form (17 significant digits) for reproducible CSV.
std::string format_full(double v);
// Compact form for file names and labels.
std::string format_g(double v);

std::uint64_t fnv1a(std::string_view s);
std::string hex64(std::uint64_t v);

// Write via a temporary file in the same directory, then rename.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);
void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j);

// Library versions for provenance blocks. Deliberately no clock values:
// rerunning a config must reproduce files byte for byte.
nlohmann::ordered_json versions_block();

}  // namespace bogoclt::io
