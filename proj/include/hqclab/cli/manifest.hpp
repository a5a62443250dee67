#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace hqclab::cli
{
inline constexpr char kToolVersion[] = "0.1.0";

//! 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);
std::string hex64(std::uint64_t v);

struct StageOutcome
{
    std::string name;
    bool passed = false;
    std::string detail;
};

struct RunManifest
{
    std::string experiment;
    std::string scenario_hash;  //!< FNV-1a of the canonical scenario
    std::string tool_version = kToolVersion;
    std::uint64_t seed = 0;
    std::size_t threads = 0;
    double wall_seconds = 0;
    std::vector<StageOutcome> stages;
    std::vector<std::string> artifacts;
    int exit_code = 0;
    std::string error;

    nlohmann::json to_json() const;
};

//! Write through a sibling temporary file and rename it into place.
void write_atomic(std::filesystem::path const& path, std::string_view content);

}  // namespace hqclab::cli
