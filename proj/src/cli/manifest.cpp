#include "hqclab/cli/manifest.hpp"

#include <cstdio>
#include <fstream>

#include "hqclab/core/error.hpp"

namespace hqclab::cli
{
std::uint64_t fnv1a(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes)
    {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t v)
{
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

nlohmann::json RunManifest::to_json() const
{
    nlohmann::json j;
    j["experiment"] = experiment;
    j["scenario_hash"] = scenario_hash;
    j["tool_version"] = tool_version;
    j["seed"] = seed;
    j["threads"] = threads;
    j["wall_seconds"] = wall_seconds;
    j["exit_code"] = exit_code;
    j["artifacts"] = artifacts;
    if (!error.empty())
        j["error"] = error;
    auto& st = j["stages"] = nlohmann::json::array();
    for (auto const& s : stages)
        st.push_back({{"name", s.name}, {"passed", s.passed}, {"detail", s.detail}});
    return j;
}

void write_atomic(std::filesystem::path const& path, std::string_view content)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        HQC_REQUIRE(os, ErrorKind::invalid_argument, "cannot write " + tmp.string());
        os.write(content.data(), static_cast<std::streamsize>(content.size()));
        os.flush();
        HQC_REQUIRE(os, ErrorKind::invalid_argument, "short write to " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    HQC_REQUIRE(!ec, ErrorKind::invalid_argument,
                "cannot rename " + tmp.string() + ": " + ec.message());
}

}  // namespace hqclab::cli
