#pragma once

#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "hqclab/core/error.hpp"
#include "hqclab/core/types.hpp"

namespace hqclab::config
{
using nlohmann::json;

inline void require_object(json const& j, std::string const& path)
{
    HQC_REQUIRE(j.is_object(), ErrorKind::config_invalid, path + ": expected an object");
}

inline void reject_unknown(json const& j,
                           std::set<std::string> const& allowed,
                           std::string const& path)
{
    for (auto it = j.begin(); it != j.end(); ++it)
    {
        HQC_REQUIRE(allowed.count(it.key()), ErrorKind::config_invalid,
                    path + "." + it.key() + ": unknown field");
    }
}

template<class T>
T get_or(json const& j, char const* key, T fallback, std::string const& path)
{
    if (!j.contains(key))
        return fallback;
    try
    {
        return j.at(key).get<T>();
    }
    catch (json::exception const& e)
    {
        throw Error(ErrorKind::config_invalid, path + "." + key + ": " + e.what());
    }
}

template<class T>
T require(json const& j, char const* key, std::string const& path)
{
    HQC_REQUIRE(j.contains(key), ErrorKind::config_invalid, path + "." + key + ": missing");
    return get_or<T>(j, key, T{}, path);
}

inline Vec2 to_vec2(std::vector<double> const& v, std::string const& path)
{
    HQC_REQUIRE(v.size() == 2, ErrorKind::config_invalid, path + ": expected two numbers");
    return {v[0], v[1]};
}

inline Vec2 get_vec2(json const& j, char const* key, Vec2 const& fallback, std::string const& path)
{
    if (!j.contains(key))
        return fallback;
    return to_vec2(get_or<std::vector<double>>(j, key, {}, path), path + "." + key);
}

}  // namespace hqclab::config
