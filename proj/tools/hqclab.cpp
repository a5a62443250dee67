#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "hqclab/cli/runner.hpp"
#include "hqclab/cli/scenario.hpp"
#include "hqclab/core/error.hpp"

using namespace hqclab;
using namespace hqclab::cli;
using nlohmann::json;

namespace
{
struct Flags
{
    std::string scenario;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> threads;
    std::string out;
    std::string format = "csv";
    std::string domain;
    std::optional<std::size_t> walks;
    std::optional<double> eps;
    std::optional<double> grid_h;
};

json read_json(std::string const& file)
{
    std::ifstream is(file);
    HQC_REQUIRE(is, ErrorKind::config_invalid, "cannot read " + file);
    try
    {
        return json::parse(is);
    }
    catch (json::exception const& e)
    {
        throw Error(ErrorKind::config_invalid, file + ": " + e.what());
    }
}

template<class T>
std::optional<T> env_number(char const* name)
{
    char const* v = std::getenv(name);
    if (!v || !*v)
        return std::nullopt;
    try
    {
        return static_cast<T>(std::stoull(v));
    }
    catch (std::exception const&)
    {
        throw Error(ErrorKind::config_invalid, std::string(name) + ": not a number: " + v);
    }
}

int run(Experiment experiment, Flags const& f)
{
    json j;
    std::filesystem::path base;
    if (!f.scenario.empty())
    {
        j = read_json(f.scenario);
        base = std::filesystem::path(f.scenario).parent_path();
        HQC_REQUIRE(j.is_object(), ErrorKind::config_invalid, "scenario: expected an object");
        if (j.contains("experiment") && j["experiment"].is_string())
        {
            auto named = j["experiment"].get<std::string>();
            HQC_REQUIRE(named == to_string(experiment), ErrorKind::config_invalid,
                        "scenario.experiment: file describes '" + named + "', not '"
                            + to_string(experiment) + "'");
        }
    }
    else
    {
        j = json::object();
        j["schema_version"] = kSchemaVersion;
    }
    j["experiment"] = to_string(experiment);

    // flag > environment > scenario
    if (auto seed = f.seed ? f.seed : env_number<std::uint64_t>("HQCLAB_SEED"))
        j["seed"] = *seed;
    std::size_t threads = 0;
    if (auto t = f.threads ? f.threads : env_number<std::size_t>("HQCLAB_THREADS"))
        threads = *t;
    else if (j.contains("threads") && j["threads"].is_number_unsigned())
        threads = j["threads"].get<std::size_t>();

    if (!f.domain.empty())
        j["domain"] = read_json(f.domain);
    if (f.walks)
        j["solver"]["walks"] = *f.walks;
    if (f.eps)
        j["solver"]["eps_shell"] = *f.eps;
    if (f.grid_h)
        j["solver"]["grid_h"] = *f.grid_h;

    auto scenario = parse_scenario(j, base);
    std::optional<std::filesystem::path> out;
    if (!f.out.empty())
        out = f.out;
    auto format = f.format == "summary" ? OutputFormat::summary : OutputFormat::csv;
    return run_scenario(scenario, out, format, threads);
}
}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"hqclab: boundary regularity experiments for harmonic quasiconformal maps"};
    app.footer(exit_code_table());
    app.require_subcommand(1);

    Flags f;
    app.add_option("--scenario", f.scenario, "Scenario file (JSON)")->check(CLI::ExistingFile);
    app.add_option("--seed", f.seed, "Run seed (overrides HQCLAB_SEED and the scenario)");
    app.add_option("--threads", f.threads, "Worker count (overrides HQCLAB_THREADS)");
    app.add_option("--out", f.out, "Run directory for CSV, summary, plots and manifest.json");
    app.add_option("--format", f.format, "What to print on stdout")
        ->check(CLI::IsMember({"csv", "summary"}));
    app.add_option("--domain", f.domain, "Domain config file; replaces the scenario's domain")
        ->check(CLI::ExistingFile);
    app.add_option("--walks", f.walks, "Walks per estimate");
    app.add_option("--eps", f.eps, "Walk-on-spheres absorption shell");
    app.add_option("--grid-h", f.grid_h, "Grid spacing");

    std::optional<Experiment> chosen;
    for (auto e : all_experiments())
    {
        auto* sub = app.add_subcommand(to_string(e));
        sub->fallthrough();
        sub->callback([&chosen, e] { chosen = e; });
    }

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::CallForHelp const& e)
    {
        return app.exit(e);
    }
    catch (CLI::CallForAllHelp const& e)
    {
        return app.exit(e);
    }
    catch (CLI::ParseError const& e)
    {
        app.exit(e);
        return static_cast<int>(ErrorKind::config_invalid);
    }

    try
    {
        return run(*chosen, f);
    }
    catch (Error const& e)
    {
        std::cerr << "hqclab: " << e.what() << '\n';
        return e.exit_code();
    }
    catch (std::exception const& e)
    {
        std::cerr << "hqclab: " << e.what() << '\n';
        return 1;
    }
}
