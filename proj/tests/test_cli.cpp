#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "hqclab/cli/csv.hpp"
#include "hqclab/cli/manifest.hpp"
#include "hqclab/cli/plot.hpp"
#include "hqclab/cli/runner.hpp"
#include "hqclab/cli/scenario.hpp"
#include "hqclab/core/error.hpp"
#include "hqclab/core/fit.hpp"
#include "hqclab/core/parallel.hpp"

using namespace hqclab;
using namespace hqclab::cli;
using nlohmann::json;

namespace
{
std::filesystem::path const kScenarios = HQCLAB_SCENARIO_DIR;

template<class F>
std::optional<ErrorKind> kind_of(F&& f)
{
    try
    {
        f();
    }
    catch (Error const& e)
    {
        return e.kind();
    }
    return std::nullopt;
}

template<class F>
std::string message_of(F&& f)
{
    try
    {
        f();
    }
    catch (Error const& e)
    {
        return e.what();
    }
    return {};
}

json grad_decay_json()
{
    return json::parse(R"({
        "schema_version": 1,
        "experiment": "grad-decay",
        "domain": {"kind": "half_plane"},
        "patch": {"radius": 1},
        "field": {"kind": "polar_power", "mu": 0.5},
        "grid": {"min": 0.001, "max": 0.1, "points": 16},
        "certificate": {"exponent": 0.5}
    })");
}

std::string slurp(std::filesystem::path const& p)
{
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

std::filesystem::path scratch(std::string const& name)
{
    auto dir = std::filesystem::temp_directory_path() / ("hqclab_test_cli_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}
}  // namespace

//---------------------------------------------------------------------------//
TEST_CASE("CSV tables")
{
    Table t({"t", "value", "label"});
    t.add_row({0.1, std::int64_t{3}, std::string("a")});
    t.add_row({1.0 / 3, std::int64_t{-1}, std::string("b")});
    auto text = t.to_csv();
    CHECK(text.starts_with("t,value,label\n0.10000000000000001,3,a\n"));

    auto back = parse_csv(text);
    CHECK(back.columns() == t.columns());
    CHECK(back.numeric("t")[1] == 1.0 / 3);
    CHECK(back.to_csv() == text);

    CHECK(kind_of([&] { t.add_row({1.0}); }) == ErrorKind::invalid_argument);
    CHECK(kind_of([&] { t.column("missing"); }) == ErrorKind::invalid_argument);
    CHECK(kind_of([&] { t.numeric("label"); }) == ErrorKind::non_positive_data);
    CHECK(format_number(NAN) == "nan");
    CHECK(format_number(-INFINITY) == "-inf");
}

TEST_CASE("log-log plots")
{
    std::vector<double> x, y;
    for (int i = 0; i < 16; ++i)
    {
        x.push_back(std::pow(10.0, -3 + i * 0.2));
        y.push_back(3 / std::sqrt(x.back()));
    }
    SUBCASE("exact power law")
    {
        auto p = emit_plot(x, y, {"decay", "t", "g"});
        CHECK(p.fit.exponent == doctest::Approx(-0.5).epsilon(1e-12));
        CHECK(p.fit.constant == doctest::Approx(3).epsilon(1e-12));
        CHECK(p.svg.find("<svg") != std::string::npos);
        auto at = p.svg.find("data-slope=\"");
        REQUIRE(at != std::string::npos);
        CHECK(std::stod(p.svg.substr(at + 12)) == doctest::Approx(-0.5).epsilon(1e-12));
        // byte-identical on a second call
        CHECK(emit_plot(x, y, {"decay", "t", "g"}).svg == p.svg);
    }
    SUBCASE("degenerate input")
    {
        CHECK(kind_of([] { emit_plot(Table({"t", "g"}), "t", "g"); })
              == ErrorKind::non_positive_data);
        std::vector<double> few(x.begin(), x.begin() + 7), fy(y.begin(), y.begin() + 7);
        CHECK(kind_of([&] { emit_plot(few, fy, {}); }) == ErrorKind::non_positive_data);
        y[4] = 0;
        CHECK(kind_of([&] { emit_plot(x, y, {}); }) == ErrorKind::non_positive_data);
        y[4] = NAN;
        CHECK(kind_of([&] { emit_plot(x, y, {}); }) == ErrorKind::non_positive_data);
    }
    SUBCASE("table columns")
    {
        Table t({"t", "g"});
        for (std::size_t i = 0; i < x.size(); ++i)
            t.add_row({x[i], y[i]});
        auto p = emit_plot(parse_csv(t.to_csv()), "t", "g");
        CHECK(p.fit.exponent == doctest::Approx(-0.5).epsilon(1e-12));
    }
}

//---------------------------------------------------------------------------//
TEST_CASE("scenario schema")
{
    SUBCASE("valid")
    {
        auto s = parse_scenario(grad_decay_json());
        CHECK(s.experiment == Experiment::grad_decay);
        CHECK(s.seed == 1);
        CHECK(s.field->mu == 0.5);
        CHECK(s.grid->values().size() == 16);
        CHECK(s.canonical["seed"] == 1);
    }
    SUBCASE("unknown fields name their path")
    {
        auto j = grad_decay_json();
        j["bogus"] = 1;
        CHECK(message_of([&] { parse_scenario(j); }).find("scenario.bogus") != std::string::npos);
        j = grad_decay_json();
        j["field"]["nu"] = 0.5;
        CHECK(kind_of([&] { parse_scenario(j); }) == ErrorKind::config_invalid);
        CHECK(message_of([&] { parse_scenario(j); }).find("scenario.field.nu") != std::string::npos);
        j = grad_decay_json();
        j["domain"]["radius"] = 2;
        CHECK(message_of([&] { parse_scenario(j); }).find("scenario.domain.radius")
              != std::string::npos);
    }
    SUBCASE("version and required blocks")
    {
        auto j = grad_decay_json();
        j["schema_version"] = 2;
        CHECK(kind_of([&] { parse_scenario(j); }) == ErrorKind::config_invalid);
        j = grad_decay_json();
        j.erase("schema_version");
        CHECK(kind_of([&] { parse_scenario(j); }) == ErrorKind::config_invalid);
        j = grad_decay_json();
        j.erase("field");
        CHECK(message_of([&] { parse_scenario(j); }).find("scenario.field: required")
              != std::string::npos);
        j = grad_decay_json();
        j["experiment"] = "prove-theorem";
        CHECK(kind_of([&] { parse_scenario(j); }) == ErrorKind::config_invalid);
        j = grad_decay_json();
        j["grid"]["min"] = -1;
        CHECK(kind_of([&] { parse_scenario(j); }) == ErrorKind::config_invalid);
    }
    SUBCASE("every experiment name round-trips")
    {
        for (auto e : all_experiments())
            CHECK(parse_experiment(to_string(e)) == e);
        CHECK(all_experiments().size() == 15);
    }
    SUBCASE("hash")
    {
        auto base = scenario_hash(parse_scenario(grad_decay_json()));
        CHECK(base.size() == 16);
        CHECK(scenario_hash(parse_scenario(grad_decay_json())) == base);

        auto j = grad_decay_json();
        j["threads"] = 8;
        CHECK(scenario_hash(parse_scenario(j)) == base);
        j["seed"] = 1;
        CHECK(scenario_hash(parse_scenario(j)) == base);
        j["seed"] = 2;
        CHECK(scenario_hash(parse_scenario(j)) != base);
        j = grad_decay_json();
        j["grid"]["points"] = 17;
        CHECK(scenario_hash(parse_scenario(j)) != base);
    }
    SUBCASE("referenced files are part of the hash")
    {
        auto dir = scratch("tabulated");
        std::filesystem::create_directories(dir);
        auto write_table = [&](double scale) {
            Table t({"theta", "x", "y"});
            for (int k = 0; k < 1024; ++k)
            {
                double th = two_pi * k / 1024;
                t.add_row({th, scale * std::cos(th), std::sin(th)});
            }
            write_atomic(dir / "nodes.csv", t.to_csv());
        };
        json j = {{"schema_version", 1},
                  {"experiment", "hqc-k"},
                  {"map", {{"kind", "tabulated"}, {"file", "nodes.csv"}}}};
        write_table(1.0);
        auto a = parse_scenario(j, dir);
        CHECK(a.map->boundary.table.size() == 1024);
        write_table(2.0);
        auto b = parse_scenario(j, dir);
        CHECK(scenario_hash(a) != scenario_hash(b));
        CHECK(kind_of([&] { parse_scenario(j, dir / "elsewhere"); }) == ErrorKind::config_invalid);
    }
}

//---------------------------------------------------------------------------//
TEST_CASE("manifest")
{
    CHECK(hex64(fnv1a("")) == "cbf29ce484222325");
    CHECK(hex64(fnv1a("a")) == "af63dc4c8601ec8c");

    auto dir = scratch("manifest");
    std::filesystem::create_directories(dir);
    write_atomic(dir / "x.txt", "hello");
    CHECK(slurp(dir / "x.txt") == "hello");
    CHECK(!std::filesystem::exists(dir / "x.txt.tmp"));

    RunManifest m;
    m.experiment = "iterate";
    m.seed = 5;
    m.stages.push_back({"a", true, "ok"});
    auto j = m.to_json();
    CHECK(j["tool_version"] == kToolVersion);
    CHECK(j["stages"][0]["passed"] == true);
}

//---------------------------------------------------------------------------//
TEST_CASE("scenario runs")
{
    SUBCASE("identity Lipschitz pipeline")
    {
        auto r = run_experiment(load_scenario(kScenarios / "identity_lipschitz.json"));
        CHECK(r.exit_code == 0);
        CHECK(r.summary().find("L hat: 1\n") != std::string::npos);
        CHECK(r.error.empty());
    }
    SUBCASE("half-plane gradient decay")
    {
        auto r = run_experiment(load_scenario(kScenarios / "halfplane_grad_decay.json"));
        CHECK(r.exit_code == 0);
        auto t = parse_csv(r.csv());
        auto ts = t.numeric("t");
        auto gs = t.numeric("grad_norm");
        auto fit = fit_power_law(ts, gs);
        CHECK(std::abs(fit.exponent + 0.5) <= 0.02);
        // the scenario asks for the overlay
        auto const* svg = r.find("grad-decay.svg");
        REQUIRE(svg);
        CHECK(std::abs(emit_plot(t, "t", "grad_norm").fit.exponent + 0.5) <= 0.02);
        CHECK(svg->content == emit_plot(t, "t", "grad_norm", "grad-decay").svg);
    }
    SUBCASE("collar beyond the separation limit")
    {
        auto r = run_experiment(load_scenario(kScenarios / "wide_collar.json"));
        CHECK(r.exit_code == static_cast<int>(ErrorKind::patch_degenerate));
        CHECK(r.error.find("PatchDegenerate") != std::string::npos);
    }
    SUBCASE("failed stage check")
    {
        auto j = grad_decay_json();
        j["certificate"]["exponent"] = 0.7;  // claims more than the field has
        auto r = run_experiment(parse_scenario(j));
        CHECK(r.exit_code == static_cast<int>(ErrorKind::stage_failure));
        REQUIRE(r.stages.size() == 1);
        CHECK(!r.stages[0].passed);
    }
    SUBCASE("exponent iteration")
    {
        json j = {{"schema_version", 1},
                  {"experiment", "iterate"},
                  {"regularity", {{"alpha", 0.2}, {"beta0", 0.3}}}};
        auto r = run_experiment(parse_scenario(j));
        CHECK(r.exit_code == 0);
        auto t = parse_csv(r.csv());
        CHECK(t.size() == 8);
        CHECK(t.numeric("beta").back() == 1.07495424);
    }
    SUBCASE("run directory")
    {
        auto dir = scratch("run");
        auto s = load_scenario(kScenarios / "halfplane_grad_decay.json");
        CHECK(run_scenario(s, dir, OutputFormat::summary, 0) == 0);
        auto manifest = json::parse(slurp(dir / "manifest.json"));
        CHECK(manifest["scenario_hash"] == scenario_hash(s));
        CHECK(manifest["exit_code"] == 0);
        CHECK(manifest["artifacts"].size() == 3);
        auto first = slurp(dir / "grad-decay.csv");
        CHECK(run_scenario(s, dir, OutputFormat::summary, 0) == 0);
        CHECK(slurp(dir / "grad-decay.csv") == first);
    }
    SUBCASE("worker count does not change the output")
    {
        auto s = load_scenario(kScenarios / "half_disk_leak.json");
        auto saved = default_threads();
        set_default_threads(1);
        auto one = run_experiment(s).csv();
        set_default_threads(8);
        auto eight = run_experiment(s).csv();
        set_default_threads(saved);
        CHECK(!one.empty());
        CHECK(one == eight);
    }
    SUBCASE("exit code table")
    {
        auto table = exit_code_table();
        CHECK(table.find("14  PatchDegenerate") != std::string::npos);
        CHECK(table.find(" 3  StageFailure") != std::string::npos);
    }
}
