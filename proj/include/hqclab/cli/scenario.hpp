#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hqclab/geometry/config.hpp"
#include "hqclab/harmonic/field.hpp"
#include "hqclab/hqc/map.hpp"
#include "hqclab/regularity/pipeline.hpp"

namespace hqclab::cli
{
inline constexpr int kSchemaVersion = 1;

enum class Experiment
{
    solve,
    measure,
    leak_profile,
    tail_profile,
    moment,
    hqc_build,
    hqc_distort,
    hqc_k,
    tent_check,
    grad_decay,
    grad_uniform,
    improve,
    iterate,
    lipschitz,
    plot,
};

std::string to_string(Experiment e);
std::optional<Experiment> parse_experiment(std::string const& name);
std::vector<Experiment> all_experiments();

//! Closed-form harmonic function; other backends solve for its boundary
//! values.
struct FieldSpec
{
    enum class Kind
    {
        linear,       //!< a . x + c
        polar_power,  //!< r^mu cos(mu theta)
        saddle,       //!< x^2 - y^2
        constant,     //!< c
        power,        //!< |x|^mu on the real line, extended to the upper half-plane
    };
    Kind kind = Kind::linear;
    double mu = 0.5;
    Vec2 a = Vec2(1, 0);
    double c = 0;

    double value(Vec2 const& x) const;
    Vec2 gradient(Vec2 const& x) const;
    std::string describe() const;
};

struct SolverSpec
{
    std::optional<harmonic::Backend> backend;
    std::optional<double> eps_shell;
    std::size_t n_walks = 10000;
    std::size_t max_steps = 100000;
    double grid_h = 1.0 / 128;
};

struct MapSpec
{
    enum class Kind
    {
        affine,
        boundary,
    };
    Kind kind = Kind::affine;
    Mat2 matrix = Mat2::Identity();
    Vec2 offset = Vec2::Zero();
    hqc::BoundaryMapSpec boundary;
    std::optional<geometry::DomainSpec> target;
    std::string describe() const;
};

struct PatchSpec
{
    Vec2 center = Vec2::Zero();
    double radius = 1;
    std::optional<double> collar;
};

//! Geometric grid from min to max.
struct GridSpec
{
    double min = 1e-3;
    double max = 1e-1;
    std::size_t points = 16;
    std::vector<double> values() const;
};

struct TargetSpec
{
    std::optional<geometry::BoundaryPart> part;
    Vec2 center = Vec2::Zero();
    double r_min = 0;
    double r_max = INFINITY;
    double angle_from = -pi;
    double angle_span = two_pi;
};

struct CertificateSpec
{
    double exponent = 0.5;
    double constant = 1;
    double sup_norm = 1;
    double base_value = 0;
};

struct RegularitySpec
{
    std::optional<double> alpha;
    std::optional<double> beta0;
    Vec2 xi = Vec2(1, 0);
    regularity::PipelineOptions pipeline;
    std::size_t boundary_points = 8;
};

struct LatticeSpec
{
    int n = 24;
    double min_depth = 0.02;
};

struct PlotSpec
{
    std::filesystem::path csv;  //!< input table for the plot experiment
    std::string x;
    std::string y;
};

//---------------------------------------------------------------------------//
/*!
 * A fully resolved experiment description.
 *
 * `canonical` is the validated JSON with defaults filled in; its dump is
 * what the run hash covers.
 */
struct Scenario
{
    Experiment experiment = Experiment::solve;
    std::uint64_t seed = 1;
    std::optional<std::size_t> threads;
    std::optional<geometry::DomainSpec> domain;
    SolverSpec solver;
    std::optional<FieldSpec> field;
    std::optional<MapSpec> map;
    std::optional<PatchSpec> patch;
    std::optional<GridSpec> grid;
    std::vector<Vec2> points;
    std::optional<TargetSpec> target;
    std::optional<Vec2> pole;
    double mu = 1;
    CertificateSpec certificate;
    RegularitySpec regularity;
    LatticeSpec lattice;
    bool plot = false;
    std::optional<PlotSpec> plot_input;

    nlohmann::json canonical;
};

//! Validate against the schema. Unknown fields and missing required blocks
//! throw ConfigInvalid naming the JSON path. Relative file paths resolve
//! against `base_dir`.
Scenario parse_scenario(nlohmann::json const& j, std::filesystem::path const& base_dir = {});
Scenario load_scenario(std::filesystem::path const& file);

//! FNV-1a of the canonical JSON with the effective seed.
std::string scenario_hash(Scenario const& s);

}  // namespace hqclab::cli
