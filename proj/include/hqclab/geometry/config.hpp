#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hqclab/geometry/domain.hpp"
#include "hqclab/geometry/patch.hpp"

namespace hqclab::geometry
{
enum class DomainKind
{
    disk,
    half_disk,
    fourier_disk,
    bump_disk,
    ellipse,
    half_plane,
};

//! Structured domain description as read from a scenario file.
struct DomainSpec
{
    DomainKind kind = DomainKind::disk;
    double radius = 1;
    Vec2 center = Vec2::Zero();
    std::vector<double> coeffs;
    double alpha = 0.5;
    double amplitude = 0.2;
    double width = 1.0;
    double angle = 0.0;
    double a = 2, b = 1;
    std::size_t resolution = 1024;
};

//! Parse and validate; unknown keys throw ConfigInvalid naming the JSON path.
DomainSpec parse_domain(nlohmann::json const& j, std::string const& path = "domain");
nlohmann::json to_json(DomainSpec const& spec);

//! Whole domain for every kind but half_disk.
PlanarDomain make_domain(DomainSpec const& spec);
//! Solver region: the domain itself, or the half-plane patch for half_disk.
std::shared_ptr<Region const> make_region(DomainSpec const& spec);

//! CSV rows (s, x, y, tx, ty, nx, ny) sampled at n parameters.
void write_curve_csv(BoundaryCurve const& curve, std::size_t n, std::ostream& os);

}  // namespace hqclab::geometry
