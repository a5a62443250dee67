#include "hqclab/geometry/config.hpp"

#include <ostream>

#include "hqclab/core/error.hpp"
#include "hqclab/core/json_fields.hpp"

namespace hqclab::geometry
{
namespace
{
using nlohmann::json;
using config::get_or;
using config::reject_unknown;

DomainKind parse_kind(std::string const& s, std::string const& path)
{
    if (s == "disk")
        return DomainKind::disk;
    if (s == "half_disk")
        return DomainKind::half_disk;
    if (s == "fourier_disk")
        return DomainKind::fourier_disk;
    if (s == "bump_disk")
        return DomainKind::bump_disk;
    if (s == "ellipse")
        return DomainKind::ellipse;
    if (s == "half_plane")
        return DomainKind::half_plane;
    throw Error(ErrorKind::config_invalid, path + ".kind: unknown domain kind '" + s + "'");
}

char const* kind_name(DomainKind k)
{
    switch (k)
    {
        case DomainKind::disk: return "disk";
        case DomainKind::half_disk: return "half_disk";
        case DomainKind::fourier_disk: return "fourier_disk";
        case DomainKind::bump_disk: return "bump_disk";
        case DomainKind::ellipse: return "ellipse";
        case DomainKind::half_plane: return "half_plane";
    }
    return "?";
}
}  // namespace

DomainSpec parse_domain(json const& j, std::string const& path)
{
    HQC_REQUIRE(j.is_object(), ErrorKind::config_invalid, path + ": expected an object");
    HQC_REQUIRE(j.contains("kind"), ErrorKind::config_invalid, path + ".kind: missing");
    DomainSpec spec;
    spec.kind = parse_kind(get_or<std::string>(j, "kind", "", path), path);
    spec.resolution = get_or<std::size_t>(j, "resolution", spec.resolution, path);

    switch (spec.kind)
    {
        case DomainKind::disk:
            reject_unknown(j, {"kind", "radius", "center", "resolution"}, path);
            spec.radius = get_or(j, "radius", 1.0, path);
            spec.center = config::get_vec2(j, "center", spec.center, path);
            break;
        case DomainKind::half_disk:
            reject_unknown(j, {"kind", "radius", "resolution"}, path);
            spec.radius = get_or(j, "radius", 1.0, path);
            break;
        case DomainKind::fourier_disk:
            reject_unknown(j, {"kind", "coeffs", "resolution"}, path);
            spec.coeffs = get_or<std::vector<double>>(j, "coeffs", {}, path);
            break;
        case DomainKind::bump_disk:
            reject_unknown(j, {"kind", "alpha", "amplitude", "width", "angle", "resolution"}, path);
            spec.alpha = get_or(j, "alpha", spec.alpha, path);
            spec.amplitude = get_or(j, "amplitude", spec.amplitude, path);
            spec.width = get_or(j, "width", spec.width, path);
            spec.angle = get_or(j, "angle", spec.angle, path);
            break;
        case DomainKind::ellipse:
            reject_unknown(j, {"kind", "a", "b", "resolution"}, path);
            spec.a = get_or(j, "a", spec.a, path);
            spec.b = get_or(j, "b", spec.b, path);
            break;
        case DomainKind::half_plane:
            reject_unknown(j, {"kind"}, path);
            break;
    }
    HQC_REQUIRE(spec.radius > 0, ErrorKind::config_invalid, path + ".radius: must be positive");
    HQC_REQUIRE(spec.resolution >= 64, ErrorKind::config_invalid,
                path + ".resolution: must be at least 64");
    return spec;
}

json to_json(DomainSpec const& spec)
{
    json j;
    j["kind"] = kind_name(spec.kind);
    switch (spec.kind)
    {
        case DomainKind::disk:
            j["radius"] = spec.radius;
            j["center"] = {spec.center.x(), spec.center.y()};
            j["resolution"] = spec.resolution;
            break;
        case DomainKind::half_disk:
            j["radius"] = spec.radius;
            break;
        case DomainKind::fourier_disk:
            j["coeffs"] = spec.coeffs;
            j["resolution"] = spec.resolution;
            break;
        case DomainKind::bump_disk:
            j["alpha"] = spec.alpha;
            j["amplitude"] = spec.amplitude;
            j["width"] = spec.width;
            j["angle"] = spec.angle;
            j["resolution"] = spec.resolution;
            break;
        case DomainKind::ellipse:
            j["a"] = spec.a;
            j["b"] = spec.b;
            j["resolution"] = spec.resolution;
            break;
        case DomainKind::half_plane:
            break;
    }
    return j;
}

PlanarDomain make_domain(DomainSpec const& spec)
{
    try
    {
        switch (spec.kind)
        {
            case DomainKind::disk:
                return PlanarDomain::disk(spec.radius, spec.center);
            case DomainKind::half_disk:
            case DomainKind::half_plane:
                return PlanarDomain::half_plane();
            case DomainKind::fourier_disk:
                return PlanarDomain::bounded(BoundaryCurve::fourier(spec.coeffs));
            case DomainKind::bump_disk:
                return PlanarDomain::bounded(BoundaryCurve::bump(
                    spec.alpha, spec.amplitude, spec.width, spec.angle));
            case DomainKind::ellipse:
                return PlanarDomain::bounded(BoundaryCurve::ellipse(spec.a, spec.b));
        }
    }
    catch (Error const& e)
    {
        if (e.kind() == ErrorKind::invalid_curve)
            throw Error(ErrorKind::config_invalid, std::string("domain: ") + e.what());
        throw;
    }
    return PlanarDomain::half_plane();
}

std::shared_ptr<Region const> make_region(DomainSpec const& spec)
{
    if (spec.kind == DomainKind::half_disk)
        return std::make_shared<BoundaryPatch>(half_disk_patch(spec.radius));
    HQC_REQUIRE(spec.kind != DomainKind::half_plane, ErrorKind::config_invalid,
                "domain.kind: the half-plane is only available through closed forms");
    return std::make_shared<PlanarDomain>(make_domain(spec));
}

void write_curve_csv(BoundaryCurve const& curve, std::size_t n, std::ostream& os)
{
    os << "s,x,y,tx,ty,nx,ny\n";
    os.precision(17);
    for (std::size_t i = 0; i < n; ++i)
    {
        double const s = static_cast<double>(i) / n;
        Vec2 const p = curve.point(s);
        Vec2 const t = curve.unit_tangent(s);
        Vec2 const nu = curve.inward_normal(s);
        os << s << ',' << p.x() << ',' << p.y() << ',' << t.x() << ',' << t.y() << ','
           << nu.x() << ',' << nu.y() << '\n';
    }
}

}  // namespace hqclab::geometry
