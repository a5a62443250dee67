#include "hqclab/regularity/path_upgrade.hpp"

#include <algorithm>
#include <cmath>

#include "hqclab/core/error.hpp"
#include "hqclab/core/quadrature.hpp"

namespace hqclab::regularity
{
namespace
{
constexpr std::size_t kNormalNodes = 64;
constexpr std::size_t kCigarPanels = 32;
constexpr std::size_t kCigarNodes = 8;

double normal_integral(std::function<Vec2(double)> const& point,
                       double rho,
                       double beta,
                       DfNorm const& df)
{
    static auto const rule = gauss_legendre(kNormalNodes);
    double p = beta < 1 ? 1 / beta : 1.0;
    double sum = 0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    {
        double v = rule.nodes[i];
        double s = rho * std::pow(v, p);
        double ds = rho * p * std::pow(v, p - 1);
        sum += rule.weights[i] * df(point(s)) * ds;
    }
    return sum;
}
}  // namespace

PathHolderCert path_holder_upgrade(geometry::PlanarDomain const& domain,
                                   Vec2 const& xi,
                                   Vec2 const& eta,
                                   double beta1,
                                   double collar_constant,
                                   DfNorm const& df_norm,
                                   std::optional<double> direct)
{
    HQC_REQUIRE(beta1 > 0, ErrorKind::invalid_argument, "beta1 must be positive");
    HQC_REQUIRE(collar_constant >= 0, ErrorKind::invalid_argument,
                "collar constant must be non-negative");
    auto path = geometry::three_piece_path(domain, xi, eta);
    double rho = path.rho();
    double c = collar_constant;

    PathHolderCert cert;
    cert.rho = rho;
    cert.beta1 = beta1;
    cert.collar_constant = c;
    cert.path_length = path.length();

    // delta along the normals is s itself, so the collar bound integrates to
    // C rho^beta / beta
    double normal_bound = c * std::pow(rho, beta1) / beta1;
    cert.rise = {normal_integral([&](double s) { return path.rise_point(s); }, rho, beta1,
                                 df_norm),
                 normal_bound};
    cert.descent = {normal_integral([&](double s) { return path.descent_point(s); }, rho,
                                    beta1, df_norm),
                    normal_bound};

    static auto const rule = gauss_legendre(kCigarNodes);
    double numeric = 0;
    for (std::size_t panel = 0; panel < kCigarPanels; ++panel)
    {
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        {
            double tau = (panel + rule.nodes[i]) / kCigarPanels;
            numeric += rule.weights[i] / kCigarPanels * df_norm(path.cigar_point(tau))
                       * path.cigar_speed(tau);
        }
    }
    double worst = 0;
    for (double d : path.cigar().delta)
        worst = std::max(worst, std::pow(d, beta1 - 1));
    cert.cigar = {numeric, c * worst * path.cigar().length};

    cert.total_numeric = cert.rise.numeric + cert.cigar.numeric + cert.descent.numeric;
    cert.total_bound = cert.rise.bound + cert.cigar.bound + cert.descent.bound;
    double scale = std::pow(rho, beta1);
    cert.certified_constant = cert.total_bound / scale;
    cert.direct = direct.value_or(0.0);
    cert.direct_quotient = cert.direct / scale;

    constexpr double rel = 1e-6;
    auto under = [&](PieceIntegral const& p) { return p.numeric <= p.bound * (1 + rel); };
    cert.passed = under(cert.rise) && under(cert.cigar) && under(cert.descent)
                  && cert.direct <= cert.total_numeric * (1 + rel) + 1e-12
                  && cert.direct_quotient <= cert.certified_constant * (1 + rel) + 1e-12;
    return cert;
}

PathHolderCert path_holder_upgrade(hqc::HarmonicMap const& map,
                                   Vec2 const& xi,
                                   Vec2 const& eta,
                                   double beta1,
                                   double collar_constant)
{
    auto const* domain = dynamic_cast<geometry::PlanarDomain const*>(&map.source());
    HQC_REQUIRE(domain, ErrorKind::invalid_argument,
                "path upgrade needs a map on a planar domain");
    double direct = (map.trace(xi).value - map.trace(eta).value).norm();
    return path_holder_upgrade(
        *domain, xi, eta, beta1, collar_constant,
        [&](Vec2 const& x) { return hqc::differential(map, x).sigma_max; }, direct);
}

}  // namespace hqclab::regularity
