#include "hqclab/harmonic/poisson.hpp"

#include <cmath>
#include <numeric>

#include "hqclab/core/error.hpp"

namespace hqclab::harmonic
{
PoissonDisk::PoissonDisk(std::vector<double> samples) : samples_(std::move(samples))
{
    std::size_t n = samples_.size();
    HQC_REQUIRE(n >= 4, ErrorKind::invalid_argument, "need at least four boundary samples");
    for (double v : samples_)
        HQC_REQUIRE(std::isfinite(v), ErrorKind::invalid_argument, "non-finite boundary sample");

    std::vector<std::complex<double>> roots(n);
    for (std::size_t k = 0; k < n; ++k)
        roots[k] = std::polar(1.0, -two_pi * static_cast<double>(k) / n);

    mean_ = std::accumulate(samples_.begin(), samples_.end(), 0.0) / n;
    std::size_t half = n / 2;
    coeff_.resize(half);
    double biggest = 0;
    for (std::size_t k = 1; k <= half; ++k)
    {
        std::complex<double> c = 0;
        for (std::size_t j = 0; j < n; ++j)
            c += samples_[j] * roots[(k * j) % n];
        c /= static_cast<double>(n);
        // Nyquist term (even n) is not doubled
        coeff_[k - 1] = (2 * k == n) ? c : 2.0 * c;
        biggest = std::max(biggest, std::abs(coeff_[k - 1]));
    }
    if (biggest > 0)
    {
        std::size_t tail = std::max<std::size_t>(1, half / 16);
        double tail_max = 0;
        for (std::size_t k = half - tail; k < half; ++k)
            tail_max = std::max(tail_max, std::abs(coeff_[k]));
        tail_ratio_ = tail_max / biggest;
        while (!coeff_.empty() && std::abs(coeff_.back()) < 1e-17 * biggest)
            coeff_.pop_back();
    }
    else
    {
        coeff_.clear();
    }
}

PoissonDisk PoissonDisk::from_function(std::function<double(double)> const& g, std::size_t nodes)
{
    std::vector<double> s(nodes);
    for (std::size_t k = 0; k < nodes; ++k)
        s[k] = g(two_pi * static_cast<double>(k) / nodes);
    return PoissonDisk(std::move(s));
}

double PoissonDisk::value(Vec2 const& z) const
{
    HQC_REQUIRE(z.squaredNorm() <= 1 + 1e-12, ErrorKind::invalid_argument,
                "Poisson evaluation outside the closed unit disk");
    std::complex<double> w(z.x(), z.y());
    std::complex<double> acc = 0;
    for (auto it = coeff_.rbegin(); it != coeff_.rend(); ++it)
        acc = acc * w + *it;
    return mean_ + (acc * w).real();
}

Vec2 PoissonDisk::gradient(Vec2 const& z) const
{
    HQC_REQUIRE(z.squaredNorm() <= 1 + 1e-12, ErrorKind::invalid_argument,
                "Poisson evaluation outside the closed unit disk");
    std::complex<double> w(z.x(), z.y());
    std::complex<double> acc = 0;
    for (std::size_t k = coeff_.size(); k-- > 0;)
        acc = acc * w + static_cast<double>(k + 1) * coeff_[k];
    return {acc.real(), -acc.imag()};
}

PoissonDisk::Trace PoissonDisk::trace(double theta) const
{
    Vec2 e{std::cos(theta), std::sin(theta)};
    double u1 = value((1 - 1e-3) * e);
    double u2 = value((1 - 2e-3) * e);
    double u3 = value((1 - 3e-3) * e);
    return {2 * u1 - u2, std::abs(u1 - 2 * u2 + u3)};
}

//---------------------------------------------------------------------------//
PoissonDiskField::PoissonDiskField(PoissonDisk disk,
                                   std::shared_ptr<geometry::PlanarDomain const> region)
    : disk_(std::move(disk)), region_(std::move(region))
{
    if (!region_)
        region_ = std::make_shared<geometry::PlanarDomain const>(geometry::PlanarDomain::disk());
}

std::string PoissonDiskField::describe() const
{
    return "poisson_disk(N=" + std::to_string(disk_.nodes()) + ")";
}

}  // namespace hqclab::harmonic
