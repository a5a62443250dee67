#pragma once

#include <span>
#include <vector>

#include "hqclab/core/fit.hpp"
#include "hqclab/harmonic/field.hpp"
#include "hqclab/regularity/certificate.hpp"

namespace hqclab::regularity
{
//! Exponent slack allowed against the lemma rates.
inline constexpr double kExponentSlack = 0.05;

struct TentRow
{
    double t = 0;
    double sup = 0;    //!< sup |u(y) - u(x0)| over the sampled tent ball
    double ratio = 0;  //!< sup / t^mu
    std::size_t samples = 0;
};

struct TentOptions
{
    std::size_t rings = 4;
    std::size_t angles = 32;
};

struct TentReport
{
    std::vector<TentRow> rows;
    ExponentFit fit;
    double max_ratio = 0;  //!< max sup / t^mu
    double c_hat = 0;      //!< max_ratio / (M + A / r0^mu)
    bool zero_profile = false;
    bool in_scope = true;  //!< mu in (0, 1)
    bool passed = false;   //!< fitted exponent >= mu - 0.05
};

//! Sup of |u - u(x0)| over B(x0 + t nu, t/2) for each t in (0, c r0).
TentReport tent_check(BasepointHolderCert const& cert,
                      harmonic::HarmonicField const& field,
                      std::span<double const> t_grid,
                      TentOptions const& options = {});

struct GradientRow
{
    double t = 0;
    double norm = 0;  //!< |grad u(x0 + t nu)|
    double std_error = 0;
};

struct GradientProfile
{
    std::vector<GradientRow> rows;
    ExponentFit fit;
    double target = 0;     //!< exponent the fit is held against
    double max_norm = 0;
    double c_hat = 0;      //!< max ratio against the lemma prefactor
    bool zero_profile = false;
    bool in_scope = true;
    bool passed = false;
};

//! Profile of |grad u| along the normal, held against t^(mu - 1).
//! Requires a window of at least 1.5 decades inside (0, c r0). Runs with
//! mu outside (0, 1) are computed but flagged out of scope.
GradientProfile gradient_decay_check(BasepointHolderCert const& cert,
                                     harmonic::HarmonicField const& field,
                                     std::span<double const> t_grid);

//! The mu > 1 case: |grad u| stays bounded along the normal.
GradientProfile uniform_gradient_check(BasepointHolderCert const& cert,
                                       harmonic::HarmonicField const& field,
                                       std::span<double const> t_grid);

//! Profile of |grad u(x0 + t nu)| without any acceptance judgement.
std::vector<GradientRow> normal_gradient_profile(geometry::BoundaryPatch const& patch,
                                                 harmonic::HarmonicField const& field,
                                                 std::span<double const> t_grid);

}  // namespace hqclab::regularity
