#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "hqclab/hqc/map.hpp"
#include "hqclab/regularity/certificate.hpp"
#include "hqclab/regularity/improvement.hpp"
#include "hqclab/regularity/iteration.hpp"
#include "hqclab/regularity/path_upgrade.hpp"

namespace hqclab::regularity
{
struct PipelineOptions
{
    double alpha = 0.5;        //!< boundary smoothness of the target, in (0, 1)
    double beta_cap = 0.9;     //!< the fitted seed exponent is capped here
    double patch_radius = 0.5;
    TraceWindow trace_window;
    double t_min = 1e-3;       //!< collar profiles run from t_min to c r0 / 2
    std::size_t t_points = 16;
    double path_rho = 0.05;    //!< |xi - eta| for the path upgrade
    int interior_lattice = 64;
    std::size_t pairs = 10000;
    std::size_t quasiconvex_pairs = 200;
    std::uint64_t seed = 1;
};

//! One check of one stage at one boundary point.
struct StageReport
{
    std::size_t m = 0;  //!< stage index; the check certifies beta_m
    double beta = 0;
    std::string check;  //!< normal-trace, collar, path, uniform
    Vec2 xi = Vec2::Zero();
    double exponent = 0;  //!< fitted exponent (collar checks)
    double target = 0;
    double constant = 0;
    bool passed = false;
};

struct LipschitzReport
{
    std::string seed_note;
    double beta0_fitted = 0;  //!< smallest fitted trace exponent
    double beta0_seed = 0;    //!< after the cap and endpoint adjustment
    IterationTrace iteration;
    double k = 1;  //!< qc constant over every sampled point
    std::vector<StageReport> stages;
    std::vector<CollarProfile> final_profiles;  //!< stage m0, one per xi
    double collar_bound = 0;    //!< C*: max collar |Df| at stage m0
    double delta_star = 0;
    double interior_bound = 0;  //!< max |Df| on {delta >= delta*}
    double sup_df = 0;
    double quasiconvexity = 1;  //!< C_D
    double lipschitz = 0;       //!< L = C_D sup |Df|
    double direct_quotient = 0; //!< max |f(x) - f(y)| / |x - y| over random pairs
    bool cross_valid = false;   //!< direct <= L (1 + 0.05)
};

/*!
 * Trace fit, exponent iteration, per-stage improvement / collar / path
 * checks, the uniform bound at m0 and quasiconvex globalization.
 *
 * The map must live on the unit disk and carry a target domain. Throws
 * StageFailure naming the first check whose exponent falls short of its
 * target by more than 0.05 (or that records a violation).
 */
LipschitzReport lipschitz_pipeline(std::shared_ptr<hqc::HarmonicMap const> map,
                                   std::vector<Vec2> const& boundary_points,
                                   PipelineOptions const& options = {});

//! n equally spaced points of the unit circle starting at (1, 0).
std::vector<Vec2> circle_points(std::size_t n);

}  // namespace hqclab::regularity
