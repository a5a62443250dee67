#pragma once

#include <memory>
#include <span>
#include <vector>

#include "hqclab/hqc/rotated.hpp"
#include "hqclab/regularity/certificate.hpp"
#include "hqclab/regularity/lemmas.hpp"

namespace hqclab::regularity
{
struct ImprovedExponent
{
    double beta1 = 0;  //!< (1 + alpha) beta0
    double c1 = 0;     //!< C_Omega C0^(1 + alpha)
};

ImprovedExponent improved_exponent(double alpha, double beta0, double c_omega, double c0);

struct NormalTraceOptions
{
    double tolerance = 1e-6;           //!< relative slack on the bound
    double residual_tolerance = 1e-6;  //!< chart identity residual, plus trace error
};

//! Certificate for the normal trace F_n^(q) near xi.
struct NormalTraceCert
{
    double alpha = 0;
    double beta0 = 0;
    double c0 = 0;
    double c_omega = 0;
    double beta1 = 0;
    double c1 = 0;
    std::size_t samples = 0;     //!< boundary samples inside the trace window
    std::size_t violations = 0;  //!< samples with |F_n| above the bound
    double max_quotient = 0;     //!< max |F_n| / |eta - xi|^beta1
    double residual = 0;         //!< max chart identity residual
    bool passed() const { return violations == 0; }
};

/*!
 * Improve the trace exponent through the target chart:
 *   |F_n(eta)| = |Phi(F_tilde(eta))| <= C_Omega |F(eta) - F(xi)|^(1+alpha).
 *
 * `trace` certifies the full map at xi with exponent beta0 and constant C0;
 * alpha and C_Omega come from the chart. Samples are checked up to the
 * certificate's window, with each sample's trace tolerance added to the
 * bound. Throws ChartResidualTooLarge when the rotated samples miss the
 * chart graph.
 */
NormalTraceCert normal_trace_improvement(hqc::RotatedMap const& rotated,
                                         BasepointHolderCert const& trace,
                                         NormalTraceOptions const& options = {});

struct CollarRow
{
    double t = 0;
    double df_norm = 0;      //!< |Df(xi + t nu)|
    double normal_grad = 0;  //!< |grad f_n|
    double bound = 0;        //!< H(K) |grad f_n|
};

struct CollarProfile
{
    double beta1 = 0;
    double k = 1;
    double h = 1;  //!< H(K)
    std::vector<CollarRow> rows;
    GradientProfile normal;  //!< lemma check on f_n
    ExponentFit fit;         //!< fit of |Df|
    double target = 0;
    double constant = 0;  //!< max |Df| t^(1 - beta1), or max |Df| for beta1 > 1
    std::size_t distortion_violations = 0;
    bool passed = false;
};

/*!
 * |Df| along the normal at xi from the normal component's gradient and the
 * distortion passage |Df| <= H(K) l(Df) <= H(K) |grad f_n|.
 *
 * `patch` is the source patch at xi. Throws EndpointExponent when
 * |beta1 - 1| < 0.01.
 */
CollarProfile collar_gradient_bound(hqc::RotatedMap const& rotated,
                                    NormalTraceCert const& improvement,
                                    std::shared_ptr<geometry::BoundaryPatch const> patch,
                                    double k,
                                    std::span<double const> t_grid);

}  // namespace hqclab::regularity
