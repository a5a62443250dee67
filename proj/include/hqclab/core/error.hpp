#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hqclab
{
//! Failure categories surfaced by every module. The CLI maps each to an exit
//! code, so the numbering is part of the external interface.
enum class ErrorKind
{
    config_invalid = 2,
    stage_failure = 3,
    non_unique_projection = 10,
    outside_tubular = 11,
    degenerate_tangent = 12,
    radius_too_large = 13,
    patch_degenerate = 14,
    path_leaves_domain = 15,
    tubular_violation = 16,
    invalid_curve = 17,
    max_steps_exceeded = 20,
    quadrature_unstable = 21,
    step_too_large = 22,
    solver_diverged = 23,
    grid_too_coarse = 24,
    not_injective = 30,
    quadrature_under_resolved = 31,
    jacobian_non_positive = 32,
    trace_outside_chart = 33,
    window_too_narrow = 40,
    non_finite_trace = 41,
    chart_residual_too_large = 42,
    endpoint_exponent = 43,
    non_positive_data = 50,
    invalid_argument = 60,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error
{
  public:
    Error(ErrorKind kind, std::string const& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what)
        , kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }
    int exit_code() const noexcept { return static_cast<int>(kind_); }

  private:
    ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind)
{
    switch (kind)
    {
        case ErrorKind::config_invalid: return "ConfigInvalid";
        case ErrorKind::stage_failure: return "StageFailure";
        case ErrorKind::non_unique_projection: return "NonUniqueProjection";
        case ErrorKind::outside_tubular: return "OutsideTubular";
        case ErrorKind::degenerate_tangent: return "DegenerateTangent";
        case ErrorKind::radius_too_large: return "RadiusTooLarge";
        case ErrorKind::patch_degenerate: return "PatchDegenerate";
        case ErrorKind::path_leaves_domain: return "PathLeavesDomain";
        case ErrorKind::tubular_violation: return "TubularViolation";
        case ErrorKind::invalid_curve: return "InvalidCurve";
        case ErrorKind::max_steps_exceeded: return "MaxStepsExceeded";
        case ErrorKind::quadrature_unstable: return "QuadratureUnstable";
        case ErrorKind::step_too_large: return "StepTooLarge";
        case ErrorKind::solver_diverged: return "SolverDiverged";
        case ErrorKind::grid_too_coarse: return "GridTooCoarse";
        case ErrorKind::not_injective: return "NotInjective";
        case ErrorKind::quadrature_under_resolved: return "QuadratureUnderResolved";
        case ErrorKind::jacobian_non_positive: return "JacobianNonPositive";
        case ErrorKind::trace_outside_chart: return "TraceOutsideChart";
        case ErrorKind::window_too_narrow: return "WindowTooNarrow";
        case ErrorKind::non_finite_trace: return "NonFiniteTrace";
        case ErrorKind::chart_residual_too_large: return "ChartResidualTooLarge";
        case ErrorKind::endpoint_exponent: return "EndpointExponent";
        case ErrorKind::non_positive_data: return "NonPositiveData";
        case ErrorKind::invalid_argument: return "InvalidArgument";
    }
    return "Unknown";
}

#define HQC_REQUIRE(cond, kind, msg)                   \
    do                                                 \
    {                                                  \
        if (!(cond))                                   \
        {                                              \
            throw ::hqclab::Error((kind), (msg));      \
        }                                              \
    } while (0)

}  // namespace hqclab
