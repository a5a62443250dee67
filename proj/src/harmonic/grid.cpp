#include "hqclab/harmonic/grid.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <array>
#include <cmath>

#include "hqclab/core/error.hpp"

namespace hqclab::harmonic
{
namespace
{
// Nodes closer than this fraction of h to the boundary are pinned to the
// boundary value instead of getting a degenerate arm.
constexpr double kPinFraction = 1e-4;

// Fraction of the segment a -> b (a inside, b outside) at the first crossing.
double crossing(geometry::Region const& region, Vec2 const& a, Vec2 const& b)
{
    double lo = 0, hi = 1;
    for (int k = 0; k < 52; ++k)
    {
        double mid = 0.5 * (lo + hi);
        if (region.contains(a + mid * (b - a)))
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

constexpr int kDi[4] = {1, -1, 0, 0};
constexpr int kDj[4] = {0, 0, 1, -1};
}  // namespace

double GridSolution::interpolate(Vec2 const& x) const
{
    double fx = x.x() / h - i0;
    double fy = x.y() / h - j0;
    HQC_REQUIRE(fx >= 0 && fy >= 0 && fx <= nx - 1 && fy <= ny - 1, ErrorKind::invalid_argument,
                "interpolation point is outside the grid");
    long i = std::min<long>(static_cast<long>(fx), nx - 2);
    long j = std::min<long>(static_cast<long>(fy), ny - 2);
    double u = fx - i, v = fy - j;
    return (1 - u) * (1 - v) * at(i, j) + u * (1 - v) * at(i + 1, j)
           + (1 - u) * v * at(i, j + 1) + u * v * at(i + 1, j + 1);
}

GridSolution grid_solve(std::shared_ptr<geometry::Region const> region,
                        BoundaryData const& data,
                        double h)
{
    HQC_REQUIRE(region && data, ErrorKind::invalid_argument, "grid solve needs region and data");
    HQC_REQUIRE(h > 0 && std::isfinite(h), ErrorKind::invalid_argument, "grid_h must be positive");
    auto box = region->bounds();
    HQC_REQUIRE(box.bounded(), ErrorKind::invalid_argument, "grid solve needs a bounded region");
    double extent = std::min(box.hi.x() - box.lo.x(), box.hi.y() - box.lo.y());
    HQC_REQUIRE(extent / h >= 16, ErrorKind::grid_too_coarse,
                "grid_h " + std::to_string(h) + " gives fewer than 16 cells across "
                    + region->describe());

    GridSolution sol;
    sol.region = region;
    sol.h = h;
    sol.i0 = static_cast<long>(std::floor(box.lo.x() / h)) - 1;
    sol.j0 = static_cast<long>(std::floor(box.lo.y() / h)) - 1;
    sol.nx = static_cast<long>(std::ceil(box.hi.x() / h)) + 2 - sol.i0;
    sol.ny = static_cast<long>(std::ceil(box.hi.y() / h)) + 2 - sol.j0;
    std::size_t n_nodes = static_cast<std::size_t>(sol.nx * sol.ny);
    sol.values.assign(n_nodes, 0.0);
    sol.unknown.assign(n_nodes, 0);
    sol.data_min = INFINITY;
    sol.data_max = -INFINITY;

    auto boundary_value = [&](Vec2 const& p) {
        double v = data(region->project(p));
        sol.data_min = std::min(sol.data_min, v);
        sol.data_max = std::max(sol.data_max, v);
        return v;
    };

    std::vector<char> inside(n_nodes, 0);
    for (long j = 0; j < sol.ny; ++j)
        for (long i = 0; i < sol.nx; ++i)
            inside[j * sol.nx + i] = region->contains(sol.node(i, j)) ? 1 : 0;

    // Arm fractions per inside node; pin nodes hugging the boundary.
    std::vector<std::array<double, 4>> arms(n_nodes);
    for (long j = 0; j < sol.ny; ++j)
    {
        for (long i = 0; i < sol.nx; ++i)
        {
            long idx = j * sol.nx + i;
            if (!inside[idx])
                continue;
            bool pin = false;
            for (int d = 0; d < 4; ++d)
            {
                long ni = i + kDi[d], nj = j + kDj[d];
                bool in = ni >= 0 && nj >= 0 && ni < sol.nx && nj < sol.ny
                          && inside[nj * sol.nx + ni];
                double theta = in ? 1.0
                                  : crossing(*region, sol.node(i, j),
                                             sol.node(i, j) + h * Vec2(kDi[d], kDj[d]));
                arms[idx][d] = theta;
                pin = pin || theta < kPinFraction;
            }
            sol.unknown[idx] = pin ? 0 : 1;
        }
    }

    std::vector<long> number(n_nodes, -1);
    for (std::size_t k = 0; k < n_nodes; ++k)
        if (sol.unknown[k])
            number[k] = static_cast<long>(sol.unknowns++);

    // Known values: outside and pinned nodes.
    for (long j = 0; j < sol.ny; ++j)
        for (long i = 0; i < sol.nx; ++i)
            if (!sol.unknown[j * sol.nx + i])
                sol.values[j * sol.nx + i] = boundary_value(sol.node(i, j));

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(sol.unknowns * 5);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sol.unknowns));
    for (long j = 0; j < sol.ny; ++j)
    {
        for (long i = 0; i < sol.nx; ++i)
        {
            long idx = j * sol.nx + i;
            if (!sol.unknown[idx])
                continue;
            long row = number[idx];
            double diag = 0;
            for (int axis = 0; axis < 2; ++axis)
            {
                int dp = 2 * axis, dm = 2 * axis + 1;
                double tp = arms[idx][dp], tm = arms[idx][dm];
                // h^2 u_ss ~ 2/(tp+tm) [(u+ - u)/tp + (u- - u)/tm]
                double cp = 2 / ((tp + tm) * tp);
                double cm = 2 / ((tp + tm) * tm);
                diag += cp + cm;
                for (int d : {dp, dm})
                {
                    double c = d == dp ? cp : cm;
                    long ni = i + kDi[d], nj = j + kDj[d];
                    double theta = arms[idx][d];
                    if (theta == 1.0 && sol.unknown[nj * sol.nx + ni])
                        trip.emplace_back(row, number[nj * sol.nx + ni], -c);
                    else if (theta == 1.0)
                        rhs[row] += c * sol.values[nj * sol.nx + ni];
                    else
                        rhs[row] += c * boundary_value(sol.node(i, j)
                                                       + theta * h * Vec2(kDi[d], kDj[d]));
                }
            }
            trip.emplace_back(row, row, diag);
        }
    }

    Eigen::SparseMatrix<double> a(static_cast<Eigen::Index>(sol.unknowns),
                                  static_cast<Eigen::Index>(sol.unknowns));
    a.setFromTriplets(trip.begin(), trip.end());
    a.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(a);
    HQC_REQUIRE(lu.info() == Eigen::Success, ErrorKind::solver_diverged,
                "sparse factorization failed: " + lu.lastErrorMessage());
    Eigen::VectorXd u = lu.solve(rhs);
    HQC_REQUIRE(lu.info() == Eigen::Success && u.allFinite(), ErrorKind::solver_diverged,
                "sparse solve failed");
    Eigen::VectorXd r = a * u - rhs;
    if (r.lpNorm<Eigen::Infinity>() > 1e-12)
    {
        u -= lu.solve(r);
        r = a * u - rhs;
    }
    sol.residual = r.size() ? r.lpNorm<Eigen::Infinity>() : 0.0;
    HQC_REQUIRE(sol.residual < 1e-9, ErrorKind::solver_diverged,
                "grid residual " + std::to_string(sol.residual) + " after refinement");

    for (std::size_t k = 0; k < n_nodes; ++k)
        if (sol.unknown[k])
            sol.values[k] = u[number[k]];
    return sol;
}

//---------------------------------------------------------------------------//
GridField::GridField(GridSolution solution) : solution_(std::move(solution))
{
    HQC_REQUIRE(solution_.region, ErrorKind::invalid_argument, "empty grid solution");
}

std::string GridField::describe() const
{
    return "grid(h=" + std::to_string(solution_.h) + ")";
}

}  // namespace hqclab::harmonic
