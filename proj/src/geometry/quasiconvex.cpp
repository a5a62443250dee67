#include "hqclab/geometry/quasiconvex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "hqclab/core/error.hpp"
#include "hqclab/core/rng.hpp"

namespace hqclab::geometry
{
namespace
{
bool proper_cross(Vec2 const& a, Vec2 const& b, Vec2 const& c, Vec2 const& d)
{
    double const d1 = cross(b - a, c - a);
    double const d2 = cross(b - a, d - a);
    double const d3 = cross(d - c, a - c);
    double const d4 = cross(d - c, b - c);
    return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0))
           && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

struct Polygon
{
    std::vector<Vec2> v;

    bool inside(Vec2 const& p) const
    {
        bool in = false;
        for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++)
        {
            if ((v[i].y() > p.y()) != (v[j].y() > p.y())
                && p.x() < (v[j].x() - v[i].x()) * (p.y() - v[i].y()) / (v[j].y() - v[i].y())
                               + v[i].x())
            {
                in = !in;
            }
        }
        return in;
    }

    bool visible(Vec2 const& a, Vec2 const& b) const
    {
        for (std::size_t i = 0; i < v.size(); ++i)
        {
            if (proper_cross(a, b, v[i], v[(i + 1) % v.size()]))
                return false;
        }
        return inside(0.5 * (a + b));
    }
};

double dijkstra(std::vector<std::vector<std::pair<std::size_t, double>>> const& adj,
                std::size_t src, std::size_t dst)
{
    std::vector<double> dist(adj.size(), std::numeric_limits<double>::infinity());
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[src] = 0;
    heap.emplace(0, src);
    while (!heap.empty())
    {
        auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u])
            continue;
        if (u == dst)
            return d;
        for (auto [w, len] : adj[u])
        {
            if (d + len < dist[w])
            {
                dist[w] = d + len;
                heap.emplace(dist[w], w);
            }
        }
    }
    return dist[dst];
}
}  // namespace

QuasiconvexityEstimate measure_quasiconvexity(PlanarDomain const& domain,
                                              std::size_t pairs,
                                              std::uint64_t seed,
                                              std::size_t polygon_vertices)
{
    HQC_REQUIRE(!domain.is_half_plane(), ErrorKind::invalid_argument,
                "quasiconvexity is measured on bounded domains");
    auto const& curve = domain.boundary();
    BoundingBox const box = domain.bounds();

    auto draw_point = [&](CounterRng& rng) {
        for (;;)
        {
            Vec2 const p(box.lo.x() + rng.uniform() * (box.hi.x() - box.lo.x()),
                         box.lo.y() + rng.uniform() * (box.hi.y() - box.lo.y()));
            if (domain.contains(p))
                return p;
        }
    };
    auto straight = [&](Vec2 const& a, Vec2 const& b) {
        for (int i = 1; i < 256; ++i)
        {
            if (!domain.contains(a + (b - a) * (i / 256.0)))
                return false;
        }
        return true;
    };

    Polygon poly;
    poly.v.resize(polygon_vertices);
    for (std::size_t i = 0; i < polygon_vertices; ++i)
        poly.v[i] = curve.point(static_cast<double>(i) / polygon_vertices);

    // Vertex-vertex visibility is computed lazily on the first bent pair.
    std::vector<std::vector<std::pair<std::size_t, double>>> base_adj;

    QuasiconvexityEstimate est;
    for (std::size_t k = 0; k < pairs; ++k)
    {
        CounterRng rng(seed, k);
        Vec2 const a = draw_point(rng);
        Vec2 const b = draw_point(rng);
        double const chord = (a - b).norm();
        if (chord == 0)
            continue;
        ++est.pairs;
        if (straight(a, b))
            continue;
        ++est.non_straight;

        if (base_adj.empty())
        {
            std::size_t const n = poly.v.size();
            base_adj.resize(n);
            for (std::size_t i = 0; i < n; ++i)
            {
                for (std::size_t j = i + 1; j < n; ++j)
                {
                    bool const adjacent = j == i + 1 || (i == 0 && j == n - 1);
                    if (adjacent || poly.visible(poly.v[i], poly.v[j]))
                    {
                        double const len = (poly.v[i] - poly.v[j]).norm();
                        base_adj[i].emplace_back(j, len);
                        base_adj[j].emplace_back(i, len);
                    }
                }
            }
        }
        auto adj = base_adj;
        std::size_t const ia = adj.size(), ib = adj.size() + 1;
        adj.resize(adj.size() + 2);
        for (std::size_t i = 0; i < poly.v.size(); ++i)
        {
            if (poly.visible(a, poly.v[i]))
            {
                adj[ia].emplace_back(i, (a - poly.v[i]).norm());
                adj[i].emplace_back(ia, (a - poly.v[i]).norm());
            }
            if (poly.visible(b, poly.v[i]))
            {
                adj[ib].emplace_back(i, (b - poly.v[i]).norm());
                adj[i].emplace_back(ib, (b - poly.v[i]).norm());
            }
        }
        double const len = dijkstra(adj, ia, ib);
        if (std::isfinite(len))
            est.constant = std::max(est.constant, len / chord);
    }
    return est;
}

}  // namespace hqclab::geometry
