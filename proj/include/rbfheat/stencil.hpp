#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "rbfheat/kernel.hpp"
#include "rbfheat/neighbor.hpp"
#include "rbfheat/point_set.hpp"

namespace rbfheat {

/// Interpolation stencil restricted to one subdomain. Members are ordered by
/// distance to the base (base first); interface points adjacent to the
/// subdomain are eligible members, including those of other interfaces.
struct Cloud {
    int base_index = -1;
    int subdomain = -1;
    std::vector<int> members;  // base first
};

/// One cloud per interior/boundary point, two per interface point (one per
/// adjacent subdomain). In unrestricted (single-domain) mode every point has
/// one cloud drawn from the full set.
struct CloudPlan {
    int q = 0;
    bool restricted = true;
    std::vector<Cloud> clouds;
    std::vector<int> primary;    // point -> cloud index
    std::vector<int> secondary;  // point -> second cloud (interface only), else -1

    /// Cloud of `point` on the side of `sub`; callers pass the subdomain an
    /// interface point is being differentiated in.
    const Cloud& for_side(int point, int sub) const {
        const Cloud& a = clouds[primary[point]];
        if (a.subdomain == sub || secondary[point] < 0) return a;
        return clouds[secondary[point]];
    }
};

struct CloudError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The q nearest points to `base` that belong to `sub` (interface points of
/// adjacent pairs count), ordered by (distance, index).
inline std::vector<int> nearest_eligible(const PointSet& ps, int base, int sub, int q) {
    NeighborGrid grid(ps.coords, ps.dim, default_cell_size(ps));
    auto eligible = [&](int i) { return ps.adjacent_to(i, sub); };
    auto found = grid.knn(ps.coords[base], q, eligible);
    if (static_cast<int>(found.size()) < q)
        throw CloudError("subdomain " + std::to_string(sub) + " holds only " +
                         std::to_string(found.size()) + " eligible points, need " +
                         std::to_string(q));
    return found;
}

inline CloudPlan build_clouds(const PointSet& ps, int p) {
    const int n = ps.size();
    KernelConfig cfg(1, p, ps.dim);
    const int q = cfg.cloud_size();

    // fail early with the subdomain named if any region is too small
    std::vector<int> subs = ps.subdomain_ids();
    for (int s : subs) {
        int avail = 0;
        for (int i = 0; i < n; ++i) avail += ps.adjacent_to(i, s);
        if (avail < q)
            throw CloudError("subdomain " + std::to_string(s) + " holds only " +
                             std::to_string(avail) + " eligible points, need " +
                             std::to_string(q) + " (p=" + std::to_string(p) + ")");
    }

    NeighborGrid grid(ps.coords, ps.dim, default_cell_size(ps));
    CloudPlan plan;
    plan.q = q;
    plan.primary.assign(n, -1);
    plan.secondary.assign(n, -1);

    auto make_cloud = [&](int i, int sub) {
        auto eligible = [&](int j) { return ps.adjacent_to(j, sub); };
        auto found = grid.knn(ps.coords[i], q, eligible);
        // knn orders by (distance, index); the base itself is at distance 0
        Cloud c;
        c.base_index = i;
        c.subdomain = sub;
        c.members = std::move(found);
        auto self = std::find(c.members.begin(), c.members.end(), i);
        if (self != c.members.begin()) std::rotate(c.members.begin(), self, self + 1);
        return c;
    };

    for (int i = 0; i < n; ++i) {
        if (ps.kind[i] == PointKind::interface) {
            plan.primary[i] = static_cast<int>(plan.clouds.size());
            plan.clouds.push_back(make_cloud(i, ps.adjacent[i].first));
            plan.secondary[i] = static_cast<int>(plan.clouds.size());
            plan.clouds.push_back(make_cloud(i, ps.adjacent[i].second));
        } else {
            plan.primary[i] = static_cast<int>(plan.clouds.size());
            plan.clouds.push_back(make_cloud(i, ps.subdomain[i]));
        }
    }
    return plan;
}

/// Single-domain clouds: no subdomain restriction (smearing-mode baseline).
inline CloudPlan build_clouds_unrestricted(const PointSet& ps, int p) {
    const int n = ps.size();
    KernelConfig cfg(1, p, ps.dim);
    const int q = cfg.cloud_size();
    if (n < q)
        throw CloudError("point set holds only " + std::to_string(n) + " points, need " +
                         std::to_string(q));
    NeighborGrid grid(ps.coords, ps.dim, default_cell_size(ps));
    CloudPlan plan;
    plan.q = q;
    plan.restricted = false;
    plan.primary.assign(n, -1);
    plan.secondary.assign(n, -1);
    for (int i = 0; i < n; ++i) {
        auto found = grid.knn(ps.coords[i], q);
        Cloud c;
        c.base_index = i;
        c.subdomain = ps.subdomain[i];
        c.members = std::move(found);
        auto self = std::find(c.members.begin(), c.members.end(), i);
        if (self != c.members.begin()) std::rotate(c.members.begin(), self, self + 1);
        plan.primary[i] = static_cast<int>(plan.clouds.size());
        plan.clouds.push_back(std::move(c));
    }
    return plan;
}

inline std::vector<Vec3> cloud_coords(const PointSet& ps, const Cloud& c) {
    std::vector<Vec3> xs;
    xs.reserve(c.members.size());
    for (int j : c.members) xs.push_back(ps.coords[j]);
    return xs;
}

}  // namespace rbfheat
