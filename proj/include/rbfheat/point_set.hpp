#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rbfheat {

using Vec3 = Eigen::Vector3d;

enum class PointKind : std::uint8_t { interior, boundary, interface };

inline char kind_tag(PointKind k) {
    switch (k) {
        case PointKind::interior: return 'I';
        case PointKind::boundary: return 'B';
        case PointKind::interface: return 'F';
    }
    return '?';
}

/// Scattered points of a multi-material domain. 2D sets store z = 0.
///
/// Interface points separate exactly two subdomains and carry a unit normal;
/// by convention the normal points from adjacent.second (inclusion side) into
/// adjacent.first (matrix side). Boundary points belong to the subdomain they
/// bound and carry the outward normal of their edge/face, except corners,
/// which carry a zero normal and are always handled as Dirichlet rows.
struct PointSet {
    int dim = 2;
    std::vector<Vec3> coords;
    std::vector<int> subdomain;                    // owning subdomain (interface: adjacent.first)
    std::vector<PointKind> kind;
    std::vector<int> interface_id;                 // valid when kind == interface, else -1
    std::vector<int> boundary_region;              // valid when kind == boundary, else -1
    std::vector<Vec3> normal;                      // interface + non-corner boundary points
    std::vector<std::pair<int, int>> adjacent;     // interface: (subdomain_1, subdomain_2)

    int size() const { return static_cast<int>(coords.size()); }

    void push_interior(const Vec3& x, int sub) {
        push(x, sub, PointKind::interior, -1, -1, Vec3::Zero(), {-1, -1});
    }
    void push_boundary(const Vec3& x, int sub, int region, const Vec3& n) {
        push(x, sub, PointKind::boundary, -1, region, n, {-1, -1});
    }
    void push_interface(const Vec3& x, int iface, const Vec3& n, std::pair<int, int> adj) {
        push(x, adj.first, PointKind::interface, iface, -1, n, adj);
    }

    bool adjacent_to(int i, int sub) const {
        if (kind[i] == PointKind::interface)
            return adjacent[i].first == sub || adjacent[i].second == sub;
        return subdomain[i] == sub;
    }

    std::vector<int> subdomain_ids() const {
        std::vector<int> ids;
        for (int i = 0; i < size(); ++i) {
            int s = subdomain[i];
            bool seen = false;
            for (int id : ids) seen |= (id == s);
            if (!seen) ids.push_back(s);
            if (kind[i] == PointKind::interface) {
                int s2 = adjacent[i].second;
                seen = false;
                for (int id : ids) seen |= (id == s2);
                if (!seen) ids.push_back(s2);
            }
        }
        std::sort(ids.begin(), ids.end());
        return ids;
    }

    int count(PointKind k) const {
        int n = 0;
        for (auto kk : kind) n += (kk == k);
        return n;
    }

private:
    void push(const Vec3& x, int sub, PointKind k, int iface, int region, const Vec3& n,
              std::pair<int, int> adj) {
        coords.push_back(x);
        subdomain.push_back(sub);
        kind.push_back(k);
        interface_id.push_back(iface);
        boundary_region.push_back(region);
        normal.push_back(n);
        adjacent.push_back(adj);
    }
};

/// Thrown when a PointSet violates a structural invariant.
struct InvalidPointSet : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace rbfheat
