#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <unordered_map>

#include "rbfheat/point_set.hpp"

namespace rbfheat {

/// Uniform-bin spatial index over a fixed set of points.
///
/// Queries are exact: results match an all-pairs scan, with ties on equal
/// distance broken by lower point index, so downstream stencils are
/// deterministic regardless of how candidates are gathered.
class NeighborGrid {
public:
    NeighborGrid(const std::vector<Vec3>& pts, int dim, double cell_size)
        : pts_(pts), dim_(dim), cell_(cell_size > 0 ? cell_size : 1.0) {
        lo_ = Vec3::Constant(std::numeric_limits<double>::max());
        for (const auto& p : pts_) lo_ = lo_.cwiseMin(p);
        if (pts_.empty()) lo_ = Vec3::Zero();
        bins_.reserve(pts_.size());
        for (int i = 0; i < static_cast<int>(pts_.size()); ++i)
            bins_[key(cell_of(pts_[i]))].push_back(i);
    }

    /// Indices of the k nearest points to `x` among those passing `eligible`,
    /// ordered by (distance, index). Returns fewer than k if the eligible set
    /// is smaller.
    std::vector<int> knn(const Vec3& x, int k,
                         const std::function<bool(int)>& eligible = {}) const {
        std::vector<std::pair<double, int>> cand;
        const Eigen::Vector3i c0 = cell_of(x);
        int ring = 0;
        const int max_ring = 2 + static_cast<int>(pts_.size());  // safety bound
        while (ring <= max_ring) {
            gather_ring(c0, ring, x, eligible, cand);
            if (static_cast<int>(cand.size()) >= k) {
                // All points within the searched square are collected; the
                // k-th distance is only trustworthy once the inscribed ball
                // of the searched region covers it.
                std::nth_element(cand.begin(), cand.begin() + (k - 1), cand.end());
                double dk = std::sqrt(cand[k - 1].first);
                // any unsearched point lies at distance >= ring*cell from x,
                // so strictly smaller dk cannot be displaced (ties included)
                if (dk < ring * cell_) break;
            }
            ++ring;
        }
        std::sort(cand.begin(), cand.end());
        if (static_cast<int>(cand.size()) > k) cand.resize(k);
        std::vector<int> out;
        out.reserve(cand.size());
        for (auto& [d2, i] : cand) out.push_back(i);
        return out;
    }

    /// All point indices within distance r of x (inclusive), sorted by index.
    std::vector<int> within(const Vec3& x, double r) const {
        std::vector<int> out;
        const Eigen::Vector3i c0 = cell_of(x);
        int span = static_cast<int>(std::ceil(r / cell_)) + 1;
        const double r2 = r * r;
        for (int dz = (dim_ == 3 ? -span : 0); dz <= (dim_ == 3 ? span : 0); ++dz)
            for (int dy = -span; dy <= span; ++dy)
                for (int dx = -span; dx <= span; ++dx) {
                    auto it = bins_.find(key({c0.x() + dx, c0.y() + dy, c0.z() + dz}));
                    if (it == bins_.end()) continue;
                    for (int i : it->second)
                        if ((pts_[i] - x).squaredNorm() <= r2) out.push_back(i);
                }
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    Eigen::Vector3i cell_of(const Vec3& p) const {
        Eigen::Vector3i c;
        for (int a = 0; a < 3; ++a)
            c[a] = (a < dim_) ? static_cast<int>(std::floor((p[a] - lo_[a]) / cell_)) : 0;
        return c;
    }
    static std::int64_t key(const Eigen::Vector3i& c) {
        // pack 21-bit signed cell coordinates
        auto enc = [](int v) { return static_cast<std::int64_t>(v & 0x1fffff); };
        return enc(c.x()) | (enc(c.y()) << 21) | (enc(c.z()) << 42);
    }

    void gather_ring(const Eigen::Vector3i& c0, int ring, const Vec3& x,
                     const std::function<bool(int)>& eligible,
                     std::vector<std::pair<double, int>>& cand) const {
        auto visit = [&](int cx, int cy, int cz) {
            auto it = bins_.find(key({cx, cy, cz}));
            if (it == bins_.end()) return;
            for (int i : it->second) {
                if (eligible && !eligible(i)) continue;
                cand.emplace_back((pts_[i] - x).squaredNorm(), i);
            }
        };
        const int zlo = (dim_ == 3) ? -ring : 0, zhi = (dim_ == 3) ? ring : 0;
        for (int dz = zlo; dz <= zhi; ++dz)
            for (int dy = -ring; dy <= ring; ++dy)
                for (int dx = -ring; dx <= ring; ++dx) {
                    int m = std::max({std::abs(dx), std::abs(dy), std::abs(dz)});
                    if (m != ring) continue;  // shell only
                    visit(c0.x() + dx, c0.y() + dy, c0.z() + dz);
                }
    }

    const std::vector<Vec3>& pts_;
    int dim_;
    double cell_;
    Vec3 lo_;
    std::unordered_map<std::int64_t, std::vector<int>> bins_;
};

/// O(N^2) reference used in tests and as a fallback for tiny sets.
inline std::vector<int> brute_force_knn(const std::vector<Vec3>& pts, const Vec3& x, int k,
                                        const std::function<bool(int)>& eligible = {}) {
    std::vector<std::pair<double, int>> cand;
    for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
        if (eligible && !eligible(i)) continue;
        cand.emplace_back((pts[i] - x).squaredNorm(), i);
    }
    std::sort(cand.begin(), cand.end());
    if (static_cast<int>(cand.size()) > k) cand.resize(k);
    std::vector<int> out;
    for (auto& [d2, i] : cand) out.push_back(i);
    return out;
}

inline double default_cell_size(const PointSet& ps) {
    // bounding-box heuristic: roughly one point per cell for uniform sets
    if (ps.size() < 2) return 1.0;
    Vec3 lo = ps.coords[0], hi = ps.coords[0];
    for (const auto& p : ps.coords) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    double vol = 1.0;
    for (int a = 0; a < ps.dim; ++a) vol *= std::max(hi[a] - lo[a], 1e-300);
    return std::pow(vol / ps.size(), 1.0 / ps.dim);
}

/// Mean over all points of the distance to the nearest other point.
inline double average_spacing(const PointSet& ps) {
    if (ps.size() < 2) throw std::invalid_argument("average_spacing: need at least 2 points");
    NeighborGrid grid(ps.coords, ps.dim, default_cell_size(ps));
    double sum = 0.0;
    for (int i = 0; i < ps.size(); ++i) {
        auto nn = grid.knn(ps.coords[i], 2);  // self + nearest other
        sum += (ps.coords[nn[1]] - ps.coords[i]).norm();
    }
    return sum / ps.size();
}

/// Structural invariant checks; throws InvalidPointSet naming the offender.
inline void validate(const PointSet& ps) {
    const int n = ps.size();
    if (n == 0) throw InvalidPointSet("point set is empty");
    for (int i = 0; i < n; ++i) {
        if (ps.kind[i] == PointKind::interface) {
            if (ps.adjacent[i].first == ps.adjacent[i].second)
                throw InvalidPointSet("interface point " + std::to_string(i) +
                                      " must separate two distinct subdomains");
            if (std::abs(ps.normal[i].norm() - 1.0) > 1e-12)
                throw InvalidPointSet("interface point " + std::to_string(i) +
                                      " has non-unit normal");
        }
        if (ps.kind[i] == PointKind::boundary) {
            double nn = ps.normal[i].norm();
            if (nn != 0.0 && std::abs(nn - 1.0) > 1e-12)  // corners carry zero normal
                throw InvalidPointSet("boundary point " + std::to_string(i) +
                                      " has non-unit normal");
        }
    }
    NeighborGrid grid(ps.coords, ps.dim, default_cell_size(ps));
    for (int i = 0; i < n; ++i) {
        auto nn = grid.knn(ps.coords[i], 2);
        if (nn.size() > 1 && (ps.coords[nn[1]] - ps.coords[i]).norm() == 0.0) {
            int j = nn[1] == i ? nn[0] : nn[1];
            throw InvalidPointSet("duplicate points " + std::to_string(std::min(i, j)) + " and " +
                                  std::to_string(std::max(i, j)));
        }
    }
}

}  // namespace rbfheat
