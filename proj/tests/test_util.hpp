#pragma once

#include <random>
#include <vector>

#include "rbfheat/point_set.hpp"

namespace testutil {

inline double frand(std::mt19937_64& rng) {
    return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;  // [-1, 1)
}

/// Well-separated scattered cloud inside the unit ball: jittered lattice
/// sites nearest to the origin, base point first at the origin.
inline std::vector<rbfheat::Vec3> random_cloud(std::mt19937_64& rng, int q, int dim) {
    using rbfheat::Vec3;
    int m = 2;
    while (std::pow(m, dim) < 4 * q) ++m;
    double h = 2.0 / m;
    std::vector<Vec3> sites;
    for (int iz = 0; iz < (dim == 3 ? m : 1); ++iz)
        for (int iy = 0; iy < m; ++iy)
            for (int ix = 0; ix < m; ++ix) {
                Vec3 x(-1 + (ix + 0.5) * h + 0.3 * h * frand(rng),
                       -1 + (iy + 0.5) * h + 0.3 * h * frand(rng),
                       dim == 3 ? -1 + (iz + 0.5) * h + 0.3 * h * frand(rng) : 0.0);
                sites.push_back(x);
            }
    std::sort(sites.begin(), sites.end(),
              [](const Vec3& a, const Vec3& b) { return a.squaredNorm() < b.squaredNorm(); });
    std::vector<Vec3> cloud;
    cloud.push_back(Vec3::Zero());  // base
    for (int i = 0; i < q - 1; ++i) cloud.push_back(sites[i]);
    return cloud;
}

}  // namespace testutil
