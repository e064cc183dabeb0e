// Compute PHS+polynomial differentiation weights on a small scattered cloud
// and apply them to a test function.
#include <cstdio>
#include <random>

#include "rbfheat/kernel.hpp"

using namespace rbfheat;

int main() {
    KernelConfig cfg(1, 3, 2);  // r^3 kernel, cubic polynomial, 2D
    std::mt19937_64 rng(42);
    std::vector<Vec3> cloud;
    cloud.emplace_back(0, 0, 0);
    for (int i = 1; i < cfg.cloud_size(); ++i) {
        double a = 2 * M_PI * (rng() % 1000) / 1000.0;
        double r = 0.2 + 0.8 * ((rng() % 1000) / 1000.0);
        cloud.emplace_back(r * std::cos(a), r * std::sin(a), 0);
    }

    LocalRbf rbf(cloud, cfg);
    Eigen::VectorXd lap = rbf.weights(DiffOp::laplacian());

    auto f = [](const Vec3& x) { return x.x() * x.x() + 3 * x.y() * x.y(); };
    double applied = 0;
    for (int i = 0; i < lap.size(); ++i) applied += lap[i] * f(cloud[i]);
    std::printf("laplacian of x^2 + 3 y^2 at the base: %.12f (exact 8)\n", applied);
    std::printf("local system condition estimate: %.3e\n", rbf.condition());
    return 0;
}
