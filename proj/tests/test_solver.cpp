#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "rbfheat/manufactured.hpp"
#include "rbfheat/solver.hpp"
#include "rbfheat/verify.hpp"

using namespace rbfheat;
using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

namespace {

SpMat tridiag(int n, double diag = 2.0, double off = -1.0) {
    std::vector<Eigen::Triplet<double>> t;
    for (int i = 0; i < n; ++i) {
        t.emplace_back(i, i, diag);
        if (i > 0) t.emplace_back(i, i - 1, off);
        if (i + 1 < n) t.emplace_back(i, i + 1, off);
    }
    SpMat a(n, n);
    a.setFromTriplets(t.begin(), t.end());
    a.makeCompressed();
    return a;
}

SparseSystem circle_system(double dr, int p, double k1 = 1, double k2 = 1) {
    ManufacturedCase mc = ManufacturedCase::circle_in_square(k1, k2);
    PointSet ps = generate(mc.geometry(dr), 7);
    CloudPlan plan = build_clouds(ps, p);
    ProblemSpec spec = manufactured_problem(mc);
    auto w = compute_weights(ps, plan, KernelConfig(1, p, 2), multidomain_needs(ps, plan, spec));
    return assemble_multidomain(ps, plan, w, spec);
}

}  // namespace

TEST_CASE("rcm permutation") {
    SECTION("tridiagonal stays at bandwidth 1") {
        SpMat a = tridiag(50);
        Permutation perm = rcm_permutation(a);
        CHECK(bandwidth(permute_symmetric(a, perm)) == 1);
    }
    SECTION("scrambled banded matrix is restored to a small band") {
        // permute a bandwidth-1 matrix with a random permutation, then RCM it back
        const int n = 64;
        SpMat a = tridiag(n);
        std::vector<int> shuffle(n);
        for (int i = 0; i < n; ++i) shuffle[i] = i;
        std::mt19937_64 rng(5);
        for (int i = n - 1; i > 0; --i) std::swap(shuffle[i], shuffle[rng() % (i + 1)]);
        Permutation scramble;
        scramble.old_to_new = shuffle;
        scramble.new_to_old.resize(n);
        for (int i = 0; i < n; ++i) scramble.new_to_old[shuffle[i]] = i;
        SpMat b = permute_symmetric(a, scramble);
        REQUIRE(bandwidth(b) > 1);
        Permutation rcm = rcm_permutation(b);
        CHECK(bandwidth(permute_symmetric(b, rcm)) == 1);
    }
    SECTION("permutation is a bijection") {
        SpMat a = tridiag(31);
        Permutation perm = rcm_permutation(a);
        std::vector<bool> seen(31, false);
        for (int i = 0; i < 31; ++i) {
            REQUIRE(perm.old_to_new[i] >= 0);
            REQUIRE(!seen[perm.old_to_new[i]]);
            seen[perm.old_to_new[i]] = true;
            REQUIRE(perm.new_to_old[perm.old_to_new[i]] == i);
        }
    }
    SECTION("disconnected components are all ordered") {
        std::vector<Eigen::Triplet<double>> t;
        for (int b = 0; b < 3; ++b)
            for (int i = 0; i < 4; ++i) {
                int o = 4 * b;
                t.emplace_back(o + i, o + i, 2.0);
                if (i > 0) {
                    t.emplace_back(o + i, o + i - 1, -1.0);
                    t.emplace_back(o + i - 1, o + i, -1.0);
                }
            }
        SpMat a(12, 12);
        a.setFromTriplets(t.begin(), t.end());
        Permutation perm = rcm_permutation(a);
        std::vector<bool> seen(12, false);
        for (int v : perm.new_to_old) {
            REQUIRE(v >= 0);
            seen[v] = true;
        }
        CHECK(std::all_of(seen.begin(), seen.end(), [](bool x) { return x; }));
    }
    SECTION("assembled circle system: RCM shrinks the bandwidth") {
        SparseSystem sys = circle_system(0.052, 3);
        REQUIRE(sys.size() > 1000);
        Permutation perm = rcm_permutation(sys.matrix);
        int before = bandwidth(sys.matrix);
        int after = bandwidth(permute_symmetric(sys.matrix, perm));
        CHECK(after < before);
    }
}

TEST_CASE("bicgstab basics") {
    SolverConfig cfg;
    cfg.rel_tolerance = 1e-12;

    SECTION("identity solves in at most one iteration") {
        SpMat eye(5, 5);
        eye.setIdentity();
        Eigen::VectorXd b(5);
        b << 1, -2, 3, 0.5, 9;
        detail::JacobiPrecond M(eye);
        auto [x, iters] = bicgstab(eye, b, M, cfg);
        CHECK(iters <= 1);
        CHECK((x - b).norm() < 1e-12);
    }
    SECTION("2x2 SPD system") {
        SpMat a(2, 2);
        std::vector<Eigen::Triplet<double>> t{{0, 0, 2}, {0, 1, 1}, {1, 0, 1}, {1, 1, 2}};
        a.setFromTriplets(t.begin(), t.end());
        Eigen::VectorXd b(2);
        b << 1, 1;
        detail::JacobiPrecond M(a);
        auto [x, iters] = bicgstab(a, b, M, cfg);
        CHECK(x[0] == Catch::Approx(1.0 / 3.0).epsilon(1e-10));
        CHECK(x[1] == Catch::Approx(1.0 / 3.0).epsilon(1e-10));
    }
    SECTION("non-convergence carries the best residual") {
        SolverConfig tight;
        tight.rel_tolerance = 1e-13;
        tight.max_iterations = 1;
        SpMat a = tridiag(200);
        Eigen::VectorXd b = Eigen::VectorXd::Ones(200);
        detail::JacobiPrecond M(a);
        try {
            bicgstab(a, b, M, tight);
            FAIL("expected non-convergence");
        } catch (const SolverError& e) {
            CHECK(e.best_residual > 0);
            CHECK(e.best_residual < 1);
        }
    }
}

TEST_CASE("assembled system matches a dense direct solve") {
    SparseSystem sys = circle_system(0.052, 3, 10, 1);
    REQUIRE(sys.size() > 1200);
    SolverConfig cfg;
    auto [x, rep] = solve(sys, cfg);

    Eigen::MatrixXd dense = Eigen::MatrixXd(sys.matrix);
    Eigen::VectorXd xd = Eigen::PartialPivLU<Eigen::MatrixXd>(dense).solve(sys.rhs);
    CHECK((x - xd).cwiseAbs().maxCoeff() < 1e-8 * std::max(1.0, xd.cwiseAbs().maxCoeff()));
    CHECK(rep.residual <= cfg.rel_tolerance * 10);
    CHECK(rep.bandwidth_after < rep.bandwidth_before);
}

TEST_CASE("permutation transparency") {
    SparseSystem sys = circle_system(0.07, 3, 10, 1);
    SolverConfig with_rcm, without_rcm;
    without_rcm.reorder = false;

    auto [x1, r1] = solve(sys, with_rcm);
    auto [x2, r2] = solve(sys, without_rcm);

    double scale = x1.cwiseAbs().maxCoeff();
    CHECK((x1 - x2).cwiseAbs().maxCoeff() < 1e-9 * scale);

    SECTION("residual certificate recomputes to the reported value") {
        double r = (sys.rhs - sys.matrix * x1).norm() / sys.rhs.norm();
        CHECK(std::abs(r - r1.residual) <= 1e-14 * std::max(1.0, r));
    }
}

TEST_CASE("preconditioners agree where they all converge") {
    // 2D diffusion grid: diagonally dominant, inside every preconditioner's
    // comfort zone. On PHS-RBF stencil matrices jacobi/ilu0 routinely stall,
    // which is why ilut is the production default.
    const int m = 20, n = m * m;
    std::vector<Eigen::Triplet<double>> t;
    auto id = [m](int i, int j) { return i * m + j; };
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            t.emplace_back(id(i, j), id(i, j), 4.2);
            if (i > 0) t.emplace_back(id(i, j), id(i - 1, j), -1.0);
            if (i + 1 < m) t.emplace_back(id(i, j), id(i + 1, j), -1.0);
            if (j > 0) t.emplace_back(id(i, j), id(i, j - 1), -1.0);
            if (j + 1 < m) t.emplace_back(id(i, j), id(i, j + 1), -1.0);
        }
    SparseSystem sys;
    sys.matrix.resize(n, n);
    sys.matrix.setFromTriplets(t.begin(), t.end());
    sys.matrix.makeCompressed();
    sys.rhs = Eigen::VectorXd::LinSpaced(n, -1, 2);
    sys.row_kind.assign(n, RowKind::pde);

    SolverConfig base;
    auto [x_ilut, r_ilut] = solve(sys, base);
    double scale = x_ilut.cwiseAbs().maxCoeff();
    for (PrecondKind kind : {PrecondKind::jacobi, PrecondKind::ilu0}) {
        SolverConfig cfg;
        cfg.preconditioner = kind;
        auto [x, r] = solve(sys, cfg);
        CHECK((x - x_ilut).cwiseAbs().maxCoeff() < 10 * base.rel_tolerance * scale * 100);
        CHECK(r.residual <= cfg.rel_tolerance);
    }
}

TEST_CASE("warm start from the exact solution converges immediately") {
    SparseSystem sys = circle_system(0.07, 3);
    SolverConfig cfg;
    auto [x, rep] = solve(sys, cfg);
    auto [x2, rep2] = solve(sys, cfg, &x);
    CHECK(rep2.iterations <= 2);
    CHECK((x2 - x).cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, x.cwiseAbs().maxCoeff()));
}
