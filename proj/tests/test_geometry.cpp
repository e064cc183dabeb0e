#include <catch2/catch_amalgamated.hpp>

#include "rbfheat/geometry.hpp"
#include "rbfheat/neighbor.hpp"

using namespace rbfheat;

namespace {
struct Counts {
    int n = 0, d1 = 0, d2 = 0, iface = 0, boundary = 0;
};
Counts count(const PointSet& ps) {
    Counts c;
    c.n = ps.size();
    for (int i = 0; i < ps.size(); ++i) {
        if (ps.kind[i] == PointKind::interface)
            ++c.iface;
        else if (ps.kind[i] == PointKind::boundary)
            ++c.boundary;
        else if (ps.subdomain[i] == 2)
            ++c.d2;
        else
            ++c.d1;
    }
    return c;
}
}  // namespace

TEST_CASE("circle_in_square matches the published point regime") {
    PointSet ps = generate(GeometrySpec::circle_in_square_spec(0.052), 1);
    validate(ps);
    Counts c = count(ps);
    // N ~ 1541 with N_I ~ 1221 (boundary included), N_II ~ 266, N_Int ~ 54, +-15%
    CHECK(c.n > 1310);
    CHECK(c.n < 1772);
    CHECK(c.d1 + c.boundary > 1038);
    CHECK(c.d1 + c.boundary < 1404);
    CHECK(c.d2 > 226);
    CHECK(c.d2 < 306);
    CHECK(c.iface > 45);
    CHECK(c.iface < 63);

    SECTION("average spacing lands near the request") {
        double avg = average_spacing(ps);
        CHECK(avg > 0.042);
        CHECK(avg < 0.062);
    }

    SECTION("interface normals are radial") {
        for (int i = 0; i < ps.size(); ++i)
            if (ps.kind[i] == PointKind::interface) {
                Vec3 radial = ps.coords[i] / ps.coords[i].norm();
                REQUIRE((ps.normal[i] - radial).norm() < 1e-10);
            }
    }

    SECTION("partition property: every point counted exactly once") {
        CHECK(c.n == c.d1 + c.d2 + c.iface + c.boundary);
    }
}

TEST_CASE("generate is reproducible and seed-sensitive") {
    GeometrySpec spec = GeometrySpec::circle_in_square_spec(0.07);
    PointSet a = generate(spec, 42);
    PointSet b = generate(spec, 42);
    REQUIRE(a.size() == b.size());
    for (int i = 0; i < a.size(); ++i) {
        REQUIRE(a.coords[i] == b.coords[i]);
        REQUIRE(a.kind[i] == b.kind[i]);
    }
    PointSet c = generate(spec, 43);
    bool identical = c.size() == a.size();
    if (identical)
        for (int i = 0; i < a.size(); ++i) identical &= (a.coords[i] == c.coords[i]);
    CHECK_FALSE(identical);
}

TEST_CASE("composite slab") {
    SECTION("tiny slab: interface normals all +x") {
        PointSet ps = generate(GeometrySpec::composite_slab_spec(0.5), 1);
        int n_iface = 0;
        for (int i = 0; i < ps.size(); ++i)
            if (ps.kind[i] == PointKind::interface) {
                ++n_iface;
                REQUIRE(ps.normal[i] == Vec3(1, 0, 0));
                REQUIRE(ps.adjacent[i] == std::make_pair(1, 2));
            }
        CHECK(n_iface == 3);
    }
    SECTION("subdomain 2 sits left of the interface, 1 right") {
        PointSet ps = generate(GeometrySpec::composite_slab_spec(0.1), 1);
        for (int i = 0; i < ps.size(); ++i) {
            if (ps.kind[i] != PointKind::interior) continue;
            if (ps.coords[i].x() < 0.5) REQUIRE(ps.subdomain[i] == 2);
            if (ps.coords[i].x() > 0.5) REQUIRE(ps.subdomain[i] == 1);
        }
    }
    SECTION("boundary regions: left 0, right 1, bottom 2, top 3") {
        PointSet ps = generate(GeometrySpec::composite_slab_spec(0.1), 1);
        for (int i = 0; i < ps.size(); ++i) {
            if (ps.kind[i] != PointKind::boundary) continue;
            int r = ps.boundary_region[i];
            if (r == 0) REQUIRE(ps.coords[i].x() == 0.0);
            if (r == 1) REQUIRE(ps.coords[i].x() == 1.0);
            if (r == 2) REQUIRE(ps.coords[i].y() == 0.0);
            if (r == 3) REQUIRE(ps.coords[i].y() == 1.0);
        }
    }
}

TEST_CASE("astroid interface") {
    PointSet ps = generate(GeometrySpec::astroid_in_square_spec(0.053), 1);
    validate(ps);
    const double a = 0.5;

    SECTION("points satisfy the astroid equation") {
        for (int i = 0; i < ps.size(); ++i)
            if (ps.kind[i] == PointKind::interface) {
                double u = std::cbrt(std::pow(ps.coords[i].x() / a, 2.0));
                double v = std::cbrt(std::pow(ps.coords[i].y() / a, 2.0));
                REQUIRE(u + v == Catch::Approx(1.0).margin(1e-12));
            }
    }

    SECTION("the four cusps carry spike-direction normals") {
        int found = 0;
        for (int i = 0; i < ps.size(); ++i) {
            if (ps.kind[i] != PointKind::interface) continue;
            const Vec3& x = ps.coords[i];
            if ((x - Vec3(a, 0, 0)).norm() < 1e-12) {
                REQUIRE(ps.normal[i] == Vec3(1, 0, 0));
                ++found;
            }
            if ((x - Vec3(0, -a, 0)).norm() < 1e-12) {
                REQUIRE(ps.normal[i] == Vec3(0, -1, 0));
                ++found;
            }
        }
        CHECK(found == 2);
    }

    SECTION("off-cusp normals agree with the parametric outward normal") {
        // finite-difference tangent oracle on the parametrization
        for (int i = 0; i < ps.size(); ++i) {
            if (ps.kind[i] != PointKind::interface) continue;
            const Vec3& x = ps.coords[i];
            if (std::abs(x.x()) < 1e-9 || std::abs(x.y()) < 1e-9) continue;  // cusps
            double th = std::atan2(std::cbrt(x.y() / a), std::cbrt(x.x() / a));
            double eps = 1e-7;
            auto at = [&](double t) {
                return Vec3(a * std::pow(std::cos(t), 3), a * std::pow(std::sin(t), 3), 0);
            };
            Vec3 tangent = (at(th + eps) - at(th - eps)).normalized();
            REQUIRE(std::abs(tangent.dot(ps.normal[i])) < 1e-5);
            // outward: points away from the origin-ish (positive radial component)
            REQUIRE(ps.normal[i].dot(x) > 0);
        }
    }
}

TEST_CASE("sphere_in_cube matches the published total within tolerance") {
    PointSet ps = generate(GeometrySpec::sphere_in_cube_spec(0.057), 1);
    Counts c = count(ps);
    CHECK(c.n > 24617);   // 28961 - 15%
    CHECK(c.n < 33305);   // 28961 + 15%
    double avg = average_spacing(ps);
    CHECK(avg > 0.8 * 0.057);
    CHECK(avg < 1.2 * 0.057);

    SECTION("interface normals radial") {
        for (int i = 0; i < ps.size(); ++i)
            if (ps.kind[i] == PointKind::interface)
                REQUIRE((ps.normal[i] - ps.coords[i].normalized()).norm() < 1e-10);
    }
}

TEST_CASE("degenerate specs are rejected") {
    CHECK_THROWS_AS(generate(GeometrySpec::circle_in_square_spec(0.1, 0.95), 1), GeometryError);
    GeometrySpec bad = GeometrySpec::circle_in_square_spec(-0.1);
    CHECK_THROWS_AS(generate(bad, 1), GeometryError);
}

TEST_CASE("multi-inclusion square generates all subdomains") {
    std::vector<Inclusion> inc = {
        {2, -2.5, -2.5, 1.0, 1.0, 0.0},
        {3, 2.5, -2.5, 1.2, 0.8, 0.5},
        {4, 0.0, 2.5, 0.9, 0.9, 0.0},
    };
    PointSet ps = generate(GeometrySpec::multi_inclusion_spec(0.12, inc), 1);
    validate(ps);
    auto ids = ps.subdomain_ids();
    REQUIRE(ids == std::vector<int>{1, 2, 3, 4});
    // interface ids 0..2, each adjacent to (1, sub)
    for (int i = 0; i < ps.size(); ++i)
        if (ps.kind[i] == PointKind::interface) {
            REQUIRE(ps.adjacent[i].first == 1);
            REQUIRE(ps.adjacent[i].second == 2 + ps.interface_id[i]);
        }
}

TEST_CASE("3D application geometries generate and validate") {
    SECTION("wavy tube") {
        GeometrySpec g;
        g.shape = GeometrySpec::Shape::wavy_tube;
        g.dr = 0.2;
        PointSet ps = generate(g, 1);
        validate(ps);
        Counts c = count(ps);
        CHECK(c.d2 > 50);
        CHECK(c.iface > 100);
        // inner points stay inside the outer tube
        for (int i = 0; i < ps.size(); ++i)
            REQUIRE(ps.coords[i].head<2>().norm() < 1.0 + 1e-9);
    }
    SECTION("cylindrical fillets") {
        GeometrySpec g;
        g.shape = GeometrySpec::Shape::cylindrical_fillets;
        g.dr = 0.45;
        g.half_width = 3.0;
        PointSet ps = generate(g, 1);
        validate(ps);
        auto ids = ps.subdomain_ids();
        REQUIRE(ids.size() == 17);  // matrix + 16 fillets
    }
}
