#include <catch2/catch_amalgamated.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "rbfheat/geometry.hpp"
#include "rbfheat/point_io.hpp"

using namespace rbfheat;

namespace {
std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}
}  // namespace

TEST_CASE("minimal file parses") {
    std::string path = temp_path("minimal_points.txt");
    {
        std::ofstream f(path);
        f << "# dim=2 n=5\n";
        f << "0.5 0.5 1 I\n";
        f << "0 0 1 B 0 0 0\n";
        f << "1 0 1 B 0 0 -1\n";
        f << "1 1 1 B 0 1 0\n";
        f << "0 1 1 B 0 0 1\n";
    }
    PointSet ps = import_points(path);
    CHECK(ps.size() == 5);
    CHECK(ps.kind[0] == PointKind::interior);
    CHECK(ps.count(PointKind::boundary) == 4);
}

TEST_CASE("duplicate coordinates fail with both indices named") {
    std::string path = temp_path("dup_points.txt");
    {
        std::ofstream f(path);
        f << "# dim=2 n=3\n";
        f << "0 0 1 I\n";
        f << "1 0 1 I\n";
        f << "1 0 1 I\n";
    }
    try {
        import_points(path);
        FAIL("expected a duplicate-point error");
    } catch (const InvalidPointSet& e) {
        std::string msg = e.what();
        CHECK(msg.find("1") != std::string::npos);
        CHECK(msg.find("2") != std::string::npos);
    }
}

TEST_CASE("parse failures carry line numbers") {
    std::string path = temp_path("broken_points.txt");
    {
        std::ofstream f(path);
        f << "# dim=2 n=2\n";
        f << "0 0 1 I\n";
        f << "1 oops 1 I\n";
    }
    try {
        import_points(path);
        FAIL("expected a parse error");
    } catch (const PointFileError& e) {
        CHECK(std::string(e.what()).find(":3") != std::string::npos);
    }
}

TEST_CASE("non-unit normals are renormalized on import") {
    std::string path = temp_path("renorm_points.txt");
    {
        std::ofstream f(path);
        f << "# dim=2 n=3\n";
        f << "# interface 0 1 2\n";
        f << "0 0 1 I\n";
        f << "2 0 2 I\n";
        f << "1 0 1 F 0 3 0\n";
    }
    PointSet ps = import_points(path);
    CHECK(ps.normal[2] == Vec3(1, 0, 0));
    CHECK(ps.adjacent[2] == std::make_pair(1, 2));
}

TEST_CASE("export -> import round trip is bit exact") {
    PointSet ps = generate(GeometrySpec::circle_in_square_spec(0.07), 9);
    std::string path = temp_path("roundtrip_points.txt");
    export_points(ps, path);
    PointSet back = import_points(path);
    REQUIRE(back.size() == ps.size());
    REQUIRE(back.dim == ps.dim);
    for (int i = 0; i < ps.size(); ++i) {
        REQUIRE(back.coords[i] == ps.coords[i]);  // bitwise
        REQUIRE(back.kind[i] == ps.kind[i]);
        REQUIRE(back.subdomain[i] == ps.subdomain[i]);
        if (ps.kind[i] == PointKind::interface) {
            REQUIRE(back.interface_id[i] == ps.interface_id[i]);
            REQUIRE(back.adjacent[i] == ps.adjacent[i]);
            REQUIRE((back.normal[i] - ps.normal[i]).norm() < 1e-15);
        }
        if (ps.kind[i] == PointKind::boundary)
            REQUIRE(back.boundary_region[i] == ps.boundary_region[i]);
    }
}

TEST_CASE("3D round trip") {
    PointSet ps = generate(GeometrySpec::sphere_in_cube_spec(0.2), 5);
    std::string path = temp_path("roundtrip3d_points.txt");
    export_points(ps, path);
    PointSet back = import_points(path);
    REQUIRE(back.size() == ps.size());
    for (int i = 0; i < ps.size(); ++i) REQUIRE(back.coords[i] == ps.coords[i]);
}

TEST_CASE("missing file and missing header are clean errors") {
    CHECK_THROWS_AS(import_points("/nonexistent/nowhere.txt"), PointFileError);
    std::string path = temp_path("noheader_points.txt");
    {
        std::ofstream f(path);
        f << "0 0 1 I\n";
    }
    CHECK_THROWS_AS(import_points(path), PointFileError);
}
