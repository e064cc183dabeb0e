#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "rbfheat/geometry.hpp"
#include "rbfheat/point_set.hpp"

namespace rbfheat {

/// Manufactured temperature fields with analytic source terms. Each case is
/// C0 across its interface (both branches vanish there) and balances
/// k1 dT/dn = k2 dT/dn analytically, because the branch amplitudes swap the
/// conductivities: T_1 = c_1 sin(g), T_2 = c_2 sin(g) with k_1 c_1 = k_2 c_2.
struct ManufacturedCase {
    enum class Id { equal_k_circle, circle_in_square, astroid_in_square, sphere_in_cube };

    Id id = Id::circle_in_square;
    std::string name;
    int dim = 2;
    double k1 = 1, k2 = 1;
    double c1 = 1, c2 = 1;   // branch amplitudes
    double geom = 0.5;       // circle/sphere radius or astroid scale

    double amplitude(int sub) const { return sub == 1 ? c1 : c2; }
    double conductivity(int sub) const { return sub == 1 ? k1 : k2; }

    /// level-set g with g = 0 on the interface
    double level(const Vec3& x) const {
        switch (id) {
            case Id::equal_k_circle:
            case Id::circle_in_square:
                return x.x() * x.x() + x.y() * x.y() - geom * geom;
            case Id::sphere_in_cube:
                return x.squaredNorm() - geom * geom;
            case Id::astroid_in_square: {
                const double a = geom;
                double u = std::cbrt((x.x() / a) * (x.x() / a));
                double v = std::cbrt((x.y() / a) * (x.y() / a));
                double m = std::pow(x.x(), 4) * std::pow(x.y(), 4);
                return m * (u + v - 1.0);
            }
        }
        return 0;
    }

    Vec3 level_grad(const Vec3& x) const {
        switch (id) {
            case Id::equal_k_circle:
            case Id::circle_in_square:
                return {2 * x.x(), 2 * x.y(), 0};
            case Id::sphere_in_cube:
                return 2 * x;
            case Id::astroid_in_square: {
                const double a = geom, ca = std::cbrt(a * a);
                double xx = x.x(), yy = x.y();
                double u = std::cbrt(xx * xx) / ca, v = std::cbrt(yy * yy) / ca;
                double h = u + v - 1.0;
                double x4 = std::pow(xx, 4), y4 = std::pow(yy, 4);
                // x^4 u'(x) = (2/(3 cbrt(a^2))) sign(x) |x|^(11/3); analogous in y
                auto pow113 = [](double t) {
                    double at = std::abs(t);
                    return (t < 0 ? -1.0 : 1.0) * at * at * at * std::cbrt(at * at);
                };
                double gx = 4 * xx * xx * xx * y4 * h + y4 * (2.0 / (3.0 * ca)) * pow113(xx);
                double gy = 4 * yy * yy * yy * x4 * h + x4 * (2.0 / (3.0 * ca)) * pow113(yy);
                return {gx, gy, 0};
            }
        }
        return Vec3::Zero();
    }

    double level_laplacian(const Vec3& x) const {
        switch (id) {
            case Id::equal_k_circle:
            case Id::circle_in_square:
                return 4.0;
            case Id::sphere_in_cube:
                return 6.0;
            case Id::astroid_in_square: {
                const double a = geom, ca = std::cbrt(a * a);
                double xx = x.x(), yy = x.y();
                double u = std::cbrt(xx * xx) / ca, v = std::cbrt(yy * yy) / ca;
                double h = u + v - 1.0;
                double x4 = std::pow(xx, 4), y4 = std::pow(yy, 4);
                // 8 x^3 u' + x^4 u'' = (46/(9 cbrt(a^2))) |x|^(8/3)
                auto pow83 = [](double t) {
                    double at = std::abs(t);
                    return at * at * std::cbrt(at * at);
                };
                double gxx = 12 * xx * xx * y4 * h + y4 * (46.0 / (9.0 * ca)) * pow83(xx);
                double gyy = 12 * yy * yy * x4 * h + x4 * (46.0 / (9.0 * ca)) * pow83(yy);
                return gxx + gyy;
            }
        }
        return 0;
    }

    double temperature(const Vec3& x, int sub) const { return amplitude(sub) * std::sin(level(x)); }

    Vec3 temperature_grad(const Vec3& x, int sub) const {
        return amplitude(sub) * std::cos(level(x)) * level_grad(x);
    }

    double temperature_laplacian(const Vec3& x, int sub) const {
        double g = level(x);
        return amplitude(sub) *
               (std::cos(g) * level_laplacian(x) - std::sin(g) * level_grad(x).squaredNorm());
    }

    /// k_s lap(T_exact): the source that makes T_exact solve the PDE.
    double source(const Vec3& x, int sub) const {
        return conductivity(sub) * temperature_laplacian(x, sub);
    }

    bool on_interface(const Vec3& x, double tol = 1e-12) const {
        if (id == Id::astroid_in_square) {
            const double a = geom;
            double u = std::cbrt((x.x() / a) * (x.x() / a));
            double v = std::cbrt((x.y() / a) * (x.y() / a));
            return std::abs(u + v - 1.0) < tol && std::abs(x.x()) <= a && std::abs(x.y()) <= a;
        }
        double rr = (dim == 3) ? x.norm() : x.head<2>().norm();
        return std::abs(rr - geom) < tol;
    }

    int subdomain_of(const Vec3& x) const {
        if (id == Id::astroid_in_square) {
            const double a = geom;
            double u = std::cbrt((x.x() / a) * (x.x() / a));
            double v = std::cbrt((x.y() / a) * (x.y() / a));
            return (u + v - 1.0) < 0 ? 2 : 1;
        }
        double rr = (dim == 3) ? x.norm() : x.head<2>().norm();
        return rr < geom ? 2 : 1;
    }

    GeometrySpec geometry(double dr) const {
        switch (id) {
            case Id::equal_k_circle:
            case Id::circle_in_square:
                return GeometrySpec::circle_in_square_spec(dr, geom);
            case Id::astroid_in_square:
                return GeometrySpec::astroid_in_square_spec(dr, geom);
            case Id::sphere_in_cube:
                return GeometrySpec::sphere_in_cube_spec(dr, geom);
        }
        return {};
    }

    static ManufacturedCase equal_k_circle(double k, double r = 0.5) {
        ManufacturedCase c;
        c.id = Id::equal_k_circle;
        c.name = "equal_k_circle";
        c.dim = 2;
        c.k1 = c.k2 = k;
        c.c1 = c.c2 = k;  // T = k sin(x^2 + y^2 - r^2) on both sides
        c.geom = r;
        return c;
    }
    static ManufacturedCase circle_in_square(double k1, double k2, double r = 0.5) {
        ManufacturedCase c;
        c.id = Id::circle_in_square;
        c.name = "circle_in_square";
        c.dim = 2;
        c.k1 = k1;
        c.k2 = k2;
        c.c1 = k2;  // amplitudes swap conductivities: flux balance by construction
        c.c2 = k1;
        c.geom = r;
        return c;
    }
    static ManufacturedCase astroid_in_square(double k1, double k2, double a = 0.5) {
        ManufacturedCase c;
        c.id = Id::astroid_in_square;
        c.name = "astroid_in_square";
        c.dim = 2;
        c.k1 = k1;
        c.k2 = k2;
        c.c1 = k2;
        c.c2 = k1;
        c.geom = a;
        return c;
    }
    static ManufacturedCase sphere_in_cube(double k1, double k2, double r = 0.5) {
        ManufacturedCase c;
        c.id = Id::sphere_in_cube;
        c.name = "sphere_in_cube";
        c.dim = 3;
        c.k1 = k1;
        c.k2 = k2;
        c.c1 = k2;
        c.c2 = k1;
        c.geom = r;
        return c;
    }
};

/// manufactured_rhs of the assembly step: k_s lap(T_exact) at a PDE point.
/// Interface points carry flux rows, not PDE rows, so asking for a source
/// there is a caller error.
inline double manufactured_rhs(const ManufacturedCase& mc, const Vec3& x, int sub) {
    if (mc.on_interface(x))
        throw std::invalid_argument("manufactured_rhs: point lies on the interface");
    return mc.source(x, sub);
}

}  // namespace rbfheat
