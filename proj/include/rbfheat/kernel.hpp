#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rbfheat/point_set.hpp"

namespace rbfheat {

/// Polyharmonic-spline kernel phi(r) = r^(2*alpha+1) with an appended
/// monomial basis of total degree <= p. The interpolant through a cloud of
/// q = 2*m points (m monomials) is
///
///   s(x) = sum_i lambda_i phi(|x - x_i|) + sum_j gamma_j P_j(x),
///   sum_i lambda_i P_j(x_i) = 0  for each j,
///
/// which in matrix form uses the symmetric saddle-point matrix
/// A = [Phi P; P^T 0]. Differentiation weights for a linear operator L are
/// the first q entries of A^{-1} [L phi; L P] evaluated at the base point.
struct KernelConfig {
    int alpha = 1;  // phi exponent is 2*alpha + 1
    int p = 3;      // appended polynomial degree
    int dim = 2;

    KernelConfig() = default;
    KernelConfig(int alpha_, int p_, int dim_) : alpha(alpha_), p(p_), dim(dim_) {
        if (alpha < 1) throw std::invalid_argument("KernelConfig: alpha must be >= 1");
        if (p < 1) throw std::invalid_argument("KernelConfig: p must be >= 1");
        if (dim != 2 && dim != 3) throw std::invalid_argument("KernelConfig: dim must be 2 or 3");
    }

    int phs_exponent() const { return 2 * alpha + 1; }
    int monomial_count() const { return n_monomials(p, dim); }
    int cloud_size() const { return 2 * monomial_count(); }

    static int n_monomials(int p, int dim) {
        // C(p + dim, dim)
        long long num = 1, den = 1;
        for (int i = 1; i <= dim; ++i) {
            num *= p + i;
            den *= i;
        }
        return static_cast<int>(num / den);
    }
};

/// Exponent triples (a, b, c) of all monomials x^a y^b z^c with total degree
/// <= p, ordered by total degree then lexicographically. 2D uses c = 0.
inline std::vector<std::array<int, 3>> monomial_exponents(int p, int dim) {
    std::vector<std::array<int, 3>> out;
    for (int deg = 0; deg <= p; ++deg)
        for (int a = deg; a >= 0; --a)
            for (int b = deg - a; b >= 0; --b) {
                int c = deg - a - b;
                if (dim == 2 && c != 0) continue;
                out.push_back({a, b, c});
            }
    return out;
}

namespace detail {

inline double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;  // ipow(0, 0) = 1 by convention
}

inline double monomial(const Vec3& x, const std::array<int, 3>& e) {
    return ipow(x.x(), e[0]) * ipow(x.y(), e[1]) * ipow(x.z(), e[2]);
}

// d/dx_axis of the monomial at x
inline double monomial_deriv(const Vec3& x, const std::array<int, 3>& e, int axis) {
    if (e[axis] == 0) return 0.0;
    auto d = e;
    d[axis] -= 1;
    return e[axis] * monomial(x, d);
}

inline double monomial_deriv2(const Vec3& x, const std::array<int, 3>& e, int axis) {
    if (e[axis] < 2) return 0.0;
    auto d = e;
    d[axis] -= 2;
    return e[axis] * (e[axis] - 1) * monomial(x, d);
}

}  // namespace detail

/// Linear differential operators the kernel can produce weights for.
struct DiffOp {
    enum class Type { ddx, ddy, ddz, laplacian, directional };
    Type type = Type::laplacian;
    Vec3 normal = Vec3::Zero();  // directional only

    static DiffOp ddx() { return {Type::ddx}; }
    static DiffOp ddy() { return {Type::ddy}; }
    static DiffOp ddz() { return {Type::ddz}; }
    static DiffOp laplacian() { return {Type::laplacian}; }
    static DiffOp directional(const Vec3& n) { return {Type::directional, n}; }

    int order() const { return type == Type::laplacian ? 2 : 1; }
};

struct SingularCloud : std::runtime_error {
    double condition;
    explicit SingularCloud(double cond)
        : std::runtime_error("singular local RBF system, condition estimate " +
                             std::to_string(cond)),
          condition(cond) {}
};

struct DuplicateCloudPoints : std::runtime_error {
    int i, j;
    DuplicateCloudPoints(int i_, int j_)
        : std::runtime_error("cloud points " + std::to_string(i_) + " and " + std::to_string(j_) +
                             " coincide"),
          i(i_), j(j_) {}
};

/// Factorized local interpolation system for one cloud. The cloud is shifted
/// so its first point (the base) sits at the origin and scaled by the cloud
/// radius before assembly; derivative weights are unscaled on the way out.
class LocalRbf {
public:
    static constexpr double kCondWarn = 1e12;
    static constexpr double kCondError = 1e15;

    LocalRbf(std::span<const Vec3> cloud, const KernelConfig& cfg) : cfg_(cfg) {
        q_ = static_cast<int>(cloud.size());
        exps_ = monomial_exponents(cfg.p, cfg.dim);
        m_ = static_cast<int>(exps_.size());
        base_ = cloud[0];
        scale_ = 0.0;
        local_.resize(q_);
        for (int i = 0; i < q_; ++i) {
            local_[i] = cloud[i] - base_;
            scale_ = std::max(scale_, local_[i].norm());
        }
        if (scale_ <= 0.0) throw DuplicateCloudPoints(0, q_ > 1 ? 1 : 0);
        for (auto& x : local_) x /= scale_;

        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(q_ + m_, q_ + m_);
        const int beta = cfg_.phs_exponent();
        for (int i = 0; i < q_; ++i)
            for (int j = i + 1; j < q_; ++j) {
                double r = (local_[i] - local_[j]).norm();
                if (r == 0.0) throw DuplicateCloudPoints(i, j);
                double v = std::pow(r, beta);
                A(i, j) = v;
                A(j, i) = v;
            }
        for (int i = 0; i < q_; ++i)
            for (int j = 0; j < m_; ++j) {
                double v = detail::monomial(local_[i], exps_[j]);
                A(i, q_ + j) = v;
                A(q_ + j, i) = v;
            }
        matrix_ = A;
        lu_.compute(A);
        cond_ = 1.0 / std::max(lu_.rcond(), 1e-300);
        if (cond_ > kCondError) throw SingularCloud(cond_);
    }

    const Eigen::MatrixXd& matrix() const { return matrix_; }
    double condition() const { return cond_; }
    double scale() const { return scale_; }
    bool ill_conditioned() const { return cond_ > kCondWarn; }

    /// Differentiation weights: length-q vector w with L[s](base) ~ w . s.
    Eigen::VectorXd weights(const DiffOp& op) const {
        Eigen::VectorXd rhs = operator_rhs(op);
        Eigen::VectorXd sol = lu_.solve(rhs);
        double unscale = (op.order() == 1) ? 1.0 / scale_ : 1.0 / (scale_ * scale_);
        return sol.head(q_) * unscale;
    }

    /// Evaluate the interpolant through `values` at `query` (global coords).
    double interpolate(std::span<const double> values, const Vec3& query) const {
        if (static_cast<int>(values.size()) != q_)
            throw std::invalid_argument("interpolate: values size != cloud size");
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(q_ + m_);
        for (int i = 0; i < q_; ++i) rhs[i] = values[i];
        Eigen::VectorXd coef = lu_.solve(rhs);
        const Vec3 xq = (query - base_) / scale_;
        const int beta = cfg_.phs_exponent();
        double s = 0.0;
        for (int i = 0; i < q_; ++i) s += coef[i] * std::pow((xq - local_[i]).norm(), beta);
        for (int j = 0; j < m_; ++j) s += coef[q_ + j] * detail::monomial(xq, exps_[j]);
        return s;
    }

private:
    // RHS entries: L applied to phi(|x - x_i|) and to P_j, evaluated at the
    // base point (origin of the local frame).
    Eigen::VectorXd operator_rhs(const DiffOp& op) const {
        const int beta = cfg_.phs_exponent();
        Eigen::VectorXd rhs(q_ + m_);
        for (int i = 0; i < q_; ++i) {
            const Vec3 d = -local_[i];  // x - x_i at x = 0
            const double r = d.norm();
            const double rbm2 = std::pow(r, beta - 2);
            switch (op.type) {
                case DiffOp::Type::ddx: rhs[i] = beta * rbm2 * d.x(); break;
                case DiffOp::Type::ddy: rhs[i] = beta * rbm2 * d.y(); break;
                case DiffOp::Type::ddz: rhs[i] = beta * rbm2 * d.z(); break;
                case DiffOp::Type::laplacian:
                    rhs[i] = beta * (beta + cfg_.dim - 2) * rbm2 * r;
                    break;
                case DiffOp::Type::directional:
                    rhs[i] = beta * rbm2 * d.dot(op.normal);
                    break;
            }
        }
        const Vec3 origin = Vec3::Zero();
        for (int j = 0; j < m_; ++j) {
            const auto& e = exps_[j];
            double v = 0.0;
            switch (op.type) {
                case DiffOp::Type::ddx: v = detail::monomial_deriv(origin, e, 0); break;
                case DiffOp::Type::ddy: v = detail::monomial_deriv(origin, e, 1); break;
                case DiffOp::Type::ddz: v = detail::monomial_deriv(origin, e, 2); break;
                case DiffOp::Type::laplacian:
                    for (int a = 0; a < cfg_.dim; ++a) v += detail::monomial_deriv2(origin, e, a);
                    break;
                case DiffOp::Type::directional:
                    for (int a = 0; a < cfg_.dim; ++a)
                        v += op.normal[a] * detail::monomial_deriv(origin, e, a);
                    break;
            }
            rhs[q_ + j] = v;
        }
        return rhs;
    }

    KernelConfig cfg_;
    int q_ = 0, m_ = 0;
    Vec3 base_;
    double scale_ = 1.0;
    double cond_ = 0.0;
    std::vector<Vec3> local_;
    std::vector<std::array<int, 3>> exps_;
    Eigen::MatrixXd matrix_;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

/// The saddle-point matrix in the shifted/scaled local frame (spec surface;
/// LocalRbf holds the factorization for repeated solves).
inline Eigen::MatrixXd local_matrix(std::span<const Vec3> cloud, const KernelConfig& cfg) {
    return LocalRbf(cloud, cfg).matrix();
}

inline Eigen::VectorXd diff_weights(std::span<const Vec3> cloud, const KernelConfig& cfg,
                                    const DiffOp& op) {
    return LocalRbf(cloud, cfg).weights(op);
}

inline double interpolate(std::span<const Vec3> cloud, const KernelConfig& cfg,
                          std::span<const double> values, const Vec3& query) {
    return LocalRbf(cloud, cfg).interpolate(values, query);
}

}  // namespace rbfheat
