#pragma once

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <chrono>
#include <cmath>
#include <memory>
#include <optional>
#include <string>

#include "rbfheat/assembly.hpp"
#include "rbfheat/rcm.hpp"

namespace rbfheat {

/// Zero-fill ILU is numerically unreliable on PHS-RBF stencil matrices (the
/// incomplete factors lose all accuracy), so the default is a threshold ILU
/// with fill. jacobi and ilu0 remain available for matrices they suit.
enum class PrecondKind { jacobi, ilu0, ilut };

struct SolverConfig {
    double rel_tolerance = 1e-12;
    int max_iterations = 5000;
    PrecondKind preconditioner = PrecondKind::ilut;
    bool reorder = true;  // RCM
    double ilut_droptol = 1e-5;
    int ilut_fill = 10;  // kept entries per row side, times this factor

    void check() const {
        if (!(rel_tolerance > 0 && rel_tolerance < 1))
            throw std::invalid_argument("rel_tolerance must lie in (0, 1)");
        if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
    }
};

struct SolveReport {
    int iterations = 0;
    double residual = 0.0;  // recomputed from scratch on the original system
    int bandwidth_before = 0;
    int bandwidth_after = 0;
    double wall_time_s = 0.0;
    std::string preconditioner;
};

struct SolverError : std::runtime_error {
    int iteration;
    double best_residual;
    SolverError(const std::string& msg, int it, double best)
        : std::runtime_error(msg), iteration(it), best_residual(best) {}
};

namespace detail {

using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

class Preconditioner {
public:
    virtual ~Preconditioner() = default;
    virtual Eigen::VectorXd apply(const Eigen::VectorXd& r) const = 0;
    virtual const char* name() const = 0;
};

class JacobiPrecond : public Preconditioner {
public:
    explicit JacobiPrecond(const SpMat& a) : inv_diag_(a.rows()) {
        for (int i = 0; i < a.rows(); ++i) {
            double d = a.coeff(i, i);
            inv_diag_[i] = (d != 0.0) ? 1.0 / d : 1.0;
        }
    }
    Eigen::VectorXd apply(const Eigen::VectorXd& r) const override {
        return inv_diag_.cwiseProduct(r);
    }
    const char* name() const override { return "jacobi"; }

private:
    Eigen::VectorXd inv_diag_;
};

/// ILU(0): incomplete LU on the matrix sparsity pattern. Requires compressed
/// row storage with sorted columns (Eigen guarantees both). Throws on zero
/// pivots; callers retry with a diagonal shift, then fall back to Jacobi.
class Ilu0Precond : public Preconditioner {
public:
    explicit Ilu0Precond(const SpMat& a, double diag_shift = 0.0) : lu_(a), n_(a.rows()) {
        if (diag_shift != 0.0)
            for (int i = 0; i < n_; ++i) lu_.coeffRef(i, i) += diag_shift;
        lu_.makeCompressed();
        diag_ptr_.assign(n_, -1);
        const int* outer = lu_.outerIndexPtr();
        const int* inner = lu_.innerIndexPtr();
        double* vals = lu_.valuePtr();
        for (int i = 0; i < n_; ++i)
            for (int p = outer[i]; p < outer[i + 1]; ++p)
                if (inner[p] == i) diag_ptr_[i] = p;
        for (int i = 0; i < n_; ++i)
            if (diag_ptr_[i] < 0) throw std::runtime_error("ilu0: structurally zero diagonal");

        // IKJ factorization restricted to the pattern
        std::vector<int> col_pos(n_, -1);
        for (int i = 0; i < n_; ++i) {
            for (int p = outer[i]; p < outer[i + 1]; ++p) col_pos[inner[p]] = p;
            for (int p = outer[i]; p < outer[i + 1] && inner[p] < i; ++p) {
                int k = inner[p];
                double ukk = vals[diag_ptr_[k]];
                if (std::abs(ukk) < 1e-300) throw std::runtime_error("ilu0: zero pivot");
                double lik = vals[p] / ukk;
                vals[p] = lik;
                for (int pk = diag_ptr_[k] + 1; pk < outer[k + 1]; ++pk) {
                    int pos = col_pos[inner[pk]];
                    if (pos >= 0) vals[pos] -= lik * vals[pk];
                }
            }
            if (std::abs(vals[diag_ptr_[i]]) < 1e-300)
                throw std::runtime_error("ilu0: zero pivot");
            for (int p = outer[i]; p < outer[i + 1]; ++p) col_pos[inner[p]] = -1;
        }
    }

    Eigen::VectorXd apply(const Eigen::VectorXd& r) const override {
        Eigen::VectorXd y(n_);
        const int* outer = lu_.outerIndexPtr();
        const int* inner = lu_.innerIndexPtr();
        const double* vals = lu_.valuePtr();
        for (int i = 0; i < n_; ++i) {  // L y = r (unit diagonal)
            double s = r[i];
            for (int p = outer[i]; p < outer[i + 1] && inner[p] < i; ++p)
                s -= vals[p] * y[inner[p]];
            y[i] = s;
        }
        for (int i = n_ - 1; i >= 0; --i) {  // U x = y
            double s = y[i];
            for (int p = diag_ptr_[i] + 1; p < outer[i + 1]; ++p) s -= vals[p] * y[inner[p]];
            y[i] = s / vals[diag_ptr_[i]];
        }
        return y;
    }
    const char* name() const override { return "ilu0"; }

private:
    SpMat lu_;
    int n_;
    std::vector<int> diag_ptr_;
};

/// Dual-threshold incomplete LU with column pivoting (ILUTP). PHS-RBF
/// stencil matrices contain PDE rows whose own-point weight nearly vanishes,
/// so unpivoted incomplete factorizations (ILU0/ILUT) suffer unbounded
/// element growth on them; column pivoting keeps the factors usable.
class IlutPrecond : public Preconditioner {
public:
    IlutPrecond(const SpMat& a, double droptol, int fill, double permtol = 0.25)
        : n_(static_cast<int>(a.rows())) {
        l_ptr_.assign(n_ + 1, 0);
        u_ptr_.assign(n_ + 1, 0);
        u_diag_.assign(n_, 0.0);
        pos_of_col_.resize(n_);
        col_at_pos_.resize(n_);
        for (int j = 0; j < n_; ++j) pos_of_col_[j] = col_at_pos_[j] = j;

        std::vector<double> w(n_, 0.0);       // work row, keyed by position
        std::vector<signed char> in_w(n_, 0);  // 0 absent, 1 present
        std::vector<int> touched;
        std::vector<int> heap;  // positions < i pending elimination (min-heap)
        const int* outer = a.outerIndexPtr();
        const int* inner = a.innerIndexPtr();
        const double* vals = a.valuePtr();

        auto push_pos = [&](int pos, double v) {
            if (!in_w[pos]) {
                in_w[pos] = 1;
                w[pos] = v;
                touched.push_back(pos);
                return true;
            }
            w[pos] += v;
            return false;
        };

        for (int i = 0; i < n_; ++i) {
            const int row_nnz = outer[i + 1] - outer[i];
            if (row_nnz == 0) throw std::runtime_error("ilutp: empty row");
            double rownorm = 0.0;
            for (int p = outer[i]; p < outer[i + 1]; ++p) rownorm += std::abs(vals[p]);
            rownorm /= row_nnz;
            const double tnorm = droptol * rownorm;
            const int lfil = std::max(4, fill * row_nnz / 2);

            touched.clear();
            heap.clear();
            for (int p = outer[i]; p < outer[i + 1]; ++p) {
                int pos = pos_of_col_[inner[p]];
                if (push_pos(pos, vals[p]) && pos < i) heap.push_back(pos);
            }
            std::make_heap(heap.begin(), heap.end(), std::greater<>());

            std::vector<std::pair<int, double>> lrow;
            while (!heap.empty()) {
                std::pop_heap(heap.begin(), heap.end(), std::greater<>());
                int k = heap.back();
                heap.pop_back();
                double fact = w[k] / u_diag_[k];
                if (std::abs(fact) <= droptol) continue;  // dropped L entry
                for (int p = u_ptr_[k]; p < u_ptr_[k + 1]; ++p) {
                    int pos = u_idx_[p];
                    if (push_pos(pos, -fact * u_val_[p]) && pos < i) {
                        heap.push_back(pos);
                        std::push_heap(heap.begin(), heap.end(), std::greater<>());
                    }
                }
                lrow.emplace_back(k, fact);
            }

            // pivot: bring the largest eligible entry at position >= i onto
            // the diagonal when it dominates the current one
            double diag = in_w[i] ? w[i] : 0.0;
            int jmax = i;
            double vmax = std::abs(diag);
            for (int pos : touched)
                if (pos > i && std::abs(w[pos]) > vmax) {
                    vmax = std::abs(w[pos]);
                    jmax = pos;
                }
            if (jmax != i && vmax * permtol > std::abs(diag)) {
                std::swap(w[i], w[jmax]);
                std::swap(in_w[i], in_w[jmax]);
                int ci = col_at_pos_[i], cj = col_at_pos_[jmax];
                std::swap(col_at_pos_[i], col_at_pos_[jmax]);
                pos_of_col_[ci] = jmax;
                pos_of_col_[cj] = i;
            }
            diag = in_w[i] ? w[i] : 0.0;
            if (std::abs(diag) < tnorm + 1e-300)
                diag = (diag < 0 ? -1 : 1) * (tnorm + 1e-300);  // zero-pivot guard

            // keep the lfil largest L entries (ties: lower position first)
            auto by_mag = [](const std::pair<int, double>& x, const std::pair<int, double>& y) {
                double ax = std::abs(x.second), ay = std::abs(y.second);
                return ax != ay ? ax > ay : x.first < y.first;
            };
            if (static_cast<int>(lrow.size()) > lfil) {
                std::nth_element(lrow.begin(), lrow.begin() + lfil, lrow.end(), by_mag);
                lrow.resize(lfil);
            }
            std::sort(lrow.begin(), lrow.end());
            for (auto& [pos, v] : lrow) {
                l_idx_.push_back(pos);
                l_val_.push_back(v);
            }
            l_ptr_[i + 1] = static_cast<int>(l_idx_.size());

            std::vector<std::pair<int, double>> urow;
            for (int pos : touched)
                if (pos > i && std::abs(w[pos]) >= tnorm) urow.emplace_back(pos, w[pos]);
            if (static_cast<int>(urow.size()) > lfil) {
                std::nth_element(urow.begin(), urow.begin() + lfil, urow.end(), by_mag);
                urow.resize(lfil);
            }
            std::sort(urow.begin(), urow.end());
            for (auto& [pos, v] : urow) {
                u_idx_.push_back(pos);
                u_val_.push_back(v);
            }
            u_ptr_[i + 1] = static_cast<int>(u_idx_.size());
            u_diag_[i] = diag;

            for (int pos : touched) {
                in_w[pos] = 0;
                w[pos] = 0.0;
            }
        }
    }

    Eigen::VectorXd apply(const Eigen::VectorXd& r) const override {
        Eigen::VectorXd y(n_);
        for (int i = 0; i < n_; ++i) {  // L y = r, unit diagonal
            double s = r[i];
            for (int p = l_ptr_[i]; p < l_ptr_[i + 1]; ++p) s -= l_val_[p] * y[l_idx_[p]];
            y[i] = s;
        }
        for (int i = n_ - 1; i >= 0; --i) {  // U z = y
            double s = y[i];
            for (int p = u_ptr_[i]; p < u_ptr_[i + 1]; ++p) s -= u_val_[p] * y[u_idx_[p]];
            y[i] = s / u_diag_[i];
        }
        Eigen::VectorXd x(n_);
        for (int k = 0; k < n_; ++k) x[col_at_pos_[k]] = y[k];  // undo column pivoting
        return x;
    }
    const char* name() const override { return "ilut"; }

private:
    int n_;
    std::vector<int> l_ptr_, l_idx_, u_ptr_, u_idx_;
    std::vector<double> l_val_, u_val_, u_diag_;
    std::vector<int> pos_of_col_, col_at_pos_;
};

inline std::unique_ptr<Preconditioner> make_preconditioner(const SpMat& a, PrecondKind kind,
                                                           const SolverConfig& cfg) {
    if (kind == PrecondKind::ilut) {
        try {
            return std::make_unique<IlutPrecond>(a, cfg.ilut_droptol, cfg.ilut_fill);
        } catch (const std::runtime_error&) {
            return std::make_unique<JacobiPrecond>(a);
        }
    }
    if (kind == PrecondKind::ilu0) {
        try {
            return std::make_unique<Ilu0Precond>(a);
        } catch (const std::runtime_error&) {
            double max_diag = 0.0;
            for (int i = 0; i < a.rows(); ++i) max_diag = std::max(max_diag, std::abs(a.coeff(i, i)));
            try {
                return std::make_unique<Ilu0Precond>(a, 1e-8 * std::max(max_diag, 1.0));
            } catch (const std::runtime_error&) {
                return std::make_unique<JacobiPrecond>(a);  // last resort
            }
        }
    }
    return std::make_unique<JacobiPrecond>(a);
}

}  // namespace detail

/// Preconditioned BiCGSTAB. Maintains the unpreconditioned residual, so the
/// stopping test is on |b - A x| / |b|; the returned report carries a
/// recomputed residual. Deterministic: fixed iteration order, no reductions.
inline std::pair<Eigen::VectorXd, int> bicgstab(const detail::SpMat& a, const Eigen::VectorXd& b,
                                                const detail::Preconditioner& M,
                                                const SolverConfig& cfg,
                                                const Eigen::VectorXd* x0 = nullptr) {
    cfg.check();
    const int n = static_cast<int>(b.size());
    Eigen::VectorXd x = x0 ? *x0 : Eigen::VectorXd::Zero(n);
    Eigen::VectorXd r = b - a * x;
    const double bnorm = b.norm();
    if (bnorm == 0.0) return {Eigen::VectorXd::Zero(n), 0};
    const double target = cfg.rel_tolerance * bnorm;
    if (r.norm() <= target) return {x, 0};

    const Eigen::VectorXd r0 = r;
    double rho = 1.0, alpha = 1.0, omega = 1.0;
    Eigen::VectorXd p = Eigen::VectorXd::Zero(n), v = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd best_x = x;
    double best_res = r.norm();
    const double breakdown = 1e-300;

    for (int it = 1; it <= cfg.max_iterations; ++it) {
        double rho_new = r0.dot(r);
        if (std::abs(rho_new) < breakdown * bnorm * bnorm)
            throw SolverError("bicgstab breakdown (rho ~ 0) at iteration " + std::to_string(it),
                              it, best_res / bnorm);
        double beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        p = r + beta * (p - omega * v);
        Eigen::VectorXd ph = M.apply(p);
        v = a * ph;
        double r0v = r0.dot(v);
        if (std::abs(r0v) < breakdown)
            throw SolverError("bicgstab breakdown (r0.v ~ 0) at iteration " + std::to_string(it),
                              it, best_res / bnorm);
        alpha = rho / r0v;
        Eigen::VectorXd s = r - alpha * v;
        if (s.norm() <= target) {
            x += alpha * ph;
            return {x, it};
        }
        Eigen::VectorXd sh = M.apply(s);
        Eigen::VectorXd t = a * sh;
        double tt = t.squaredNorm();
        if (tt < breakdown)
            throw SolverError("bicgstab breakdown (t ~ 0) at iteration " + std::to_string(it), it,
                              best_res / bnorm);
        omega = t.dot(s) / tt;
        x += alpha * ph + omega * sh;
        r = s - omega * t;
        double rn = r.norm();
        if (rn < best_res) {
            best_res = rn;
            best_x = x;
        }
        if (rn <= target) return {x, it};
        if (std::abs(omega) < breakdown)
            throw SolverError("bicgstab breakdown (omega ~ 0) at iteration " + std::to_string(it),
                              it, best_res / bnorm);
    }
    throw SolverError("bicgstab did not converge in " + std::to_string(cfg.max_iterations) +
                          " iterations; best relative residual " + std::to_string(best_res / bnorm),
                      cfg.max_iterations, best_res / bnorm);
}

/// Reorder (RCM), precondition, solve, and un-permute. The reported residual
/// is recomputed on the original (un-permuted) system.
inline std::pair<Eigen::VectorXd, SolveReport> solve(const SparseSystem& sys,
                                                     const SolverConfig& cfg,
                                                     const Eigen::VectorXd* initial = nullptr) {
    cfg.check();
    auto t0 = std::chrono::steady_clock::now();
    SolveReport rep;
    rep.bandwidth_before = bandwidth(sys.matrix);

    Permutation perm =
        cfg.reorder ? rcm_permutation(sys.matrix) : Permutation::identity(sys.size());
    detail::SpMat ap = cfg.reorder ? permute_symmetric(sys.matrix, perm) : sys.matrix;
    rep.bandwidth_after = bandwidth(ap);

    Eigen::VectorXd bp(sys.size());
    for (int i = 0; i < sys.size(); ++i) bp[perm.old_to_new[i]] = sys.rhs[i];
    std::optional<Eigen::VectorXd> x0;
    if (initial) {
        x0.emplace(sys.size());
        for (int i = 0; i < sys.size(); ++i) (*x0)[perm.old_to_new[i]] = (*initial)[i];
    }

    auto M = detail::make_preconditioner(ap, cfg.preconditioner, cfg);
    rep.preconditioner = M->name();
    auto [xp, iters] = bicgstab(ap, bp, *M, cfg, x0 ? &*x0 : nullptr);
    rep.iterations = iters;

    Eigen::VectorXd x(sys.size());
    for (int i = 0; i < sys.size(); ++i) x[i] = xp[perm.old_to_new[i]];

    double bnorm = sys.rhs.norm();
    rep.residual = bnorm > 0 ? (sys.rhs - sys.matrix * x).norm() / bnorm : 0.0;
    rep.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {std::move(x), rep};
}

}  // namespace rbfheat
