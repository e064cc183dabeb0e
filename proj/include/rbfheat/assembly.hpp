#pragma once

#include <Eigen/Sparse>
#include <functional>
#include <map>
#include <optional>

#include "rbfheat/kernel.hpp"
#include "rbfheat/parallel.hpp"
#include "rbfheat/stencil.hpp"

namespace rbfheat {

enum class BcType { dirichlet, neumann };

struct BoundaryCondition {
    BcType type = BcType::dirichlet;
    double value = 0.0;
    std::function<double(const Vec3&)> value_fn;  // manufactured traces; overrides value

    double eval(const Vec3& x) const { return value_fn ? value_fn(x) : value; }

    static BoundaryCondition dirichlet(double v) { return {BcType::dirichlet, v, {}}; }
    static BoundaryCondition neumann(double v) { return {BcType::neumann, v, {}}; }
    static BoundaryCondition dirichlet_fn(std::function<double(const Vec3&)> f) {
        return {BcType::dirichlet, 0.0, std::move(f)};
    }
};

/// Steady conduction problem over a PointSet: per-subdomain conductivity,
/// volumetric source (constant or manufactured callback), and one boundary
/// condition per external boundary region.
struct ProblemSpec {
    std::map<int, double> conductivity;                 // k per subdomain, > 0
    std::function<double(const Vec3&, int)> source;     // qdot(x, subdomain)
    std::map<int, BoundaryCondition> bc;                // per boundary region

    double k(int sub) const {
        auto it = conductivity.find(sub);
        if (it == conductivity.end())
            throw std::invalid_argument("no conductivity for subdomain " + std::to_string(sub));
        if (it->second <= 0)
            throw std::invalid_argument("conductivity must be positive in subdomain " +
                                        std::to_string(sub));
        return it->second;
    }
    static std::function<double(const Vec3&, int)> constant_source(std::map<int, double> q) {
        return [q = std::move(q)](const Vec3&, int sub) {
            auto it = q.find(sub);
            return it == q.end() ? 0.0 : it->second;
        };
    }
};

enum class RowKind : std::uint8_t { pde, interface_flux, dirichlet, neumann };

struct SparseSystem {
    Eigen::SparseMatrix<double, Eigen::RowMajor> matrix;
    Eigen::VectorXd rhs;
    std::vector<RowKind> row_kind;

    int size() const { return static_cast<int>(rhs.size()); }
};

struct AssemblyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Per-cloud differentiation weights; only the operators a row needs are
/// filled in. `dnormal` uses the base point's stored normal.
struct CloudWeights {
    Eigen::VectorXd lap, dnormal, ddx, ddy, ddz;
    double condition = 0.0;
};

struct WeightNeeds {
    bool lap = false, dnormal = false, grad = false;
    bool any() const { return lap || dnormal || grad; }
};

/// Compute requested weights for every cloud, in parallel. Failures carry the
/// base point index and the condition estimate.
inline std::vector<CloudWeights> compute_weights(const PointSet& ps, const CloudPlan& plan,
                                                 const KernelConfig& cfg,
                                                 const std::vector<WeightNeeds>& needs) {
    std::vector<CloudWeights> out(plan.clouds.size());
    parallel_for(static_cast<int>(plan.clouds.size()), [&](int ci) {
        if (!needs[ci].any()) return;
        const Cloud& c = plan.clouds[ci];
        try {
            auto xs = cloud_coords(ps, c);
            LocalRbf rbf(xs, cfg);
            out[ci].condition = rbf.condition();
            if (needs[ci].lap) out[ci].lap = rbf.weights(DiffOp::laplacian());
            if (needs[ci].dnormal)
                out[ci].dnormal = rbf.weights(DiffOp::directional(ps.normal[c.base_index]));
            if (needs[ci].grad) {
                out[ci].ddx = rbf.weights(DiffOp::ddx());
                out[ci].ddy = rbf.weights(DiffOp::ddy());
                if (ps.dim == 3) out[ci].ddz = rbf.weights(DiffOp::ddz());
            }
        } catch (const SingularCloud& e) {
            throw AssemblyError("point " + std::to_string(c.base_index) +
                                ": singular local system, condition estimate " +
                                std::to_string(e.condition));
        } catch (const DuplicateCloudPoints& e) {
            throw AssemblyError("point " + std::to_string(c.base_index) +
                                ": duplicate cloud members " + std::to_string(c.members[e.i]) +
                                " and " + std::to_string(c.members[e.j]));
        }
    });
    return out;
}

inline std::vector<WeightNeeds> multidomain_needs(const PointSet& ps, const CloudPlan& plan,
                                                  const ProblemSpec& spec) {
    std::vector<WeightNeeds> needs(plan.clouds.size());
    for (int i = 0; i < ps.size(); ++i) {
        switch (ps.kind[i]) {
            case PointKind::interior:
                needs[plan.primary[i]].lap = true;
                break;
            case PointKind::interface:
                needs[plan.primary[i]].dnormal = true;
                needs[plan.secondary[i]].dnormal = true;
                break;
            case PointKind::boundary: {
                auto it = spec.bc.find(ps.boundary_region[i]);
                if (it != spec.bc.end() && it->second.type == BcType::neumann)
                    needs[plan.primary[i]].dnormal = true;
                break;
            }
        }
    }
    return needs;
}

inline std::vector<WeightNeeds> smearing_needs(const PointSet& ps, const CloudPlan& plan,
                                               const ProblemSpec& spec) {
    std::vector<WeightNeeds> needs(plan.clouds.size());
    for (int i = 0; i < ps.size(); ++i) {
        if (ps.kind[i] == PointKind::boundary) {
            auto it = spec.bc.find(ps.boundary_region[i]);
            if (it != spec.bc.end() && it->second.type == BcType::neumann)
                needs[plan.primary[i]].dnormal = true;
        } else {
            needs[plan.primary[i]].lap = true;
            needs[plan.primary[i]].grad = true;
        }
    }
    return needs;
}

namespace detail {

inline const BoundaryCondition& bc_for(const ProblemSpec& spec, const PointSet& ps, int i) {
    auto it = spec.bc.find(ps.boundary_region[i]);
    if (it == spec.bc.end())
        throw AssemblyError("boundary point " + std::to_string(i) + " in region " +
                            std::to_string(ps.boundary_region[i]) + " has no boundary condition");
    return it->second;
}

inline void append_boundary_row(std::vector<Eigen::Triplet<double>>& trips, Eigen::VectorXd& rhs,
                                std::vector<RowKind>& kinds, const PointSet& ps,
                                const CloudPlan& plan, const std::vector<CloudWeights>& w,
                                const ProblemSpec& spec, int i) {
    const BoundaryCondition& bc = bc_for(spec, ps, i);
    if (bc.type == BcType::dirichlet) {
        trips.emplace_back(i, i, 1.0);
        rhs[i] = bc.eval(ps.coords[i]);
        kinds[i] = RowKind::dirichlet;
        return;
    }
    if (ps.normal[i].norm() == 0.0)
        throw AssemblyError("corner boundary point " + std::to_string(i) +
                            " cannot take a Neumann condition");
    const Cloud& c = plan.clouds[plan.primary[i]];
    const Eigen::VectorXd& dn = w[plan.primary[i]].dnormal;
    const double k = spec.k(ps.subdomain[i]);
    for (int j = 0; j < static_cast<int>(c.members.size()); ++j)
        trips.emplace_back(i, c.members[j], k * dn[j]);
    rhs[i] = bc.eval(ps.coords[i]);
    kinds[i] = RowKind::neumann;
}

}  // namespace detail

/// Multidomain assembly: PDE rows at interior points (constant k per
/// subdomain, so conductivity-gradient terms vanish), flux-balance rows at
/// interface points, boundary rows per region. Interface rows are scaled by
/// 1/max(k1, k2) to keep row magnitudes comparable across conductivity
/// ratios.
inline SparseSystem assemble_multidomain(const PointSet& ps, const CloudPlan& plan,
                                         const std::vector<CloudWeights>& w,
                                         const ProblemSpec& spec) {
    if (!plan.restricted)
        throw AssemblyError("assemble_multidomain needs subdomain-restricted clouds");
    const int n = ps.size();
    SparseSystem sys;
    sys.rhs = Eigen::VectorXd::Zero(n);
    sys.row_kind.assign(n, RowKind::pde);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(n) * plan.q);

    for (int i = 0; i < n; ++i) {
        switch (ps.kind[i]) {
            case PointKind::interior: {
                const Cloud& c = plan.clouds[plan.primary[i]];
                const Eigen::VectorXd& lap = w[plan.primary[i]].lap;
                if (lap.size() == 0)
                    throw AssemblyError("missing laplacian weights for point " +
                                        std::to_string(i));
                const double k = spec.k(ps.subdomain[i]);
                for (int j = 0; j < static_cast<int>(c.members.size()); ++j)
                    trips.emplace_back(i, c.members[j], k * lap[j]);
                sys.rhs[i] = spec.source ? spec.source(ps.coords[i], ps.subdomain[i]) : 0.0;
                sys.row_kind[i] = RowKind::pde;
                break;
            }
            case PointKind::interface: {
                if (plan.secondary[i] < 0)
                    throw AssemblyError("interface point " + std::to_string(i) +
                                        " lacks a dual cloud");
                const Cloud& c1 = plan.clouds[plan.primary[i]];
                const Cloud& c2 = plan.clouds[plan.secondary[i]];
                const Eigen::VectorXd& w1 = w[plan.primary[i]].dnormal;
                const Eigen::VectorXd& w2 = w[plan.secondary[i]].dnormal;
                if (w1.size() == 0 || w2.size() == 0)
                    throw AssemblyError("missing directional weights for interface point " +
                                        std::to_string(i));
                const double k1 = spec.k(c1.subdomain), k2 = spec.k(c2.subdomain);
                const double scale = 1.0 / std::max(k1, k2);
                // k1 dT/dn|_1 - k2 dT/dn|_2 = 0, same stored normal on both sides;
                // the shared base point merges into a single entry
                std::map<int, double> row;
                for (int j = 0; j < static_cast<int>(c1.members.size()); ++j)
                    row[c1.members[j]] += scale * k1 * w1[j];
                for (int j = 0; j < static_cast<int>(c2.members.size()); ++j)
                    row[c2.members[j]] -= scale * k2 * w2[j];
                for (auto& [col, val] : row) trips.emplace_back(i, col, val);
                sys.rhs[i] = 0.0;
                sys.row_kind[i] = RowKind::interface_flux;
                break;
            }
            case PointKind::boundary:
                detail::append_boundary_row(trips, sys.rhs, sys.row_kind, ps, plan, w, spec, i);
                break;
        }
    }
    sys.matrix.resize(n, n);
    sys.matrix.setFromTriplets(trips.begin(), trips.end());
    sys.matrix.makeCompressed();
    return sys;
}

/// Single-domain ("smearing") assembly over unrestricted clouds:
/// k lap(T) + grad(k) . grad(T) = qdot at every non-boundary point, with the
/// conductivity-gradient evaluated by applying first-derivative weights to
/// the discrete per-point k field. Interface points, if present, take the k
/// of their first adjacent subdomain.
inline SparseSystem assemble_smearing(const PointSet& ps, const CloudPlan& plan,
                                      const std::vector<CloudWeights>& w,
                                      const ProblemSpec& spec) {
    const int n = ps.size();
    Eigen::VectorXd kfield(n);
    for (int i = 0; i < n; ++i) kfield[i] = spec.k(ps.subdomain[i]);

    SparseSystem sys;
    sys.rhs = Eigen::VectorXd::Zero(n);
    sys.row_kind.assign(n, RowKind::pde);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(n) * plan.q);

    for (int i = 0; i < n; ++i) {
        if (ps.kind[i] == PointKind::boundary) {
            detail::append_boundary_row(trips, sys.rhs, sys.row_kind, ps, plan, w, spec, i);
            continue;
        }
        const Cloud& c = plan.clouds[plan.primary[i]];
        const CloudWeights& cw = w[plan.primary[i]];
        if (cw.lap.size() == 0 || cw.ddx.size() == 0)
            throw AssemblyError("missing weights for point " + std::to_string(i));
        const int q = static_cast<int>(c.members.size());
        double gkx = 0, gky = 0, gkz = 0;
        for (int j = 0; j < q; ++j) {
            gkx += cw.ddx[j] * kfield[c.members[j]];
            gky += cw.ddy[j] * kfield[c.members[j]];
            if (ps.dim == 3) gkz += cw.ddz[j] * kfield[c.members[j]];
        }
        for (int j = 0; j < q; ++j) {
            double v = kfield[i] * cw.lap[j] + gkx * cw.ddx[j] + gky * cw.ddy[j];
            if (ps.dim == 3) v += gkz * cw.ddz[j];
            trips.emplace_back(i, c.members[j], v);
        }
        sys.rhs[i] = spec.source ? spec.source(ps.coords[i], ps.subdomain[i]) : 0.0;
        sys.row_kind[i] = RowKind::pde;
    }
    sys.matrix.resize(n, n);
    sys.matrix.setFromTriplets(trips.begin(), trips.end());
    sys.matrix.makeCompressed();
    return sys;
}

}  // namespace rbfheat
