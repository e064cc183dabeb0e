#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "rbfheat/assembly.hpp"
#include "rbfheat/geometry.hpp"
#include "rbfheat/manufactured.hpp"
#include "rbfheat/neighbor.hpp"
#include "rbfheat/solver.hpp"
#include "rbfheat/stencil.hpp"

namespace rbfheat {

enum class Region { whole, domain_1, domain_2, interface };

inline bool in_region(const PointSet& ps, int i, Region r) {
    switch (r) {
        case Region::whole: return true;
        case Region::interface: return ps.kind[i] == PointKind::interface;
        case Region::domain_1:
            return ps.kind[i] != PointKind::interface && ps.subdomain[i] == 1;
        case Region::domain_2:
            return ps.kind[i] != PointKind::interface && ps.subdomain[i] == 2;
    }
    return false;
}

/// sum |T_exact - T_calc| / (|T_max_exact| N) over the whole point set
inline double error_domain(const Eigen::VectorXd& calc, const Eigen::VectorXd& exact) {
    if (calc.size() != exact.size() || calc.size() == 0)
        throw std::invalid_argument("error_domain: mismatched or empty fields");
    double tmax = exact.cwiseAbs().maxCoeff();
    if (tmax == 0) throw std::invalid_argument("error_domain: zero maximum exact value");
    return (exact - calc).cwiseAbs().sum() / (tmax * static_cast<double>(calc.size()));
}

namespace detail {
inline std::pair<double, double> exact_range(const PointSet& ps, const Eigen::VectorXd& exact,
                                             Region r) {
    double lo = std::numeric_limits<double>::max(), hi = std::numeric_limits<double>::lowest();
    for (int i = 0; i < ps.size(); ++i)
        if (in_region(ps, i, r)) {
            lo = std::min(lo, exact[i]);
            hi = std::max(hi, exact[i]);
        }
    return {lo, hi};
}
}  // namespace detail

/// Range-normalized mean absolute error per region. Subdomain errors divide
/// by that subdomain's exact range; the interface error divides by the
/// average of the two subdomain ranges.
inline double error_subdomain(const PointSet& ps, const Eigen::VectorXd& calc,
                              const Eigen::VectorXd& exact, Region region) {
    double denom = 0.0;
    if (region == Region::interface) {
        auto [lo1, hi1] = detail::exact_range(ps, exact, Region::domain_1);
        auto [lo2, hi2] = detail::exact_range(ps, exact, Region::domain_2);
        denom = 0.5 * (std::abs(hi1 - lo1) + std::abs(hi2 - lo2));
    } else {
        auto [lo, hi] = detail::exact_range(ps, exact, region);
        denom = std::abs(hi - lo);
    }
    if (denom <= 0) throw std::invalid_argument("error_subdomain: zero exact range");
    double sum = 0.0;
    int count = 0;
    for (int i = 0; i < ps.size(); ++i)
        if (in_region(ps, i, region)) {
            sum += std::abs(exact[i] - calc[i]);
            ++count;
        }
    if (count == 0) throw std::invalid_argument("error_subdomain: empty region");
    return sum / (denom * count);
}

/// Least-squares slope of log(error) against log(dr).
inline double fit_order(const std::vector<std::pair<double, double>>& dr_err) {
    if (dr_err.size() < 3)
        throw std::invalid_argument("fit_order: need at least 3 (dr, error) pairs");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto& [dr, err] : dr_err) {
        if (dr <= 0 || err <= 0)
            throw std::invalid_argument("fit_order: spacings and errors must be positive");
        double x = std::log(dr), y = std::log(err);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double n = static_cast<double>(dr_err.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

struct StudyRow {
    std::string case_name;
    std::string mode;  // "multidomain" or "single_domain"
    double ratio = 1;
    int p = 0;
    double dr_target = 0, dr_measured = 0;
    int n_total = 0, n_domain1 = 0, n_domain2 = 0, n_interface = 0;
    double err_domain = 0, err_domain1 = 0, err_domain2 = 0, err_interface = 0;
    int iterations = 0;
    double residual = 0;
    int bandwidth_before = 0, bandwidth_after = 0;
    double solve_seconds = 0;  // console diagnostics only; never serialized
};

struct FittedOrder {
    std::string case_name, mode;
    double ratio = 1;
    int p = 0;
    double order_domain = 0, order_domain1 = 0, order_domain2 = 0, order_interface = 0;
};

struct StudyReport {
    std::vector<StudyRow> rows;
    std::vector<FittedOrder> orders;  // filled when >= 3 spacings ran
};

struct StudyConfig {
    std::vector<double> spacings;
    std::vector<int> degrees{3, 4, 5, 6};
    int alpha = 1;
    SolverConfig solver;
    std::uint64_t seed = 1;
    bool run_multidomain = true;
    bool run_single_domain = false;
};

/// Manufactured solution sampled at the points (the study oracle).
inline Eigen::VectorXd exact_field(const PointSet& ps, const ManufacturedCase& mc) {
    Eigen::VectorXd t(ps.size());
    for (int i = 0; i < ps.size(); ++i) {
        int sub = ps.kind[i] == PointKind::interface ? 1 : ps.subdomain[i];
        t[i] = mc.temperature(ps.coords[i], sub);  // branches agree on the interface
    }
    return t;
}

inline ProblemSpec manufactured_problem(const ManufacturedCase& mc) {
    ProblemSpec spec;
    spec.conductivity = {{1, mc.k1}, {2, mc.k2}};
    spec.source = [mc](const Vec3& x, int sub) { return mc.source(x, sub); };
    spec.bc[0] =
        BoundaryCondition::dirichlet_fn([mc](const Vec3& x) { return mc.temperature(x, 1); });
    return spec;
}

/// One manufactured solve; returns the study row and the solution.
inline std::pair<StudyRow, Eigen::VectorXd> run_case(const ManufacturedCase& mc, double dr,
                                                     int p, bool multidomain,
                                                     const StudyConfig& cfg) {
    StudyRow row;
    row.case_name = mc.name;
    row.mode = multidomain ? "multidomain" : "single_domain";
    row.ratio = mc.k1 / mc.k2;
    row.p = p;
    row.dr_target = dr;

    PointSet ps = generate(mc.geometry(dr), cfg.seed);
    row.dr_measured = average_spacing(ps);
    row.n_total = ps.size();
    for (int i = 0; i < ps.size(); ++i) {
        if (ps.kind[i] == PointKind::interface)
            ++row.n_interface;
        else if (ps.subdomain[i] == 2)
            ++row.n_domain2;
        else
            ++row.n_domain1;
    }

    KernelConfig kcfg(cfg.alpha, p, ps.dim);
    ProblemSpec spec = manufactured_problem(mc);
    SparseSystem sys;
    if (multidomain) {
        CloudPlan plan = build_clouds(ps, p);
        auto weights = compute_weights(ps, plan, kcfg, multidomain_needs(ps, plan, spec));
        sys = assemble_multidomain(ps, plan, weights, spec);
    } else {
        CloudPlan plan = build_clouds_unrestricted(ps, p);
        auto weights = compute_weights(ps, plan, kcfg, smearing_needs(ps, plan, spec));
        sys = assemble_smearing(ps, plan, weights, spec);
    }
    auto [t_calc, rep] = solve(sys, cfg.solver);

    Eigen::VectorXd t_exact = exact_field(ps, mc);
    row.err_domain = error_domain(t_calc, t_exact);
    row.err_domain1 = error_subdomain(ps, t_calc, t_exact, Region::domain_1);
    row.err_domain2 = error_subdomain(ps, t_calc, t_exact, Region::domain_2);
    row.err_interface = error_subdomain(ps, t_calc, t_exact, Region::interface);
    row.iterations = rep.iterations;
    row.residual = rep.residual;
    row.bandwidth_before = rep.bandwidth_before;
    row.bandwidth_after = rep.bandwidth_after;
    row.solve_seconds = rep.wall_time_s;
    return {row, std::move(t_calc)};
}

/// Full study: all (spacing, degree, mode) combinations, plus fitted
/// convergence orders per (mode, degree) when at least three spacings ran.
inline StudyReport run_study(const ManufacturedCase& mc, const StudyConfig& cfg) {
    StudyReport report;
    std::vector<bool> modes;
    if (cfg.run_multidomain) modes.push_back(true);
    if (cfg.run_single_domain) modes.push_back(false);
    for (bool multi : modes)
        for (int p : cfg.degrees)
            for (double dr : cfg.spacings) {
                auto [row, field] = run_case(mc, dr, p, multi, cfg);
                report.rows.push_back(row);
            }

    if (cfg.spacings.size() >= 3) {
        for (bool multi : modes)
            for (int p : cfg.degrees) {
                FittedOrder fo;
                fo.case_name = mc.name;
                fo.mode = multi ? "multidomain" : "single_domain";
                fo.ratio = mc.k1 / mc.k2;
                fo.p = p;
                std::vector<std::pair<double, double>> dom, d1, d2, ifc;
                for (const auto& row : report.rows)
                    if (row.p == p && row.mode == fo.mode) {
                        dom.emplace_back(row.dr_measured, row.err_domain);
                        d1.emplace_back(row.dr_measured, row.err_domain1);
                        d2.emplace_back(row.dr_measured, row.err_domain2);
                        ifc.emplace_back(row.dr_measured, row.err_interface);
                    }
                fo.order_domain = fit_order(dom);
                fo.order_domain1 = fit_order(d1);
                fo.order_domain2 = fit_order(d2);
                fo.order_interface = fit_order(ifc);
                report.orders.push_back(fo);
            }
    }
    return report;
}

}  // namespace rbfheat
