#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "supbound/bounds.hpp"
#include "supbound/csv.hpp"
#include "supbound/field.hpp"
#include "supbound/growth.hpp"
#include "supbound/stats.hpp"

namespace supbound {

inline std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> u(static_cast<std::size_t>(n));
    if (n == 1) {
        u[0] = lo;
        return u;
    }
    for (int i = 0; i < n; ++i) u[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    return u;
}

struct BoundRow {
    double u = 0.0;
    bool feasible = false;
    double theta_star = std::numeric_limits<double>::quiet_NaN();
    double threshold = std::numeric_limits<double>::quiet_NaN();
    double bound = std::numeric_limits<double>::quiet_NaN();
    double bound_no_prefactor = std::numeric_limits<double>::quiet_NaN();
};

struct BoundReport {
    double gamma = 0.0;
    double c_z = 0.0;
    double gamma0 = 0.0;
    bool prefactor2 = true;
    std::vector<BoundRow> rows;
};

/// Sweeps u, optimizing theta per level. Infeasible levels report the smallest
/// u the theta grid would accept.
inline BoundReport bound_report(const BoundEngine& engine, const std::vector<double>& u_values,
                                bool prefactor2) {
    BoundReport rep;
    rep.gamma = engine.gamma_big();
    rep.c_z = engine.core().c_z();
    rep.gamma0 = engine.gamma0();
    rep.prefactor2 = prefactor2;
    for (double u : u_values) {
        BoundRow row;
        row.u = u;
        const auto opt = engine.optimize_theta(u, true);
        if (opt.feasible) {
            row.feasible = true;
            row.theta_star = opt.theta;
            row.threshold = opt.threshold;
            const double no_pf = engine.bound_at(u, opt.theta, false);
            row.bound = prefactor2 ? opt.bound : no_pf;
            row.bound_no_prefactor = no_pf;
        } else {
            row.threshold = opt.min_feasible_u;
        }
        rep.rows.push_back(row);
    }
    return rep;
}

inline void write_bound_csv(std::ostream& os, const BoundReport& rep) {
    csv::Writer w(os);
    w.comment("gamma=" + csv::fmt(rep.gamma) + " c_z=" + csv::fmt(rep.c_z) +
              " gamma0=" + csv::fmt(rep.gamma0) + " prefactor2=" + csv::fmt(rep.prefactor2));
    w.row({"u", "theta_star", "threshold", "bound", "bound_no_prefactor", "feasible"});
    for (const auto& r : rep.rows)
        w.row({csv::fmt(r.u), csv::fmt(r.theta_star), csv::fmt(r.threshold), csv::fmt(r.bound),
               csv::fmt(r.bound_no_prefactor), csv::fmt(r.feasible)});
}

struct GrowthRow {
    double u = 0.0;
    bool feasible = false;
    double bound = std::numeric_limits<double>::quiet_NaN();
};

struct GrowthReport {
    double s = 0.0;
    double theta = 0.0;
    double series = 0.0;
    std::int64_t k_used = 0;
    double threshold = std::numeric_limits<double>::quiet_NaN();
    std::int64_t covered_from = -1;
    std::vector<SegmentDiagnostics> segments;
    std::vector<GrowthRow> rows;
};

/// Growth sweep at fixed (s, theta): the series and segment table are level
/// independent, so they are computed once.
inline GrowthReport growth_report(const GrowthEngine& engine, const std::vector<double>& u_values,
                                  double s, double theta, const SeriesOptions& opt = {}) {
    GrowthReport rep;
    rep.s = s;
    rep.theta = theta;
    rep.segments = engine.diagnostics(s, theta);
    double thr = 0.0;
    bool any = false;
    for (const auto& d : rep.segments) {
        if (!d.covered) continue;
        if (!any) rep.covered_from = d.k;
        any = true;
        thr = std::max(thr, d.threshold_k);
    }
    if (!any) throw SWindowEmpty("growth_report: no segment satisfies the series window");
    rep.threshold = thr;
    const auto series = engine.series_sum(s, theta, opt);
    if (!series.converged) throw NonConvergence("growth_report: segment series did not converge");
    rep.series = series.value;
    rep.k_used = series.k_used;
    for (double u : u_values) {
        GrowthRow row;
        row.u = u;
        if (u > thr * (1.0 + 1e-12) && s < 0.5 * u) {
            row.feasible = true;
            row.bound = std::min(
                1.0, 2.0 * std::exp(-engine.core().phi().conjugate(u / s)) * series.value);
        }
        rep.rows.push_back(row);
    }
    return rep;
}

inline void write_growth_csv(std::ostream& os, const GrowthReport& rep) {
    csv::Writer w(os);
    w.comment("covered_from=" + csv::fmt(rep.covered_from) +
              " series=" + csv::fmt(rep.series) + " k_used=" + csv::fmt(rep.k_used));
    for (const auto& d : rep.segments)
        w.comment("segment k=" + csv::fmt(d.k) + " b_k=" + csv::fmt(d.b_k) +
                  " c_k=" + csv::fmt(d.c_k) + " eps_k=" + csv::fmt(d.eps_k) +
                  " i_phi_k=" + csv::fmt(d.i_phi_k) + " covered=" + csv::fmt(d.covered));
    w.row({"u", "s", "theta", "series", "bound", "threshold", "k_used"});
    for (const auto& r : rep.rows)
        w.row({csv::fmt(r.u), csv::fmt(rep.s), csv::fmt(rep.theta), csv::fmt(rep.series),
               csv::fmt(r.bound), csv::fmt(rep.threshold), csv::fmt(rep.k_used)});
}

/// Threads for replication loops: SUPBOUND_THREADS overrides hardware
/// concurrency when set. Results never depend on the thread count.
inline int replication_threads() {
    if (const char* env = std::getenv("SUPBOUND_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n >= 1) return static_cast<int>(std::min<long>(n, 256));
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Grid suprema of |U| over independent replications, in replication order.
inline std::vector<double> simulate_sups(const EquationSpec& eq,
                                         const std::vector<SpectralAtom>& atoms,
                                         const DomainRect& dom, int nt, int nx,
                                         std::uint64_t seed, std::int64_t replications) {
    std::vector<double> sups(static_cast<std::size_t>(replications));
    const int nthreads = std::min<std::int64_t>(replication_threads(), std::max<std::int64_t>(replications, 1));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int t = 0; t < nthreads; ++t) {
        pool.emplace_back([&, t]() {
            for (std::int64_t r = t; r < replications; r += nthreads) {
                const FieldSample s =
                    simulate_field(eq, atoms, dom, nt, nx, seed, static_cast<std::uint64_t>(r));
                sups[static_cast<std::size_t>(r)] = sup_abs(s);
            }
        });
    }
    for (auto& th : pool) th.join();
    return sups;
}

inline void write_sups_csv(std::ostream& os, const std::vector<double>& sups) {
    csv::Writer w(os);
    w.row({"sup_abs"});
    for (double v : sups) w.row({csv::fmt(v)});
}

struct VerifyRow {
    double u = 0.0;
    double bound = 0.0;
    std::int64_t exceedances = 0;
    std::int64_t replications = 0;
    double p_hat = 0.0;
    double cp_upper = 0.0;
    bool pass = false;
};

/// Compares the empirical grid-sup tail against the bound column: for each
/// feasible level, PASS means the one-sided exact upper confidence limit of
/// the exceedance probability stays below the bound.
inline std::vector<VerifyRow> verify_rows(const std::vector<std::pair<double, double>>& feasible_u_bound,
                                          const std::vector<double>& sups, double confidence) {
    std::vector<VerifyRow> rows;
    const std::int64_t n = static_cast<std::int64_t>(sups.size());
    for (const auto& [u, bound] : feasible_u_bound) {
        VerifyRow r;
        r.u = u;
        r.bound = bound;
        r.replications = n;
        for (double s : sups)
            if (s > u) ++r.exceedances;
        r.p_hat = n > 0 ? static_cast<double>(r.exceedances) / static_cast<double>(n) : 0.0;
        r.cp_upper = n > 0 ? clopper_pearson_upper(r.exceedances, n, confidence) : 1.0;
        r.pass = r.cp_upper <= bound;
        rows.push_back(r);
    }
    return rows;
}

inline void write_verify_csv(std::ostream& os, const std::vector<VerifyRow>& rows,
                             double confidence) {
    csv::Writer w(os);
    w.comment("empirical statistic is a grid maximum, a lower bound on the path supremum;");
    w.comment("PASS is conservative evidence for the bound, not a proof");
    w.comment("confidence=" + csv::fmt(confidence));
    w.row({"u", "bound", "exceedances", "replications", "p_hat", "cp_upper", "pass"});
    for (const auto& r : rows)
        w.row({csv::fmt(r.u), csv::fmt(r.bound), csv::fmt(r.exceedances),
               csv::fmt(r.replications), csv::fmt(r.p_hat), csv::fmt(r.cp_upper),
               csv::fmt(r.pass)});
}

} // namespace supbound
