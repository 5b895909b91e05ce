// Acceptance suite: one line per criterion, exit code = number of failures.
// Usage: supbound_acceptance [path-to-supbound-binary]
//
// Monte-Carlo criteria compare empirical exceedance tails against the
// theoretical curves in the conservative direction: the grid statistic is a
// lower bound for the path supremum, so the exact one-sided upper confidence
// limit of its tail must stay below the bound wherever the bound is feasible.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "supbound/bounds.hpp"
#include "supbound/config.hpp"
#include "supbound/field.hpp"
#include "supbound/growth.hpp"
#include "supbound/reports.hpp"
#include "supbound/stats.hpp"
#include "support/oracles.hpp"

using namespace supbound;

namespace {

int g_failed = 0;
std::string g_cli;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

void report(int idx, const std::string& name, bool pass, const std::string& detail,
            double seconds) {
    std::printf("[%s] %2d. %s: %s (%.2f s)\n", pass ? "PASS" : "FAIL", idx, name.c_str(),
                detail.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) ++g_failed;
}

EquationSpec airy() { return EquationSpec(1, {-1.0}, EquationSpec::Kappa::Cos); }

SpectralMeasure four_atoms() {
    return SpectralMeasure::from_atoms(
        {{1.0, 0.25}, {-1.0, 0.25}, {2.0, 0.25}, {-2.0, 0.25}});
}

BoundCore log_core() {
    return BoundCore(NFunction::gaussian(), AdmissibleFunction::log_power(1.0), four_atoms(),
                     airy(), 1.0);
}

// ----------------------------------------------------------------------------

void criterion_1_conjugate() {
    Timer timer;
    const auto g = NFunction::gaussian();
    const auto pw = NFunction::piecewise_power(3.0);
    double worst = 0.0;
    const int n = 1000;
    for (int i = 0; i < n; ++i) {
        const double x = -10.0 + 20.0 * i / (n - 1);
        worst = std::max(worst, std::abs(g.conjugate_numeric(x) - 0.5 * x * x));
        worst = std::max(worst, std::abs(pw.conjugate_numeric(x) - pw.conjugate(x)));
    }
    const double sec = timer.seconds();
    std::ostringstream detail;
    detail << "max_abs_err=" << worst;
    report(1, "numeric conjugate vs closed forms", worst < 1e-8 && sec < 1.0, detail.str(), sec);
}

void criterion_2_young_fenchel() {
    Timer timer;
    const std::vector<NFunction> cat{NFunction::gaussian(), NFunction::power(1.5),
                                     NFunction::piecewise_power(3.0),
                                     NFunction::exp_power(1.5, 0.5)};
    std::mt19937_64 gen(20250809);
    std::uniform_real_distribution<double> dist(1e-4, 10.0);
    long violations = 0;
    for (const auto& f : cat) {
        for (int i = 0; i < 100000; ++i) {
            const double x = dist(gen), y = dist(gen);
            if (x * y > f.value(y) + f.conjugate(x) + 1e-9) ++violations;
        }
    }
    report(2, "Young-Fenchel inequality, 1e5 pairs per entry", violations == 0,
           "violations=" + std::to_string(violations), timer.seconds());
}

void criterion_3_sin_ratio() {
    Timer timer;
    const std::vector<AdmissibleFunction> zs{
        AdmissibleFunction::power(0.5), AdmissibleFunction::power(1.0),
        AdmissibleFunction::log_power(0.75), AdmissibleFunction::log_power(2.0)};
    std::mt19937_64 gen(424242);
    std::uniform_real_distribution<double> dist(-100.0, 100.0);
    long violations = 0;
    for (const auto& z : zs) {
        for (int i = 0; i < 100000; ++i) {
            const double u = dist(gen);
            double v = dist(gen);
            if (v == 0.0) v = 0.5;
            if (std::abs(std::sin(u / v)) > z.sin_ratio_bound(u, v)) ++violations;
        }
    }
    report(3, "sine-ratio domination, 1e5 pairs per family", violations == 0,
           "violations=" + std::to_string(violations), timer.seconds());
}

// stable ln(a e^v + 1 - a e^{alpha=1 offset}) helpers for the oracle integrands,
// written directly against the log-power inverse Z^{-1}(v) = e^v - 1, u0 = e - 1
double oracle_log_bracket(double half_side, double v) {
    // ln(half_side (e^v - e) + 1)
    if (v > 500.0) return v + std::log(half_side);
    const double x = half_side * (std::exp(v) - std::exp(1.0)) + 1.0;
    return x > 0.0 ? std::log(x) : 0.0;
}

void criterion_4_quadrature_oracles() {
    Timer timer;
    std::ostringstream detail;
    bool pass = true;
    const std::int64_t n = 10000000;

    // (a) rectangle entropy integral at delta = 0.5
    {
        BoundEngine engine(log_core(), DomainRect(0.0, 1.0, -1.0, 1.0));
        const double got = engine.entropy_integral(0.5);
        const double czc = 2.0 * engine.core().c_z() * engine.core().c_y();
        const auto f = [&](double s) {
            const double v = czc / s;
            const double sum = oracle_log_bracket(0.5, v) + oracle_log_bracket(1.0, v);
            return sum > 0.0 ? std::sqrt(0.5 * sum) : 0.0;  // Gaussian Psi
        };
        const double ref = oracles::midpoint_to_zero(f, 0.5, n, 4.0);
        const double rel = std::abs(got - ref) / std::abs(ref);
        pass = pass && rel < 1e-5;
        detail << "entropy_rel=" << rel;
    }

    // (b) segment entropy integral, k = 1 of the geometric partition
    {
        GrowthEngine engine(log_core(), Segmentation::geometric(0.5, 1.0, 1000),
                            WeightFunction::iterated_log(1.0, 8.0));
        const double got = engine.i_phi_k(1, 0.5);
        const double czc = 2.0 * engine.core().c_z() * engine.core().c_y();
        const double half_gap = 0.5 * std::exp(1.0) * (std::exp(1.0) - 1.0);
        const auto f = [&](double s) {
            const double v = czc / s;
            const double sum = oracle_log_bracket(0.5, v) + oracle_log_bracket(half_gap, v);
            return sum > 0.0 ? std::sqrt(0.5 * sum) : 0.0;
        };
        const double ref = oracles::midpoint_to_zero(f, 0.5, n, 4.0);
        const double rel = std::abs(got - ref) / std::abs(ref);
        pass = pass && rel < 1e-5;
        detail << " i_phi_k_rel=" << rel;
    }

    // (c) C_Z^2 of the gaussian spectral density
    {
        const auto density = SpectralDensity(SpectralDensity::Name::Gaussian, 1.0, 1.0, 8.0);
        const auto measure = SpectralMeasure::from_density(density);
        const auto z = AdmissibleFunction::log_power(1.0);
        const auto eq = airy();
        const auto got = c_z_squared(measure, z, eq);
        const double e1 = std::exp(1.0);
        const auto f = [&](double l) {
            const double w = std::log(0.5 * std::abs(l) + e1) +
                             std::log(0.5 * std::abs(l * l * l) + e1);
            return w * w * std::exp(-l * l) / std::sqrt(M_PI);
        };
        const double ref = oracles::midpoint(f, -16.0, 16.0, n);
        const double rel = std::abs(got.value - ref) / std::abs(ref);
        pass = pass && !got.divergent && rel < 1e-5;
        detail << " c_z2_rel=" << rel;
    }

    // (d) admissibility integral of the log-power family at eps = 0.1
    {
        const auto z = AdmissibleFunction::log_power(0.75);
        const auto got = admissibility_integral(z, NFunction::gaussian(), 0.1);
        const auto f = [&](double s) {
            // ln(Z^{-1}(1/s) - u0) with Z^{-1}(v) = e^{v^{4/3}} - 1, u0 = e^{3/4} - 1
            const double w = std::pow(1.0 / s, 1.0 / 0.75);
            if (w <= 0.75) return 0.0;
            const double a = w + std::log1p(-std::exp(0.75 - w));
            return a > 0.0 ? std::sqrt(0.5 * a) : 0.0;
        };
        const double ref = oracles::midpoint_to_zero(f, 0.1, n, 4.0);
        const double rel = std::abs(got.value - ref) / std::abs(ref);
        pass = pass && !got.divergent && rel < 1e-5;
        detail << " admissibility_rel=" << rel;
    }

    const double sec = timer.seconds();
    report(4, "adaptive quadrature vs 1e7-point midpoint oracles", pass && sec < 60.0,
           detail.str(), sec);
}

void criterion_5_closed_form_domination() {
    Timer timer;
    long violations = 0;
    int probes = 0;

    // log family on a domain inside its validity region
    {
        BoundEngine engine(log_core(), DomainRect(0.0, 2.0, -2.0, 2.0));
        for (int i = 1; i <= 20; ++i) {
            const double delta = 0.1 * i;
            ++probes;
            if (engine.entropy_integral(delta) > engine.entropy_log_family_upper(delta))
                ++violations;
        }
    }
    // power family with the free tuning exponent
    {
        const auto one = SpectralMeasure::from_atoms({{1.0, 1.0}});
        BoundEngine engine(
            BoundCore(NFunction::gaussian(), AdmissibleFunction::power(0.8), one, airy(), 1.0),
            DomainRect(0.0, 1.0, -1.0, 1.0));
        for (int i = 1; i <= 10; ++i) {
            for (int j = 1; j <= 10; ++j) {
                const double delta = 0.08 * i;
                const double beta = 0.8 * j / 11.0;
                ++probes;
                if (engine.entropy_integral(delta) > engine.entropy_power_beta_upper(delta, beta))
                    ++violations;
            }
        }
    }
    report(5, "closed-form entropy majorants dominate the quadrature", violations == 0,
           "probes=" + std::to_string(probes) + " violations=" + std::to_string(violations),
           timer.seconds());
}

void criterion_6_specialization() {
    Timer timer;
    BoundEngine engine(log_core(), DomainRect(0.0, 1.0, -1.0, 1.0));
    const auto sigma = pde_sigma_modulus(engine.core());
    std::mt19937_64 gen(777);
    std::uniform_real_distribution<double> th(0.08, 0.92), mul(1.01, 2.5);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double theta = th(gen);
        const double u = engine.threshold_u(theta) * mul(gen);
        const double a = engine.bound_at(u, theta, true);
        const double b = generic_entropy_bound(sigma, engine.core().phi(), engine.domain(),
                                               engine.gamma_big(), u, theta);
        worst = std::max(worst, std::abs(a - b));
    }
    std::ostringstream detail;
    detail << "max_abs_diff=" << worst;
    report(6, "generic entropy bound reproduces the specialized bound", worst < 1e-9,
           detail.str(), timer.seconds());
}

void criterion_7_mc_domination_bounded() {
    Timer timer;
    setenv("SUPBOUND_THREADS", "1", 1);  // the runtime budget is single-threaded
    BoundEngine engine(log_core(), DomainRect(0.0, 1.0, -1.0, 1.0));

    // u sweep: from just above the smallest feasible level up to where the
    // optimized bound decays to ~1e-2, still far above the resolution floor
    // of 1e4 replications (~3e-4)
    const double u_lo = engine.optimize_theta(1.0).min_feasible_u * 1.001;
    double u_hi = u_lo;
    while (engine.optimize_theta(u_hi).bound > 1e-2) u_hi += 0.05 * u_lo;
    const auto u_values = linspace(u_lo, u_hi, 25);
    const auto rep = bound_report(engine, u_values, true);

    const std::int64_t reps = 10000;
    const auto sups = simulate_sups(airy(), four_atoms().atoms(),
                                    DomainRect(0.0, 1.0, -1.0, 1.0), 64, 64, 20250809, reps);

    std::vector<std::pair<double, double>> feasible;
    for (const auto& r : rep.rows)
        if (r.feasible) feasible.emplace_back(r.u, r.bound);
    const auto rows = verify_rows(feasible, sups, 0.95);

    int failures = 0;
    double min_margin = std::numeric_limits<double>::infinity();
    for (const auto& r : rows) {
        if (!r.pass) ++failures;
        min_margin = std::min(min_margin, r.bound / r.cp_upper);
    }
    const double sec = timer.seconds();
    unsetenv("SUPBOUND_THREADS");
    std::ostringstream detail;
    detail << "feasible_rows=" << rows.size() << " failures=" << failures
           << " min(bound/cp)=" << min_margin;
    report(7, "Monte-Carlo domination of the rectangle bound",
           !rows.empty() && failures == 0 && sec < 300.0, detail.str(), sec);
}

void criterion_8_mc_domination_growth() {
    Timer timer;
    const double A = 0.5, L = 1.0, delta_w = 1.0, s = 1.0;
    const auto seg = Segmentation::geometric(A, L, 1 << 30);
    const SeriesOptions series_opts{1 << 30, 50, 1e-16};

    // theta scan: the series and its terms do not depend on theta (the weight
    // scale absorbs it), so pick the theta with the lowest entry threshold
    double best_theta = 0.5, best_thr = std::numeric_limits<double>::infinity();
    for (double theta : {0.5, 0.7, 0.85, 0.95, 0.99}) {
        const auto w = example_weights(L, A, delta_w, s, theta, 1.0);
        GrowthEngine probe(log_core(), seg, w, 64);
        const double thr = probe.threshold_u(s, theta);
        if (thr < best_thr) {
            best_thr = thr;
            best_theta = theta;
        }
    }
    const double theta = best_theta;
    const auto weights = example_weights(L, A, delta_w, s, theta, 1.0);
    GrowthEngine engine(log_core(), seg, weights, 64);

    // five probe levels just above the threshold; the bound plateaus there
    std::vector<double> probes;
    for (int i = 1; i <= 5; ++i) probes.push_back(best_thr * (1.0 + 1e-3 * i));

    std::vector<GrowthValue> bounds;
    for (double u : probes) bounds.push_back(engine.growth_bound(u, s, theta, series_opts));

    // empirical side: max of |U(t,x)| / c(t) over a grid of (e, b_3] x [-A, A]
    const double t_hi = seg.b(3);
    const double t_lo_open = L * std::exp(1.0);
    const int nt = 48, nx = 48;
    const std::int64_t reps = 120000;
    const auto atoms = four_atoms().atoms();
    const auto eq = airy();
    std::vector<double> grid_t(nt), inv_c(nt), grid_x(nx);
    for (int i = 0; i < nt; ++i) {
        grid_t[i] = t_lo_open + (t_hi - t_lo_open) * (i + 1) / static_cast<double>(nt);
        inv_c[i] = 1.0 / weights.at_time(grid_t[i]);
    }
    for (int j = 0; j < nx; ++j)
        grid_x[j] = -A + 2.0 * A * j / static_cast<double>(nx - 1);

    std::vector<double> stats(reps);
    const int nthreads = replication_threads();
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) {
        pool.emplace_back([&, t]() {
            std::vector<double> g(atoms.size());
            for (std::int64_t r = t; r < reps; r += nthreads) {
                for (std::size_t j = 0; j < atoms.size(); ++j)
                    g[j] = std::sqrt(atoms[j].mass) * rng::standard_normal(777777, r, j);
                double best = 0.0;
                for (int i = 0; i < nt; ++i) {
                    for (int k = 0; k < nx; ++k) {
                        double u = 0.0;
                        for (std::size_t j = 0; j < atoms.size(); ++j)
                            u += g[j] * kernel(eq, grid_t[i], grid_x[k], atoms[j].lambda);
                        best = std::max(best, std::abs(u) * inv_c[i]);
                    }
                }
                stats[r] = best;
            }
        });
    }
    for (auto& th : pool) th.join();

    int failures = 0;
    double min_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < probes.size(); ++i) {
        std::int64_t exceed = 0;
        for (double v : stats)
            if (v > probes[i]) ++exceed;
        const double cp = clopper_pearson_upper(exceed, reps, 0.95);
        if (cp > bounds[i].bound) ++failures;
        min_margin = std::min(min_margin, bounds[i].bound / cp);
    }
    const double sec = timer.seconds();
    std::ostringstream detail;
    detail << "theta=" << theta << " threshold=" << best_thr
           << " covered_from=k" << bounds[0].covered_from << " failures=" << failures
           << " min(bound/cp)=" << min_margin;
    report(8, "Monte-Carlo domination of the growth bound at truncated horizon",
           failures == 0 && sec < 300.0, detail.str(), sec);
}

void criterion_9_series_verdicts() {
    Timer timer;
    const auto seg = Segmentation::geometric(0.5, 1.0, 1 << 30);
    GrowthEngine example(log_core(), seg, example_weights(1.0, 0.5, 1.0, 1.0, 0.5, 1.0));
    const auto a = example.series_sum(1.0, 0.5, SeriesOptions{1 << 30, 50, 1e-16});
    const auto b = example.series_sum(1.0, 0.5, SeriesOptions{1 << 30, 50, 1e-16});

    const auto seg4 = Segmentation::from_points(0.5, {0.0, 2.0, 4.0, 6.0, 8.0});
    GrowthEngine constant(log_core(), seg4, WeightFunction::custom({3.0, 3.0, 3.0, 3.0}));
    const auto c = constant.series_sum(8.0, 0.5, SeriesOptions{4, 50, 1e-16});

    const bool pass = a.converged && !c.converged && a.value == b.value && a.k_used == b.k_used;
    std::ostringstream detail;
    detail << "iterated_log: converged=" << a.converged << " value=" << a.value
           << " k_used=" << a.k_used << "; constant: converged=" << c.converged;
    report(9, "series verdicts are correct and deterministic", pass, detail.str(),
           timer.seconds());
}

void criterion_10_cli_determinism() {
    Timer timer;
    if (g_cli.empty()) {
        report(10, "CLI byte determinism", false, "no CLI path supplied", timer.seconds());
        return;
    }
    const std::string dir = "acceptance_work";
    std::system(("rm -rf " + dir + " && mkdir -p " + dir).c_str());
    std::ofstream cfg(dir + "/sim.json");
    cfg << R"({
      "equation": {"N": 1, "a": [-1.0], "kappa": "cos"},
      "phi": {"kind": "gaussian"},
      "Z": {"kind": "log-power", "alpha": 1.0},
      "spectral": {"form": "atoms", "atoms": [[1.0, 0.25], [-1.0, 0.25], [2.0, 0.25], [-2.0, 0.25]]},
      "domain": {"a": 0.0, "b": 1.0, "c": -1.0, "d": 1.0},
      "simulate": {"replications": 3000, "nt": 32, "nx": 32, "seed": 97}
    })";
    cfg.close();

    const auto run = [&](const std::string& env, const std::string& out) {
        const std::string cmd = env + " " + g_cli + " simulate --config " + dir +
                                "/sim.json --out " + dir + "/" + out + " > /dev/null 2>&1";
        return WEXITSTATUS(std::system(cmd.c_str()));
    };
    const auto slurp = [&](const std::string& name) {
        std::ifstream f(dir + "/" + name, std::ios::binary);
        std::stringstream ss;
        ss << f.rdbuf();
        return ss.str();
    };
    bool pass = run("", "a.csv") == 0 && run("", "b.csv") == 0 &&
                run("SUPBOUND_THREADS=1", "t1.csv") == 0 &&
                run("SUPBOUND_THREADS=8", "t8.csv") == 0;
    const std::string a = slurp("a.csv");
    pass = pass && !a.empty() && a == slurp("b.csv") && a == slurp("t1.csv") &&
           a == slurp("t8.csv");
    report(10, "CLI byte determinism across runs and thread counts", pass,
           pass ? "4 runs identical" : "outputs differ", timer.seconds());
}

void criterion_11_existence_gate() {
    Timer timer;
    const auto cauchy = SpectralMeasure::from_density(
        SpectralDensity(SpectralDensity::Name::CauchyTruncated, 1.0, 1.0, 8.0));
    const auto z = AdmissibleFunction::power(0.1);
    const auto eq = airy();

    const auto classical = existence_classical(cauchy, z, eq);
    const auto generalized = existence_generalized(cauchy, z, eq);

    // independent tail-exponent oracle on the diagonal integrands: the shell
    // integrals converge exactly when the log-log slope is below -1
    const SpectralDensity d(SpectralDensity::Name::CauchyTruncated, 1.0, 1.0, 8.0);
    const auto f_classical = [&](double l) {
        const double p = std::pow(l, 3.0);
        const double w = p * std::pow(p, 0.1);
        return w * w * d(l);
    };
    const auto f_generalized = [&](double l) {
        const double w = std::pow(std::pow(l, 3.0), 0.1);
        return w * w * d(l);
    };
    const double slope_c = oracles::tail_exponent(f_classical, 1e3, 1e6);
    const double slope_g = oracles::tail_exponent(f_generalized, 1e3, 1e6);

    const bool pass = classical.divergent && generalized.satisfied() && slope_c > -1.0 &&
                      slope_g < -1.0;
    std::ostringstream detail;
    detail << "classical=" << (classical.divergent ? "divergent" : "satisfied")
           << " generalized=" << (generalized.satisfied() ? "satisfied" : "divergent")
           << " oracle_slopes=" << slope_c << "," << slope_g;
    report(11, "existence gate on the quadratic-tail density", pass, detail.str(),
           timer.seconds());
}

} // namespace

int main(int argc, char** argv) {
    if (argc > 1) g_cli = argv[1];
    criterion_1_conjugate();
    criterion_2_young_fenchel();
    criterion_3_sin_ratio();
    criterion_4_quadrature_oracles();
    criterion_5_closed_form_domination();
    criterion_6_specialization();
    criterion_7_mc_domination_bounded();
    criterion_8_mc_domination_growth();
    criterion_9_series_verdicts();
    criterion_10_cli_determinism();
    criterion_11_existence_gate();
    std::printf("%d of 11 criteria passed\n", 11 - g_failed);
    return g_failed;
}
