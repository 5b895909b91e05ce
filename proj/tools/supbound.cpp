// Command-line front end: existence checks, bound and growth-rate reports,
// spectral Monte-Carlo simulation, and empirical verification of bound CSVs.
//
// Exit codes: 0 success, 1 config/usage error, 2 existence or feasibility
// failure, 3 numeric non-convergence, 4 verification failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "supbound/bounds.hpp"
#include "supbound/config.hpp"
#include "supbound/csv.hpp"
#include "supbound/field.hpp"
#include "supbound/growth.hpp"
#include "supbound/reports.hpp"
#include "supbound/spectral.hpp"
#include "supbound/stats.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitNonConvergence = 3;
constexpr int kExitVerifyFailed = 4;

struct OutStream {
    std::ofstream file;
    std::ostream* os = &std::cout;

    explicit OutStream(const std::string& path) {
        if (!path.empty()) {
            file.open(path, std::ios::binary);
            if (!file) throw supbound::InvalidParameter("cannot open output file '" + path + "'");
            os = &file;
        }
    }
};

supbound::RunConfig load(const std::string& path) {
    if (path.empty()) throw supbound::InvalidParameter("--config is required");
    return supbound::load_config(path);
}

int cmd_check_existence(const supbound::RunConfig& cfg, const std::string& out_path) {
    using namespace supbound;
    const auto measure = cfg.make_measure();
    const auto z = cfg.make_z();
    const auto eq = cfg.make_equation();

    const auto classical = existence_classical(measure, z, eq);
    const auto generalized = existence_generalized(measure, z, eq);

    nlohmann::json rep;
    rep["classical"] = classical.satisfied();
    rep["generalized"] = generalized.satisfied();
    rep["values"]["classical"] = classical.satisfied() ? nlohmann::json(classical.value)
                                                       : nlohmann::json();
    rep["values"]["generalized"] = generalized.satisfied() ? nlohmann::json(generalized.value)
                                                           : nlohmann::json();
    if (cfg.phi.kind == "power") {
        const double p = cfg.make_phi().conjugate_exponent();
        const auto pw = existence_power_phi(measure, cfg.existence.log_exponent, p, eq);
        rep["power_phi"] = pw.satisfied();
        rep["values"]["power_phi"] = pw.satisfied() ? nlohmann::json(pw.value) : nlohmann::json();
    }

    OutStream out(out_path);
    *out.os << rep.dump(2) << "\n";
    return generalized.satisfied() ? kExitOk : kExitInfeasible;
}

int cmd_bound(const supbound::RunConfig& cfg, const std::string& out_path) {
    using namespace supbound;
    const auto measure = cfg.make_measure();
    const auto z = cfg.make_z();
    const auto eq = cfg.make_equation();

    if (!existence_generalized(measure, z, eq).satisfied()) {
        std::cerr << "bound: generalized-solution existence integral diverges\n";
        return kExitInfeasible;
    }
    BoundEngine engine(BoundCore(cfg.make_phi(), z, measure, eq, cfg.c_y), cfg.make_domain());
    const auto u = linspace(cfg.bounds.u_min, cfg.bounds.u_max, cfg.bounds.u_steps);
    const auto rep = bound_report(engine, u, cfg.bounds.prefactor2);
    OutStream out(out_path);
    write_bound_csv(*out.os, rep);
    return kExitOk;
}

int cmd_simulate(const supbound::RunConfig& cfg, const std::string& out_path,
                 std::optional<std::uint64_t> seed_override,
                 std::optional<std::int64_t> reps_override, const std::string& field_out) {
    using namespace supbound;
    const auto measure = cfg.make_measure();
    const auto eq = cfg.make_equation();
    const auto dom = cfg.make_domain();
    const std::uint64_t seed = seed_override.value_or(cfg.simulate.seed);
    const std::int64_t reps = reps_override.value_or(cfg.simulate.replications);

    const auto atoms = simulation_atoms(measure);  // rejects the grid form
    const auto sups = simulate_sups(eq, atoms, dom, cfg.simulate.nt, cfg.simulate.nx, seed, reps);
    OutStream out(out_path);
    write_sups_csv(*out.os, sups);

    if (!field_out.empty() && reps > 0) {
        const FieldSample s = simulate_field(eq, atoms, dom, cfg.simulate.nt, cfg.simulate.nx, seed, 0);
        std::ofstream f(field_out, std::ios::binary);
        if (!f) throw InvalidParameter("cannot open field output file '" + field_out + "'");
        csv::Writer w(f);
        w.row({"t", "x", "value"});
        for (std::size_t i = 0; i < s.nt(); ++i)
            for (std::size_t j = 0; j < s.nx(); ++j)
                w.row({csv::fmt(s.grid_t[i]), csv::fmt(s.grid_x[j]), csv::fmt(s.at(i, j))});
    }
    return kExitOk;
}

int cmd_growth(const supbound::RunConfig& cfg, const std::string& out_path) {
    using namespace supbound;
    if (!cfg.growth.present)
        throw InvalidParameter("growth: config has no growth section");
    const auto measure = cfg.make_measure();
    const auto z = cfg.make_z();
    const auto eq = cfg.make_equation();
    BoundCore core(cfg.make_phi(), z, measure, eq, cfg.c_y);
    const auto seg = cfg.make_segmentation();

    const double theta = cfg.growth.theta.value_or(0.5);
    const double u_max = cfg.bounds.u_max;

    WeightFunction weights = [&]() {
        if (!cfg.growth.c_values.empty()) return WeightFunction::custom(cfg.growth.c_values);
        // Iterated-log weights carry 1/s inside the scale D, making the
        // bound/statistic pair scale equivariant in s; s = 1 is the canonical
        // choice when no override is given.
        const double s_for_weights = cfg.growth.s.value_or(1.0);
        const double eps = cfg.c_y * std::sqrt(core.gamma_raw());
        return example_weights(seg.L(), cfg.growth.half_width, cfg.growth.delta, s_for_weights,
                               theta, eps);
    }();
    GrowthEngine engine(std::move(core), seg, weights, cfg.growth.k_diag);

    double s;
    if (cfg.growth.s) {
        s = *cfg.growth.s;
    } else if (!cfg.growth.c_values.empty()) {
        // Custom weights: pick s by golden-section minimization of the bound
        // at the largest requested level, inside the admissible window.
        double s_lo = 0.0;
        for (std::int64_t k = 0; k < engine.diag_limit(); ++k) {
            const double ck = engine.c_k(k);
            if (ck > 0.0) s_lo = std::max(s_lo, 4.0 * engine.eps_k(k) / (ck * (1.0 - theta)));
        }
        const double s_hi = 0.5 * u_max;
        if (!(s_lo < s_hi))
            throw SWindowEmpty("growth: admissible window for s is empty at u_max");
        const auto objective = [&](double sv) {
            const auto series = engine.series_sum(sv, theta,
                                                  SeriesOptions{cfg.growth.k_max, 50, 1e-12});
            if (!series.converged) return std::numeric_limits<double>::infinity();
            return 2.0 * std::exp(-engine.core().phi().conjugate(u_max / sv)) * series.value;
        };
        const double invphi = 0.5 * (std::sqrt(5.0) - 1.0);
        double lo = s_lo * (1.0 + 1e-9) + 1e-12, hi = s_hi * (1.0 - 1e-9);
        for (int it = 0; it < 60 && hi - lo > 1e-10 * s_hi; ++it) {
            const double m1 = hi - invphi * (hi - lo), m2 = lo + invphi * (hi - lo);
            if (objective(m1) < objective(m2)) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        s = 0.5 * (lo + hi);
    } else {
        s = 1.0;
    }

    const auto u = linspace(cfg.bounds.u_min, cfg.bounds.u_max, cfg.bounds.u_steps);
    const auto rep = growth_report(engine, u, s, theta, SeriesOptions{cfg.growth.k_max, 50, 1e-16});
    OutStream out(out_path);
    write_growth_csv(*out.os, rep);
    return kExitOk;
}

int cmd_verify(const std::string& bounds_path, const std::string& samples_path,
               double confidence, const std::string& out_path) {
    using namespace supbound;
    if (!(confidence > 0.5 && confidence < 1.0))
        throw InvalidParameter("verify: confidence must lie in (0.5, 1)");

    std::ifstream bf(bounds_path);
    if (!bf) throw InvalidParameter("verify: cannot open '" + bounds_path + "'");
    const auto bounds = csv::read(bf);
    const int cu = bounds.column("u"), cb = bounds.column("bound"), cf = bounds.column("feasible");
    if (cu < 0 || cb < 0 || cf < 0)
        throw InvalidParameter("verify: bounds CSV lacks u/bound/feasible columns");

    std::ifstream sf(samples_path);
    if (!sf) throw InvalidParameter("verify: cannot open '" + samples_path + "'");
    const auto samples = csv::read(sf);
    const int cs = samples.column("sup_abs");
    if (cs < 0) throw InvalidParameter("verify: samples CSV lacks a sup_abs column");
    std::vector<double> sups;
    sups.reserve(samples.rows.size());
    for (const auto& r : samples.rows) sups.push_back(csv::to_double(r.at(cs)));

    std::vector<std::pair<double, double>> feasible;
    for (const auto& r : bounds.rows)
        if (csv::to_bool(r.at(cf)))
            feasible.emplace_back(csv::to_double(r.at(cu)), csv::to_double(r.at(cb)));

    const auto rows = verify_rows(feasible, sups, confidence);
    OutStream out(out_path);
    write_verify_csv(*out.os, rows, confidence);
    for (const auto& r : rows)
        if (!r.pass) return kExitVerifyFailed;
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"supbound: supremum tail bounds for random-field solutions of "
                 "odd-order dispersive equations, with Monte-Carlo verification"};
    app.require_subcommand(1);

    std::string config_path, out_path, field_out, bounds_path, samples_path;
    std::optional<std::uint64_t> seed_override;
    std::optional<std::int64_t> reps_override;
    double confidence = 0.95;
    bool confidence_set = false;

    auto* c_exist = app.add_subcommand("check-existence", "evaluate the existence integrals");
    c_exist->add_option("--config", config_path)->required();
    c_exist->add_option("--out", out_path);

    auto* c_bound = app.add_subcommand("bound", "bounded-domain supremum bound report (CSV)");
    c_bound->add_option("--config", config_path)->required();
    c_bound->add_option("--out", out_path);

    auto* c_sim = app.add_subcommand("simulate", "Monte-Carlo grid suprema of the field (CSV)");
    c_sim->add_option("--config", config_path)->required();
    c_sim->add_option("--out", out_path);
    c_sim->add_option("--field-out", field_out, "also write one field realization as t,x,value");
    std::uint64_t seed_raw = 0;
    std::int64_t reps_raw = 0;
    auto* seed_opt = c_sim->add_option("--seed", seed_raw, "override the config seed");
    auto* reps_opt = c_sim->add_option("--replications", reps_raw, "override the replication count");

    auto* c_growth = app.add_subcommand("growth", "growth-rate bound report (CSV)");
    c_growth->add_option("--config", config_path)->required();
    c_growth->add_option("--out", out_path);

    auto* c_verify = app.add_subcommand("verify", "check empirical tails against a bound report");
    c_verify->add_option("--bounds", bounds_path)->required();
    c_verify->add_option("--samples", samples_path)->required();
    auto* conf_opt = c_verify->add_option("--confidence", confidence);
    c_verify->add_option("--out", out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }
    confidence_set = conf_opt->count() > 0;
    if (seed_opt->count() > 0) seed_override = seed_raw;
    if (reps_opt->count() > 0) reps_override = reps_raw;

    try {
        if (c_exist->parsed()) return cmd_check_existence(load(config_path), out_path);
        if (c_bound->parsed()) return cmd_bound(load(config_path), out_path);
        if (c_sim->parsed())
            return cmd_simulate(load(config_path), out_path, seed_override, reps_override,
                                field_out);
        if (c_growth->parsed()) return cmd_growth(load(config_path), out_path);
        if (c_verify->parsed()) {
            double conf = confidence;
            if (!confidence_set) conf = 0.95;
            return cmd_verify(bounds_path, samples_path, conf, out_path);
        }
    } catch (const supbound::InvalidParameter& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const supbound::UnsupportedMeasure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const supbound::SWindowEmpty& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const supbound::BelowThreshold& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const supbound::NonConvergence& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNonConvergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
