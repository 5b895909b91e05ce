#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "supbound/admissible.hpp"
#include "supbound/errors.hpp"
#include "supbound/field.hpp"
#include "supbound/growth.hpp"
#include "supbound/orlicz.hpp"
#include "supbound/spectral.hpp"

namespace supbound {

using nlohmann::json;

namespace detail {

inline void require_keys(const json& j, const std::string& where,
                         const std::set<std::string>& known) {
    if (!j.is_object()) throw InvalidParameter("config: " + where + " must be an object");
    for (const auto& item : j.items())
        if (!known.count(item.key()))
            throw InvalidParameter("config: unknown key '" + item.key() + "' in " + where);
}

template <typename T>
T get_required(const json& j, const std::string& where, const std::string& key) {
    if (!j.contains(key))
        throw InvalidParameter("config: missing key '" + key + "' in " + where);
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw InvalidParameter("config: bad value for '" + key + "' in " + where);
    }
}

template <typename T>
std::optional<T> get_optional(const json& j, const std::string& where, const std::string& key) {
    if (!j.contains(key)) return std::nullopt;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw InvalidParameter("config: bad value for '" + key + "' in " + where);
    }
}

} // namespace detail

struct EquationConfig {
    int n = 1;
    std::vector<double> a{-1.0};
    std::string kappa = "cos";  // cos | sin
};

struct PhiConfig {
    std::string kind = "gaussian";  // gaussian | power | piecewise-power | exp-power
    double alpha = 2.0;
    double a_scale = 1.0;
};

struct ZConfig {
    std::string kind = "log-power";  // power | log-power
    double alpha = 1.0;
};

struct SpectralConfig {
    std::string form = "atoms";  // atoms | density | grid
    std::vector<std::array<double, 2>> atoms;        // [lambda, mass]
    std::vector<std::array<double, 3>> grid;         // [lambda, mu, mass]
    std::string density = "gaussian";                // gaussian | cauchy-truncated | uniform
    double scale = 1.0;
    double mass = 1.0;
    double lambda_max = 8.0;
};

struct DomainConfig {
    double a = 0.0, b = 1.0;   // time
    double c = -1.0, d = 1.0;  // space
};

struct BoundsConfig {
    double u_min = 1.0;
    double u_max = 10.0;
    int u_steps = 10;
    bool prefactor2 = true;
};

struct GrowthConfig {
    bool present = false;
    double half_width = 0.5;              // A
    std::optional<double> L;              // geometric segmentation
    std::vector<double> b_points;         // or explicit points
    double delta = 1.0;
    std::optional<double> s;              // override
    std::optional<double> theta;          // override (default 0.5)
    std::int64_t k_max = 10000;
    std::int64_t k_diag = 64;
    std::vector<double> c_values;         // custom weights for explicit points
};

struct SimulateConfig {
    std::int64_t replications = 1000;
    int nt = 64;
    int nx = 64;
    std::uint64_t seed = 1;
};

struct VerifyConfig {
    double confidence = 0.95;
};

struct ExistenceConfig {
    double log_exponent = 1.0;  // exponent on the log factors in the power-phi test
};

/// Full run configuration; one JSON document drives every subcommand.
struct RunConfig {
    EquationConfig equation;
    PhiConfig phi;
    ZConfig zfun;
    SpectralConfig spectral;
    DomainConfig domain;
    double c_y = 1.0;
    BoundsConfig bounds;
    GrowthConfig growth;
    SimulateConfig simulate;
    VerifyConfig verify;
    ExistenceConfig existence;

    NFunction make_phi() const {
        if (phi.kind == "gaussian") return NFunction::gaussian();
        if (phi.kind == "power") return NFunction::power(phi.alpha);
        if (phi.kind == "piecewise-power") return NFunction::piecewise_power(phi.alpha);
        if (phi.kind == "exp-power") return NFunction::exp_power(phi.alpha, phi.a_scale);
        throw InvalidParameter("config: unknown phi kind '" + phi.kind + "'");
    }

    AdmissibleFunction make_z() const {
        if (zfun.kind == "power") return AdmissibleFunction::power(zfun.alpha);
        if (zfun.kind == "log-power") return AdmissibleFunction::log_power(zfun.alpha);
        throw InvalidParameter("config: unknown Z kind '" + zfun.kind + "'");
    }

    EquationSpec make_equation() const {
        const auto kappa = equation.kappa == "sin" ? EquationSpec::Kappa::Sin
                                                   : EquationSpec::Kappa::Cos;
        if (equation.kappa != "sin" && equation.kappa != "cos")
            throw InvalidParameter("config: kappa must be 'cos' or 'sin'");
        return EquationSpec(equation.n, equation.a, kappa);
    }

    SpectralMeasure make_measure() const {
        if (spectral.form == "atoms") {
            std::vector<SpectralAtom> atoms;
            atoms.reserve(spectral.atoms.size());
            for (const auto& a : spectral.atoms) atoms.push_back({a[0], a[1]});
            return SpectralMeasure::from_atoms(std::move(atoms));
        }
        if (spectral.form == "density") {
            SpectralDensity::Name name;
            if (spectral.density == "gaussian") name = SpectralDensity::Name::Gaussian;
            else if (spectral.density == "cauchy-truncated") name = SpectralDensity::Name::CauchyTruncated;
            else if (spectral.density == "uniform") name = SpectralDensity::Name::Uniform;
            else throw InvalidParameter("config: unknown density '" + spectral.density + "'");
            return SpectralMeasure::from_density(
                SpectralDensity(name, spectral.scale, spectral.mass, spectral.lambda_max));
        }
        if (spectral.form == "grid") {
            std::vector<GridAtom> grid;
            grid.reserve(spectral.grid.size());
            for (const auto& g : spectral.grid) grid.push_back({g[0], g[1], g[2]});
            return SpectralMeasure::from_grid(std::move(grid));
        }
        throw InvalidParameter("config: unknown spectral form '" + spectral.form + "'");
    }

    DomainRect make_domain() const { return DomainRect(domain.a, domain.b, domain.c, domain.d); }

    Segmentation make_segmentation() const {
        if (!growth.present) throw InvalidParameter("config: growth section is missing");
        if (growth.L)
            return Segmentation::geometric(growth.half_width, *growth.L, growth.k_max);
        if (!growth.b_points.empty())
            return Segmentation::from_points(growth.half_width, growth.b_points);
        throw InvalidParameter("config: growth needs either L or explicit b points");
    }

    static RunConfig from_json(const json& j);
    json to_json() const;
};

inline RunConfig RunConfig::from_json(const json& j) {
    detail::require_keys(j, "root",
                         {"equation", "phi", "Z", "spectral", "domain", "C_y", "bounds", "growth",
                          "simulate", "verify", "existence"});
    RunConfig c;

    {
        const json& e = j.contains("equation") ? j.at("equation") : json::object();
        detail::require_keys(e, "equation", {"N", "a", "kappa"});
        if (j.contains("equation")) {
            c.equation.n = detail::get_required<int>(e, "equation", "N");
            c.equation.a = detail::get_required<std::vector<double>>(e, "equation", "a");
            c.equation.kappa = detail::get_optional<std::string>(e, "equation", "kappa").value_or("cos");
        }
    }
    if (j.contains("phi")) {
        const json& p = j.at("phi");
        detail::require_keys(p, "phi", {"kind", "alpha", "a_scale"});
        c.phi.kind = detail::get_required<std::string>(p, "phi", "kind");
        c.phi.alpha = detail::get_optional<double>(p, "phi", "alpha").value_or(2.0);
        c.phi.a_scale = detail::get_optional<double>(p, "phi", "a_scale").value_or(1.0);
    }
    if (j.contains("Z")) {
        const json& z = j.at("Z");
        detail::require_keys(z, "Z", {"kind", "alpha"});
        c.zfun.kind = detail::get_required<std::string>(z, "Z", "kind");
        c.zfun.alpha = detail::get_required<double>(z, "Z", "alpha");
    }
    if (j.contains("spectral")) {
        const json& s = j.at("spectral");
        detail::require_keys(s, "spectral",
                             {"form", "atoms", "grid", "density", "scale", "mass", "lambda_max"});
        c.spectral.form = detail::get_required<std::string>(s, "spectral", "form");
        c.spectral.atoms =
            detail::get_optional<std::vector<std::array<double, 2>>>(s, "spectral", "atoms")
                .value_or(std::vector<std::array<double, 2>>{});
        c.spectral.grid =
            detail::get_optional<std::vector<std::array<double, 3>>>(s, "spectral", "grid")
                .value_or(std::vector<std::array<double, 3>>{});
        c.spectral.density =
            detail::get_optional<std::string>(s, "spectral", "density").value_or("gaussian");
        c.spectral.scale = detail::get_optional<double>(s, "spectral", "scale").value_or(1.0);
        c.spectral.mass = detail::get_optional<double>(s, "spectral", "mass").value_or(1.0);
        c.spectral.lambda_max =
            detail::get_optional<double>(s, "spectral", "lambda_max").value_or(8.0);
    }
    if (j.contains("domain")) {
        const json& d = j.at("domain");
        detail::require_keys(d, "domain", {"a", "b", "c", "d"});
        c.domain.a = detail::get_required<double>(d, "domain", "a");
        c.domain.b = detail::get_required<double>(d, "domain", "b");
        c.domain.c = detail::get_required<double>(d, "domain", "c");
        c.domain.d = detail::get_required<double>(d, "domain", "d");
    }
    if (j.contains("C_y")) {
        if (!j.at("C_y").is_number()) throw InvalidParameter("config: C_y must be a number");
        c.c_y = j.at("C_y").get<double>();
    }
    if (j.contains("bounds")) {
        const json& b = j.at("bounds");
        detail::require_keys(b, "bounds", {"u_min", "u_max", "u_steps", "prefactor2"});
        c.bounds.u_min = detail::get_required<double>(b, "bounds", "u_min");
        c.bounds.u_max = detail::get_required<double>(b, "bounds", "u_max");
        c.bounds.u_steps = detail::get_required<int>(b, "bounds", "u_steps");
        c.bounds.prefactor2 = detail::get_optional<bool>(b, "bounds", "prefactor2").value_or(true);
    }
    if (j.contains("growth")) {
        const json& g = j.at("growth");
        detail::require_keys(g, "growth",
                             {"A", "L", "b", "delta", "s", "theta", "K_max", "k_diag", "c_values"});
        c.growth.present = true;
        c.growth.half_width = detail::get_required<double>(g, "growth", "A");
        c.growth.L = detail::get_optional<double>(g, "growth", "L");
        c.growth.b_points = detail::get_optional<std::vector<double>>(g, "growth", "b")
                                .value_or(std::vector<double>{});
        c.growth.delta = detail::get_optional<double>(g, "growth", "delta").value_or(1.0);
        c.growth.s = detail::get_optional<double>(g, "growth", "s");
        c.growth.theta = detail::get_optional<double>(g, "growth", "theta");
        c.growth.k_max = detail::get_optional<std::int64_t>(g, "growth", "K_max").value_or(10000);
        c.growth.k_diag = detail::get_optional<std::int64_t>(g, "growth", "k_diag").value_or(64);
        c.growth.c_values = detail::get_optional<std::vector<double>>(g, "growth", "c_values")
                                .value_or(std::vector<double>{});
    }
    if (j.contains("simulate")) {
        const json& s = j.at("simulate");
        detail::require_keys(s, "simulate", {"replications", "nt", "nx", "seed"});
        c.simulate.replications =
            detail::get_optional<std::int64_t>(s, "simulate", "replications").value_or(1000);
        c.simulate.nt = detail::get_optional<int>(s, "simulate", "nt").value_or(64);
        c.simulate.nx = detail::get_optional<int>(s, "simulate", "nx").value_or(64);
        c.simulate.seed = detail::get_optional<std::uint64_t>(s, "simulate", "seed").value_or(1);
    }
    if (j.contains("verify")) {
        const json& v = j.at("verify");
        detail::require_keys(v, "verify", {"confidence"});
        c.verify.confidence =
            detail::get_optional<double>(v, "verify", "confidence").value_or(0.95);
    }
    if (j.contains("existence")) {
        const json& e = j.at("existence");
        detail::require_keys(e, "existence", {"log_exponent"});
        c.existence.log_exponent =
            detail::get_optional<double>(e, "existence", "log_exponent").value_or(1.0);
    }

    // Structural validation happens in the factories; run them now so a bad
    // config fails at load time, not mid-command.
    c.make_phi();
    c.make_z();
    c.make_equation();
    c.make_measure();
    c.make_domain();
    if (c.growth.present) c.make_segmentation();
    if (!(c.c_y > 0.0)) throw InvalidParameter("config: C_y must be positive");
    if (c.bounds.u_steps < 1) throw InvalidParameter("config: u_steps must be >= 1");
    if (!(c.bounds.u_max >= c.bounds.u_min)) throw InvalidParameter("config: u_max < u_min");
    if (c.simulate.replications < 0) throw InvalidParameter("config: replications must be >= 0");
    if (c.simulate.nt < 1 || c.simulate.nx < 1)
        throw InvalidParameter("config: grid must be at least 1x1");
    if (!(c.verify.confidence > 0.5 && c.verify.confidence < 1.0))
        throw InvalidParameter("config: confidence must lie in (0.5, 1)");
    return c;
}

inline json RunConfig::to_json() const {
    json j;
    j["equation"] = {{"N", equation.n}, {"a", equation.a}, {"kappa", equation.kappa}};
    j["phi"] = {{"kind", phi.kind}, {"alpha", phi.alpha}, {"a_scale", phi.a_scale}};
    j["Z"] = {{"kind", zfun.kind}, {"alpha", zfun.alpha}};
    {
        json s;
        s["form"] = spectral.form;
        if (!spectral.atoms.empty()) s["atoms"] = spectral.atoms;
        if (!spectral.grid.empty()) s["grid"] = spectral.grid;
        if (spectral.form == "density") {
            s["density"] = spectral.density;
            s["scale"] = spectral.scale;
            s["mass"] = spectral.mass;
            s["lambda_max"] = spectral.lambda_max;
        }
        j["spectral"] = s;
    }
    j["domain"] = {{"a", domain.a}, {"b", domain.b}, {"c", domain.c}, {"d", domain.d}};
    j["C_y"] = c_y;
    j["bounds"] = {{"u_min", bounds.u_min},
                   {"u_max", bounds.u_max},
                   {"u_steps", bounds.u_steps},
                   {"prefactor2", bounds.prefactor2}};
    if (growth.present) {
        json g;
        g["A"] = growth.half_width;
        if (growth.L) g["L"] = *growth.L;
        if (!growth.b_points.empty()) g["b"] = growth.b_points;
        g["delta"] = growth.delta;
        if (growth.s) g["s"] = *growth.s;
        if (growth.theta) g["theta"] = *growth.theta;
        g["K_max"] = growth.k_max;
        g["k_diag"] = growth.k_diag;
        if (!growth.c_values.empty()) g["c_values"] = growth.c_values;
        j["growth"] = g;
    }
    j["simulate"] = {{"replications", simulate.replications},
                     {"nt", simulate.nt},
                     {"nx", simulate.nx},
                     {"seed", simulate.seed}};
    j["verify"] = {{"confidence", verify.confidence}};
    j["existence"] = {{"log_exponent", existence.log_exponent}};
    return j;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidParameter("config: cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InvalidParameter(std::string("config: JSON parse error: ") + e.what());
    }
    return RunConfig::from_json(j);
}

} // namespace supbound
