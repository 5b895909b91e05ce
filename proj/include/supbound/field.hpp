#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "supbound/errors.hpp"
#include "supbound/rng.hpp"
#include "supbound/spectral.hpp"

namespace supbound {

/// Space-time rectangle [t_lo, t_hi] x [x_lo, x_hi], t_lo >= 0.
struct DomainRect {
    double t_lo, t_hi, x_lo, x_hi;

    DomainRect(double a, double b, double c, double d) : t_lo(a), t_hi(b), x_lo(c), x_hi(d) {
        if (!(a >= 0.0) || !(b > a) || !(d > c))
            throw InvalidParameter("DomainRect: need 0 <= t_lo < t_hi and x_lo < x_hi");
    }

    double t_len() const { return t_hi - t_lo; }
    double x_len() const { return x_hi - x_lo; }
    double max_side() const { return std::max(t_len(), x_len()); }
};

inline double drift_polynomial(const EquationSpec& eq, double lambda) { return eq.drift(lambda); }

/// Dispersion kernel I(t,x,lambda) = kappa(lambda x + t P(lambda)), |I| <= 1.
inline double kernel(const EquationSpec& eq, double t, double x, double lambda) {
    const double phase = lambda * x + t * eq.drift(lambda);
    return eq.kappa == EquationSpec::Kappa::Cos ? std::cos(phase) : std::sin(phase);
}

/// One realization of the solution field on a uniform grid.
struct FieldSample {
    std::vector<double> grid_t;
    std::vector<double> grid_x;
    std::vector<double> values;  // row-major, values[i*nx + j] = U(t_i, x_j)
    std::uint64_t seed = 0;

    std::size_t nt() const { return grid_t.size(); }
    std::size_t nx() const { return grid_x.size(); }
    double at(std::size_t i, std::size_t j) const { return values[i * grid_x.size() + j]; }
};

inline std::vector<double> uniform_grid(double lo, double hi, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    if (n == 1) {
        g[0] = lo;
        return g;
    }
    for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    return g;
}

/// Equal-mass binning of a density restricted to [-lambda_max, lambda_max]:
/// every bin carries the same mass and sits at its mass centroid. Mass beyond
/// the declared truncation is dropped, which only lowers the simulated field.
inline std::vector<SpectralAtom> equal_mass_bins(const SpectralDensity& d, int nbins) {
    if (nbins < 1) throw InvalidParameter("equal_mass_bins: need at least one bin");
    const int m = 1 << 17;
    const double lo = -d.lambda_max, hi = d.lambda_max;
    const double h = (hi - lo) / m;
    std::vector<double> cmass(m + 1, 0.0), cmom(m + 1, 0.0);
    double fprev = d(lo);
    for (int i = 1; i <= m; ++i) {
        const double x = lo + h * i;
        const double f = d(x);
        const double xm = x - 0.5 * h;
        cmass[i] = cmass[i - 1] + 0.5 * h * (fprev + f);
        cmom[i] = cmom[i - 1] + 0.5 * h * (fprev + f) * xm;
        fprev = f;
    }
    const double total = cmass[m];
    if (!(total > 0.0)) throw InvalidParameter("equal_mass_bins: density carries no mass");

    std::vector<SpectralAtom> atoms;
    atoms.reserve(static_cast<std::size_t>(nbins));
    const auto locate = [&](double target) {
        // inverse CDF by binary search plus linear interpolation
        int a = 0, b = m;
        while (b - a > 1) {
            const int mid = (a + b) / 2;
            (cmass[mid] < target ? a : b) = mid;
        }
        const double span = cmass[b] - cmass[a];
        const double frac = span > 0.0 ? (target - cmass[a]) / span : 0.0;
        return std::pair<int, double>(a, frac);
    };
    for (int k = 0; k < nbins; ++k) {
        const double m_lo = total * k / nbins, m_hi = total * (k + 1) / nbins;
        const auto [ia, fa] = locate(m_lo);
        const auto [ib, fb] = locate(m_hi);
        const double mom_lo = cmom[ia] + fa * (cmom[ia + 1] - cmom[ia]);
        const double mom_hi = cmom[ib] + fb * (cmom[ib + 1] - cmom[ib]);
        const double mass = m_hi - m_lo;
        atoms.push_back({(mom_hi - mom_lo) / mass, mass});
    }
    return atoms;
}

/// Atoms used for simulation: the stationary atoms themselves, or >= 2048
/// equal-mass bins of the density. Grid-form measures are not simulable (the
/// spectral sum needs uncorrelated increments).
inline std::vector<SpectralAtom> simulation_atoms(const SpectralMeasure& m, int min_bins = 2048) {
    switch (m.form()) {
        case SpectralMeasure::Form::DiagonalAtoms: return m.atoms();
        case SpectralMeasure::Form::DiagonalDensity: return equal_mass_bins(m.density(), min_bins);
        case SpectralMeasure::Form::AtomicGrid:
            throw UnsupportedMeasure("simulate: atomic-grid measures have no spectral-sum form");
    }
    return {};
}

/// Gaussian spectral increments for one replication: g_j ~ N(0, mass_j).
inline std::vector<double> draw_increments(const std::vector<SpectralAtom>& atoms,
                                           std::uint64_t seed, std::uint64_t replication) {
    std::vector<double> g(atoms.size());
    for (std::size_t j = 0; j < atoms.size(); ++j)
        g[j] = std::sqrt(atoms[j].mass) * rng::standard_normal(seed, replication, j);
    return g;
}

/// Simulates U(t,x) = sum_j I(t,x,lambda_j) g_j on an (nt x nx) uniform grid
/// including the rectangle's corners. Bit-reproducible per (seed, replication).
inline FieldSample simulate_field(const EquationSpec& eq, const std::vector<SpectralAtom>& atoms,
                                  const DomainRect& dom, int nt, int nx, std::uint64_t seed,
                                  std::uint64_t replication = 0) {
    if (nt < 1 || nx < 1) throw InvalidParameter("simulate_field: grid must be nonempty");
    FieldSample s;
    s.seed = seed;
    s.grid_t = uniform_grid(dom.t_lo, dom.t_hi, nt);
    s.grid_x = uniform_grid(dom.x_lo, dom.x_hi, nx);
    s.values.assign(static_cast<std::size_t>(nt) * nx, 0.0);

    const std::vector<double> g = draw_increments(atoms, seed, replication);
    const bool use_cos = eq.kappa == EquationSpec::Kappa::Cos;
    for (std::size_t j = 0; j < atoms.size(); ++j) {
        if (g[j] == 0.0) continue;
        const double lam = atoms[j].lambda;
        const double drift = eq.drift(lam);
        for (int it = 0; it < nt; ++it) {
            const double base = s.grid_t[it] * drift;
            double* row = s.values.data() + static_cast<std::size_t>(it) * nx;
            for (int ix = 0; ix < nx; ++ix) {
                const double phase = base + lam * s.grid_x[ix];
                row[ix] += g[j] * (use_cos ? std::cos(phase) : std::sin(phase));
            }
        }
    }
    return s;
}

inline FieldSample simulate_field(const EquationSpec& eq, const SpectralMeasure& m,
                                  const DomainRect& dom, int nt, int nx, std::uint64_t seed,
                                  std::uint64_t replication = 0) {
    return simulate_field(eq, simulation_atoms(m), dom, nt, nx, seed, replication);
}

/// Grid supremum of |U|; a lower bound for the path supremum over the rectangle.
inline double sup_abs(const FieldSample& s) {
    if (s.values.empty()) throw InvalidParameter("sup_abs: empty sample");
    double m = 0.0;
    for (double v : s.values) m = std::max(m, std::abs(v));
    return m;
}

} // namespace supbound
