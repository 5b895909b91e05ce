#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "supbound/admissible.hpp"
#include "supbound/errors.hpp"
#include "supbound/quadrature.hpp"

#ifndef M_PI
#define M_PI 3.14159265358979323846
#endif

namespace supbound {

/// Odd-order dispersive equation  sum_{k=1}^N a_k d^{2k+1}U/dx^{2k+1} = dU/dt,
/// with kernel flavour cos or sin.
struct EquationSpec {
    enum class Kappa { Cos, Sin };

    int highest_index = 1;        // N; the equation order is 2N+1
    std::vector<double> a;        // a_1 .. a_N
    Kappa kappa = Kappa::Cos;

    EquationSpec(int n, std::vector<double> coeffs, Kappa k)
        : highest_index(n), a(std::move(coeffs)), kappa(k) {
        if (highest_index < 1) throw InvalidParameter("EquationSpec: N must be >= 1");
        if (static_cast<int>(a.size()) != highest_index)
            throw InvalidParameter("EquationSpec: need exactly N coefficients");
        if (a.back() == 0.0)
            throw InvalidParameter("EquationSpec: a_N must be nonzero");
        for (double c : a)
            if (!std::isfinite(c)) throw InvalidParameter("EquationSpec: coefficients must be finite");
    }

    int order() const { return 2 * highest_index + 1; }

    /// Drift polynomial P(lambda) = sum a_k lambda^{2k+1} (-1)^k, Horner in lambda^2.
    double drift(double lambda) const {
        const double y = lambda * lambda;
        double acc = 0.0;
        for (int k = highest_index; k >= 1; --k)
            acc = acc * y + ((k % 2) ? -a[k - 1] : a[k - 1]);
        return acc * y * lambda;
    }
};

/// Named spectral density with a declared truncation frequency and an analytic
/// bound on the mass beyond it. The callable extends over the whole line; the
/// truncation only governs windowed quadrature and simulation binning.
struct SpectralDensity {
    enum class Name { Gaussian, CauchyTruncated, Uniform };

    Name name = Name::Gaussian;
    double scale = 1.0;
    double mass = 1.0;
    double lambda_max = 8.0;

    SpectralDensity() = default;
    SpectralDensity(Name n, double s, double m, double lmax)
        : name(n), scale(s), mass(m), lambda_max(lmax) {
        if (!(scale > 0.0) || !(mass > 0.0) || !(lambda_max > 0.0))
            throw InvalidParameter("SpectralDensity: scale, mass, lambda_max must be positive");
    }

    double operator()(double lambda) const {
        switch (name) {
            case Name::Gaussian: {
                const double t = lambda / scale;
                return mass * std::exp(-t * t) / (scale * std::sqrt(M_PI));
            }
            case Name::CauchyTruncated:
                return mass * scale / (M_PI * (scale * scale + lambda * lambda));
            case Name::Uniform:
                return std::abs(lambda) <= scale ? mass / (2.0 * scale) : 0.0;
        }
        return 0.0;
    }

    /// Mass beyond the declared truncation, in closed form.
    double tail_mass() const {
        switch (name) {
            case Name::Gaussian: return mass * std::erfc(lambda_max / scale);
            case Name::CauchyTruncated:
                return mass * (1.0 - (2.0 / M_PI) * std::atan(lambda_max / scale));
            case Name::Uniform:
                return mass * std::max(0.0, 1.0 - lambda_max / scale);
        }
        return 0.0;
    }
};

struct SpectralAtom {
    double lambda;
    double mass;  // >= 0 in the stationary (uncorrelated-increment) form
};

struct GridAtom {
    double lambda;
    double mu;
    double mass;  // signed; only finite variation is assumed
};

/// Outcome of a measure integral: either a value or a divergence verdict.
struct IntegralResult {
    double value = 0.0;
    bool divergent = false;
    bool satisfied() const { return !divergent; }
};

/// Covariance structure of the spectral process. Diagonal forms encode
/// uncorrelated increments (mass on lambda = mu); the grid form carries a
/// general signed finite-variation mass table.
class SpectralMeasure {
public:
    enum class Form { DiagonalAtoms, DiagonalDensity, AtomicGrid };

    static SpectralMeasure from_atoms(std::vector<SpectralAtom> atoms) {
        SpectralMeasure m;
        m.form_ = Form::DiagonalAtoms;
        for (const auto& a : atoms) {
            if (!(a.mass >= 0.0) || !std::isfinite(a.mass) || !std::isfinite(a.lambda))
                throw InvalidParameter("SpectralMeasure: stationary atoms need finite mass >= 0");
        }
        m.atoms_ = std::move(atoms);
        return m;
    }

    static SpectralMeasure from_density(SpectralDensity d) {
        SpectralMeasure m;
        m.form_ = Form::DiagonalDensity;
        m.density_ = d;
        return m;
    }

    static SpectralMeasure from_grid(std::vector<GridAtom> grid) {
        SpectralMeasure m;
        m.form_ = Form::AtomicGrid;
        for (const auto& g : grid)
            if (!std::isfinite(g.mass) || !std::isfinite(g.lambda) || !std::isfinite(g.mu))
                throw InvalidParameter("SpectralMeasure: grid entries must be finite");
        m.grid_ = std::move(grid);
        return m;
    }

    Form form() const { return form_; }
    const std::vector<SpectralAtom>& atoms() const { return atoms_; }
    const std::vector<GridAtom>& grid() const { return grid_; }
    const SpectralDensity& density() const { return density_; }
    bool diagonal() const { return form_ != Form::AtomicGrid; }

    /// Total variation: sum of masses, or windowed quadrature plus the declared
    /// tail bound for the density form.
    double total_variation() const {
        switch (form_) {
            case Form::DiagonalAtoms: {
                double s = 0.0;
                for (const auto& a : atoms_) s += a.mass;
                return s;
            }
            case Form::DiagonalDensity: {
                const auto f = [this](double l) { return density_(l); };
                return quad::adaptive_simpson(f, -density_.lambda_max, 0.0, 1e-9) +
                       quad::adaptive_simpson(f, 0.0, density_.lambda_max, 1e-9) +
                       density_.tail_mass();
            }
            case Form::AtomicGrid: {
                double s = 0.0;
                for (const auto& g : grid_) s += std::abs(g.mass);
                return s;
            }
        }
        return 0.0;
    }

    /// int w(lambda) dF over the diagonal forms. Density integrals run over
    /// expanding dyadic windows so a non-integrable tail is reported as
    /// divergent rather than silently truncated.
    IntegralResult integrate_diagonal(const std::function<double(double)>& w) const {
        switch (form_) {
            case Form::DiagonalAtoms: {
                double s = 0.0;
                for (const auto& a : atoms_) s += w(a.lambda) * a.mass;
                return {s, false};
            }
            case Form::DiagonalDensity: {
                const auto f = [&](double l) { return w(l) * density_(l); };
                const auto r = quad::integrate_real_line(f, density_.lambda_max);
                return {r.value, r.divergent};
            }
            case Form::AtomicGrid:
                throw UnsupportedMeasure("integrate_diagonal: measure is not diagonal");
        }
        return {};
    }

    /// int int w(lambda) w(mu) d|Gamma|. Diagonal forms integrate w^2 against dF;
    /// the grid form sums over its finitely many atoms with |mass|.
    IntegralResult integrate_product(const std::function<double(double)>& w) const {
        if (form_ == Form::AtomicGrid) {
            double s = 0.0;
            for (const auto& g : grid_) s += w(g.lambda) * w(g.mu) * std::abs(g.mass);
            return {s, false};
        }
        return integrate_diagonal([&](double l) {
            const double v = w(l);
            return v * v;
        });
    }

private:
    SpectralMeasure() = default;

    Form form_ = Form::DiagonalAtoms;
    std::vector<SpectralAtom> atoms_;
    std::vector<GridAtom> grid_;
    SpectralDensity density_;
};

inline double total_variation(const SpectralMeasure& m) { return m.total_variation(); }

/// C_Z^2 = int int (Z(|l|/2+u0) + Z(|P(l)|/2+u0)) (same in mu) d|Gamma|.
inline IntegralResult c_z_squared(const SpectralMeasure& m, const AdmissibleFunction& z,
                                  const EquationSpec& eq) {
    const double u0 = z.u0();
    return m.integrate_product([&](double l) {
        return z.value(0.5 * std::abs(l) + u0) + z.value(0.5 * std::abs(eq.drift(l)) + u0);
    });
}

/// Existence of the classical solution:
/// int int |l|^{2N+1} |mu|^{2N+1} Z(u0+|l|^{2N+1}) Z(u0+|mu|^{2N+1}) d|Gamma|.
inline IntegralResult existence_classical(const SpectralMeasure& m, const AdmissibleFunction& z,
                                          const EquationSpec& eq) {
    const double u0 = z.u0();
    const double ord = eq.order();
    return m.integrate_product([&](double l) {
        const double p = std::pow(std::abs(l), ord);
        return p * z.value(u0 + p);
    });
}

/// Existence of the generalized solution: same with the |l|^{2N+1} factors dropped.
inline IntegralResult existence_generalized(const SpectralMeasure& m, const AdmissibleFunction& z,
                                            const EquationSpec& eq) {
    const double u0 = z.u0();
    const double ord = eq.order();
    return m.integrate_product([&](double l) { return z.value(u0 + std::pow(std::abs(l), ord)); });
}

/// Power-type phi(x) = |x|^p/p variant:
/// int int |l mu|^{2N+1} (ln(1+|l|) ln(1+|mu|))^alpha d|Gamma|, alpha > 1 - 1/p.
inline IntegralResult existence_power_phi(const SpectralMeasure& m, double alpha_exponent,
                                          double p, const EquationSpec& eq) {
    if (!(p > 1.0)) throw InvalidParameter("existence_power_phi: p must exceed 1");
    if (!(alpha_exponent > 1.0 - 1.0 / p))
        throw InvalidParameter("existence_power_phi: alpha must exceed 1 - 1/p");
    const double ord = eq.order();
    return m.integrate_product([&](double l) {
        const double al = std::abs(l);
        return std::pow(al, ord) * std::pow(std::log1p(al), alpha_exponent);
    });
}

} // namespace supbound
