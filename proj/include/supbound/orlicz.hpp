#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "supbound/errors.hpp"

namespace supbound {

enum class NKind { Gaussian, PowerAlpha, PiecewisePower, ExpPower };

/// Orlicz N-function from the built-in catalog.
///
///   Gaussian         phi(x) = x^2/2
///   PowerAlpha       phi(x) = |x|^a / a                          1 < a <= 2
///   PiecewisePower   phi(x) = x^2/a (|x| <= 1), |x|^a/a else     a > 2
///   ExpPower         phi(x) = exp(c |x|^a) - 1                   1 < a <= 2, c > 0
///
/// Every entry is even, convex, vanishes only at 0, is sublinear at 0 and
/// superlinear at infinity, and satisfies liminf_{x->0} phi(x)/x^2 > 0.
class NFunction {
public:
    static NFunction gaussian() { return NFunction(NKind::Gaussian, 2.0, 0.0); }

    static NFunction power(double alpha) {
        if (!(alpha > 1.0 && alpha <= 2.0))
            throw InvalidParameter("NFunction::power: alpha must lie in (1, 2]");
        return NFunction(NKind::PowerAlpha, alpha, 0.0);
    }

    static NFunction piecewise_power(double alpha) {
        if (!(alpha > 2.0))
            throw InvalidParameter("NFunction::piecewise_power: alpha must exceed 2");
        return NFunction(NKind::PiecewisePower, alpha, 0.0);
    }

    static NFunction exp_power(double alpha, double a_scale) {
        if (!(alpha > 1.0 && alpha <= 2.0))
            throw InvalidParameter("NFunction::exp_power: alpha must lie in (1, 2]");
        if (!(a_scale > 0.0))
            throw InvalidParameter("NFunction::exp_power: scale must be positive");
        return NFunction(NKind::ExpPower, alpha, a_scale);
    }

    NKind kind() const { return kind_; }
    double alpha() const { return alpha_; }
    double scale() const { return a_scale_; }

    double value(double x) const {
        const double t = std::abs(x);
        switch (kind_) {
            case NKind::Gaussian: return 0.5 * t * t;
            case NKind::PowerAlpha: return std::pow(t, alpha_) / alpha_;
            case NKind::PiecewisePower:
                return t <= 1.0 ? t * t / alpha_ : std::pow(t, alpha_) / alpha_;
            case NKind::ExpPower: return std::expm1(a_scale_ * std::pow(t, alpha_));
        }
        return 0.0;
    }

    /// Unique y >= 0 with value(y) = v.
    double inverse(double v) const {
        if (!(v >= 0.0)) throw InvalidParameter("NFunction::inverse: v must be >= 0");
        switch (kind_) {
            case NKind::Gaussian: return std::sqrt(2.0 * v);
            case NKind::PowerAlpha: return std::pow(alpha_ * v, 1.0 / alpha_);
            case NKind::PiecewisePower:
                return v <= 1.0 / alpha_ ? std::sqrt(alpha_ * v)
                                         : std::pow(alpha_ * v, 1.0 / alpha_);
            case NKind::ExpPower: return std::pow(std::log1p(v) / a_scale_, 1.0 / alpha_);
        }
        return 0.0;
    }

    /// Young-Fenchel conjugate sup_y (x y - phi(y)). Closed form for Gaussian and
    /// PiecewisePower; golden-section maximisation otherwise.
    double conjugate(double x) const {
        const double t = std::abs(x);
        switch (kind_) {
            case NKind::Gaussian: return 0.5 * t * t;
            case NKind::PiecewisePower: {
                if (t <= 2.0 / alpha_) return alpha_ * t * t / 4.0;
                if (t <= 1.0) return t - 1.0 / alpha_;
                const double p = conjugate_exponent();
                return std::pow(t, p) / p;
            }
            default: return conjugate_numeric(x);
        }
    }

    /// Conjugate by bracket expansion plus golden-section search, for any catalog
    /// entry. Kept separate from conjugate() so the two routes can be compared.
    double conjugate_numeric(double x) const {
        const double t = std::abs(x);
        if (t == 0.0) return 0.0;
        const auto g = [&](double y) { return t * y - value(y); };
        // Expand until the objective has started to decrease; concavity then
        // guarantees the maximiser sits inside [0, b].
        double b = 1.0;
        while (g(b) > g(0.5 * b)) {
            b *= 2.0;
            if (b > 1e30)
                throw NonConvergence("conjugate: objective still rising at 1e30; not an N-function");
        }
        const double invphi = 0.5 * (std::sqrt(5.0) - 1.0);
        double lo = 0.0, hi = b;
        double y1 = hi - invphi * (hi - lo), y2 = lo + invphi * (hi - lo);
        double g1 = g(y1), g2 = g(y2);
        const double tol = 1e-13 * std::max(1.0, b);
        for (int it = 0; it < 220 && hi - lo > tol; ++it) {
            if (g1 < g2) {
                lo = y1; y1 = y2; g1 = g2;
                y2 = lo + invphi * (hi - lo); g2 = g(y2);
            } else {
                hi = y2; y2 = y1; g2 = g1;
                y1 = hi - invphi * (hi - lo); g1 = g(y1);
            }
        }
        return std::max({g1, g2, 0.0});
    }

    /// Entropy weight Psi(v) = v / inverse(v), v > 0.
    double psi(double v) const {
        if (!(v > 0.0)) throw InvalidParameter("NFunction::psi: v must be positive");
        return v / inverse(v);
    }

    /// p with 1/p + 1/alpha = 1 (power-type tails).
    double conjugate_exponent() const {
        if (kind_ == NKind::Gaussian) return 2.0;
        return alpha_ / (alpha_ - 1.0);
    }

private:
    NFunction(NKind kind, double alpha, double a_scale)
        : kind_(kind), alpha_(alpha), a_scale_(a_scale) {
        validate_probes();
    }

    // Probe-grid sanity of the N-function axioms; the catalog passes by
    // construction, this guards future edits.
    void validate_probes() const {
        if (value(0.0) != 0.0) throw InvalidParameter("N-function: phi(0) != 0");
        if (!(value(1e-6) / 1e-6 < 1e-2))
            throw InvalidParameter("N-function: phi(x)/x does not vanish at 0");
        if (!(value(1e6) / 1e6 > 1e2))
            throw InvalidParameter("N-function: phi(x)/x does not diverge at infinity");
        for (int i = -20; i < 19; ++i) {
            const double x0 = 0.5 * i, x2 = 0.5 * (i + 2);
            const double lhs = value(0.5 * (x0 + x2));
            const double rhs = 0.5 * (value(x0) + value(x2));
            if (std::isfinite(rhs) && lhs > rhs + 1e-12 * std::max(1.0, std::abs(rhs)))
                throw InvalidParameter("N-function: convexity probe failed");
        }
    }

    NKind kind_;
    double alpha_;
    double a_scale_;
};

/// liminf_{x->0} phi(x)/x^2 > 0, probed on the dyadic sequence 2^-1..2^-40.
inline bool condition_q(const std::function<double(double)>& phi) {
    double worst = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 40; ++k) {
        const double x = std::ldexp(1.0, -k);
        worst = std::min(worst, phi(x) / (x * x));
    }
    return worst > 1e-12;
}

inline bool check_condition_q(const NFunction& f) {
    return condition_q([&](double x) { return f.value(x); });
}

/// P{|zeta| > u} <= min(1, 2 exp(-phi*(u/tau))) for a variable with standard tau.
/// tau = 0 is the degenerate zero variable: the tail is 0 for every u > 0.
inline double tail_bound(const NFunction& f, double u, double tau) {
    if (!(u > 0.0)) throw InvalidParameter("tail_bound: u must be positive");
    if (!(tau >= 0.0)) throw InvalidParameter("tail_bound: tau must be >= 0");
    if (tau == 0.0) return 0.0;
    return std::min(1.0, 2.0 * std::exp(-f.conjugate(u / tau)));
}

} // namespace supbound
