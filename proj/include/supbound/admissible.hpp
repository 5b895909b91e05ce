#pragma once

#include <cmath>
#include <limits>

#include "supbound/errors.hpp"
#include "supbound/orlicz.hpp"
#include "supbound/quadrature.hpp"

namespace supbound {

enum class ZKind { Power, LogPower };

/// Increasing modulus function Z taming sine ratios: for all u, v != 0,
/// |sin(u/v)| <= Z(|u| + u0) / Z(|v| + u0).
///
///   Power     Z(u) = u^a,          0 < a <= 1,  u0 = 0
///   LogPower  Z(u) = ln^a(u + 1),  a > 0,       u0 = e^a - 1
///
/// u/Z(u) is nondecreasing beyond u0, which is what the sine-ratio bound needs.
class AdmissibleFunction {
public:
    static AdmissibleFunction power(double alpha) {
        if (!(alpha > 0.0 && alpha <= 1.0))
            throw InvalidParameter("AdmissibleFunction::power: alpha must lie in (0, 1]");
        return AdmissibleFunction(ZKind::Power, alpha, 0.0);
    }

    static AdmissibleFunction log_power(double alpha) {
        if (!(alpha > 0.0))
            throw InvalidParameter("AdmissibleFunction::log_power: alpha must be positive");
        return AdmissibleFunction(ZKind::LogPower, alpha, std::expm1(alpha));
    }

    ZKind kind() const { return kind_; }
    double alpha() const { return alpha_; }
    double u0() const { return u0_; }

    double value(double u) const {
        if (!(u >= 0.0)) throw InvalidParameter("AdmissibleFunction::value: u must be >= 0");
        switch (kind_) {
            case ZKind::Power: return std::pow(u, alpha_);
            case ZKind::LogPower: return std::pow(std::log1p(u), alpha_);
        }
        return 0.0;
    }

    /// Inverse on [0, inf): v^(1/a) or exp(v^(1/a)) - 1.
    double inverse(double v) const {
        if (!(v >= 0.0)) throw InvalidParameter("AdmissibleFunction::inverse: v must be >= 0");
        switch (kind_) {
            case ZKind::Power: return std::pow(v, 1.0 / alpha_);
            case ZKind::LogPower: {
                const double w = std::pow(v, 1.0 / alpha_);
                if (w > 700.0)
                    throw Overflow("AdmissibleFunction::inverse: exp argument exceeds 700");
                return std::expm1(w);
            }
        }
        return 0.0;
    }

    /// ln(inverse(v) - u0), evaluated without forming the overflowing inverse.
    /// Returns -inf where inverse(v) <= u0 (the integrands clamp that region to 0).
    double log_inverse_minus_u0(double v) const {
        if (!(v > 0.0)) return -std::numeric_limits<double>::infinity();
        switch (kind_) {
            case ZKind::Power: return std::log(v) / alpha_;
            case ZKind::LogPower: {
                const double w = std::pow(v, 1.0 / alpha_);
                if (w <= alpha_) return -std::numeric_limits<double>::infinity();
                // ln(e^w - e^alpha) = w + ln(1 - e^(alpha - w))
                return w + std::log1p(-std::exp(alpha_ - w));
            }
        }
        return 0.0;
    }

    /// Z(|u| + u0)/Z(|v| + u0); dominates |sin(u/v)|.
    double sin_ratio_bound(double u, double v) const {
        if (v == 0.0) throw InvalidParameter("sin_ratio_bound: v must be nonzero");
        return value(std::abs(u) + u0_) / value(std::abs(v) + u0_);
    }

private:
    AdmissibleFunction(ZKind kind, double alpha, double u0)
        : kind_(kind), alpha_(alpha), u0_(u0) {}

    ZKind kind_;
    double alpha_;
    double u0_;
};

/// The admissibility integral  int_0^eps Psi(ln(Z^{-1}(1/s) - u0)) ds.
/// Finite exactly when Z provides enough modulus control for the entropy
/// machinery; the result reports divergence instead of throwing.
///
/// Where the Psi argument is nonpositive (possible for small 1/s) the integrand
/// is taken as 0; only a neighbourhood of s = 0 decides convergence.
inline quad::Improper admissibility_integral(const AdmissibleFunction& z, const NFunction& f,
                                             double eps) {
    if (!(eps > 0.0)) throw InvalidParameter("admissibility_integral: eps must be positive");
    // Z^{-1}(1/s) - u0 > 1 exactly when s < 1 / Z(1 + u0).
    const double cut = 1.0 / z.value(1.0 + z.u0());
    const double hi = std::min(eps, cut * (1.0 - 1e-15));
    if (!(hi > 0.0)) return {};
    const auto integrand = [&](double s) {
        const double a = z.log_inverse_minus_u0(1.0 / s);
        return a > 0.0 ? f.psi(a) : 0.0;
    };
    return quad::integrate_to_zero(integrand, hi);
}

} // namespace supbound
