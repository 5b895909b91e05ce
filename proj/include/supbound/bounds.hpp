#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <mutex>

#include "supbound/admissible.hpp"
#include "supbound/errors.hpp"
#include "supbound/field.hpp"
#include "supbound/orlicz.hpp"
#include "supbound/quadrature.hpp"
#include "supbound/spectral.hpp"

namespace supbound {

/// ln(half_side * e^{log_x} + 1), robust against log_x = +/-inf and overflow.
inline double log1p_scaled_exp(double half_side, double log_x) {
    if (!(half_side > 0.0) || log_x == -std::numeric_limits<double>::infinity()) return 0.0;
    if (log_x < 500.0) return std::log1p(half_side * std::exp(log_x));
    return log_x + std::log(half_side) + std::log1p(std::exp(-log_x) / half_side);
}

/// Shared context for the supremum bounds: the Orlicz function, the modulus
/// function Z, the spectral measure with its derived constants, and the
/// determining constant C_y of the initial condition.
///
/// Construction validates what the bounds rely on: liminf phi/x^2 > 0,
/// Z admissible for phi, and a convergent C_Z^2 integral.
class BoundCore {
public:
    BoundCore(NFunction phi, AdmissibleFunction z, SpectralMeasure measure, EquationSpec eq,
              double c_y)
        : phi_(phi), z_(z), measure_(std::move(measure)), eq_(std::move(eq)), c_y_(c_y) {
        if (!(c_y_ > 0.0)) throw InvalidParameter("BoundCore: C_y must be positive");
        if (!check_condition_q(phi_))
            throw InvalidParameter("BoundCore: phi fails the quadratic lower-limit condition");
        const auto adm = admissibility_integral(z_, phi_, 0.1);
        if (adm.divergent)
            throw InvalidParameter("BoundCore: Z is not admissible for this phi");
        gamma_raw_ = measure_.total_variation();
        if (!(gamma_raw_ > 0.0) || !std::isfinite(gamma_raw_))
            throw InvalidParameter("BoundCore: measure must have positive finite variation");
        const auto czz = c_z_squared(measure_, z_, eq_);
        if (czz.divergent)
            throw InvalidParameter("BoundCore: C_Z^2 integral diverges for this measure");
        c_z_ = std::sqrt(czz.value);
    }

    const NFunction& phi() const { return phi_; }
    const AdmissibleFunction& z() const { return z_; }
    const SpectralMeasure& measure() const { return measure_; }
    const EquationSpec& equation() const { return eq_; }

    double c_y() const { return c_y_; }
    double c_z() const { return c_z_; }
    double gamma_raw() const { return gamma_raw_; }       // int int d|Gamma|
    double gamma_big() const { return c_y_ * gamma_raw_; }

    /// ln(Z^{-1}(2 C_Z C_y / s) - u0): the log modulus bracket at entropy scale s.
    double log_modulus_arg(double s) const {
        return z_.log_inverse_minus_u0(2.0 * c_z_ * c_y_ / s);
    }

private:
    NFunction phi_;
    AdmissibleFunction z_;
    SpectralMeasure measure_;
    EquationSpec eq_;
    double c_y_ = 1.0;
    double c_z_ = 0.0;
    double gamma_raw_ = 0.0;
};

/// Bounded-domain supremum bound
///   P{ sup |U| > u } <= pf * exp(-phi*((u(1-theta) - (2/theta) I(min(theta Gamma, gamma0))) / Gamma))
/// with I the entropy integral over the rectangle, gamma0 the entropy cutoff,
/// and pf = 2 by default (a flag drops the prefactor).
class BoundEngine {
public:
    BoundEngine(BoundCore core, DomainRect dom) : core_(std::move(core)), dom_(dom) {}

    const BoundCore& core() const { return core_; }
    const DomainRect& domain() const { return dom_; }

    double gamma_big() const { return core_.gamma_big(); }

    /// Entropy cutoff gamma0 = 2 C_y C_Z / Z(1/kappa + u0), kappa the longest side.
    double gamma0() const {
        const double kappa = dom_.max_side();
        return 2.0 * core_.c_z() * core_.c_y() / core_.z().value(1.0 / kappa + core_.z().u0());
    }

    /// I(delta) = int_0^delta Psi(ln[(t_len/2 X(s) + 1)(x_len/2 X(s) + 1)]) ds
    /// with X(s) = Z^{-1}(2 C_Z C_y / s) - u0. The integrand is clamped to 0
    /// where the bracket drops below 1 (only reachable beyond the cutoff).
    double entropy_integral(double delta) const {
        if (!(delta > 0.0)) throw InvalidParameter("entropy_integral: delta must be positive");
        {
            std::lock_guard<std::mutex> lock(cache_mutex_);
            auto it = entropy_cache_.find(delta);
            if (it != entropy_cache_.end()) return it->second;
        }
        const double ht = 0.5 * dom_.t_len(), hx = 0.5 * dom_.x_len();
        const auto integrand = [&](double s) {
            const double lx = core_.log_modulus_arg(s);
            const double v = log1p_scaled_exp(ht, lx) + log1p_scaled_exp(hx, lx);
            return v > 0.0 ? core_.phi().psi(v) : 0.0;
        };
        const auto r = quad::integrate_to_zero(integrand, delta);
        if (r.divergent)
            throw NonConvergence("entropy_integral: contributions fail to decay (Z not admissible?)");
        std::lock_guard<std::mutex> lock(cache_mutex_);
        entropy_cache_.emplace(delta, r.value);
        return r.value;
    }

    /// Entropy integral at the working scale min(theta Gamma, gamma0).
    double entropy_at_theta(double theta) const {
        check_theta(theta);
        return entropy_integral(std::min(theta * gamma_big(), gamma0()));
    }

    /// Feasibility threshold 2 I(min(theta Gamma, gamma0)) / (theta (1-theta)).
    double threshold_u(double theta) const {
        check_theta(theta);
        return 2.0 * entropy_at_theta(theta) / (theta * (1.0 - theta));
    }

    /// Tail bound at level u for a fixed theta; requires u above the threshold.
    double bound_at(double u, double theta, bool prefactor2 = true) const {
        check_theta(theta);
        const double ihat = entropy_at_theta(theta);
        return bound_from_ihat(u, theta, ihat, prefactor2);
    }

    struct ThetaOpt {
        bool feasible = false;
        double theta = std::numeric_limits<double>::quiet_NaN();
        double bound = std::numeric_limits<double>::quiet_NaN();
        double threshold = std::numeric_limits<double>::quiet_NaN();  // at the chosen theta
        double min_feasible_u = std::numeric_limits<double>::infinity();
    };

    /// Minimizes the bound over theta: a 0.01-step grid restricted to feasible
    /// points, then golden-section refinement around the best grid point.
    /// Infeasible results report the smallest u any grid theta would accept.
    ThetaOpt optimize_theta(double u, bool prefactor2 = true) const {
        ThetaOpt out;
        double best_theta = 0.0, best_val = std::numeric_limits<double>::infinity();
        for (int i = 1; i <= 99; ++i) {
            const double theta = 0.01 * i;
            const double ihat = entropy_at_theta(theta);
            const double thr = 2.0 * ihat / (theta * (1.0 - theta));
            out.min_feasible_u = std::min(out.min_feasible_u, thr * (1.0 + 2e-12));
            if (!(u > thr * (1.0 + 1e-12))) continue;
            const double val = bound_from_ihat(u, theta, ihat, prefactor2);
            if (val < best_val) {
                best_val = val;
                best_theta = theta;
            }
        }
        if (best_theta == 0.0) return out;

        const auto objective = [&](double theta) {
            if (!(theta > 0.0 && theta < 1.0)) return std::numeric_limits<double>::infinity();
            const double ihat = entropy_at_theta(theta);
            const double thr = 2.0 * ihat / (theta * (1.0 - theta));
            if (!(u > thr * (1.0 + 1e-12))) return std::numeric_limits<double>::infinity();
            return bound_from_ihat(u, theta, ihat, prefactor2);
        };
        const double invphi = 0.5 * (std::sqrt(5.0) - 1.0);
        double lo = std::max(0.005, best_theta - 0.01), hi = std::min(0.995, best_theta + 0.01);
        double t1 = hi - invphi * (hi - lo), t2 = lo + invphi * (hi - lo);
        double f1 = objective(t1), f2 = objective(t2);
        for (int it = 0; it < 40; ++it) {
            if (f1 < f2) {
                hi = t2; t2 = t1; f2 = f1;
                t1 = hi - invphi * (hi - lo); f1 = objective(t1);
            } else {
                lo = t1; t1 = t2; f1 = f2;
                t2 = lo + invphi * (hi - lo); f2 = objective(t2);
            }
            if (std::min(f1, f2) < best_val) {
                best_val = std::min(f1, f2);
                best_theta = f1 < f2 ? t1 : t2;
            }
        }
        out.feasible = true;
        out.theta = best_theta;
        out.bound = best_val;
        out.threshold = threshold_u(best_theta);
        return out;
    }

    /// Closed-form majorant of the entropy integral for Gaussian phi and the
    /// log-power Z family:
    ///   I(delta) <= (delta/sqrt2) ln(t_len x_len / 4)^{1/2}
    ///             + delta (C/delta)^{1/(2a)} / (1 - 1/(2a)),   C = 2 C_Z C_y.
    /// Valid when both (side/2) e^a exceed 1 and t_len * x_len >= 4. The second
    /// term carries no 1/sqrt2: sqrt(ln(t_len x_len/4) + 2w) splits into
    /// sqrt(ln ...) + sqrt(2) w^{1/2}, and the sqrt(2) cancels the Psi prefactor.
    double entropy_log_family_upper(double delta) const {
        const auto& z = core_.z();
        if (core_.phi().kind() != NKind::Gaussian || z.kind() != ZKind::LogPower)
            throw InvalidParameter("entropy_log_family_upper: needs Gaussian phi and log-power Z");
        const double a = z.alpha();
        if (!(a > 0.5))
            throw InvalidParameter("entropy_log_family_upper: needs alpha > 1/2");
        const double tl = dom_.t_len(), xl = dom_.x_len();
        if (!(0.5 * tl * std::exp(a) > 1.0) || !(0.5 * xl * std::exp(a) > 1.0) || !(tl * xl >= 4.0))
            throw InvalidParameter("entropy_log_family_upper: domain outside the validity region");
        if (!(delta > 0.0)) throw InvalidParameter("entropy_log_family_upper: delta must be positive");
        const double c = 2.0 * core_.c_z() * core_.c_y();
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        return delta * inv_sqrt2 * std::sqrt(std::log(tl * xl / 4.0)) +
               delta * std::pow(c / delta, 0.5 / a) / (1.0 - 0.5 / a);
    }

    /// Closed-form majorant for Gaussian phi and the power Z family, with a free
    /// tuning exponent beta in (0, alpha):
    ///   I(delta) <= (2 C_Z C_y)^{b/2a} delta^{1-b/2a} / (sqrt(2b) (1 - b/2a))
    ///               * [ (t_len/2)^{b/2} + (x_len/2)^{b/2} ].
    double entropy_power_beta_upper(double delta, double beta) const {
        const auto& z = core_.z();
        if (core_.phi().kind() != NKind::Gaussian || z.kind() != ZKind::Power)
            throw InvalidParameter("entropy_power_beta_upper: needs Gaussian phi and power Z");
        const double a = z.alpha();
        if (!(beta > 0.0 && beta < a))
            throw InvalidParameter("entropy_power_beta_upper: beta must lie in (0, alpha)");
        if (!(delta > 0.0)) throw InvalidParameter("entropy_power_beta_upper: delta must be positive");
        const double c = 2.0 * core_.c_z() * core_.c_y();
        const double r = 0.5 * beta / a;
        return std::pow(c, r) * std::pow(delta, 1.0 - r) / (std::sqrt(2.0 * beta) * (1.0 - r)) *
               (std::pow(0.5 * dom_.t_len(), 0.5 * beta) + std::pow(0.5 * dom_.x_len(), 0.5 * beta));
    }

private:
    double bound_from_ihat(double u, double theta, double ihat, bool prefactor2) const {
        const double thr = 2.0 * ihat / (theta * (1.0 - theta));
        if (!(u > thr * (1.0 + 1e-12)))
            throw BelowThreshold("bound_at: u is below the feasibility threshold", thr);
        const double arg = (u * (1.0 - theta) - 2.0 / theta * ihat) / gamma_big();
        const double e = std::exp(-core_.phi().conjugate(arg));
        return std::min(1.0, (prefactor2 ? 2.0 : 1.0) * e);
    }

    static void check_theta(double theta) {
        if (!(theta > 0.0 && theta < 1.0))
            throw InvalidParameter("theta must lie strictly inside (0, 1)");
    }

    BoundCore core_;
    DomainRect dom_;
    mutable std::mutex cache_mutex_;
    mutable std::map<double, double> entropy_cache_;
};

/// Modulus of continuity sigma for the generic entropy bound. log_inv must
/// return ln(1 / sigma^{-1}(s)); keeping it in log form lets steep moduli
/// (e.g. exponential inverses) evaluate without overflow.
struct SigmaModulus {
    std::function<double(double)> sigma;     // h -> sigma(h), increasing, sigma(0+) = 0
    std::function<double(double)> log_inv;   // s -> ln(1 / sigma^{-1}(s))
};

/// Generic entropy tail bound for a separable process on a rectangle with
/// modulus sigma and uniform standard eps0:
///   2 exp(-phi*((u(1-theta) - (2/theta) I(min(theta eps0, gamma0))) / eps0)),
/// gamma0 = sigma(longest side),
/// I(d) = int_0^d Psi(ln[(len1/(2 s^{-1}) + 1)(len2/(2 s^{-1}) + 1)]) ds.
/// Degenerate sides (length 0) drop their bracket factor.
inline double generic_entropy_bound(const SigmaModulus& sig, const NFunction& phi, double len1,
                                    double len2, double eps0, double u, double theta) {
    if (!(theta > 0.0 && theta < 1.0))
        throw InvalidParameter("generic_entropy_bound: theta must lie in (0, 1)");
    if (!(eps0 > 0.0)) throw InvalidParameter("generic_entropy_bound: eps0 must be positive");
    if (!(len1 >= 0.0) || !(len2 >= 0.0) || !(std::max(len1, len2) > 0.0))
        throw InvalidParameter("generic_entropy_bound: need a nondegenerate rectangle");
    const double gamma0 = sig.sigma(std::max(len1, len2));
    const double delta = std::min(theta * eps0, gamma0);
    const auto integrand = [&](double s) {
        const double lx = sig.log_inv(s);
        const double v = log1p_scaled_exp(0.5 * len1, lx) + log1p_scaled_exp(0.5 * len2, lx);
        return v > 0.0 ? phi.psi(v) : 0.0;
    };
    const auto r = quad::integrate_to_zero(integrand, delta);
    if (r.divergent)
        throw NonConvergence("generic_entropy_bound: entropy integral fails to converge");
    const double thr = 2.0 * r.value / (theta * (1.0 - theta));
    if (!(u > thr * (1.0 + 1e-12)))
        throw BelowThreshold("generic_entropy_bound: u is below the feasibility threshold", thr);
    const double arg = (u * (1.0 - theta) - 2.0 / theta * r.value) / eps0;
    return std::min(1.0, 2.0 * std::exp(-phi.conjugate(arg)));
}

inline double generic_entropy_bound(const SigmaModulus& sig, const NFunction& phi,
                                    const DomainRect& dom, double eps0, double u, double theta) {
    return generic_entropy_bound(sig, phi, dom.t_len(), dom.x_len(), eps0, u, theta);
}

/// The modulus the PDE bound instantiates: sigma(h) = 2 C_y C_Z / Z(1/h + u0).
inline SigmaModulus pde_sigma_modulus(const BoundCore& core) {
    const double c = 2.0 * core.c_z() * core.c_y();
    const AdmissibleFunction z = core.z();
    return SigmaModulus{
        [c, z](double h) { return c / z.value(1.0 / h + z.u0()); },
        [c, z](double s) { return z.log_inverse_minus_u0(c / s); },
    };
}

} // namespace supbound
