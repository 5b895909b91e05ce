#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

#include "supbound/errors.hpp"

namespace supbound {

namespace detail {

inline double log_choose(std::int64_t n, std::int64_t k) {
    return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

/// P(X <= x) for X ~ Binomial(n, p), accumulated in log space.
inline double binomial_cdf(std::int64_t x, std::int64_t n, double p) {
    if (x < 0) return 0.0;
    if (x >= n) return 1.0;
    if (p <= 0.0) return 1.0;
    if (p >= 1.0) return 0.0;
    const double lp = std::log(p), lq = std::log1p(-p);
    double acc = -std::numeric_limits<double>::infinity();
    for (std::int64_t k = 0; k <= x; ++k) {
        const double lt = log_choose(n, k) + k * lp + (n - k) * lq;
        if (lt > acc) {
            acc = lt + std::log1p(std::exp(acc - lt));
        } else {
            acc += std::log1p(std::exp(lt - acc));
        }
    }
    return std::exp(std::min(acc, 0.0));
}

} // namespace detail

/// One-sided exact (Clopper-Pearson) upper confidence limit for a binomial
/// proportion: the largest p with P(X <= exceed; n, p) >= 1 - confidence.
inline double clopper_pearson_upper(std::int64_t exceed, std::int64_t n, double confidence) {
    if (n <= 0) throw InvalidParameter("clopper_pearson_upper: n must be positive");
    if (exceed < 0 || exceed > n)
        throw InvalidParameter("clopper_pearson_upper: exceed must lie in [0, n]");
    if (!(confidence > 0.5 && confidence < 1.0))
        throw InvalidParameter("clopper_pearson_upper: confidence must lie in (0.5, 1)");
    if (exceed >= n) return 1.0;
    if (exceed == 0) {
        // (1-p)^n = 1 - confidence
        return -std::expm1(std::log1p(-confidence) / static_cast<double>(n));
    }
    const double target = 1.0 - confidence;
    double lo = static_cast<double>(exceed) / n, hi = 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        (detail::binomial_cdf(exceed, n, mid) >= target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace supbound
