#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "supbound/bounds.hpp"
#include "supbound/errors.hpp"

namespace supbound {

/// Partition of [0, inf) into time segments [b_k, b_{k+1}] paired with the
/// spatial strip [-A, A]. Every gap must be at least 2A.
class Segmentation {
public:
    /// b_0 = 0, b_k = L e^k for k >= 1. Gaps grow geometrically, so validating
    /// the first two suffices; b_k itself overflows for large k, which is why
    /// consumers work with ln(b_k) where possible.
    static Segmentation geometric(double half_width, double L, std::int64_t k_max) {
        if (!(half_width > 0.0)) throw InvalidParameter("Segmentation: A must be positive");
        if (!(L > 0.0)) throw InvalidParameter("Segmentation: L must be positive");
        if (k_max < 1) throw InvalidParameter("Segmentation: k_max must be >= 1");
        Segmentation s;
        s.half_width_ = half_width;
        s.L_ = L;
        s.k_max_ = k_max;
        s.geometric_ = true;
        if (L * std::exp(1.0) < 2.0 * half_width)
            throw InvalidParameter("Segmentation: first gap L e falls below 2A");
        return s;
    }

    /// Explicit increasing points starting at b_0 = 0.
    static Segmentation from_points(double half_width, std::vector<double> b) {
        if (!(half_width > 0.0)) throw InvalidParameter("Segmentation: A must be positive");
        if (b.size() < 2 || b.front() != 0.0)
            throw InvalidParameter("Segmentation: need b_0 = 0 and at least one segment");
        for (std::size_t i = 0; i + 1 < b.size(); ++i) {
            if (!(b[i + 1] > b[i]))
                throw InvalidParameter("Segmentation: points must increase");
            if (b[i + 1] - b[i] < 2.0 * half_width)
                throw InvalidParameter("Segmentation: a gap falls below 2A");
        }
        Segmentation s;
        s.half_width_ = half_width;
        s.points_ = std::move(b);
        s.k_max_ = static_cast<std::int64_t>(s.points_.size()) - 1;
        return s;
    }

    double half_width() const { return half_width_; }
    bool is_geometric() const { return geometric_; }
    double L() const { return L_; }
    std::int64_t segment_count() const { return k_max_; }

    /// b_k; +inf once the geometric sequence overflows.
    double b(std::int64_t k) const {
        check_k(k, k_max_ + 1);
        if (!geometric_) return points_[static_cast<std::size_t>(k)];
        if (k == 0) return 0.0;
        return L_ * std::exp(static_cast<double>(k));
    }

    /// ln b_k (-inf at k = 0); exact for the geometric form at any k.
    double log_b(std::int64_t k) const {
        check_k(k, k_max_ + 1);
        if (!geometric_) return std::log(points_[static_cast<std::size_t>(k)]);
        if (k == 0) return -std::numeric_limits<double>::infinity();
        return std::log(L_) + static_cast<double>(k);
    }

    /// Gap b_{k+1} - b_k of segment k.
    double gap(std::int64_t k) const {
        check_k(k, k_max_);
        if (!geometric_) return points_[static_cast<std::size_t>(k + 1)] - points_[static_cast<std::size_t>(k)];
        if (k == 0) return L_ * std::exp(1.0);
        return L_ * std::exp(static_cast<double>(k)) * (std::exp(1.0) - 1.0);
    }

private:
    static void check_k(std::int64_t k, std::int64_t limit) {
        if (k < 0 || k >= limit) throw InvalidParameter("Segmentation: segment index out of range");
    }

    double half_width_ = 1.0;
    double L_ = 1.0;
    std::int64_t k_max_ = 0;
    bool geometric_ = false;
    std::vector<double> points_;
};

/// Weight c(t) normalizing the field on the unbounded domain, reduced to the
/// per-segment minima c_k. The iterated-log family is c(t) = D (ln ln(t/L))^{1/2},
/// positive only for t > L e; earlier segments get c_k = 0 and are treated as
/// carrying no weight control.
class WeightFunction {
public:
    static WeightFunction iterated_log(double L, double d_scale) {
        if (!(L > 0.0) || !(d_scale > 0.0))
            throw InvalidParameter("WeightFunction: L and D must be positive");
        WeightFunction w;
        w.iterated_ = true;
        w.L_ = L;
        w.d_ = d_scale;
        return w;
    }

    static WeightFunction custom(std::vector<double> c_values) {
        for (double c : c_values)
            if (!(c >= 0.0)) throw InvalidParameter("WeightFunction: custom weights must be >= 0");
        WeightFunction w;
        w.values_ = std::move(c_values);
        return w;
    }

    bool is_iterated_log() const { return iterated_; }
    double d_scale() const { return d_; }
    double L() const { return L_; }

    /// Pointwise weight; 0 where the iterated log is undefined or nonpositive.
    double at_time(double t) const {
        if (iterated_) {
            if (!(t > L_)) return 0.0;
            const double w = std::log(t / L_);
            if (!(w > 1.0)) return 0.0;
            return d_ * std::sqrt(std::log(w));
        }
        throw InvalidParameter("WeightFunction: custom weights have no pointwise form");
    }

    /// Per-segment weight c_k = min over [b_k, b_{k+1}] (left endpoint for the
    /// increasing iterated-log form).
    double c_k(const Segmentation& seg, std::int64_t k) const {
        if (iterated_) {
            const double w = seg.log_b(k) - std::log(L_);  // ln(b_k / L)
            if (!(w > 1.0)) return 0.0;
            return d_ * std::sqrt(std::log(w));
        }
        if (k < 0 || k >= static_cast<std::int64_t>(values_.size()))
            throw InvalidParameter("WeightFunction: no custom weight for this segment");
        return values_[static_cast<std::size_t>(k)];
    }

    std::int64_t custom_count() const {
        return iterated_ ? std::numeric_limits<std::int64_t>::max()
                         : static_cast<std::int64_t>(values_.size());
    }

private:
    WeightFunction() = default;

    bool iterated_ = false;
    double L_ = 1.0;
    double d_ = 1.0;
    std::vector<double> values_;
};

/// Iterated-log weights tuned so the segment series converges with terms
/// ~ (ln b_k)^{-(1+delta)}:  c(t) = D (ln ln(t/L))^{1/2} with
/// D = 2 eps (2(1+delta))^{1/2} / (s (1-theta)), eps the variance majorant.
inline WeightFunction example_weights(double L, double half_width, double delta, double s,
                                      double theta, double eps_majorant) {
    if (!(L > 2.0 * half_width / (std::exp(1.0) * (std::exp(1.0) - 1.0))))
        throw InvalidParameter("example_weights: L must exceed 2A / (e(e-1))");
    if (!(delta > 0.0)) throw InvalidParameter("example_weights: delta must be positive");
    if (!(s > 0.0) || !(theta > 0.0 && theta < 1.0))
        throw InvalidParameter("example_weights: need s > 0 and theta in (0, 1)");
    if (!(eps_majorant > 0.0)) throw InvalidParameter("example_weights: eps must be positive");
    const double d = 2.0 * eps_majorant * std::sqrt(2.0 * (1.0 + delta)) / (s * (1.0 - theta));
    return WeightFunction::iterated_log(L, d);
}

struct SeriesOptions {
    std::int64_t k_max = 10000;
    int consecutive = 50;     // run of negligible terms required for convergence
    double term_rel = 1e-16;  // negligible means below this fraction of the sum
};

struct SeriesResult {
    bool converged = false;
    double value = 0.0;
    std::int64_t k_used = 0;
};

struct GrowthValue {
    double bound = std::numeric_limits<double>::quiet_NaN();
    double series = 0.0;
    std::int64_t k_used = 0;
    double threshold = std::numeric_limits<double>::quiet_NaN();
    std::int64_t covered_from = -1;  // first segment the bound actually controls
};

struct SegmentDiagnostics {
    std::int64_t k = 0;
    double b_k = 0.0;
    double c_k = 0.0;
    double eps_k = 0.0;
    double i_phi_k = 0.0;      // at delta = theta * eps_k
    double threshold_k = 0.0;  // 4 i_phi_k / (c_k theta (1-theta)); inf where c_k = 0
    bool covered = false;
};

/// Growth-rate bound on [-A, A] x [0, inf):
///   P{ sup |U(t,x)| / c(t) > u } <= 2 exp(-phi*(u/s)) sum_k exp(-phi*(s c_k (1-theta) / (2 eps_k)))
/// for u above the per-segment entropy thresholds and s below u/2.
///
/// Segments whose weight vanishes, or whose series argument s c_k(1-theta)/(2 eps_k)
/// does not exceed 2, admit no per-segment tail control; they keep their series
/// term but are excluded from the threshold, and the first controlled segment is
/// reported as covered_from. The emitted figure bounds the supremum over the
/// controlled segments.
class GrowthEngine {
public:
    GrowthEngine(BoundCore core, Segmentation seg, WeightFunction w, std::int64_t k_diag = 64)
        : core_(std::move(core)), seg_(std::move(seg)), w_(std::move(w)), k_diag_(k_diag) {
        if (k_diag_ < 1) throw InvalidParameter("GrowthEngine: k_diag must be >= 1");
        eps_ = core_.c_y() * std::sqrt(core_.gamma_raw());
    }

    const BoundCore& core() const { return core_; }
    const Segmentation& segmentation() const { return seg_; }
    const WeightFunction& weights() const { return w_; }

    /// Variance majorant C_y (int int d|Gamma|)^{1/2}; valid for every segment.
    double eps_majorant() const { return eps_; }
    double eps_k(std::int64_t) const { return eps_; }

    /// Grid refinement of eps_k: C_y max over a grid of V_k of the field
    /// standard deviation. Densities are evaluated through their equal-mass
    /// binning — the kernel oscillates too fast at large t for pointwise
    /// quadrature, and the binned variance is what the simulator realizes
    /// anyway. Never exceeds the majorant.
    double eps_k_refined(std::int64_t k, int nt = 16, int nx = 16) const {
        const double b_lo = seg_.b(k), b_hi = seg_.b(k + 1);
        if (!std::isfinite(b_hi))
            throw InvalidParameter("eps_k_refined: segment endpoint overflows");
        const double a = seg_.half_width();
        const auto& eq = core_.equation();
        const auto& m = core_.measure();
        std::vector<SpectralAtom> atoms;
        if (m.form() != SpectralMeasure::Form::AtomicGrid) atoms = simulation_atoms(m, 16384);
        double worst = 0.0;
        for (int i = 0; i < nt; ++i) {
            const double t = b_lo + (b_hi - b_lo) * (nt == 1 ? 0.0 : double(i) / (nt - 1));
            for (int j = 0; j < nx; ++j) {
                const double x = -a + 2.0 * a * (nx == 1 ? 0.0 : double(j) / (nx - 1));
                double var = 0.0;
                if (m.form() == SpectralMeasure::Form::AtomicGrid) {
                    for (const auto& g : m.grid())
                        var += kernel(eq, t, x, g.lambda) * kernel(eq, t, x, g.mu) * g.mass;
                } else {
                    for (const auto& at : atoms) {
                        const double v = kernel(eq, t, x, at.lambda);
                        var += v * v * at.mass;
                    }
                }
                worst = std::max(worst, std::sqrt(std::max(var, 0.0)));
            }
        }
        return std::min(core_.c_y() * worst, eps_);
    }

    double c_k(std::int64_t k) const { return w_.c_k(seg_, k); }

    /// Segment entropy integral
    ///   C_y int_0^delta Psi(ln(A X(s) + 1) + ln((gap_k/2) X(s) + 1)) ds,
    /// X(s) = Z^{-1}(2 C_Z C_y / s) - u0.
    double i_phi_k(std::int64_t k, double delta) const {
        if (!(delta > 0.0)) throw InvalidParameter("i_phi_k: delta must be positive");
        const double a = seg_.half_width();
        const double half_gap = 0.5 * seg_.gap(k);
        const auto integrand = [&](double s) {
            const double lx = core_.log_modulus_arg(s);
            const double v = log1p_scaled_exp(a, lx) + log1p_scaled_exp(half_gap, lx);
            return v > 0.0 ? core_.phi().psi(v) : 0.0;
        };
        const auto r = quad::integrate_to_zero(integrand, delta);
        if (r.divergent)
            throw NonConvergence("i_phi_k: contributions fail to decay");
        return core_.c_y() * r.value;
    }

    /// Series sum_k exp(-phi*(s c_k (1-theta) / (2 eps_k))). Converged once a
    /// run of terms falls below term_rel of the running sum; NotConverged when
    /// the term budget (or a finite custom weight list) runs out first.
    SeriesResult series_sum(double s, double theta, const SeriesOptions& opt = {}) const {
        check_s_theta(s, theta);
        const std::int64_t limit =
            std::min({opt.k_max, seg_.segment_count(), w_.custom_count()});
        SeriesResult out;
        int quiet = 0;
        const double scale = s * (1.0 - theta) / (2.0 * eps_);
        for (std::int64_t k = 0; k < limit; ++k) {
            const double term = std::exp(-core_.phi().conjugate(scale * c_k(k)));
            out.value += term;
            out.k_used = k + 1;
            quiet = term < opt.term_rel * out.value ? quiet + 1 : 0;
            if (quiet >= opt.consecutive) {
                out.converged = true;
                return out;
            }
        }
        return out;
    }

    /// Per-segment table for the report; thresholds are infinite where c_k = 0.
    std::vector<SegmentDiagnostics> diagnostics(double s, double theta) const {
        check_s_theta(s, theta);
        std::vector<SegmentDiagnostics> rows;
        const std::int64_t limit = diag_limit();
        rows.reserve(static_cast<std::size_t>(limit));
        for (std::int64_t k = 0; k < limit; ++k) {
            SegmentDiagnostics d;
            d.k = k;
            d.b_k = seg_.b(k);
            d.c_k = c_k(k);
            d.eps_k = eps_;
            d.i_phi_k = i_phi_k(k, theta * eps_);
            if (d.c_k > 0.0) {
                d.threshold_k = 4.0 * d.i_phi_k / (d.c_k * theta * (1.0 - theta));
                d.covered = s * d.c_k * (1.0 - theta) / (2.0 * eps_) > 2.0;
            } else {
                d.threshold_k = std::numeric_limits<double>::infinity();
            }
            rows.push_back(d);
        }
        return rows;
    }

    /// sup over the controlled segments of 4 i_phi_k(theta eps) / (c_k theta (1-theta)).
    double threshold_u(double s, double theta) const {
        double thr = 0.0;
        bool any = false;
        for (const auto& d : diagnostics(s, theta)) {
            if (!d.covered) continue;
            any = true;
            thr = std::max(thr, d.threshold_k);
        }
        if (!any)
            throw SWindowEmpty("growth: no segment satisfies the series window for this s, theta");
        return thr;
    }

    GrowthValue growth_bound(double u, double s, double theta,
                             const SeriesOptions& opt = {}) const {
        check_s_theta(s, theta);
        GrowthValue out;
        double thr = 0.0;
        bool any = false;
        for (const auto& d : diagnostics(s, theta)) {
            if (!d.covered) continue;
            if (!any) out.covered_from = d.k;
            any = true;
            thr = std::max(thr, d.threshold_k);
        }
        if (!any)
            throw SWindowEmpty("growth_bound: no segment satisfies the series window");
        out.threshold = thr;
        if (!(s < 0.5 * u))
            throw SWindowEmpty("growth_bound: need s < u/2");
        if (!(u > thr * (1.0 + 1e-12)))
            throw BelowThreshold("growth_bound: u is below the segment threshold", thr);
        const auto series = series_sum(s, theta, opt);
        if (!series.converged)
            throw NonConvergence("growth_bound: segment series did not converge");
        out.series = series.value;
        out.k_used = series.k_used;
        out.bound = std::min(1.0, 2.0 * std::exp(-core_.phi().conjugate(u / s)) * series.value);
        return out;
    }

    std::int64_t diag_limit() const {
        return std::min({k_diag_, seg_.segment_count(), w_.custom_count()});
    }

private:
    static void check_s_theta(double s, double theta) {
        if (!(s > 0.0)) throw InvalidParameter("growth: s must be positive");
        if (!(theta > 0.0 && theta < 1.0))
            throw InvalidParameter("growth: theta must lie strictly inside (0, 1)");
    }

    BoundCore core_;
    Segmentation seg_;
    WeightFunction w_;
    std::int64_t k_diag_;
    double eps_ = 0.0;
};

} // namespace supbound
