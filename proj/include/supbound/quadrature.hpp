#pragma once

#include <algorithm>
#include <cmath>
#include <functional>

#include "supbound/errors.hpp"

namespace supbound::quad {

/// Value of an improper integral together with its divergence verdict.
struct Improper {
    double value = 0.0;
    bool divergent = false;
    int pieces = 0;
};

namespace detail {

inline double simpson(double a, double fa, double fm, double b, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_step(const std::function<double(double)>& f, double a, double fa, double b,
                            double fb, double m, double fm, double whole, double tol, int depth,
                            int max_depth, long& nodes) {
    if (--nodes < 0)
        throw NonConvergence("adaptive quadrature: node budget exhausted (oscillatory integrand?)");
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, fa, flm, m, fm);
    const double right = simpson(m, fm, frm, b, fb);
    const double err = left + right - whole;
    if (std::abs(err) <= 15.0 * tol || m - a <= 1e-15 * (std::abs(a) + std::abs(b)))
        return left + right + err / 15.0;
    if (depth >= max_depth)
        throw NonConvergence("adaptive quadrature: refinement budget exhausted");
    return adaptive_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth + 1, max_depth, nodes) +
           adaptive_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth + 1, max_depth, nodes);
}

} // namespace detail

/// Adaptive Simpson on [a,b]. The tolerance is relative to the coarse whole-interval estimate.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double rel_tol = 1e-10, int max_depth = 60) {
    if (!(b > a)) return 0.0;
    const double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
    const double whole = detail::simpson(a, fa, fm, b, fb);
    const double tol = rel_tol * std::max(std::abs(whole), 1e-300);
    long nodes = 4000000;
    return detail::adaptive_step(f, a, fa, b, fb, m, fm, whole, tol, 0, max_depth, nodes);
}

struct ToZeroOptions {
    double tail_rel = 1e-9;      // stop once a piece is this small against the running total
    double stall_ratio = 0.999;  // piece-to-piece ratio that signals non-decay
    int stall_run = 20;
    int max_pieces = 1100;       // delta * 2^-1100 underflows; nothing meaningful beyond
    double piece_rel_tol = 1e-10;
    int max_depth = 60;
};

/// Integrates f over (0, delta], allowing a singularity at 0, on dyadic pieces
/// [delta 2^-(k+1), delta 2^-k]. Divergence is declared when piece contributions
/// stop decaying; the integrand must be monotone near 0 for that test to be sound.
inline Improper integrate_to_zero(const std::function<double(double)>& f, double delta,
                                  const ToZeroOptions& opt = {}) {
    Improper out;
    if (!(delta > 0.0)) return out;
    double total = 0.0, prev = -1.0, hi = delta;
    int stall = 0;
    for (int k = 0; k < opt.max_pieces; ++k) {
        const double lo = 0.5 * hi;
        const double piece = adaptive_simpson(f, lo, hi, opt.piece_rel_tol, opt.max_depth);
        total += piece;
        out.pieces = k + 1;
        if (prev > 0.0 && piece >= opt.stall_ratio * prev) {
            if (++stall >= opt.stall_run) {
                out.value = total;
                out.divergent = true;
                return out;
            }
        } else {
            stall = 0;
        }
        if (k >= 3 && std::abs(piece) <= opt.tail_rel * std::max(std::abs(total), 1e-300)) {
            out.value = total;
            return out;
        }
        prev = piece;
        hi = lo;
    }
    throw NonConvergence("integrate_to_zero: contributions neither settle nor stall");
}

struct ExpandOptions {
    double tail_rel = 1e-9;
    double stall_ratio = 0.999;  // shell ratio that signals a divergent tail
    int stall_run = 10;
    int max_doublings = 900;
    double piece_rel_tol = 1e-9;
    int max_depth = 60;
};

/// Integrates f over the whole real line by dyadic window doubling
/// [-2^k w0, 2^k w0]. Shell contributions that fail to decay flag divergence;
/// sound for integrands that are eventually monotone in |x|.
inline Improper integrate_real_line(const std::function<double(double)>& f, double w0,
                                    const ExpandOptions& opt = {}) {
    Improper out;
    double total = adaptive_simpson(f, -w0, 0.0, opt.piece_rel_tol, opt.max_depth) +
                   adaptive_simpson(f, 0.0, w0, opt.piece_rel_tol, opt.max_depth);
    out.pieces = 1;
    double prev = -1.0, lo = w0;
    int stall = 0;
    for (int k = 0; k < opt.max_doublings; ++k) {
        const double hi = 2.0 * lo;
        const double shell = adaptive_simpson(f, lo, hi, opt.piece_rel_tol, opt.max_depth) +
                             adaptive_simpson(f, -hi, -lo, opt.piece_rel_tol, opt.max_depth);
        total += shell;
        out.pieces = k + 2;
        if (prev > 0.0 && shell >= opt.stall_ratio * prev) {
            if (++stall >= opt.stall_run) {
                out.value = total;
                out.divergent = true;
                return out;
            }
        } else {
            stall = 0;
        }
        if (k >= 2 && std::abs(shell) <= opt.tail_rel * std::max(std::abs(total), 1e-300)) {
            out.value = total;
            return out;
        }
        prev = shell;
        lo = hi;
    }
    throw NonConvergence("integrate_real_line: shells neither settle nor stall");
}

} // namespace supbound::quad
