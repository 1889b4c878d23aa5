#pragma once

#include <cmath>
#include <string>

#include "cuspforge/common.hpp"

// Scalar bound functions from the Hodgson-Kerckhoff tube estimates: the
// tube-radius functions Upsilon and g, the integrand F, the crossing-number
// function I with its inverse, the deformation constant C, and the height
// defect functions fbar and f.  All take the tube-radius lower bound R1.

namespace cuspforge::hk {

inline constexpr double kHK = 3.3957;  // constant from the tube-area estimate
inline constexpr double kTwoPiSq = 4.0 * M_PI * M_PI;
inline constexpr double kMinTubeRadius = 0.531;   // where du/dalpha bound holds
inline constexpr double kMinBoundRadius = 0.56;   // where C(R1) is defined
inline constexpr int kMinCrossings = 116;         // where 1 - f(c) > 0
inline constexpr double kDehnLengthThreshold = 7.515;

struct QuadratureConfig {
    double abs_tol = 1e-12;
    int max_depth = 40;
};

namespace detail {

template <typename F>
double adaptive_simpson(F&& f, double a, double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0) throw numeric_error("quadrature: subdivision budget exhausted");
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double integrate(F&& f, double a, double b, const QuadratureConfig& cfg) {
    if (a == b) return 0.0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, cfg.abs_tol, cfg.max_depth);
}

}  // namespace detail

// Upsilon(R) = 3.3957 tanh R / (2 cosh 2R), the lower bound on alpha*l.
inline double upsilon(double R) { return kHK * std::tanh(R) / (2.0 * std::cosh(2.0 * R)); }

// g(R) = 2 Upsilon(R) tanh R sinh^2 R = 3.3957 tanh^4 R / (1 + tanh^2 R).
inline double g(double R) {
    double t = std::tanh(R);
    double t2 = t * t;
    return kHK * t2 * t2 / (1.0 + t2);
}

// Integrand of the normalized-length estimate, negative on (0, 1].
inline double F(double w) {
    if (!(w > 0.0 && w <= 1.0)) throw hypothesis_error("F: w must lie in (0, 1]");
    double w2 = w * w;
    return -(1.0 + 4.0 * w + 6.0 * w2 + w2 * w2) / ((w + 1.0) * (1.0 + w2) * (1.0 + w2));
}

// Squared normalized length required to keep tube radius >= R during the
// deformation: I(R) = 2 (2pi)^2 / (3.3957 (1 - tanh R)) * exp(int_1^tanh R F).
inline double I(double R, const QuadratureConfig& cfg = {}) {
    if (R < kMinTubeRadius) throw hypothesis_error("I: requires R >= 0.531");
    double t = std::tanh(R);
    double one_minus_t = 2.0 / (std::exp(2.0 * R) + 1.0);  // 1 - tanh R, stable for large R
    double integral = -detail::integrate([](double w) { return F(w); }, t, 1.0, cfg);
    return 2.0 * kTwoPiSq / (kHK * one_minus_t) * std::exp(integral);
}

// Inverse of I by bracketed bisection with a secant polish.  The initial
// bracket is [0.56, 3.0]; the upper end extends by doubling for large c.
inline double I_inv(double c, const QuadratureConfig& cfg = {}) {
    double lo = kMinBoundRadius;
    if (c < I(lo, cfg)) throw hypothesis_error("I_inv: c below I(0.56)");
    double hi = 3.0;
    while (I(hi, cfg) < c) {
        hi *= 2.0;
        if (hi > 64.0) throw numeric_error("I_inv: no bracket found");
    }
    // Monotonicity is asserted, not assumed.
    double prev = I(lo, cfg);
    for (int k = 1; k <= 24; ++k) {
        double r = lo + (hi - lo) * k / 24.0;
        double v = I(r, cfg);
        if (v <= prev) throw numeric_error("I_inv: I is not increasing on the bracket");
        prev = v;
    }
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (I(mid, cfg) < c ? lo : hi) = mid;
        if (hi - lo < 1e-13 * hi) break;
    }
    double r = 0.5 * (lo + hi);
    // secant polish
    for (int it = 0; it < 8; ++it) {
        double v = I(r, cfg) - c;
        if (std::abs(v) <= 1e-10 * c) break;
        double h = 1e-7;
        double dv = (I(r + h, cfg) - I(r - h, cfg)) / (2.0 * h);
        r -= v / dv;
    }
    if (std::abs(I(r, cfg) - c) > 1e-9 * c) throw numeric_error("I_inv: did not converge");
    return r;
}

// Deformation constant from the Phi bound:
// C(R1) = 1 / (4 (I(R1) - (2pi)^2 tanh R1 / g(R1))^2 g(R1)).
inline double C(double R1, const QuadratureConfig& cfg = {}) {
    if (R1 < kMinBoundRadius) throw hypothesis_error("C: requires R1 >= 0.56");
    double inner = I(R1, cfg) - kTwoPiSq * std::tanh(R1) / g(R1);
    if (inner <= 0.0) throw numeric_error("C: nonpositive inner term at R1 = " + std::to_string(R1));
    return 1.0 / (4.0 * inner * inner * g(R1));
}

// Margin of the stronger side condition I(R1) - 2 (2pi)^2 tanh R1 / g(R1).
// Exposed as a diagnostic: it is negative for R1 near 0.56 even though the
// Phi-bound inner term is positive there.
inline double factor_two_margin(double R1, const QuadratureConfig& cfg = {}) {
    return I(R1, cfg) - 2.0 * kTwoPiSq * std::tanh(R1) / g(R1);
}

inline bool factor_two_feasible(double R1, const QuadratureConfig& cfg = {}) {
    return factor_two_margin(R1, cfg) >= 0.0;
}

// fbar(R1) = (2pi)^2 sqrt(C(R1)) / ((1 - e^{-2 R1}) sqrt(2)), the normalized
// height defect per sqrt(twist region).
inline double fbar(double R1, const QuadratureConfig& cfg = {}) {
    return kTwoPiSq * std::sqrt(C(R1, cfg)) / ((1.0 - std::exp(-2.0 * R1)) * std::sqrt(2.0));
}

// f(c) = fbar(I^{-1}(c)) for c >= 116, strictly decreasing to 0.
inline double f(double c, const QuadratureConfig& cfg = {}) {
    if (c < kMinCrossings)
        throw hypothesis_error("f: requires c >= 116 so that 1 - f(c) > 0");
    return fbar(I_inv(c, cfg), cfg);
}

struct HkConstants {
    double I_at_056 = 0.0;             // squared length needed for R1 = 0.56
    double R_star = 0.0;               // root of fbar = 1
    int c_threshold_at_R_star = 0;     // ceil I(R_star)
    double fbar_at_1 = 0.0;            // height defect coefficient at R1 = 1
    int c_threshold_at_1 = 0;          // ceil I(1.0)
    int dehn_n_threshold = 0;          // least n with sqrt(n) (1 - f(145)) >= 7.515
};

// Root of fbar(R) = 1 on [0.56, 1.0]; fbar is decreasing there.
inline double solve_R_star(const QuadratureConfig& cfg = {}) {
    double lo = kMinBoundRadius, hi = 1.0;
    if (fbar(lo, cfg) < 1.0 || fbar(hi, cfg) > 1.0)
        throw numeric_error("solve_R_star: fbar does not bracket 1");
    for (int it = 0; it < 100; ++it) {
        double mid = 0.5 * (lo + hi);
        (fbar(mid, cfg) > 1.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

inline HkConstants constants(const QuadratureConfig& cfg = {}) {
    HkConstants k;
    k.I_at_056 = I(kMinBoundRadius, cfg);
    k.R_star = solve_R_star(cfg);
    k.c_threshold_at_R_star = static_cast<int>(std::ceil(I(k.R_star, cfg)));
    k.fbar_at_1 = fbar(1.0, cfg);
    k.c_threshold_at_1 = static_cast<int>(std::ceil(I(1.0, cfg)));
    double defect = 1.0 - f(145.0, cfg);
    int n = 1;
    while (std::sqrt(static_cast<double>(n)) * defect < kDehnLengthThreshold) {
        if (++n > 100000) throw numeric_error("constants: runaway Dehn threshold search");
    }
    k.dehn_n_threshold = n;
    return k;
}

}  // namespace cuspforge::hk
