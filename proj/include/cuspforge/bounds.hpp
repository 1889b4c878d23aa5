#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "cuspforge/common.hpp"
#include "cuspforge/hk.hpp"

// Theorem-level bounds: cusp-height intervals for knots from a diagram,
// height and length rate envelopes under cone deformation, the meridian
// lower bound, and the Dehn-filling hyperbolicity check.

namespace cuspforge::bounds {

struct BoundReport {
    int n = 0;
    int c_min = 0;
    double R1 = 0.0;
    double f_c = 0.0;   // f(c_min), or fbar(R1) for the 2-bridge variant
    double H_lo = 0.0;  // cusp height bounds, meridian normalized to length 1
    double H_hi = 0.0;
    bool applicable = false;
    bool two_bridge = false;
    std::string notes;
};

struct HeightEnvelope {
    double h0 = 0.0;
    int n = 0;
    double R1 = 0.0;
    double delta = 0.0;  // (2pi)^2 sqrt(n C(R1)) / ((1 - e^{-2 R1}) sqrt 2)
    double lo = 0.0, hi = 0.0;
};

// Height change envelope under the cone deformation, in terms of R1 alone.
inline HeightEnvelope height_envelope(double h0, int n, double R1,
                                      const hk::QuadratureConfig& cfg = {}) {
    if (!(h0 > 0.0) || n < 1) throw hypothesis_error("height_envelope: need h0 > 0 and n >= 1");
    HeightEnvelope env;
    env.h0 = h0;
    env.n = n;
    env.R1 = R1;
    env.delta = hk::kTwoPiSq * std::sqrt(n * hk::C(R1, cfg)) /
                ((1.0 - std::exp(-2.0 * R1)) * std::sqrt(2.0));
    env.lo = h0 - env.delta;
    env.hi = h0 + env.delta;
    return env;
}

// Height bounds for a knot with n twist regions and at least c crossings in
// each: H >= n (1 - f(c))^2 and H <= n (sqrt(n-1) + f(c))^2, applicable for
// c >= 116.  Inapplicability is a report state, not an error.
inline BoundReport knot_cusp_bounds(int n, int c, const hk::QuadratureConfig& cfg = {}) {
    if (n < 2) throw hypothesis_error("knot_cusp_bounds: need n >= 2");
    BoundReport rep;
    rep.n = n;
    rep.c_min = c;
    if (c < hk::kMinCrossings) {
        rep.applicable = false;
        rep.notes = "needs at least c >= 116 crossings per twist region";
        return rep;
    }
    rep.f_c = hk::f(c, cfg);
    rep.R1 = hk::I_inv(c, cfg);
    rep.H_lo = n * (1.0 - rep.f_c) * (1.0 - rep.f_c);
    rep.H_hi = n * (std::sqrt(n - 1.0) + rep.f_c) * (std::sqrt(n - 1.0) + rep.f_c);
    rep.applicable = true;
    return rep;
}

// Sharper 2-bridge bounds with the initial height sqrt(2(n-1)) and tube
// radius 1.0, valid for c >= 24.
inline BoundReport two_bridge_bounds(int n, int c, const hk::QuadratureConfig& cfg = {}) {
    if (n < 2) throw hypothesis_error("two_bridge_bounds: need n >= 2");
    if (c < 24) throw hypothesis_error("two_bridge_bounds: need c >= 24 crossings per twist region");
    BoundReport rep;
    rep.n = n;
    rep.c_min = c;
    rep.R1 = 1.0;
    rep.two_bridge = true;
    rep.f_c = hk::fbar(1.0, cfg);
    HeightEnvelope env = height_envelope(std::sqrt(2.0 * (n - 1.0)), n, 1.0, cfg);
    rep.H_lo = env.lo * env.lo;
    rep.H_hi = env.hi * env.hi;
    rep.applicable = true;
    return rep;
}

// Instantaneous normalized-length rate bound |L'| <= L sqrt(n C(R1) / (2 Area)).
inline double rate_bound(double L, int n, double R1, double area,
                         const hk::QuadratureConfig& cfg = {}) {
    if (!(L > 0.0) || n < 1 || !(area > 0.0))
        throw hypothesis_error("rate_bound: need L > 0, n >= 1, area > 0");
    return L * std::sqrt(n * hk::C(R1, cfg) / (2.0 * area));
}

// Teichmueller speed of the cusp-shape path for deformation coefficients
// (a, b): ||gamma'|| = sqrt(a^2 + b^2).
inline double teich_speed(double a, double b) { return std::hypot(a, b); }

// Cusp boundary pairing term 2 (a^2 + b^2) Area.
inline double cusp_boundary_term(double a, double b, double area) {
    if (!(area > 0.0)) throw hypothesis_error("cusp_boundary_term: need area > 0");
    return 2.0 * (a * a + b * b) * area;
}

inline const double kMeridianMinRadius = std::log(2.0 / std::sqrt(3.0));

// Meridian length lower bound 1 - e^{-2R}, for tube radius R >= log(2/sqrt 3).
inline double meridian_lower(double R) {
    if (R < kMeridianMinRadius - 1e-15)
        throw hypothesis_error("meridian_lower: requires R >= log(2/sqrt(3))");
    return 1.0 - std::exp(-2.0 * R);
}

// Width of the horospherical quadrilateral: d = 2 e^{-H} sinh(L/2).
inline double quad_width(double H, double L) {
    if (!(H > 0.0) || !(L > 0.0)) throw hypothesis_error("quad_width: need H, L > 0");
    return 2.0 * std::exp(-H) * std::sinh(L / 2.0);
}

// True iff every non-trivial Dehn filling is hyperbolic by the normalized
// length criterion: c >= 116 and sqrt(n) (1 - f(c)) >= 7.515.
inline bool dehn_filling_check(int n, int c, const hk::QuadratureConfig& cfg = {}) {
    if (n < 2) throw hypothesis_error("dehn_filling_check: need n >= 2");
    if (c < hk::kMinCrossings) return false;
    return std::sqrt(static_cast<double>(n)) * (1.0 - hk::f(c, cfg)) >= hk::kDehnLengthThreshold;
}

}  // namespace cuspforge::bounds
