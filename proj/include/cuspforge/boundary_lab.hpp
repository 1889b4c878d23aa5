#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "cuspforge/common.hpp"
#include "cuspforge/rng.hpp"

// Lab for the quadratic boundary terms b_j(s) of a cone deformation with n
// singular components:
//   b_j / Area_j = c s_j^2 + a ((X^T s)_j^2 + (Y^T s)_j^2) + b s_j (X^T s)_j
// with a < 0 and b, c > 0.  Numerically realizes the feasibility points
// whose existence the theory guarantees, with brute-force oracles at desk
// scale.

namespace cuspforge::lab {

struct QuadraticBoundarySystem {
    int n = 0;
    std::vector<double> areas;  // n positive reals
    double coeff_a = 0.0;       // < 0
    double coeff_b = 0.0;       // > 0
    double coeff_c = 0.0;       // > 0
    std::vector<double> X;      // row-major n x n, x_{kj} at X[k*n + j]
    std::vector<double> Y;
    std::uint64_t seed = 0;     // provenance when generated

    double x(int k, int j) const { return X[static_cast<std::size_t>(k) * n + j]; }
    double y(int k, int j) const { return Y[static_cast<std::size_t>(k) * n + j]; }

    void require_shape() const {
        if (n < 1 || static_cast<int>(areas.size()) != n ||
            X.size() != static_cast<std::size_t>(n) * n || Y.size() != static_cast<std::size_t>(n) * n)
            throw hypothesis_error("boundary system: inconsistent dimensions");
        if (!(coeff_a < 0.0) || !(coeff_b > 0.0) || !(coeff_c > 0.0))
            throw hypothesis_error("boundary system: needs a < 0, b > 0, c > 0");
        for (double a : areas)
            if (!(a > 0.0)) throw hypothesis_error("boundary system: areas must be positive");
    }
};

inline std::vector<double> eval_b(const QuadraticBoundarySystem& sys, const std::vector<double>& s) {
    if (static_cast<int>(s.size()) != sys.n) throw hypothesis_error("eval_b: dimension mismatch");
    const int n = sys.n;
    std::vector<double> out(n);
    for (int j = 0; j < n; ++j) {
        double u = 0.0, v = 0.0;
        for (int k = 0; k < n; ++k) {
            u += s[k] * sys.x(k, j);
            v += s[k] * sys.y(k, j);
        }
        out[j] = sys.areas[j] *
                 (sys.coeff_c * s[j] * s[j] + sys.coeff_a * (u * u + v * v) + sys.coeff_b * s[j] * u);
    }
    return out;
}

inline double sum_b(const QuadraticBoundarySystem& sys, const std::vector<double>& s) {
    auto b = eval_b(sys, s);
    return std::accumulate(b.begin(), b.end(), 0.0);
}

namespace detail {

// Enumerates the simplex grid {s : sum s = n, s >= 0} at the given number of
// subdivisions, scaled so coordinates sum to n.
inline void for_each_grid_point(int n, int subdivisions,
                                const std::function<void(const std::vector<double>&)>& fn) {
    std::vector<int> comp(n, 0);
    std::vector<double> s(n);
    double scale = static_cast<double>(n) / subdivisions;
    std::function<void(int, int)> rec = [&](int idx, int rem) {
        if (idx == n - 1) {
            comp[idx] = rem;
            for (int i = 0; i < n; ++i) s[i] = comp[i] * scale;
            fn(s);
            return;
        }
        for (int v = 0; v <= rem; ++v) {
            comp[idx] = v;
            rec(idx + 1, rem - v);
        }
    };
    rec(0, subdivisions);
}

}  // namespace detail

// Minimum of sum b_j over the simplex grid, skipping the origin-free check
// (every grid point has sum s = n != 0).
inline double grid_min_sum(const QuadraticBoundarySystem& sys, int subdivisions) {
    double best = std::numeric_limits<double>::infinity();
    detail::for_each_grid_point(sys.n, subdivisions, [&](const std::vector<double>& s) {
        best = std::min(best, sum_b(sys, s));
    });
    return best;
}

// Positivity of sum b_j on the simplex: grid at resolution 1/64 with a local
// 1/128-step refinement around near-zero minima.
inline bool validity_check(const QuadraticBoundarySystem& sys) {
    sys.require_shape();
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> argmin(sys.n, 0.0);
    detail::for_each_grid_point(sys.n, 64, [&](const std::vector<double>& s) {
        double v = sum_b(sys, s);
        if (v < best) {
            best = v;
            argmin = s;
        }
    });
    if (best <= 0.0) return false;
    // typical scale of the form, for deciding what counts as "near zero"
    std::vector<double> ones(sys.n, 1.0);
    double scale = std::max(std::abs(sum_b(sys, ones)), 1e-12);
    if (best > 0.05 * scale) return true;
    // refine around the argmin at half the step
    double step = static_cast<double>(sys.n) / 128.0;
    double refined = best;
    std::vector<double> s = argmin;
    for (int i = 0; i < sys.n; ++i) {
        for (int j = 0; j < sys.n; ++j) {
            if (i == j) continue;
            std::vector<double> t = argmin;
            double d = std::min(step, t[j]);
            t[i] += d;
            t[j] -= d;
            refined = std::min(refined, sum_b(sys, t));
        }
    }
    return refined > 0.0;
}

enum class PointKind { feasible, kerckhoff };

struct FeasiblePoint {
    std::vector<double> s;
    std::vector<double> b_values;
    PointKind kind = PointKind::feasible;
    double min_b = 0.0;        // min_j b_j at s
    double tol_achieved = 0.0; // largest constraint violation
};

// Feasibility invariant: all b_j >= -tol.
inline bool all_nonneg(const FeasiblePoint& p, double tol) {
    for (double b : p.b_values)
        if (b < -tol) return false;
    return true;
}

// Zero-off-minimum invariant: additionally b_j <= tol for every j that is
// not a minimal coordinate.
inline bool kerckhoff_ok(const FeasiblePoint& p, double tol) {
    if (!all_nonneg(p, tol)) return false;
    double mn = *std::min_element(p.s.begin(), p.s.end());
    for (std::size_t j = 0; j < p.s.size(); ++j)
        if (p.s[j] > mn + tol && p.b_values[j] > tol) return false;
    return true;
}

// Point of the simplex with all b_j >= -tol, by coarse grid scan
// maximizing min_j b_j followed by a pattern-search ascent.  On a valid
// system such a point must exist, so a failure is reported as an error.
inline FeasiblePoint feasible_point(const QuadraticBoundarySystem& sys, double tol = 1e-9) {
    sys.require_shape();
    if (sys.n > 8) throw hypothesis_error("feasible_point: supported for n <= 8");
    const int n = sys.n;
    int subdivisions = n <= 2 ? 128 : n == 3 ? 64 : n == 4 ? 40 : 16;

    std::vector<double> best_s(n, 1.0);
    double best_v = -std::numeric_limits<double>::infinity();
    detail::for_each_grid_point(n, subdivisions, [&](const std::vector<double>& s) {
        auto b = eval_b(sys, s);
        double v = *std::min_element(b.begin(), b.end());
        if (v > best_v) {
            best_v = v;
            best_s = s;
        }
    });

    // pattern search along coordinate-exchange directions, shrinking steps
    double step = static_cast<double>(n) / subdivisions;
    std::vector<double> s = best_s;
    for (int round = 0; round < 400; ++round) {
        bool improved = false;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                std::vector<double> t = s;
                double d = std::min(step, t[j]);
                if (d <= 0.0) continue;
                t[i] += d;
                t[j] -= d;
                auto b = eval_b(sys, t);
                double v = *std::min_element(b.begin(), b.end());
                if (v > best_v) {
                    best_v = v;
                    s = t;
                    improved = true;
                }
            }
        }
        if (!improved) {
            step *= 0.5;
            if (step < 1e-13) break;
        }
    }

    FeasiblePoint p;
    p.s = s;
    p.b_values = eval_b(sys, s);
    p.kind = PointKind::feasible;
    p.min_b = *std::min_element(p.b_values.begin(), p.b_values.end());
    p.tol_achieved = std::max(0.0, -p.min_b);
    if (p.min_b < -tol)
        throw numeric_error("feasible_point: search failed, best min_j b_j = " + std::to_string(p.min_b) +
                            " (a valid system must admit a nonnegative point)");
    return p;
}

namespace detail {

// Damped Newton with a forward-difference Jacobian on a square system.
inline bool newton_solve(const std::function<std::vector<double>(const std::vector<double>&)>& fn,
                         std::vector<double>& x, double target, int max_iter = 80) {
    const int m = static_cast<int>(x.size());
    auto norm_inf = [](const std::vector<double>& v) {
        double r = 0.0;
        for (double t : v) r = std::max(r, std::abs(t));
        return r;
    };
    std::vector<double> r = fn(x);
    double err = norm_inf(r);
    for (int it = 0; it < max_iter && err > target; ++it) {
        std::vector<double> J(static_cast<std::size_t>(m) * m);
        for (int k = 0; k < m; ++k) {
            double h = 1e-7 * std::max(1.0, std::abs(x[k]));
            std::vector<double> xp = x;
            xp[k] += h;
            auto rp = fn(xp);
            for (int i = 0; i < m; ++i) J[static_cast<std::size_t>(i) * m + k] = (rp[i] - r[i]) / h;
        }
        // Gaussian elimination
        std::vector<double> d(m);
        for (int i = 0; i < m; ++i) d[i] = -r[i];
        for (int col = 0; col < m; ++col) {
            int piv = col;
            for (int q = col + 1; q < m; ++q)
                if (std::abs(J[static_cast<std::size_t>(q) * m + col]) >
                    std::abs(J[static_cast<std::size_t>(piv) * m + col]))
                    piv = q;
            if (std::abs(J[static_cast<std::size_t>(piv) * m + col]) < 1e-14) return false;
            if (piv != col) {
                for (int k = 0; k < m; ++k)
                    std::swap(J[static_cast<std::size_t>(col) * m + k], J[static_cast<std::size_t>(piv) * m + k]);
                std::swap(d[col], d[piv]);
            }
            for (int q = col + 1; q < m; ++q) {
                double f = J[static_cast<std::size_t>(q) * m + col] / J[static_cast<std::size_t>(col) * m + col];
                if (f == 0.0) continue;
                for (int k = col; k < m; ++k)
                    J[static_cast<std::size_t>(q) * m + k] -= f * J[static_cast<std::size_t>(col) * m + k];
                d[q] -= f * d[col];
            }
        }
        for (int i = m - 1; i >= 0; --i) {
            double ssum = d[i];
            for (int k = i + 1; k < m; ++k) ssum -= J[static_cast<std::size_t>(i) * m + k] * d[k];
            d[i] = ssum / J[static_cast<std::size_t>(i) * m + i];
        }
        double lambda = 1.0;
        for (int bt = 0; bt < 40; ++bt) {
            std::vector<double> xn = x;
            for (int i = 0; i < m; ++i) xn[i] += lambda * d[i];
            auto rn = fn(xn);
            double en = norm_inf(rn);
            if (en < err) {
                x = xn;
                r = rn;
                err = en;
                break;
            }
            lambda *= 0.5;
        }
        if (lambda < 1e-11) return false;
    }
    return err <= target;
}

}  // namespace detail

namespace detail {
inline FeasiblePoint kerckhoff_search(const QuadraticBoundarySystem& sys, double tol);
}

// Point satisfying the zero-off-minimum invariant: each b_j >= 0, and b_j = 0 for
// every coordinate above the minimum.  Enumerates candidate zero-sets J (the
// indices allowed above the minimum), solving { b_j = 0 for j in J,
// s_i = m for i not in J, sum s = n } by damped Newton from several starts.
// If the search stalls (degenerate level sets), retries once on a copy with
// a 1e-9 jitter of X and Y to restore transversality.
inline FeasiblePoint kerckhoff_point(const QuadraticBoundarySystem& sys, double tol = 1e-6) {
    sys.require_shape();
    if (sys.n > 4) throw hypothesis_error("kerckhoff_point: supported for n <= 4");
    try {
        return detail::kerckhoff_search(sys, tol);
    } catch (const numeric_error&) {
        QuadraticBoundarySystem jittered = sys;
        SplitMix64 jrng(0x6a697474ULL ^ sys.seed);
        for (double& v : jittered.X) v += jrng.uniform(-1e-9, 1e-9);
        for (double& v : jittered.Y) v += jrng.uniform(-1e-9, 1e-9);
        return detail::kerckhoff_search(jittered, tol);
    }
}

namespace detail {

inline FeasiblePoint kerckhoff_search(const QuadraticBoundarySystem& sys, double tol) {
    const int n = sys.n;
    SplitMix64 rng(0x6b657263ULL ^ sys.seed);  // deterministic per system

    auto finish = [&](const std::vector<double>& s) {
        FeasiblePoint p;
        p.s = s;
        p.b_values = eval_b(sys, s);
        p.kind = PointKind::kerckhoff;
        p.min_b = *std::min_element(p.b_values.begin(), p.b_values.end());
        double worst = std::max(0.0, -p.min_b);
        double mn = *std::min_element(s.begin(), s.end());
        for (int j = 0; j < n; ++j)
            if (s[j] > mn + tol) worst = std::max(worst, p.b_values[j]);
        p.tol_achieved = worst;
        return p;
    };

    auto acceptable = [&](const std::vector<double>& s) {
        for (double v : s)
            if (v < -tol) return false;
        double total = std::accumulate(s.begin(), s.end(), 0.0);
        if (std::abs(total - n) > 1e-9 * n) return false;
        FeasiblePoint probe;
        probe.s = s;
        probe.b_values = eval_b(sys, s);
        return kerckhoff_ok(probe, tol);
    };

    // J as a bitmask of indices allowed above the minimum; unknowns are the
    // shared minimum m followed by s_j for j in J.
    std::vector<unsigned> masks;
    for (unsigned mask = 0; mask < (1u << n); ++mask)
        if (mask != (1u << n) - 1u || n == 1) masks.push_back(mask);
    std::sort(masks.begin(), masks.end(),
              [](unsigned a, unsigned b) { return __builtin_popcount(a) < __builtin_popcount(b); });

    for (unsigned mask : masks) {
        std::vector<int> J;
        for (int j = 0; j < n; ++j)
            if (mask & (1u << j)) J.push_back(j);
        const int size = static_cast<int>(J.size());

        auto unpack = [&](const std::vector<double>& x) {
            std::vector<double> s(n);
            int t = 1;
            for (int j = 0; j < n; ++j) s[j] = (mask & (1u << j)) ? x[t++] : x[0];
            return s;
        };
        auto resid = [&](const std::vector<double>& x) {
            auto s = unpack(x);
            std::vector<double> r(1 + size);
            r[0] = std::accumulate(s.begin(), s.end(), 0.0) - n;
            auto b = eval_b(sys, s);
            int t = 1;
            for (int j : J) r[t++] = b[j];
            return r;
        };

        std::vector<std::vector<double>> starts;
        if (size == 0) {
            starts.push_back({1.0});
        } else {
            for (double mv : {0.2, 0.5, 0.8, 1.0})
                for (double sv : {1.0, 1.5, 0.8 * n}) {
                    std::vector<double> x0(1 + size, sv);
                    x0[0] = mv;
                    starts.push_back(x0);
                }
            for (int t = 0; t < 24; ++t) {
                std::vector<double> x0(1 + size);
                x0[0] = rng.uniform(0.01, 1.2);
                for (int q = 1; q <= size; ++q) x0[q] = rng.uniform(0.5, n);
                starts.push_back(x0);
            }
        }
        for (auto& x0 : starts) {
            std::vector<double> x = x0;
            if (!detail::newton_solve(resid, x, 1e-12)) continue;
            auto s = unpack(x);
            for (double& v : s) v = std::max(v, 0.0);
            if (acceptable(s)) return finish(s);
        }
    }
    throw numeric_error(
        "kerckhoff_point: search budget exhausted (a diagnostic; existence is not refuted)");
}

}  // namespace detail

// Rescale so the minimum coordinate is 1; boundary values scale by 1/min^2
// (the b_j are homogeneous quadratics).
inline FeasiblePoint rescale_min_one(const FeasiblePoint& p) {
    double mn = *std::min_element(p.s.begin(), p.s.end());
    if (!(mn > 0.0))
        throw numeric_error("rescale_min_one: minimum coordinate is zero (impossible on a valid system)");
    FeasiblePoint q = p;
    for (double& v : q.s) v /= mn;
    for (double& v : q.b_values) v /= mn * mn;
    q.min_b = p.min_b / (mn * mn);
    q.tol_achieved = p.tol_achieved / (mn * mn);
    return q;
}

// Counts sign changes of b_1 along the simplex segment from t1 = (n, 0) to
// t2 = (0, n), by scan plus bisection refinement.  The count is odd for
// valid endpoint signs (a quadratic crosses once).
inline int count_zeros_n2(const QuadraticBoundarySystem& sys, int scan_points = 4096) {
    sys.require_shape();
    if (sys.n != 2) throw hypothesis_error("count_zeros_n2: requires n = 2");
    auto b1 = [&](double lambda) {
        std::vector<double> s = {2.0 * (1.0 - lambda), 2.0 * lambda};
        return eval_b(sys, s)[0];
    };
    double b_start = b1(0.0), b_end = b1(1.0);
    if (!(b_start > 0.0) || !(b_end < 0.0))
        throw hypothesis_error("count_zeros_n2: endpoint signs must be b1(t1) > 0, b1(t2) < 0");
    int count = 0;
    double prev = b_start;
    for (int i = 1; i <= scan_points; ++i) {
        double lam = static_cast<double>(i) / scan_points;
        double cur = b1(lam);
        if ((prev > 0.0 && cur < 0.0) || (prev < 0.0 && cur > 0.0)) {
            // refine the crossing to 1e-6 of the parameter, confirming it
            double lo = static_cast<double>(i - 1) / scan_points, hi = lam;
            double flo = prev;
            while (hi - lo > 1e-6) {
                double mid = 0.5 * (lo + hi);
                double fm = b1(mid);
                if ((flo > 0.0) == (fm > 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            ++count;
        }
        if (cur != 0.0) prev = cur;
    }
    return count;
}

// Seeded random instance, rejection-sampled to validity.  Ranges keep the
// feasible region well conditioned for grid search.
inline QuadraticBoundarySystem gen_random_system(int n, std::uint64_t seed) {
    if (n < 1) throw hypothesis_error("gen_random_system: need n >= 1");
    SplitMix64 rng(seed);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        QuadraticBoundarySystem sys;
        sys.n = n;
        sys.seed = seed;
        sys.areas.resize(n);
        for (double& a : sys.areas) a = rng.uniform(0.5, 2.0);
        sys.coeff_c = rng.uniform(0.5, 2.0);
        sys.coeff_b = rng.uniform(0.1, 1.0);
        sys.coeff_a = rng.uniform(-0.5, -0.05);
        sys.X.resize(static_cast<std::size_t>(n) * n);
        sys.Y.resize(static_cast<std::size_t>(n) * n);
        for (double& v : sys.X) v = rng.uniform(-0.5, 0.5);
        for (double& v : sys.Y) v = rng.uniform(-0.5, 0.5);
        if (validity_check(sys)) return sys;
    }
    throw numeric_error("gen_random_system: rejection sampling failed after 1000 attempts");
}

}  // namespace cuspforge::lab
