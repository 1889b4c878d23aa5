#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "cuspforge/common.hpp"
#include "cuspforge/diagram.hpp"
#include "cuspforge/geometry.hpp"

// Numerical circle packing for a nerve triangulation, and the cusp geometry
// read off from it: rectangle similarity structures at tangencies (via the
// Moebius map sending the tangency point to infinity), slope normalized
// lengths, and the knot-strand cusp height.

namespace cuspforge {

struct RectangleShape {
    int edge_id = -1;
    double white = 0.0;  // white side length w, in units where the shaded side is 1
    double modulus() const { return white; }
};

struct PackingResiduals {
    std::vector<double> edge_tangency;   // |dist - (ri + rj)| per edge
    std::vector<double> vertex_defect;   // angle-sum defect per vertex
    double max_tangency = 0.0;
    double max_defect = 0.0;
    double max_overlap = 0.0;  // penetration depth over non-adjacent pairs
    double worst() const { return std::max({max_tangency, max_defect, max_overlap}); }
};

struct CirclePacking {
    NerveTriangulation nerve;
    std::vector<Circle> circles;  // per nerve vertex, gauge normalization
    int gauge_face = 0;
    double tol = 0.0;
    PackingResiduals residuals;

    GeneralizedCircle circle_of(int v) const {
        return GeneralizedCircle::make_circle(circles[v].center, circles[v].radius);
    }
};

struct SolveOptions {
    int gauge_face = 0;
    int max_sweeps = 20000;
    int max_newton = 60;
};

namespace packing_detail {

// Angle at the circle of radius rv in the triangle of mutually tangent
// circles (rv, ra, rb).
inline double corner_angle(double rv, double ra, double rb) {
    double q = (ra / (rv + ra)) * (rb / (rv + rb));
    return 2.0 * std::asin(std::sqrt(q));
}

// d(angle)/d(q) factor and partials, used by the Newton polish.
struct CornerGrad {
    double angle, d_rv, d_ra, d_rb;
};

inline CornerGrad corner_grad(double rv, double ra, double rb) {
    double q = (ra / (rv + ra)) * (rb / (rv + rb));
    double s = std::sqrt(q);
    double dq = 1.0 / (s * std::sqrt(1.0 - q));  // d(2 asin sqrt q)/dq
    CornerGrad g;
    g.angle = 2.0 * std::asin(s);
    g.d_rv = dq * (-q) * (1.0 / (rv + ra) + 1.0 / (rv + rb));
    g.d_ra = dq * q * rv / (ra * (rv + ra));
    g.d_rb = dq * q * rv / (rb * (rv + rb));
    return g;
}

// Dense Gaussian elimination with partial pivoting; the radius systems here
// have at most a few dozen unknowns.
inline bool solve_dense(std::vector<double>& A, std::vector<double>& b, int n) {
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(A[r * n + col]) > std::abs(A[piv * n + col])) piv = r;
        if (std::abs(A[piv * n + col]) < 1e-300) return false;
        if (piv != col) {
            for (int k = 0; k < n; ++k) std::swap(A[col * n + k], A[piv * n + k]);
            std::swap(b[col], b[piv]);
        }
        for (int r = col + 1; r < n; ++r) {
            double m = A[r * n + col] / A[col * n + col];
            if (m == 0.0) continue;
            for (int k = col; k < n; ++k) A[r * n + k] -= m * A[col * n + k];
            b[r] -= m * b[col];
        }
    }
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int k = r + 1; k < n; ++k) s -= A[r * n + k] * b[k];
        b[r] = s / A[r * n + r];
    }
    return true;
}

}  // namespace packing_detail

// Checks the Andreev preconditions on an arbitrary nerve: a simple
// triangulation of the sphere.
inline void require_andreev(const NerveTriangulation& nv) {
    if (!nv.map.well_formed() || nv.map.euler_characteristic() != 2)
        throw validation_error("nerve is not a sphere map");
    std::set<std::pair<int, int>> seen;
    for (const auto& e : nv.edges) {
        if (e.u == e.v) throw validation_error("AndreevViolation(self-loop): nerve edge " + std::to_string(e.id));
        if (!seen.emplace(std::min(e.u, e.v), std::max(e.u, e.v)).second)
            throw validation_error("AndreevViolation(doubled edge): nerve edge " + std::to_string(e.id));
    }
    for (const auto& cyc : nv.map.faces().cycles)
        if (cyc.size() != 3) throw validation_error("nerve face is not a triangle");
}

// Solves the tangency packing whose nerve is the given triangulation.
// Gauge: the three circles of `gauge_face` are mutually tangent unit
// circles and the rest of the packing fills their interstice.  Radii are
// found by angle-sum iteration (uniform-neighbor updates with supersteps)
// plus a damped Newton polish; centers by breadth-first face placement.
inline CirclePacking solve_packing(const NerveTriangulation& nv, double tol, SolveOptions opt = {}) {
    if (!(tol >= 1e-14 && tol <= 1e-6)) throw hypothesis_error("solve_packing: tol must lie in [1e-14, 1e-6]");
    require_andreev(nv);
    const int V = nv.vertex_count();
    if (opt.gauge_face < 0 || opt.gauge_face >= nv.face_count())
        throw hypothesis_error("solve_packing: gauge face out of range");

    const auto gauge = nv.face_vertices(opt.gauge_face);
    std::vector<bool> fixed(V, false);
    for (int v : gauge) fixed[v] = true;

    // cyclic links
    std::vector<std::vector<int>> nbr(V);
    for (int v = 0; v < V; ++v)
        for (auto [u, e] : nv.link(v)) nbr[v].push_back(u);

    std::vector<double> r(V, 0.5);
    for (int v : gauge) r[v] = 1.0;

    std::vector<int> interior;
    for (int v = 0; v < V; ++v)
        if (!fixed[v]) interior.push_back(v);
    const int m = static_cast<int>(interior.size());

    auto theta = [&](int v, const std::vector<double>& rad) {
        const auto& ns = nbr[v];
        int k = static_cast<int>(ns.size());
        double sum = 0.0;
        for (int i = 0; i < k; ++i)
            sum += packing_detail::corner_angle(rad[v], rad[ns[i]], rad[ns[(i + 1) % k]]);
        return sum;
    };

    // Stage 1: uniform-neighbor iteration with occasional supersteps.
    const double two_pi = 2.0 * M_PI;
    double prev_err = std::numeric_limits<double>::infinity();
    std::vector<double> r_prev = r;
    double lambda_prev = -1.0;
    for (int sweep = 0; sweep < opt.max_sweeps && m > 0; ++sweep) {
        double err = 0.0;
        for (int v : interior) {
            int k = static_cast<int>(nbr[v].size());
            double th = theta(v, r);
            err = std::max(err, std::abs(th - two_pi));
            double beta = std::sin(th / (2.0 * k));
            double rhat = beta * r[v] / (1.0 - beta);
            double delta = std::sin(M_PI / k);
            r[v] = rhat * (1.0 - delta) / delta;
        }
        if (err < 1e-8) break;
        double lambda = err / prev_err;
        if (sweep > 4 && lambda < 1.0 && std::abs(lambda - lambda_prev) < 0.01) {
            // superstep: extrapolate along the contraction direction
            double accel = std::min(lambda / (1.0 - lambda), 10.0);
            for (int v : interior) {
                double step = r[v] - r_prev[v];
                r[v] = std::max(r[v] + accel * step, 1e-12);
            }
        }
        r_prev = r;
        lambda_prev = lambda;
        prev_err = err;
    }

    // Stage 2: damped Newton on log radii.
    std::vector<int> slot(V, -1);
    for (int i = 0; i < m; ++i) slot[interior[i]] = i;
    auto residual_inf = [&](const std::vector<double>& rad) {
        double e = 0.0;
        for (int v : interior) e = std::max(e, std::abs(theta(v, rad) - two_pi));
        return e;
    };
    double err = residual_inf(r);
    for (int it = 0; it < opt.max_newton && m > 0 && err > 1e-14; ++it) {
        std::vector<double> J(static_cast<std::size_t>(m) * m, 0.0), Fv(m, 0.0);
        for (int i = 0; i < m; ++i) {
            int v = interior[i];
            const auto& ns = nbr[v];
            int k = static_cast<int>(ns.size());
            double sum = 0.0;
            for (int t = 0; t < k; ++t) {
                int a = ns[t], b = ns[(t + 1) % k];
                auto gr = packing_detail::corner_grad(r[v], r[a], r[b]);
                sum += gr.angle;
                J[i * m + i] += gr.d_rv * r[v];
                if (slot[a] >= 0) J[i * m + slot[a]] += gr.d_ra * r[a];
                if (slot[b] >= 0) J[i * m + slot[b]] += gr.d_rb * r[b];
            }
            Fv[i] = -(sum - two_pi);
        }
        if (!packing_detail::solve_dense(J, Fv, m)) break;
        double lam = 1.0;
        std::vector<double> trial(V);
        for (int bt = 0; bt < 40; ++bt) {
            trial = r;
            for (int i = 0; i < m; ++i) trial[interior[i]] = r[interior[i]] * std::exp(lam * Fv[i]);
            double e2 = residual_inf(trial);
            if (e2 < err) {
                r = trial;
                err = e2;
                break;
            }
            lam *= 0.5;
        }
        if (lam < 1e-11) break;
    }

    // Degeneracy guard before layout.
    double rmin = *std::min_element(r.begin(), r.end());
    double rmax = *std::max_element(r.begin(), r.end());
    if (!(rmin > 0.0) || rmax / rmin > 1e8)
        throw numeric_error("solve_packing: radius ratio exceeds 1e8, packing untrustworthy");

    // Stage 3: layout.  Faces are traced with their interior on the right,
    // so every non-gauge face is placed clockwise and the gauge triangle
    // counterclockwise (it bounds the picture).
    std::vector<Vec2> pos(V);
    std::vector<bool> placed(V, false);
    {
        const auto& cyc = nv.map.faces().cycles[opt.gauge_face];
        int g0 = nv.map.tail(cyc[0]), g1 = nv.map.tail(cyc[1]), g2 = nv.map.tail(cyc[2]);
        double d01 = r[g0] + r[g1], d02 = r[g0] + r[g2], d12 = r[g1] + r[g2];
        pos[g0] = {0.0, 0.0};
        pos[g1] = {d01, 0.0};
        double ax = (d01 * d01 + d02 * d02 - d12 * d12) / (2.0 * d01);
        double ay = std::sqrt(std::max(d02 * d02 - ax * ax, 0.0));
        pos[g2] = {ax, ay};  // counterclockwise
        placed[g0] = placed[g1] = placed[g2] = true;
    }
    const auto& faces = nv.map.faces();
    std::vector<bool> face_done(faces.count(), false);
    face_done[opt.gauge_face] = true;
    bool progress = true;
    int n_placed = 3;
    while (progress && n_placed < V) {
        progress = false;
        for (int f = 0; f < faces.count(); ++f) {
            if (face_done[f]) continue;
            const auto& cyc = faces.cycles[f];
            for (int dart : cyc) {
                int u = nv.map.tail(dart), v = nv.map.head(dart);
                if (!placed[u] || !placed[v]) continue;
                int w = -1;
                for (int dd : cyc) {
                    int cand = nv.map.tail(dd);
                    if (cand != u && cand != v) w = cand;
                }
                if (w < 0 || placed[w]) {
                    face_done[f] = true;
                    break;
                }
                double duv = (pos[v] - pos[u]).norm();
                double duw = r[u] + r[w], dvw = r[v] + r[w];
                Vec2 uhat = (pos[v] - pos[u]) * (1.0 / duv);
                double a = (duv * duv + duw * duw - dvw * dvw) / (2.0 * duv);
                double b2 = duw * duw - a * a;
                double b = std::sqrt(std::max(b2, 0.0));
                // interior on the right of u->v
                pos[w] = pos[u] + uhat * a - uhat.perp() * b;
                placed[w] = true;
                face_done[f] = true;
                ++n_placed;
                progress = true;
                break;
            }
        }
    }
    if (n_placed != V) throw numeric_error("solve_packing: layout did not reach every circle");

    CirclePacking p;
    p.nerve = nv;
    p.gauge_face = opt.gauge_face;
    p.tol = tol;
    p.circles.resize(V);
    for (int v = 0; v < V; ++v) p.circles[v] = {pos[v], r[v]};

    // Residuals.
    auto& res = p.residuals;
    res.edge_tangency.resize(nv.edge_count());
    for (const auto& e : nv.edges) {
        double d = dist(pos[e.u], pos[e.v]);
        res.edge_tangency[e.id] = std::abs(d - (r[e.u] + r[e.v]));
        res.max_tangency = std::max(res.max_tangency, res.edge_tangency[e.id]);
    }
    res.vertex_defect.resize(V);
    for (int v = 0; v < V; ++v) {
        if (!fixed[v]) {
            res.vertex_defect[v] = std::abs(theta(v, r) - two_pi);
        } else {
            // gauge corner: fan angle against the gauge triangle's corner
            double expect = packing_detail::corner_angle(r[v], 1.0, 1.0);
            double fan = 0.0;
            const auto& ns = nbr[v];
            int k = static_cast<int>(ns.size());
            // sum over incident faces other than the gauge face
            for (int i = 0; i < k; ++i) {
                int a = ns[i], b = ns[(i + 1) % k];
                bool both_gauge = fixed[a] && fixed[b];
                if (both_gauge) continue;  // that corner belongs to the gauge face
                fan += packing_detail::corner_angle(r[v], r[a], r[b]);
            }
            res.vertex_defect[v] = std::abs(fan - expect);
        }
        res.max_defect = std::max(res.max_defect, res.vertex_defect[v]);
    }
    for (int u = 0; u < V; ++u)
        for (int v = u + 1; v < V; ++v) {
            if (nv.edge_between(u, v)) continue;
            double pen = (r[u] + r[v]) - dist(pos[u], pos[v]);
            res.max_overlap = std::max(res.max_overlap, pen);
        }

    if (res.worst() > tol)
        throw numeric_error("solve_packing: did not reach tolerance, worst residual " +
                            std::to_string(res.worst()));
    return p;
}

// Circle through the three pairwise tangency points of a face; orthogonal
// to the three packed circles.
inline Circle dual_circle(const CirclePacking& p, int face) {
    if (face < 0 || face >= p.nerve.face_count()) throw hypothesis_error("dual_circle: face out of range");
    auto fv = p.nerve.face_vertices(face);
    Vec2 t[3];
    for (int i = 0; i < 3; ++i) {
        int u = fv[i], v = fv[(i + 1) % 3];
        const Circle &cu = p.circles[u], &cv = p.circles[v];
        t[i] = cu.center + (cv.center - cu.center) * (cu.radius / (cu.radius + cv.radius));
    }
    auto c = circumcircle(t[0], t[1], t[2]);
    if (!c) throw numeric_error("dual_circle: tangency points are collinear (degenerate face)");
    return *c;
}

// Rectangle similarity structure at a nerve edge, computed by sending the
// tangency point to infinity.  The two packed circles map to parallel white
// lines, the two adjacent dual circles to parallel shaded lines orthogonal
// to them; returns the white side length with the shaded side normalized
// to 1.
inline RectangleShape rectangle_at(const CirclePacking& p, int edge) {
    if (edge < 0 || edge >= p.nerve.edge_count()) throw hypothesis_error("rectangle_at: no such edge");
    const NerveEdge& e = p.nerve.edges[edge];
    const Circle &cu = p.circles[e.u], &cv = p.circles[e.v];
    Vec2 t = cu.center + (cv.center - cu.center) * (cu.radius / (cu.radius + cv.radius));

    // separation of the white lines under z -> 1/(z - t)
    double white_sep = 0.5 / cu.radius + 0.5 / cv.radius;

    // Normal of the shaded lines: perpendicular to the white normal in image
    // space.  The inversion conjugates directions, so the white normal there
    // is (nw.x, -nw.y) and its perpendicular is (nw.y, nw.x).
    Vec2 nw = cu.center - t;
    Vec2 mhat = Vec2{nw.y, nw.x} * (1.0 / nw.norm());

    auto shaded_offset = [&](int face) {
        int x = p.nerve.apex(face, edge);
        const Circle& cx = p.circles[x];
        Vec2 tux = cu.center + (cx.center - cu.center) * (cu.radius / (cu.radius + cx.radius));
        Vec2 tvx = cv.center + (cx.center - cv.center) * (cv.radius / (cv.radius + cx.radius));
        Vec2 p1 = invert_point(tux, t), p2 = invert_point(tvx, t);
        return 0.5 * (p1.dot(mhat) + p2.dot(mhat));
    };
    auto fs = p.nerve.faces_of_edge(edge);
    double w = std::abs(shaded_offset(fs[0]) - shaded_offset(fs[1])) / white_sep;
    return RectangleShape{edge, w};
}

// Normalized length of the filling slope on a crossing-circle cusp tiled by
// two w-by-s rectangles with c steps along the shaded sides:
// sqrt((w^2 + c^2 s^2) / (2 w s)).  Parity independent.
inline double slope_norm_length(double w, double s, int c) {
    if (!(w > 0.0) || !(s > 0.0) || c < 1)
        throw hypothesis_error("slope_norm_length: requires w > 0, s > 0, c >= 1");
    return std::sqrt((w * w + static_cast<double>(c) * c * s * s) / (2.0 * w * s));
}

struct SlopeReport {
    int edge_id = -1;
    std::string regions;  // label pair, e.g. "A-B1"
    double white = 0.0;
    int crossings = 0;
    double norm_length = 0.0;
};

struct CuspReport {
    int n = 0;
    std::vector<SlopeReport> slopes;           // one per crossing-circle edge
    std::vector<RectangleShape> strand_tiles;  // one per strand edge
    double H_raw = 0.0;       // total height, shaded side = 1 units
    double meridian = 2.0;    // two shaded sides
    double h0 = 0.0;          // sqrt(H_raw / 2)
    double h0_min = 0.0, h0_max = 0.0;
    std::vector<std::string> diagnostics;
    double max_tangency_residual = 0.0;
    double max_angle_defect = 0.0;
    double max_overlap = 0.0;
    double worst_residual = 0.0;
    double tol = 0.0;
    bool ok() const { return diagnostics.empty(); }
};

inline CuspReport cusp_report(const CirclePacking& p);

// Checks that the packing actually solves the nerve of this diagram before
// reading off the cusp geometry.
inline CuspReport cusp_report(const TwistDiagram& d, const CirclePacking& p) {
    if (p.nerve.n != d.twist_count() || p.nerve.edge_count() != d.map.edge_count())
        throw hypothesis_error("cusp_report: packing does not solve the nerve of this diagram");
    for (const auto& e : d.edges) {
        const NerveEdge& ne = p.nerve.edges[e.id];
        bool crossing = ne.kind == NerveEdgeKind::crossing_circle;
        if (crossing != (e.kind == EdgeKind::twist) || (crossing && ne.crossings != e.crossings))
            throw hypothesis_error("cusp_report: packing does not solve the nerve of this diagram");
    }
    return cusp_report(p);
}

// Cusp geometry of the augmented link: rectangle and slope length per
// crossing circle, and the knot-strand height from the strand-edge white
// sides.  Interval violations are reported as diagnostics, never silently.
inline CuspReport cusp_report(const CirclePacking& p) {
    const NerveTriangulation& nv = p.nerve;
    if (p.residuals.worst() > p.tol)
        throw numeric_error("cusp_report: packing residuals above tolerance");

    CuspReport rep;
    rep.n = nv.n;
    rep.tol = p.tol;
    rep.max_tangency_residual = p.residuals.max_tangency;
    rep.max_angle_defect = p.residuals.max_defect;
    rep.max_overlap = std::max(p.residuals.max_overlap, 0.0);
    rep.worst_residual = p.residuals.worst();
    const double n = nv.n;
    const double wslack = 1e-8;
    for (const auto& e : nv.edges) {
        RectangleShape rect = rectangle_at(p, e.id);
        if (rect.white < 1.0 - wslack || rect.white > (n - 1.0) + wslack)
            rep.diagnostics.push_back("edge " + std::to_string(e.id) + ": white side " +
                                      std::to_string(rect.white) + " outside [1, n-1]");
        if (e.kind == NerveEdgeKind::crossing_circle) {
            SlopeReport s;
            s.edge_id = e.id;
            s.regions = nv.labels[e.u] + "-" + nv.labels[e.v];
            s.white = rect.white;
            s.crossings = e.crossings;
            s.norm_length = slope_norm_length(rect.white, 1.0, e.crossings);
            if (s.norm_length < std::sqrt(static_cast<double>(e.crossings)) - 1e-8)
                rep.diagnostics.push_back("edge " + std::to_string(e.id) + ": slope length below sqrt(c)");
            rep.slopes.push_back(s);
        } else {
            rep.strand_tiles.push_back(rect);
            rep.H_raw += rect.white;
        }
    }
    rep.h0 = std::sqrt(rep.H_raw / 2.0);
    rep.h0_min = std::sqrt(n);
    rep.h0_max = std::sqrt(n * (n - 1.0));
    if (rep.h0 < rep.h0_min - 1e-6 || rep.h0 > rep.h0_max + 1e-6)
        rep.diagnostics.push_back("normalized height " + std::to_string(rep.h0) +
                                  " outside [sqrt(n), sqrt(n(n-1))]");
    return rep;
}

}  // namespace cuspforge
