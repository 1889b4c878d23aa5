#pragma once

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <string>

#include "cuspforge/packing.hpp"

// Static SVG views of a solved packing: the full tangency picture with the
// dual circles, and the rectangle strip at one edge (tangency point sent to
// infinity: two white lines, two shaded lines, interstitial circles).

namespace cuspforge::svg {

namespace detail {

inline std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

struct Canvas {
    std::ostringstream body;
    double min_x = 0, min_y = 0, max_x = 0, max_y = 0;
    bool first = true;

    void grow(double x, double y, double pad) {
        if (first) {
            min_x = x - pad;
            max_x = x + pad;
            min_y = y - pad;
            max_y = y + pad;
            first = false;
        } else {
            min_x = std::min(min_x, x - pad);
            max_x = std::max(max_x, x + pad);
            min_y = std::min(min_y, y - pad);
            max_y = std::max(max_y, y + pad);
        }
    }

    // SVG's y axis points down; mirror so the layout reads like the math.
    void circle(Vec2 c, double r, const std::string& style) {
        grow(c.x, -c.y, r);
        body << "  <circle cx=\"" << num(c.x) << "\" cy=\"" << num(-c.y) << "\" r=\"" << num(r)
             << "\" " << style << "/>\n";
    }
    void line(Vec2 a, Vec2 b, const std::string& style) {
        grow(a.x, -a.y, 0.0);
        grow(b.x, -b.y, 0.0);
        body << "  <line x1=\"" << num(a.x) << "\" y1=\"" << num(-a.y) << "\" x2=\"" << num(b.x)
             << "\" y2=\"" << num(-b.y) << "\" " << style << "/>\n";
    }
    void text(Vec2 at, const std::string& s, double size) {
        grow(at.x, -at.y, size);
        body << "  <text x=\"" << num(at.x) << "\" y=\"" << num(-at.y) << "\" font-size=\""
             << num(size) << "\" text-anchor=\"middle\" fill=\"#444\">" << s << "</text>\n";
    }

    std::string finish() const {
        double w = max_x - min_x, h = max_y - min_y;
        double margin = 0.04 * std::max(w, h);
        std::ostringstream out;
        out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << num(min_x - margin) << " "
            << num(min_y - margin) << " " << num(w + 2 * margin) << " " << num(h + 2 * margin)
            << "\">\n";
        out << body.str();
        out << "</svg>\n";
        return out.str();
    }
};

}  // namespace detail

inline std::string packing_svg(const CirclePacking& p, bool with_duals = true, bool with_labels = true) {
    detail::Canvas cv;
    double stroke = 0.01;
    for (const auto& c : p.circles) stroke = std::max(stroke, c.radius);
    stroke *= 0.01;
    const std::string circle_style =
        "fill=\"none\" stroke=\"#000\" stroke-width=\"" + detail::num(stroke) + "\"";
    const std::string dual_style = "fill=\"none\" stroke=\"#888\" stroke-width=\"" +
                                   detail::num(stroke) + "\" stroke-dasharray=\"" +
                                   detail::num(4 * stroke) + "\"";
    for (int v = 0; v < p.nerve.vertex_count(); ++v) cv.circle(p.circles[v].center, p.circles[v].radius, circle_style);
    if (with_duals) {
        for (int f = 0; f < p.nerve.face_count(); ++f) {
            Circle dc = dual_circle(p, f);
            cv.circle(dc.center, dc.radius, dual_style);
        }
    }
    if (with_labels) {
        for (int v = 0; v < p.nerve.vertex_count(); ++v) {
            double size = std::max(p.circles[v].radius * 0.5, 8.0 * stroke);
            cv.text(p.circles[v].center, p.nerve.labels[v], size);
        }
    }
    return cv.finish();
}

// Strip picture at a nerve edge: sends the tangency point to infinity and
// draws the two white lines, the two shaded (dual) lines, and the images of
// the remaining circles.
inline std::string strip_svg(const CirclePacking& p, int edge) {
    if (edge < 0 || edge >= p.nerve.edge_count()) throw hypothesis_error("strip_svg: no such edge");
    const NerveEdge& e = p.nerve.edges[edge];
    const Circle &cu = p.circles[e.u], &cv_ = p.circles[e.v];
    Vec2 t = cu.center + (cv_.center - cu.center) * (cu.radius / (cu.radius + cv_.radius));

    // frame: nhat across the strip (white-line normal in image space),
    // ehat along it (shaded-line normal)
    Vec2 q = cu.center - t;
    Vec2 nhat = Vec2{q.x, -q.y} * (1.0 / q.norm());
    Vec2 ehat{nhat.y, nhat.x};
    auto frame = [&](Vec2 z) { return Vec2{z.dot(ehat), z.dot(nhat)}; };

    double top = 0.5 / cu.radius;     // white line of u: nhat . z = top
    double bottom = -0.5 / cv_.radius;

    auto fs = p.nerve.faces_of_edge(edge);
    double off[2];
    for (int i = 0; i < 2; ++i) {
        int x = p.nerve.apex(fs[i], edge);
        const Circle& cx = p.circles[x];
        Vec2 tux = cu.center + (cx.center - cu.center) * (cu.radius / (cu.radius + cx.radius));
        off[i] = frame(invert_point(tux, t)).x;
    }
    double lo = std::min(off[0], off[1]), hi = std::max(off[0], off[1]);
    double span = hi - lo;

    detail::Canvas cv;
    double stroke = 0.01 * std::max(span, top - bottom);
    const std::string white_style =
        "fill=\"none\" stroke=\"#000\" stroke-width=\"" + detail::num(stroke) + "\"";
    const std::string shaded_style = "fill=\"none\" stroke=\"#555\" stroke-width=\"" +
                                     detail::num(stroke) + "\" stroke-dasharray=\"" +
                                     detail::num(4 * stroke) + "\"";
    double ext = 0.35 * span + 0.5 * (top - bottom);
    cv.line({lo - ext, top}, {hi + ext, top}, white_style);
    cv.line({lo - ext, bottom}, {hi + ext, bottom}, white_style);
    cv.line({off[0], bottom - 0.2 * (top - bottom)}, {off[0], top + 0.2 * (top - bottom)}, shaded_style);
    cv.line({off[1], bottom - 0.2 * (top - bottom)}, {off[1], top + 0.2 * (top - bottom)}, shaded_style);

    for (int v = 0; v < p.nerve.vertex_count(); ++v) {
        if (v == e.u || v == e.v) continue;
        Circle img = invert_circle_off_point(p.circles[v], t);
        Vec2 c = frame(img.center);
        if (c.x < lo - ext || c.x > hi + ext) continue;
        cv.circle(c, img.radius, white_style);
    }
    return cv.finish();
}

}  // namespace cuspforge::svg
