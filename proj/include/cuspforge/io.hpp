#pragma once

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cuspforge/boundary_lab.hpp"
#include "cuspforge/bounds.hpp"
#include "cuspforge/diagram.hpp"
#include "cuspforge/hk.hpp"
#include "cuspforge/packing.hpp"

// Structured-text formats (cusp-forge-diagram/1 and cusp-forge-qbs/1),
// report rendering, and the versioned JSON views.

namespace cuspforge::io {

inline constexpr const char* kDiagramFormat = "cusp-forge-diagram/1";
inline constexpr const char* kQbsFormat = "cusp-forge-qbs/1";
inline constexpr const char* kJsonSchema = "cusp-forge-report/1";

// Locale-independent %.12g rendering; used everywhere output must be
// byte-stable.
inline std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// Exact round-trip rendering for data files.
inline std::string fmt_exact(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw parse_error("cannot write file: " + path);
    out << content;
}

// ---------------------------------------------------------------- diagram

inline std::string write_diagram(const TwistDiagram& d) {
    std::ostringstream out;
    out << "format " << kDiagramFormat << "\n";
    if (d.generator_seed) out << "# generator seed " << *d.generator_seed << "\n";
    for (int v = 0; v < d.map.vertex_count(); ++v) {
        out << "vertex " << v;
        for (int dart : d.map.rotation(v)) out << " " << d.map.edge_of(dart);
        out << "\n";
    }
    for (const auto& e : d.edges) {
        out << "edge " << e.id << " " << e.u << " " << e.v;
        if (e.kind == EdgeKind::twist)
            out << " twist " << e.crossings << " " << (e.odd ? "odd" : "even");
        else
            out << " plain";
        out << "\n";
    }
    for (std::size_t f = 0; f < d.region_labels.size(); ++f)
        if (!d.region_labels[f].empty()) out << "region " << f << " " << d.region_labels[f] << "\n";
    return out.str();
}

// Parses the diagram format and validates all type invariants; errors name
// the offending line and element.
inline TwistDiagram parse_diagram(const std::string& text) {
    struct VertexLine {
        int id;
        std::vector<int> edge_ids;
        int line_no;
    };
    struct EdgeLine {
        DiagramEdge e;
        int line_no;
    };
    std::vector<VertexLine> vlines;
    std::vector<EdgeLine> elines;
    std::vector<std::pair<int, std::string>> regions;
    bool format_seen = false;

    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    auto fail = [&](const std::string& msg) {
        throw parse_error("line " + std::to_string(line_no) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok) || tok[0] == '#') continue;
        if (!format_seen) {
            std::string fmt_name;
            if (tok != "format" || !(ls >> fmt_name) || fmt_name != kDiagramFormat)
                fail("expected 'format " + std::string(kDiagramFormat) + "'");
            format_seen = true;
            continue;
        }
        if (tok == "vertex") {
            VertexLine v;
            v.line_no = line_no;
            if (!(ls >> v.id)) fail("vertex: missing id");
            int e;
            while (ls >> e) v.edge_ids.push_back(e);
            if (v.edge_ids.size() != 3) fail("vertex " + std::to_string(v.id) + ": non-trivalent vertex (" +
                                             std::to_string(v.edge_ids.size()) + " incident edges)");
            vlines.push_back(std::move(v));
        } else if (tok == "edge") {
            EdgeLine el;
            el.line_no = line_no;
            std::string kind;
            if (!(ls >> el.e.id >> el.e.u >> el.e.v >> kind)) fail("edge: expected '<id> <u> <v> <kind>'");
            if (kind == "twist") {
                std::string parity;
                if (!(ls >> el.e.crossings >> parity)) fail("twist edge: expected '<crossings> <even|odd>'");
                if (el.e.crossings < 1) fail("twist edge " + std::to_string(el.e.id) + ": crossings must be >= 1");
                if (parity != "even" && parity != "odd") fail("twist edge: parity must be 'even' or 'odd'");
                el.e.odd = parity == "odd";
                if (el.e.odd != (el.e.crossings % 2 == 1))
                    fail("twist edge " + std::to_string(el.e.id) + ": parity flag disagrees with crossing count");
                el.e.kind = EdgeKind::twist;
            } else if (kind == "plain") {
                el.e.kind = EdgeKind::plain;
            } else {
                fail("edge kind must be 'twist' or 'plain'");
            }
            elines.push_back(std::move(el));
        } else if (tok == "region") {
            int f;
            std::string label;
            if (!(ls >> f >> label)) fail("region: expected '<face> <label>'");
            regions.emplace_back(f, label);
        } else {
            fail("unknown directive '" + tok + "'");
        }
    }
    if (!format_seen) throw parse_error("missing 'format " + std::string(kDiagramFormat) + "' line");

    const int V = static_cast<int>(vlines.size());
    const int E = static_cast<int>(elines.size());
    std::vector<int> vseen(V, 0), eseen(E, 0);
    for (const auto& v : vlines) {
        line_no = v.line_no;
        if (v.id < 0 || v.id >= V) fail("vertex id " + std::to_string(v.id) + " not in [0, " + std::to_string(V) + ")");
        if (vseen[v.id]++) fail("duplicate vertex id " + std::to_string(v.id));
    }
    for (const auto& el : elines) {
        line_no = el.line_no;
        if (el.e.id < 0 || el.e.id >= E) fail("edge id " + std::to_string(el.e.id) + " not in [0, " + std::to_string(E) + ")");
        if (eseen[el.e.id]++) fail("duplicate edge id " + std::to_string(el.e.id));
        if (el.e.u < 0 || el.e.u >= V || el.e.v < 0 || el.e.v >= V)
            fail("edge " + std::to_string(el.e.id) + ": dangling endpoint reference");
    }

    TwistDiagram d;
    d.map = PlanarMap(V);
    d.edges.resize(E);
    for (const auto& el : elines) {
        d.edges[el.e.id] = el.e;
    }
    for (int e = 0; e < E; ++e) d.map.add_edge(d.edges[e].u, d.edges[e].v);

    // rotations: edge ids to darts; a loop uses dart 0 then dart 1
    for (const auto& v : vlines) {
        line_no = v.line_no;
        std::map<int, int> used;
        for (int e : v.edge_ids) {
            if (e < 0 || e >= E) fail("vertex " + std::to_string(v.id) + ": dangling edge reference " + std::to_string(e));
            const DiagramEdge& de = d.edges[e];
            if (de.u != v.id && de.v != v.id)
                fail("vertex " + std::to_string(v.id) + ": edge " + std::to_string(e) + " is not incident");
            int side;
            if (de.u == v.id && de.v == v.id) {
                side = used[e];  // loop: first mention is dart 0, second dart 1
                if (side >= 2) fail("vertex " + std::to_string(v.id) + ": loop edge listed more than twice");
            } else {
                side = de.u == v.id ? 0 : 1;
                if (used[e] >= 1)
                    fail("vertex " + std::to_string(v.id) + ": edge " + std::to_string(e) + " repeated in rotation");
            }
            ++used[e];
            d.map.append_to_rotation(v.id, PlanarMap::dart_of(e, side));
        }
    }
    if (!d.map.well_formed()) throw parse_error("rotation system is inconsistent (some dart missing or doubled)");

    ValidationReport rep = validate(d);
    if (!rep.ok) {
        const Violation& v = rep.violations.front();
        std::string elems;
        for (int id : v.elements) elems += " " + std::to_string(id);
        throw parse_error("invalid diagram: " + v.condition + " (" + v.detail + ")" +
                          (elems.empty() ? "" : "; elements:" + elems));
    }

    d.region_labels.assign(d.map.faces().count(), "");
    for (auto& [f, label] : regions) {
        if (f < 0 || f >= d.map.faces().count()) throw parse_error("region index out of range: " + std::to_string(f));
        d.region_labels[f] = label;
    }
    return d;
}

// -------------------------------------------------------------------- qbs

inline std::string write_qbs(const lab::QuadraticBoundarySystem& sys) {
    std::ostringstream out;
    out << "format " << kQbsFormat << "\n";
    out << "n " << sys.n << "\n";
    out << "areas";
    for (double a : sys.areas) out << " " << fmt_exact(a);
    out << "\n";
    out << "coeff_a " << fmt_exact(sys.coeff_a) << "\n";
    out << "coeff_b " << fmt_exact(sys.coeff_b) << "\n";
    out << "coeff_c " << fmt_exact(sys.coeff_c) << "\n";
    for (int k = 0; k < sys.n; ++k) {
        out << "x_row";
        for (int j = 0; j < sys.n; ++j) out << " " << fmt_exact(sys.x(k, j));
        out << "\n";
    }
    for (int k = 0; k < sys.n; ++k) {
        out << "y_row";
        for (int j = 0; j < sys.n; ++j) out << " " << fmt_exact(sys.y(k, j));
        out << "\n";
    }
    out << "seed " << sys.seed << "\n";
    return out.str();
}

inline lab::QuadraticBoundarySystem parse_qbs(const std::string& text) {
    lab::QuadraticBoundarySystem sys;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool format_seen = false;
    int x_rows = 0, y_rows = 0;
    auto fail = [&](const std::string& msg) {
        throw parse_error("line " + std::to_string(line_no) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok) || tok[0] == '#') continue;
        if (!format_seen) {
            std::string name;
            if (tok != "format" || !(ls >> name) || name != kQbsFormat)
                fail("expected 'format " + std::string(kQbsFormat) + "'");
            format_seen = true;
            continue;
        }
        if (tok == "n") {
            if (!(ls >> sys.n) || sys.n < 1) fail("n must be a positive integer");
        } else if (tok == "areas") {
            double v;
            while (ls >> v) sys.areas.push_back(v);
        } else if (tok == "coeff_a") {
            if (!(ls >> sys.coeff_a)) fail("coeff_a: missing value");
        } else if (tok == "coeff_b") {
            if (!(ls >> sys.coeff_b)) fail("coeff_b: missing value");
        } else if (tok == "coeff_c") {
            if (!(ls >> sys.coeff_c)) fail("coeff_c: missing value");
        } else if (tok == "x_row" || tok == "y_row") {
            auto& dst = tok == "x_row" ? sys.X : sys.Y;
            (tok == "x_row" ? x_rows : y_rows)++;
            double v;
            int count = 0;
            while (ls >> v) {
                dst.push_back(v);
                ++count;
            }
            if (sys.n > 0 && count != sys.n) fail(tok + ": expected " + std::to_string(sys.n) + " values");
        } else if (tok == "seed") {
            if (!(ls >> sys.seed)) fail("seed: missing value");
        } else {
            fail("unknown directive '" + tok + "'");
        }
    }
    if (!format_seen) throw parse_error("missing 'format " + std::string(kQbsFormat) + "' line");
    if (x_rows != sys.n || y_rows != sys.n)
        throw parse_error("expected " + std::to_string(sys.n) + " x_row and y_row lines");
    sys.require_shape();
    return sys;
}

// ------------------------------------------------------------- rendering

inline std::string render(const ValidationReport& rep) {
    std::ostringstream out;
    out << "status: " << (rep.ok ? "ok" : "rejected") << "\n";
    for (const auto& v : rep.violations) {
        out << "violation: " << v.condition << ": " << v.detail;
        if (!v.elements.empty()) {
            out << " [elements:";
            for (int id : v.elements) out << " " << id;
            out << "]";
        }
        out << "\n";
    }
    for (const auto& w : rep.warnings) out << "warning: " << w << "\n";
    return out.str();
}

inline nlohmann::json to_json(const ValidationReport& rep) {
    nlohmann::json j;
    j["schema"] = kJsonSchema;
    j["kind"] = "validation";
    j["status"] = rep.ok ? "ok" : "rejected";
    j["violations"] = nlohmann::json::array();
    for (const auto& v : rep.violations)
        j["violations"].push_back({{"condition", v.condition}, {"detail", v.detail}, {"elements", v.elements}});
    j["warnings"] = rep.warnings;
    return j;
}

inline std::string render(const CuspReport& rep) {
    std::ostringstream out;
    out << "twist regions: " << rep.n << "\n";
    out << "slopes (crossing circles):\n";
    for (const auto& s : rep.slopes) {
        out << "  edge " << s.edge_id << " (" << s.regions << "): w = " << fmt(s.white)
            << ", c = " << s.crossings << ", normalized length = " << fmt(s.norm_length) << "\n";
    }
    out << "strand cusp: H_raw = " << fmt(rep.H_raw) << ", meridian = " << fmt(rep.meridian)
        << ", h0 = " << fmt(rep.h0) << "\n";
    out << "h0 interval: [" << fmt(rep.h0_min) << ", " << fmt(rep.h0_max) << "]\n";
    out << "residuals: tangency " << fmt(rep.max_tangency_residual) << ", angle defect "
        << fmt(rep.max_angle_defect) << ", overlap " << fmt(rep.max_overlap) << " (tol "
        << fmt(rep.tol) << ")\n";
    for (const auto& d : rep.diagnostics) out << "diagnostic: " << d << "\n";
    return out.str();
}

inline nlohmann::json to_json(const CuspReport& rep) {
    nlohmann::json j;
    j["schema"] = kJsonSchema;
    j["kind"] = "cusp-report";
    j["n"] = rep.n;
    j["slopes"] = nlohmann::json::array();
    for (const auto& s : rep.slopes)
        j["slopes"].push_back({{"edge", s.edge_id},
                               {"regions", s.regions},
                               {"white", s.white},
                               {"crossings", s.crossings},
                               {"normalized_length", s.norm_length}});
    j["strand_tiles"] = nlohmann::json::array();
    for (const auto& t : rep.strand_tiles) j["strand_tiles"].push_back({{"edge", t.edge_id}, {"white", t.white}});
    j["H_raw"] = rep.H_raw;
    j["meridian"] = rep.meridian;
    j["h0"] = rep.h0;
    j["h0_interval"] = {rep.h0_min, rep.h0_max};
    j["residuals"] = {{"tangency", rep.max_tangency_residual},
                      {"angle_defect", rep.max_angle_defect},
                      {"overlap", rep.max_overlap},
                      {"worst", rep.worst_residual}};
    j["tol"] = rep.tol;
    j["diagnostics"] = rep.diagnostics;
    return j;
}

inline std::string render(const bounds::BoundReport& rep, bool dehn = false, bool dehn_ok = false) {
    std::ostringstream out;
    out << "n = " << rep.n << ", c = " << rep.c_min << (rep.two_bridge ? " (2-bridge)" : "") << "\n";
    if (!rep.applicable) {
        out << "applicable: false (" << rep.notes << ")\n";
        return out.str();
    }
    out << "R1 = " << fmt(rep.R1) << ", " << (rep.two_bridge ? "fbar(1.0)" : "f(c)") << " = "
        << fmt(rep.f_c) << "\n";
    out << "cusp height bounds (meridian = 1): " << fmt(rep.H_lo) << " <= H <= " << fmt(rep.H_hi) << "\n";
    if (dehn) out << "all non-trivial Dehn fillings hyperbolic: " << (dehn_ok ? "true" : "false") << "\n";
    return out.str();
}

inline nlohmann::json to_json(const bounds::BoundReport& rep) {
    nlohmann::json j;
    j["schema"] = kJsonSchema;
    j["kind"] = rep.two_bridge ? "two-bridge-bounds" : "knot-cusp-bounds";
    j["n"] = rep.n;
    j["c"] = rep.c_min;
    j["applicable"] = rep.applicable;
    if (rep.applicable) {
        j["R1"] = rep.R1;
        j["f"] = rep.f_c;
        j["H_lo"] = rep.H_lo;
        j["H_hi"] = rep.H_hi;
    } else {
        j["notes"] = rep.notes;
    }
    return j;
}

inline std::string render(const hk::HkConstants& k, double factor_two_margin_at_056) {
    std::ostringstream out;
    out << "I(0.56)              = " << fmt(k.I_at_056) << "\n";
    out << "R* (root of fbar=1)  = " << fmt(k.R_star) << "\n";
    out << "ceil I(R*)           = " << k.c_threshold_at_R_star << "\n";
    out << "fbar(1.0)            = " << fmt(k.fbar_at_1) << "\n";
    out << "1 - fbar(1.0)        = " << fmt(1.0 - k.fbar_at_1) << "\n";
    out << "ceil I(1.0)          = " << k.c_threshold_at_1 << "\n";
    out << "Dehn n threshold     = " << k.dehn_n_threshold << "\n";
    out << "factor-2 margin at 0.56 = " << fmt(factor_two_margin_at_056)
        << (factor_two_margin_at_056 < 0.0 ? " (side condition fails; bound uses the (2pi)^2 term)" : "")
        << "\n";
    return out.str();
}

inline nlohmann::json to_json(const hk::HkConstants& k, double factor_two_margin_at_056) {
    nlohmann::json j;
    j["schema"] = kJsonSchema;
    j["kind"] = "hk-constants";
    j["I_at_0.56"] = k.I_at_056;
    j["R_star"] = k.R_star;
    j["c_threshold_at_R_star"] = k.c_threshold_at_R_star;
    j["fbar_at_1"] = k.fbar_at_1;
    j["one_minus_fbar_at_1"] = 1.0 - k.fbar_at_1;
    j["c_threshold_at_1"] = k.c_threshold_at_1;
    j["dehn_n_threshold"] = k.dehn_n_threshold;
    j["factor_two_margin_at_0.56"] = factor_two_margin_at_056;
    return j;
}

inline std::string render(const lab::FeasiblePoint& p, std::uint64_t seed) {
    std::ostringstream out;
    out << "kind: " << (p.kind == lab::PointKind::feasible ? "feasible" : "kerckhoff") << "\n";
    out << "seed: " << seed << "\n";
    out << "s =";
    for (double v : p.s) out << " " << fmt(v);
    out << "\n";
    out << "b =";
    for (double v : p.b_values) out << " " << fmt(v);
    out << "\n";
    out << "min b = " << fmt(p.min_b) << ", residual = " << fmt(p.tol_achieved) << "\n";
    return out.str();
}

inline nlohmann::json to_json(const lab::FeasiblePoint& p, std::uint64_t seed) {
    nlohmann::json j;
    j["schema"] = kJsonSchema;
    j["kind"] = p.kind == lab::PointKind::feasible ? "feasible-point" : "kerckhoff-point";
    j["seed"] = seed;
    j["s"] = p.s;
    j["b"] = p.b_values;
    j["min_b"] = p.min_b;
    j["residual"] = p.tol_achieved;
    return j;
}

// CSV table of the named functions over a range; columns in request order.
inline std::string hk_table(const std::vector<std::string>& fns, double from, double to, double step,
                            const hk::QuadratureConfig& cfg = {}) {
    if (!(step > 0.0) || !(to >= from)) throw hypothesis_error("hk_table: need step > 0 and to >= from");
    std::ostringstream out;
    out << "R";
    for (const auto& f : fns) out << "," << f;
    out << "\n";
    for (double R = from; R <= to + 1e-12; R += step) {
        out << fmt(R);
        for (const auto& f : fns) {
            double v;
            if (f == "I")
                v = hk::I(R, cfg);
            else if (f == "fbar")
                v = hk::fbar(R, cfg);
            else if (f == "C")
                v = hk::C(R, cfg);
            else if (f == "g")
                v = hk::g(R);
            else if (f == "upsilon")
                v = hk::upsilon(R);
            else
                throw hypothesis_error("hk_table: unknown function '" + f + "'");
            out << "," << fmt(v);
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace cuspforge::io
