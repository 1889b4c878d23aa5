#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cuspforge/common.hpp"
#include "cuspforge/planar_map.hpp"
#include "cuspforge/rng.hpp"

namespace cuspforge {

enum class EdgeKind { plain, twist };

struct DiagramEdge {
    int id = -1;
    int u = -1, v = -1;
    EdgeKind kind = EdgeKind::plain;
    int crossings = 0;  // twist edges only, >= 1
    bool odd = false;   // parity flag, equals crossings % 2
};

// The reduced trivalent graph of a twist-region diagram, with one marked
// edge per twist region.  Vertices carry counterclockwise rotations.
struct TwistDiagram {
    PlanarMap map;
    std::vector<DiagramEdge> edges;               // indexed by edge id
    std::vector<std::string> region_labels;       // per face, optional
    std::optional<std::uint64_t> generator_seed;  // provenance for random diagrams

    int twist_count() const {
        int n = 0;
        for (const auto& e : edges) n += (e.kind == EdgeKind::twist);
        return n;
    }
};

struct Violation {
    std::string condition;  // "self-loop", "doubled-edge", "non-trivalent",
                            // "euler", "n-too-small", "twist-count", "bad-crossings"
    std::string detail;
    std::vector<int> elements;
};

struct ValidationReport {
    bool ok = false;
    std::vector<Violation> violations;
    std::vector<std::string> warnings;
};

enum class NerveEdgeKind { crossing_circle, strand };

struct NerveEdge {
    int id = -1;
    int u = -1, v = -1;  // nerve vertices (faces of the diagram graph)
    NerveEdgeKind kind = NerveEdgeKind::strand;
    int crossings = 0;
    bool odd = false;
};

// Dual triangulation of the diagram graph.  Vertices correspond to planar
// regions of the diagram; faces are triangles, one per diagram vertex; edge
// ids are shared with the diagram.
struct NerveTriangulation {
    PlanarMap map;
    std::vector<std::string> labels;  // per vertex
    std::vector<NerveEdge> edges;
    int n = 0;  // number of twist regions = crossing-circle edges

    int vertex_count() const { return map.vertex_count(); }
    int edge_count() const { return map.edge_count(); }
    int face_count() const { return map.faces().count(); }

    std::array<int, 3> face_vertices(int f) const {
        const auto& cyc = map.faces().cycles[f];
        return {map.tail(cyc[0]), map.tail(cyc[1]), map.tail(cyc[2])};
    }

    std::array<int, 2> faces_of_edge(int e) const {
        const auto& fo = map.faces().face_of_dart;
        return {fo[2 * e], fo[2 * e + 1]};
    }

    // Vertex of face `f` not on edge `e`.
    int apex(int f, int e) const {
        for (int v : face_vertices(f))
            if (v != edges[e].u && v != edges[e].v) return v;
        throw std::logic_error("apex: edge not on face");
    }

    // Neighbors of v in counterclockwise order, as (vertex, edge id) pairs.
    std::vector<std::pair<int, int>> link(int v) const {
        std::vector<std::pair<int, int>> out;
        for (int d : map.rotation(v)) out.emplace_back(map.head(d), map.edge_of(d));
        return out;
    }

    std::optional<int> edge_between(int u, int v) const {
        for (const auto& e : edges)
            if ((e.u == u && e.v == v) || (e.u == v && e.v == u)) return e.id;
        return std::nullopt;
    }
};

namespace detail {

// Two diagram faces sharing two or more edges, if any.  On the dual this
// means two nerve vertices joined by more than one edge, which the circle
// packing existence theorem excludes.
inline std::optional<std::array<int, 2>> find_doubled_dual_edge(const PlanarMap& map) {
    const auto& faces = map.faces();
    std::map<std::pair<int, int>, int> seen;  // face pair -> first edge
    for (int e = 0; e < map.edge_count(); ++e) {
        int f1 = faces.face_of_dart[2 * e], f2 = faces.face_of_dart[2 * e + 1];
        auto key = std::minmax(f1, f2);
        auto [it, inserted] = seen.emplace(std::make_pair(key.first, key.second), e);
        if (!inserted) return std::array<int, 2>{it->second, e};
    }
    return std::nullopt;
}

// A diagram edge with the same face on both sides, i.e. a nerve edge with
// a single vertex at both endpoints, also excluded by the packing theorem.
inline std::optional<int> find_self_loop_dual_edge(const PlanarMap& map) {
    const auto& faces = map.faces();
    for (int e = 0; e < map.edge_count(); ++e)
        if (faces.face_of_dart[2 * e] == faces.face_of_dart[2 * e + 1]) return e;
    return std::nullopt;
}

}  // namespace detail

// Threshold below which the cusp height bounds do not apply; validation
// emits a warning, not an error.
inline constexpr int kCrossingWarningThreshold = 116;

inline ValidationReport validate(const TwistDiagram& d) {
    ValidationReport rep;
    const PlanarMap& m = d.map;

    if (!m.well_formed()) {
        rep.violations.push_back({"malformed-rotation", "rotation system is not a permutation of darts", {}});
        return rep;
    }
    for (int v = 0; v < m.vertex_count(); ++v) {
        if (m.degree(v) != 3)
            rep.violations.push_back({"non-trivalent", "vertex has degree " + std::to_string(m.degree(v)), {v}});
    }
    if (!rep.violations.empty()) return rep;

    if (m.euler_characteristic() != 2) {
        rep.violations.push_back(
            {"euler", "V - E + F = " + std::to_string(m.euler_characteristic()) + ", expected 2", {}});
        return rep;
    }

    int n = d.twist_count();
    if (n < 2) rep.violations.push_back({"n-too-small", "need at least 2 twist regions, found " + std::to_string(n), {}});
    if (2 * n != m.vertex_count())
        rep.violations.push_back({"twist-count",
                                  "V = " + std::to_string(m.vertex_count()) + " but 2n = " + std::to_string(2 * n),
                                  {}});
    for (const auto& e : d.edges) {
        if (e.kind == EdgeKind::twist) {
            if (e.crossings < 1)
                rep.violations.push_back({"bad-crossings", "twist edge needs c >= 1", {e.id}});
            else if (e.odd != (e.crossings % 2 == 1))
                rep.violations.push_back({"bad-crossings", "parity flag disagrees with crossing count", {e.id}});
        }
    }

    if (auto e = detail::find_self_loop_dual_edge(m))
        rep.violations.push_back({"self-loop", "dual edge has equal endpoints (same region on both sides)", {*e}});
    if (auto ee = detail::find_doubled_dual_edge(m))
        rep.violations.push_back(
            {"doubled-edge", "two regions share more than one edge", {(*ee)[0], (*ee)[1]}});

    rep.ok = rep.violations.empty();
    if (rep.ok) {
        for (const auto& e : d.edges) {
            if (e.kind == EdgeKind::twist && e.crossings < kCrossingWarningThreshold)
                rep.warnings.push_back("edge " + std::to_string(e.id) + ": c = " + std::to_string(e.crossings) +
                                       " is below the bound-applicability threshold " +
                                       std::to_string(kCrossingWarningThreshold));
        }
    }
    return rep;
}

// Planar dual of the diagram graph, with edge classification inherited
// (twist edge -> crossing-circle edge).  Throws validation_error on an
// Andreev-invalid diagram.
inline NerveTriangulation nerve(const TwistDiagram& d) {
    ValidationReport rep = validate(d);
    for (const auto& v : rep.violations) {
        if (v.condition == "self-loop") throw validation_error("AndreevViolation(self-loop): " + v.detail);
        if (v.condition == "doubled-edge") throw validation_error("AndreevViolation(doubled edge): " + v.detail);
    }
    if (!rep.ok) throw validation_error("invalid diagram: " + rep.violations.front().condition);

    NerveTriangulation nv;
    nv.map = d.map.dual();
    nv.n = d.twist_count();
    const auto& faces = d.map.faces();
    nv.labels.resize(faces.count());
    for (int f = 0; f < faces.count(); ++f) {
        if (f < static_cast<int>(d.region_labels.size()) && !d.region_labels[f].empty())
            nv.labels[f] = d.region_labels[f];
        else
            nv.labels[f] = "R" + std::to_string(f);
    }
    nv.edges.resize(d.edges.size());
    for (const auto& e : d.edges) {
        NerveEdge ne;
        ne.id = e.id;
        ne.u = nv.map.ends(e.id)[0];
        ne.v = nv.map.ends(e.id)[1];
        ne.kind = e.kind == EdgeKind::twist ? NerveEdgeKind::crossing_circle : NerveEdgeKind::strand;
        ne.crossings = e.crossings;
        ne.odd = e.odd;
        nv.edges[e.id] = ne;
    }
    return nv;
}

namespace detail {

// Nerve of the 2-bridge family: vertices A, D joined to everything, and a
// chain B1, C1, ..., C_{n-2}, B2 between them.  Built from the tetrahedron
// by repeated insert-and-flip, which keeps the rotation system coherent.
struct TwoBridgeNerve {
    PlanarMap map;
    std::vector<std::string> labels;
    std::vector<int> crossing_edges;  // gamma edge ids dual to twist regions
};

inline TwoBridgeNerve build_two_bridge_nerve(int n) {
    // Tetrahedron on A=0, D=1, B1=2, B2=3, drawn with A at the center of
    // triangle (D, B1, B2).
    PlanarMap g(4);
    g.add_edge(0, 1);             // A-D, darts 0,1
    int eAB1 = g.add_edge(0, 2);  // darts 2,3
    int eAB2 = g.add_edge(0, 3);  // darts 4,5
    int eDB1 = g.add_edge(1, 2);  // darts 6,7
    int eDB2 = g.add_edge(1, 3);  // darts 8,9
    g.add_edge(2, 3);             // B1-B2, darts 10,11
    g.rotation(0) = {0, 2, 4};
    g.rotation(1) = {6, 1, 8};
    g.rotation(2) = {10, 3, 7};
    g.rotation(3) = {9, 5, 11};

    TwoBridgeNerve out;
    out.labels = {"A", "D", "B1", "B2"};

    std::vector<int> a_edge(n + 3, -1), d_edge(n + 3, -1);  // vertex -> edge to A / D
    a_edge[2] = eAB1;
    a_edge[3] = eAB2;
    d_edge[2] = eDB1;
    d_edge[3] = eDB2;

    int prev = 2;  // chain grows from B1 toward B2
    for (int k = 1; k <= n - 2; ++k) {
        // Insert C_k into face (A, prev, B2), then flip {prev, B2} to D.
        int target = -1;
        const auto& faces = g.faces();
        for (int f = 0; f < faces.count(); ++f) {
            std::set<int> vs;
            for (int dart : faces.cycles[f]) vs.insert(g.tail(dart));
            if (vs == std::set<int>{0, prev, 3}) {
                target = f;
                break;
            }
        }
        if (target < 0) throw std::logic_error("two-bridge construction lost its working face");
        int chain_edge = -1;
        for (int e = 0; e < g.edge_count(); ++e) {
            auto en = g.ends(e);
            if ((en[0] == prev && en[1] == 3) || (en[0] == 3 && en[1] == prev)) chain_edge = e;
        }
        int x = g.insert_vertex_in_face(target);
        // insert_vertex_in_face added edges x-{corners of target}; find x-A.
        for (int e = g.edge_count() - 3; e < g.edge_count(); ++e) {
            auto en = g.ends(e);
            int other = en[0] == x ? en[1] : en[0];
            if (other == 0) a_edge[x] = e;
        }
        g.flip_edge(chain_edge);  // now {x, D}
        d_edge[x] = chain_edge;
        out.labels.push_back("C" + std::to_string(k));
        prev = x;
    }

    // Crossing-circle edges: A-B1; D-B2 for n even, A-B2 for n odd; and
    // alternating D-C1, A-C2, D-C3, ...
    out.crossing_edges.push_back(a_edge[2]);
    out.crossing_edges.push_back(n % 2 == 0 ? d_edge[3] : a_edge[3]);
    for (int k = 1; k <= n - 2; ++k) {
        int v = 3 + k;
        out.crossing_edges.push_back(k % 2 == 1 ? d_edge[v] : a_edge[v]);
    }
    out.map = std::move(g);
    return out;
}

}  // namespace detail

// The 2-bridge trivalent graph with n twist regions carrying the given
// crossing counts.  Always passes validate().
inline TwistDiagram gen_two_bridge(int n, const std::vector<int>& crossings) {
    if (n < 2) throw hypothesis_error("gen_two_bridge: need n >= 2");
    if (static_cast<int>(crossings.size()) != n)
        throw hypothesis_error("gen_two_bridge: crossing list length " + std::to_string(crossings.size()) +
                               " does not match n = " + std::to_string(n));
    for (int c : crossings)
        if (c < 1) throw hypothesis_error("gen_two_bridge: crossing counts must be >= 1");

    detail::TwoBridgeNerve nerve = detail::build_two_bridge_nerve(n);

    TwistDiagram d;
    d.map = nerve.map.dual();
    d.edges.resize(d.map.edge_count());
    for (int e = 0; e < d.map.edge_count(); ++e) {
        d.edges[e] = {e, d.map.ends(e)[0], d.map.ends(e)[1], EdgeKind::plain, 0, false};
    }
    for (int i = 0; i < n; ++i) {
        int e = nerve.crossing_edges[i];
        d.edges[e].kind = EdgeKind::twist;
        d.edges[e].crossings = crossings[i];
        d.edges[e].odd = crossings[i] % 2 == 1;
    }
    // Faces of the dual correspond to gamma vertices: a dual face's darts all
    // share their gamma tail.
    const auto& faces = d.map.faces();
    d.region_labels.assign(faces.count(), "");
    for (int f = 0; f < faces.count(); ++f) {
        int dart = faces.cycles[f][0];
        d.region_labels[f] = nerve.labels[nerve.map.tail(dart)];
    }
    return d;
}

// Random accepted diagram: dual of a random simple sphere triangulation on
// n+2 vertices (grown from the tetrahedron by stellar subdivisions and
// simplicity-preserving edge flips), with a random choice of n twist edges.
inline TwistDiagram gen_random_diagram(int n, std::uint64_t seed, int c_min = 1, int c_max = 200) {
    if (n < 2) throw hypothesis_error("gen_random_diagram: need n >= 2");
    SplitMix64 rng(seed);

    PlanarMap g(4);
    g.add_edge(0, 1);
    g.add_edge(0, 2);
    g.add_edge(0, 3);
    g.add_edge(1, 2);
    g.add_edge(1, 3);
    g.add_edge(2, 3);
    g.rotation(0) = {0, 2, 4};
    g.rotation(1) = {6, 1, 8};
    g.rotation(2) = {10, 3, 7};
    g.rotation(3) = {9, 5, 11};

    auto try_flip = [&]() {
        int e = static_cast<int>(rng.below(g.edge_count()));
        int dab = 2 * e, dba = 2 * e + 1;
        int a = g.tail(dab), b = g.tail(dba);
        if (g.degree(a) <= 3 || g.degree(b) <= 3) return;
        int c = g.head(g.next_in_face(dab));
        int d = g.head(g.next_in_face(dba));
        if (c == d || g.has_edge(c, d)) return;
        g.flip_edge(e);
    };

    for (int k = 4; k < n + 2; ++k) {
        int f = static_cast<int>(rng.below(g.faces().count()));
        g.insert_vertex_in_face(f);
        for (int t = 0; t < 4; ++t) try_flip();
    }
    for (int t = 0; t < 3 * n; ++t) try_flip();

    TwistDiagram d;
    d.map = g.dual();
    d.edges.resize(d.map.edge_count());
    for (int e = 0; e < d.map.edge_count(); ++e)
        d.edges[e] = {e, d.map.ends(e)[0], d.map.ends(e)[1], EdgeKind::plain, 0, false};

    // Random n-subset of edges becomes the twist regions.
    std::vector<int> ids(d.map.edge_count());
    for (int i = 0; i < d.map.edge_count(); ++i) ids[i] = i;
    for (int i = d.map.edge_count() - 1; i > 0; --i) std::swap(ids[i], ids[rng.below(i + 1)]);
    for (int i = 0; i < n; ++i) {
        int c = c_min + static_cast<int>(rng.below(c_max - c_min + 1));
        d.edges[ids[i]].kind = EdgeKind::twist;
        d.edges[ids[i]].crossings = c;
        d.edges[ids[i]].odd = c % 2 == 1;
    }
    d.generator_seed = seed;
    return d;
}

}  // namespace cuspforge
