#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "cuspforge/diagram.hpp"

using namespace cuspforge;

TEST_CASE("gen_two_bridge n=2 has tetrahedral counts") {
    TwistDiagram d = gen_two_bridge(2, {5, 5});
    REQUIRE(d.map.vertex_count() == 4);
    REQUIRE(d.map.edge_count() == 6);
    REQUIRE(d.map.faces().count() == 4);
    REQUIRE(d.twist_count() == 2);
    REQUIRE(validate(d).ok);
}

TEST_CASE("gen_two_bridge n=5 has 5 twist and 10 plain edges") {
    TwistDiagram d = gen_two_bridge(5, {17, 17, 17, 17, 17});
    int twist = 0, plain = 0;
    for (const auto& e : d.edges) (e.kind == EdgeKind::twist ? twist : plain)++;
    REQUIRE(twist == 5);
    REQUIRE(plain == 10);
    REQUIRE(d.map.vertex_count() == 10);
    REQUIRE(d.map.edge_count() == 15);
    REQUIRE(validate(d).ok);
}

TEST_CASE("gen_two_bridge argument errors") {
    REQUIRE_THROWS_AS(gen_two_bridge(1, {5}), hypothesis_error);
    REQUIRE_THROWS_AS(gen_two_bridge(2, {5}), hypothesis_error);
    REQUIRE_THROWS_AS(gen_two_bridge(2, {5, 0}), hypothesis_error);
}

TEST_CASE("nerve of the n=2 diagram is the tetrahedral triangulation") {
    NerveTriangulation nv = nerve(gen_two_bridge(2, {3, 4}));
    REQUIRE(nv.vertex_count() == 4);
    REQUIRE(nv.edge_count() == 6);
    REQUIRE(nv.face_count() == 4);
    int crossing = 0;
    for (const auto& e : nv.edges) crossing += (e.kind == NerveEdgeKind::crossing_circle);
    REQUIRE(crossing == 2);
    // parity flags survive
    std::multiset<int> cs;
    for (const auto& e : nv.edges)
        if (e.kind == NerveEdgeKind::crossing_circle) {
            cs.insert(e.crossings);
            REQUIRE(e.odd == (e.crossings % 2 == 1));
        }
    REQUIRE(cs == std::multiset<int>{3, 4});
}

TEST_CASE("two-bridge nerve matches the chain-between-poles structure") {
    const int n = 4;
    NerveTriangulation nv = nerve(gen_two_bridge(n, {17, 17, 17, 17}));
    REQUIRE(nv.vertex_count() == n + 2);
    REQUIRE(nv.edge_count() == 3 * n);
    REQUIRE(nv.face_count() == 2 * n);

    // regions A and D carry their generated labels and touch every other region
    int a = -1, dvert = -1;
    for (int v = 0; v < nv.vertex_count(); ++v) {
        if (nv.labels[v] == "A") a = v;
        if (nv.labels[v] == "D") dvert = v;
    }
    REQUIRE(a >= 0);
    REQUIRE(dvert >= 0);
    REQUIRE(nv.map.degree(a) == n + 1);
    REQUIRE(nv.map.degree(dvert) == n + 1);
    for (int v = 0; v < nv.vertex_count(); ++v) {
        if (v == a || v == dvert) continue;
        REQUIRE(nv.edge_between(a, v).has_value());
        REQUIRE(nv.edge_between(dvert, v).has_value());
    }
    // B1, B2 have degree 3, the C chain degree 4
    for (int v = 0; v < nv.vertex_count(); ++v) {
        if (nv.labels[v] == "B1" || nv.labels[v] == "B2") REQUIRE(nv.map.degree(v) == 3);
        if (nv.labels[v].starts_with("C")) REQUIRE(nv.map.degree(v) == 4);
    }
}

TEST_CASE("validate flags thin twist regions with warnings") {
    auto rep = validate(gen_two_bridge(3, {145, 145, 145}));
    REQUIRE(rep.ok);
    REQUIRE(rep.warnings.empty());

    rep = validate(gen_two_bridge(3, {6, 6, 6}));
    REQUIRE(rep.ok);
    REQUIRE(rep.warnings.size() == 3);
}

TEST_CASE("validate rejects a non-trivalent vertex") {
    TwistDiagram d = gen_two_bridge(2, {5, 5});
    // graft an extra edge between vertices 0 and 1
    int e = d.map.add_edge(0, 1);
    d.map.append_to_rotation(0, 2 * e);
    d.map.append_to_rotation(1, 2 * e + 1);
    d.edges.push_back({e, 0, 1, EdgeKind::plain, 0, false});
    auto rep = validate(d);
    REQUIRE_FALSE(rep.ok);
    bool found = false;
    for (const auto& v : rep.violations) found |= v.condition == "non-trivalent";
    REQUIRE(found);
}

TEST_CASE("validate rejects twist-count mismatch and n < 2") {
    TwistDiagram d = gen_two_bridge(3, {5, 5, 5});
    // unmark all but one twist edge
    bool kept = false;
    for (auto& e : d.edges) {
        if (e.kind == EdgeKind::twist) {
            if (kept) e.kind = EdgeKind::plain;
            kept = true;
        }
    }
    auto rep = validate(d);
    REQUIRE_FALSE(rep.ok);
    std::set<std::string> conds;
    for (const auto& v : rep.violations) conds.insert(v.condition);
    REQUIRE(conds.count("n-too-small") == 1);
    REQUIRE(conds.count("twist-count") == 1);
}

TEST_CASE("a diagram whose dual doubles an edge is rejected") {
    // Two bigons joined by two parallel strands: the central and outer
    // regions share both strands, so the dual doubles an edge (the diagram
    // is not prime/twist reduced).
    TwistDiagram d;
    d.map = PlanarMap(4);  // u=0, v=1, w=2, x=3
    d.map.add_edge(0, 1);  // e0 outer left arc, darts 0,1
    d.map.add_edge(0, 1);  // e1 inner left arc, darts 2,3
    d.map.add_edge(0, 2);  // e2 top strand, darts 4,5
    d.map.add_edge(1, 3);  // e3 bottom strand, darts 6,7
    d.map.add_edge(2, 3);  // e4 inner right arc, darts 8,9
    d.map.add_edge(2, 3);  // e5 outer right arc, darts 10,11
    d.map.rotation(0) = {4, 0, 2};
    d.map.rotation(1) = {6, 3, 1};
    d.map.rotation(2) = {5, 8, 10};
    d.map.rotation(3) = {11, 9, 7};
    d.edges = {{0, 0, 1, EdgeKind::twist, 3, true}, {1, 0, 1, EdgeKind::plain, 0, false},
               {2, 0, 2, EdgeKind::plain, 0, false}, {3, 1, 3, EdgeKind::plain, 0, false},
               {4, 2, 3, EdgeKind::plain, 0, false}, {5, 2, 3, EdgeKind::twist, 4, false}};
    REQUIRE(d.map.well_formed());
    REQUIRE(d.map.euler_characteristic() == 2);
    auto rep = validate(d);
    REQUIRE_FALSE(rep.ok);
    bool doubled = false;
    for (const auto& v : rep.violations) doubled |= v.condition == "doubled-edge";
    REQUIRE(doubled);
    REQUIRE_THROWS_AS(nerve(d), validation_error);
}

TEST_CASE("a dumbbell diagram is rejected via the self-loop condition") {
    // Loop at each end of a bridge: the outer region sits on both sides of
    // the bridge, giving the dual a self-loop.
    TwistDiagram d;
    d.map = PlanarMap(2);
    d.map.add_edge(0, 0);  // loop at u, darts 0,1
    d.map.add_edge(1, 1);  // loop at v, darts 2,3
    d.map.add_edge(0, 1);  // bridge, darts 4,5
    d.map.rotation(0) = {4, 0, 1};
    d.map.rotation(1) = {2, 5, 3};
    d.edges = {{0, 0, 0, EdgeKind::twist, 1, true}, {1, 1, 1, EdgeKind::plain, 0, false},
               {2, 0, 1, EdgeKind::plain, 0, false}};
    REQUIRE(d.map.well_formed());
    REQUIRE(d.map.euler_characteristic() == 2);
    auto rep = validate(d);
    REQUIRE_FALSE(rep.ok);
    bool selfloop = false;
    for (const auto& v : rep.violations) selfloop |= v.condition == "self-loop";
    REQUIRE(selfloop);
}

TEST_CASE("fuzzed rotation systems: accepted ones keep the counting identity") {
    // Shuffling rotations usually wrecks planarity; whatever survives
    // validation must still satisfy the sphere counts.
    SplitMix64 rng(2024);
    int accepted = 0, rejected = 0;
    for (int trial = 0; trial < 60; ++trial) {
        TwistDiagram d = gen_two_bridge(4, {9, 9, 9, 9});
        for (int v = 0; v < d.map.vertex_count(); ++v) {
            auto& rot = d.map.rotation(v);
            for (int i = static_cast<int>(rot.size()) - 1; i > 0; --i)
                std::swap(rot[i], rot[rng.below(i + 1)]);
        }
        auto rep = validate(d);
        if (!rep.ok) {
            ++rejected;
            continue;
        }
        ++accepted;
        NerveTriangulation nv = nerve(d);
        REQUIRE(nv.vertex_count() == 6);
        REQUIRE(nv.edge_count() == 12);
        REQUIRE(nv.face_count() == 8);
    }
    REQUIRE(rejected > 0);  // fuzz actually exercises the Euler failure path
    REQUIRE(accepted + rejected == 60);
}

TEST_CASE("dual-of-dual round trip reproduces the diagram graph") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        TwistDiagram d = gen_random_diagram(7, seed);
        PlanarMap dd = d.map.dual().dual();
        REQUIRE(dd.vertex_count() == d.map.vertex_count());
        REQUIRE(dd.edge_count() == d.map.edge_count());
        REQUIRE(dd.euler_characteristic() == 2);
        std::multiset<std::pair<int, int>> pa, pb;
        for (int e = 0; e < d.map.edge_count(); ++e) {
            auto en = d.map.ends(e);
            pa.insert(std::minmax(d.map.degree(en[0]), d.map.degree(en[1])));
            auto fn = dd.ends(e);
            pb.insert(std::minmax(dd.degree(fn[0]), dd.degree(fn[1])));
        }
        REQUIRE(pa == pb);
    }
}

TEST_CASE("counting identities hold for generated and random diagrams") {
    for (int n = 2; n <= 64; ++n) {
        std::vector<int> cs(n, 17);
        TwistDiagram d = gen_two_bridge(n, cs);
        REQUIRE(validate(d).ok);  // both Andreev conditions, every n in [2, 64]
        NerveTriangulation nv = nerve(d);
        REQUIRE(nv.vertex_count() == n + 2);
        REQUIRE(nv.edge_count() == 3 * n);
        REQUIRE(nv.face_count() == 2 * n);
        int crossing = 0;
        for (const auto& e : nv.edges) crossing += (e.kind == NerveEdgeKind::crossing_circle);
        REQUIRE(crossing == n);
    }
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        int n = 2 + static_cast<int>(seed % 9);
        TwistDiagram d = gen_random_diagram(n, seed);
        REQUIRE(validate(d).ok);
        NerveTriangulation nv = nerve(d);
        REQUIRE(nv.vertex_count() == n + 2);
        REQUIRE(nv.edge_count() == 3 * n);
        REQUIRE(nv.face_count() == 2 * n);
        for (int f = 0; f < nv.face_count(); ++f) {
            auto fv = nv.face_vertices(f);
            REQUIRE(fv[0] != fv[1]);
            REQUIRE(fv[1] != fv[2]);
            REQUIRE(fv[0] != fv[2]);
        }
    }
}
