#include <catch2/catch_amalgamated.hpp>

#include "cuspforge/io.hpp"
#include "cuspforge/svg.hpp"

using namespace cuspforge;

namespace {

const char* kGoldenTetra =
    "format cusp-forge-diagram/1\n"
    "vertex 0 0 4 2\n"
    "vertex 1 0 1 3\n"
    "vertex 2 1 2 5\n"
    "vertex 3 3 5 4\n"
    "edge 0 0 1 plain\n"
    "edge 1 1 2 twist 3 odd\n"
    "edge 2 2 0 plain\n"
    "edge 3 3 1 plain\n"
    "edge 4 0 3 twist 4 even\n"
    "edge 5 3 2 plain\n"
    "region 0 A\n"
    "region 1 D\n"
    "region 2 B1\n"
    "region 3 B2\n";

}  // namespace

TEST_CASE("diagram writer golden: two-bridge n=2") {
    CHECK(io::write_diagram(gen_two_bridge(2, {3, 4})) == kGoldenTetra);
}

TEST_CASE("diagram round trip is byte-stable") {
    for (int n : {2, 5, 9}) {
        std::vector<int> cs(n, 17);
        TwistDiagram d = gen_two_bridge(n, cs);
        std::string text = io::write_diagram(d);
        TwistDiagram back = io::parse_diagram(text);
        CHECK(io::write_diagram(back) == text);
        CHECK(validate(back).ok);
        CHECK(back.twist_count() == n);
    }
    for (std::uint64_t seed : {5u, 6u}) {
        TwistDiagram d = gen_random_diagram(6, seed);
        d.generator_seed.reset();  // seed comments are not round-tripped
        std::string text = io::write_diagram(d);
        CHECK(io::write_diagram(io::parse_diagram(text)) == text);
    }
}

TEST_CASE("diagram parse errors carry line and element information") {
    // 4-valent vertex
    CHECK_THROWS_MATCHES(
        io::parse_diagram("format cusp-forge-diagram/1\nvertex 0 0 1 2 3\n"), parse_error,
        Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring("non-trivalent")));
    // dangling edge reference
    std::string dangling = kGoldenTetra;
    dangling.replace(dangling.find("vertex 0 0 4 2"), 14, "vertex 0 0 4 9");
    CHECK_THROWS_MATCHES(
        io::parse_diagram(dangling), parse_error,
        Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring("dangling")));
    // missing format line
    CHECK_THROWS_AS(io::parse_diagram("vertex 0 0 1 2\n"), parse_error);
    // parity mismatch
    std::string parity = kGoldenTetra;
    parity.replace(parity.find("twist 3 odd"), 11, "twist 3 even");
    CHECK_THROWS_MATCHES(
        io::parse_diagram(parity), parse_error,
        Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring("parity")));
    // a genus-1 rotation system must be rejected with an Euler failure:
    // swap one rotation to flip face structure (K4 with a twisted rotation)
    std::string twisted = kGoldenTetra;
    twisted.replace(twisted.find("vertex 3 3 5 4"), 14, "vertex 3 3 4 5");
    CHECK_THROWS_MATCHES(
        io::parse_diagram(twisted), parse_error,
        Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring("euler")));
}

TEST_CASE("qbs round trip") {
    auto sys = lab::gen_random_system(3, 99);
    std::string text = io::write_qbs(sys);
    auto back = io::parse_qbs(text);
    CHECK(io::write_qbs(back) == text);
    CHECK(back.n == 3);
    CHECK(back.seed == 99);
    auto b1 = lab::eval_b(sys, {1.0, 0.5, 1.5});
    auto b2 = lab::eval_b(back, {1.0, 0.5, 1.5});
    for (int j = 0; j < 3; ++j) CHECK(b1[j] == b2[j]);

    CHECK_THROWS_AS(io::parse_qbs("format cusp-forge-qbs/1\nn 2\n"), parse_error);
    CHECK_THROWS_AS(io::parse_qbs("n 2\n"), parse_error);
}

TEST_CASE("report renderings are deterministic") {
    TwistDiagram d = gen_two_bridge(3, {24, 25, 26});
    CirclePacking p = solve_packing(nerve(d), 1e-10);
    CuspReport rep = cusp_report(d, p);
    CHECK(io::render(rep) == io::render(rep));
    auto j = io::to_json(rep);
    CHECK(j["schema"] == "cusp-forge-report/1");
    CHECK(j.dump() == io::to_json(rep).dump());
    CHECK(j["slopes"].size() == 3);

    auto br = bounds::knot_cusp_bounds(5, 145);
    CHECK(io::render(br) == io::render(br));
    CHECK(io::to_json(br)["kind"] == "knot-cusp-bounds");

    auto k = hk::constants();
    double m = hk::factor_two_margin(0.56);
    CHECK(io::render(k, m) == io::render(k, m));
}

TEST_CASE("hk csv table") {
    std::string csv = io::hk_table({"I", "fbar", "C"}, 0.6, 0.8, 0.1);
    CHECK(csv.substr(0, 12) == "R,I,fbar,C\n0");
    // 1 header + 3 rows
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
    CHECK_THROWS_AS(io::hk_table({"nope"}, 0.6, 0.8, 0.1), hypothesis_error);
    CHECK_THROWS_AS(io::hk_table({"I"}, 0.8, 0.6, 0.1), hypothesis_error);
}

TEST_CASE("svg emission is well formed") {
    TwistDiagram d = gen_two_bridge(4, {24, 24, 24, 24});
    CirclePacking p = solve_packing(nerve(d), 1e-10);
    std::string s = svg::packing_svg(p);
    CHECK(s.find("<svg") != std::string::npos);
    CHECK(s.find("</svg>") != std::string::npos);
    // one circle element per nerve vertex plus one dual per face
    std::size_t count = 0, pos = 0;
    while ((pos = s.find("<circle", pos)) != std::string::npos) {
        ++count;
        ++pos;
    }
    CHECK(count == static_cast<std::size_t>(p.nerve.vertex_count() + p.nerve.face_count()));
    CHECK(s == svg::packing_svg(p));  // byte-stable

    std::string strip = svg::strip_svg(p, 0);
    CHECK(strip.find("<line") != std::string::npos);
    CHECK_THROWS_AS(svg::strip_svg(p, 999), hypothesis_error);
}
