// cusp-forge: rigorous cusp-shape bounds for hyperbolic knot complements
// from twist-region diagrams, via circle packings of augmented links and
// the cone-deformation bound functions; plus a lab for the quadratic
// boundary-term feasibility search.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cuspforge/io.hpp"
#include "cuspforge/svg.hpp"

using namespace cuspforge;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitHypothesis = 1;  // validation or hypothesis failure
constexpr int kExitNumeric = 2;     // solver / quadrature failure

double default_tol() {
    if (const char* env = std::getenv("CUSP_FORGE_TOL")) {
        try {
            return std::stod(env);
        } catch (...) {
            std::cerr << "warning: ignoring malformed CUSP_FORGE_TOL\n";
        }
    }
    return 1e-10;
}

void emit(const std::string& text, const nlohmann::json& j, bool as_json, const std::string& out_path) {
    std::string payload = as_json ? j.dump(2) + "\n" : text;
    if (out_path.empty())
        std::cout << payload;
    else
        io::write_file(out_path, payload);
}

struct PackArgs {
    std::string target;
    int n = 0;
    std::vector<int> crossings;
    double tol = 0.0;
    int gauge_face = 0;
    std::string svg_path, strip_svg_path, out_path;
    int strip_edge = -1;
    bool json = false;
};

int run_pack(const PackArgs& a) {
    TwistDiagram d;
    if (a.target == "two-bridge") {
        if (a.n < 2 || a.crossings.empty()) {
            std::cerr << "pack two-bridge: requires --n and --c\n";
            return kExitHypothesis;
        }
        std::vector<int> cs = a.crossings;
        if (static_cast<int>(cs.size()) == 1) cs.assign(a.n, cs[0]);
        d = gen_two_bridge(a.n, cs);
    } else {
        d = io::parse_diagram(io::read_file(a.target));
    }
    ValidationReport vr = validate(d);
    if (!vr.ok) {
        std::cerr << io::render(vr);
        return kExitHypothesis;
    }
    SolveOptions opt;
    opt.gauge_face = a.gauge_face;
    CirclePacking p = solve_packing(nerve(d), a.tol, opt);
    CuspReport rep = cusp_report(d, p);
    if (!a.svg_path.empty()) io::write_file(a.svg_path, svg::packing_svg(p));
    if (a.strip_edge >= 0) {
        std::string path = a.strip_svg_path.empty() ? "strip.svg" : a.strip_svg_path;
        io::write_file(path, svg::strip_svg(p, a.strip_edge));
    }
    emit(io::render(rep), io::to_json(rep), a.json, a.out_path);
    return rep.diagnostics.empty() ? kExitOk : kExitNumeric;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cusp-forge: cusp-shape bounds for hyperbolic knots from twist-region diagrams"};
    app.require_subcommand(1);

    // ------------------------------------------------------------ validate
    auto* cmd_validate = app.add_subcommand("validate", "check a diagram file against all invariants");
    std::string validate_file;
    bool validate_json = false;
    cmd_validate->add_option("file", validate_file, "diagram file")->required();
    cmd_validate->add_flag("--json", validate_json, "emit JSON");

    // ----------------------------------------------------------------- gen
    auto* cmd_gen = app.add_subcommand("gen", "generate diagrams");
    cmd_gen->require_subcommand(1);
    auto* gen_tb = cmd_gen->add_subcommand("two-bridge", "2-bridge diagram with n twist regions");
    int gen_n = 0;
    std::vector<int> gen_c;
    std::string gen_out;
    bool gen_json = false;
    gen_tb->add_option("--n", gen_n, "number of twist regions")->required();
    gen_tb->add_option("--c", gen_c, "crossing counts (single value or comma list)")
        ->required()
        ->delimiter(',');
    gen_tb->add_option("--out", gen_out, "output file (default stdout)");
    gen_tb->add_flag("--json", gen_json, "emit a JSON summary with the diagram text embedded");

    // ---------------------------------------------------------------- pack
    PackArgs pack;
    auto* cmd_pack = app.add_subcommand("pack", "solve the circle packing and report cusp geometry");
    cmd_pack->add_option("target", pack.target, "diagram file, or 'two-bridge'")->required();
    cmd_pack->add_option("--n", pack.n, "twist regions (two-bridge mode)");
    cmd_pack->add_option("--c", pack.crossings, "crossing counts (two-bridge mode)")->delimiter(',');
    pack.tol = default_tol();
    cmd_pack->add_option("--tol", pack.tol, "solver tolerance in [1e-14, 1e-6]");
    cmd_pack->add_option("--gauge-face", pack.gauge_face, "nerve face fixed as the unit gauge");
    cmd_pack->add_option("--svg", pack.svg_path, "write an SVG of the packing");
    cmd_pack->add_option("--strip-edge", pack.strip_edge, "emit the rectangle strip at this edge");
    cmd_pack->add_option("--strip-svg", pack.strip_svg_path, "strip SVG path (default strip.svg)");
    cmd_pack->add_option("--out", pack.out_path, "write the report here instead of stdout");
    cmd_pack->add_flag("--json", pack.json, "emit JSON");

    // -------------------------------------------------------------- bounds
    auto* cmd_bounds = app.add_subcommand("bounds", "theorem-level cusp height bounds");
    int bounds_n = 0, bounds_c = 0;
    bool bounds_tb = false, bounds_json = false;
    cmd_bounds->add_option("--n", bounds_n, "twist regions")->required();
    cmd_bounds->add_option("--c", bounds_c, "min crossings per twist region")->required();
    cmd_bounds->add_flag("--two-bridge", bounds_tb, "use the sharper 2-bridge bounds");
    cmd_bounds->add_flag("--json", bounds_json, "emit JSON");

    // ------------------------------------------------------------------ hk
    auto* cmd_hk = app.add_subcommand("hk", "Hodgson-Kerckhoff bound functions");
    cmd_hk->require_subcommand(1);
    auto* hk_constants = cmd_hk->add_subcommand("constants", "named constants table");
    bool hkc_json = false;
    hk_constants->add_flag("--json", hkc_json, "emit JSON");
    auto* hk_table = cmd_hk->add_subcommand("table", "CSV table of functions over a range");
    std::vector<std::string> table_fns;
    double table_from = 0.56, table_to = 2.5, table_step = 0.01;
    std::string table_out;
    bool table_json = false;
    hk_table->add_option("--fn", table_fns, "functions: I,fbar,C,g,upsilon")->required()->delimiter(',');
    hk_table->add_option("--from", table_from, "range start")->required();
    hk_table->add_option("--to", table_to, "range end")->required();
    hk_table->add_option("--step", table_step, "step")->required();
    hk_table->add_option("--out", table_out, "output file (default stdout)");
    hk_table->add_flag("--json", table_json, "emit JSON rows instead of CSV");

    // ------------------------------------------------------------- simplex
    auto* cmd_simplex = app.add_subcommand("simplex", "boundary-term system lab");
    cmd_simplex->require_subcommand(1);
    auto* sx_random = cmd_simplex->add_subcommand("random", "generate seeded valid systems");
    int sx_n = 2, sx_count = 1;
    std::uint64_t sx_seed = 0;
    std::string sx_prefix;
    bool sxr_json = false;
    sx_random->add_option("--n", sx_n, "number of singular components")->required();
    sx_random->add_option("--count", sx_count, "number of systems");
    sx_random->add_option("--seed", sx_seed, "base seed")->required();
    sx_random->add_option("--out-prefix", sx_prefix, "write files <prefix><seed>.qbs");
    sx_random->add_flag("--json", sxr_json, "emit JSON summary");
    auto* sx_search = cmd_simplex->add_subcommand("search", "search a system file");
    std::string sx_file, sx_kind = "feasible";
    double sx_tol = 1e-9;
    bool sxs_json = false;
    sx_search->add_option("file", sx_file, "qbs system file")->required();
    sx_search->add_option("--kind", sx_kind, "feasible | kerckhoff | zeros")
        ->check(CLI::IsMember({"feasible", "kerckhoff", "zeros"}));
    sx_search->add_option("--tol", sx_tol, "acceptance tolerance");
    sx_search->add_flag("--json", sxs_json, "emit JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_validate->parsed()) {
            ValidationReport rep = validate(io::parse_diagram(io::read_file(validate_file)));
            emit(io::render(rep), io::to_json(rep), validate_json, "");
            return rep.ok ? kExitOk : kExitHypothesis;
        }
        if (gen_tb->parsed()) {
            std::vector<int> cs = gen_c;
            if (static_cast<int>(cs.size()) == 1) cs.assign(gen_n, cs[0]);
            TwistDiagram d = gen_two_bridge(gen_n, cs);
            std::string text = io::write_diagram(d);
            if (!gen_out.empty()) io::write_file(gen_out, text);
            if (gen_json) {
                nlohmann::json j{{"schema", io::kJsonSchema}, {"kind", "diagram"},
                                 {"n", gen_n},               {"vertices", d.map.vertex_count()},
                                 {"edges", d.map.edge_count()}, {"text", text}};
                std::cout << j.dump(2) << "\n";
            } else if (gen_out.empty()) {
                std::cout << text;
            }
            return kExitOk;
        }
        if (cmd_pack->parsed()) return run_pack(pack);
        if (cmd_bounds->parsed()) {
            bounds::BoundReport rep = bounds_tb ? bounds::two_bridge_bounds(bounds_n, bounds_c)
                                                : bounds::knot_cusp_bounds(bounds_n, bounds_c);
            bool dehn_ok = bounds::dehn_filling_check(bounds_n, bounds_c);
            nlohmann::json j = io::to_json(rep);
            j["dehn_fillings_hyperbolic"] = dehn_ok;
            emit(io::render(rep, true, dehn_ok), j, bounds_json, "");
            return rep.applicable ? kExitOk : kExitHypothesis;
        }
        if (hk_constants->parsed()) {
            hk::HkConstants k = hk::constants();
            double margin = hk::factor_two_margin(0.56);
            emit(io::render(k, margin), io::to_json(k, margin), hkc_json, "");
            return kExitOk;
        }
        if (hk_table->parsed()) {
            std::string csv = io::hk_table(table_fns, table_from, table_to, table_step);
            std::string payload = csv;
            if (table_json) {
                nlohmann::json j{{"schema", io::kJsonSchema}, {"kind", "hk-table"}, {"csv", csv}};
                payload = j.dump(2) + "\n";
            }
            if (table_out.empty())
                std::cout << payload;
            else
                io::write_file(table_out, payload);
            return kExitOk;
        }
        if (sx_random->parsed()) {
            nlohmann::json summary;
            summary["schema"] = io::kJsonSchema;
            summary["kind"] = "qbs-batch";
            summary["systems"] = nlohmann::json::array();
            std::string all_text;
            for (int i = 0; i < sx_count; ++i) {
                std::uint64_t seed = sx_seed + static_cast<std::uint64_t>(i);
                auto sys = lab::gen_random_system(sx_n, seed);
                std::string text = io::write_qbs(sys);
                if (!sx_prefix.empty())
                    io::write_file(sx_prefix + std::to_string(seed) + ".qbs", text);
                else
                    all_text += text;
                summary["systems"].push_back({{"seed", seed}, {"n", sx_n}});
            }
            if (sxr_json)
                std::cout << summary.dump(2) << "\n";
            else if (sx_prefix.empty())
                std::cout << all_text;
            else
                std::cout << "wrote " << sx_count << " systems\n";
            return kExitOk;
        }
        if (sx_search->parsed()) {
            auto sys = io::parse_qbs(io::read_file(sx_file));
            if (!lab::validity_check(sys)) {
                std::cerr << "system fails the positivity check (sum b_j not > 0 on the simplex)\n";
                return kExitHypothesis;
            }
            if (sx_kind == "zeros") {
                int zeros = lab::count_zeros_n2(sys);
                if (sxs_json) {
                    nlohmann::json j{{"schema", io::kJsonSchema},
                                     {"kind", "zero-count"},
                                     {"seed", sys.seed},
                                     {"zeros", zeros}};
                    std::cout << j.dump(2) << "\n";
                } else {
                    std::cout << "sign changes of b_1 along the edge: " << zeros << "\n";
                }
                return kExitOk;
            }
            lab::FeasiblePoint p = sx_kind == "feasible" ? lab::feasible_point(sys, sx_tol)
                                                         : lab::kerckhoff_point(sys, sx_tol);
            emit(io::render(p, sys.seed), io::to_json(p, sys.seed), sxs_json, "");
            return kExitOk;
        }
        std::cerr << "no subcommand\n";
        return kExitHypothesis;
    } catch (const numeric_error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitHypothesis;
    } catch (const validation_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitHypothesis;
    } catch (const hypothesis_error& e) {
        std::cerr << "hypothesis error: " << e.what() << "\n";
        return kExitHypothesis;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
}
