// popmatch: one binary exposing the library end to end.
//
//   verify     popularity / dominance of a given matching, with witnesses
//   stable     proposer-optimal, exhaustive list, or max-weight stable matching
//   dominant   dominant matching via the two-level construction
//   pmffe      popular matching with forced/forbidden nodes and edges
//   mwp        max-weight popular matching (1/2-approximation or exact)
//   miwp       min-weight popular matching (exact only)
//   reduce     DIMACS CNF -> gadget preference system + JSON gadget map
//   enumerate  exhaustive oracle report over all matchings
//   selftest   run the acceptance suite
//
// Matchings are emitted as "u v" lines; metadata rides on "# key value"
// lines, which the parsers ignore, so outputs feed back in as inputs.
// Exit codes: 0 affirmative/found, 1 negative/infeasible, 2 input error,
// 3 hard case refused (rerun with --allow-exponential).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "popmatch/acceptance.hpp"
#include "popmatch/constrained.hpp"
#include "popmatch/dominant.hpp"
#include "popmatch/instance.hpp"
#include "popmatch/oracle.hpp"
#include "popmatch/popularity.hpp"
#include "popmatch/reduction.hpp"
#include "popmatch/stable.hpp"
#include "popmatch/weighted.hpp"
#include "popmatch/weights.hpp"

namespace {

using namespace popmatch;

constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitInput = 2;
constexpr int kExitHard = 3;

std::pair<int, int> edge_ids(const PreferenceSystem& ps, const std::string& spec) {
    auto colon = spec.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == spec.size())
        throw ValidationError("edge '" + spec + "' must look like u:v");
    int u = ps.id_of(spec.substr(0, colon));
    int v = ps.id_of(spec.substr(colon + 1));
    if (!ps.adjacent(u, v))
        throw ValidationError("no edge between '" + spec.substr(0, colon) +
                              "' and '" + spec.substr(colon + 1) + "'");
    return {u, v};
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw ValidationError("cannot write '" + path + "'");
    f << text;
}

std::string walk_names(const PreferenceSystem& ps, const std::vector<int>& walk) {
    std::string out;
    for (int v : walk) {
        if (!out.empty()) out += ' ';
        out += ps.name(v);
    }
    return out;
}

const char* violation_name(ViolationKind k) {
    switch (k) {
        case ViolationKind::AlternatingCycle: return "alternating-cycle";
        case ViolationKind::TwoPlusPlusPath: return "two-plus-plus-path";
        case ViolationKind::ExposedPath: return "exposed-path";
    }
    return "unknown";
}

void print_witness(const PreferenceSystem& ps, const PopularityWitness& w) {
    std::cout << "# violation " << violation_name(w.kind) << "\n";
    for (const auto& [u, v] : w.plus_plus)
        std::cout << "# plus-plus " << ps.name(u) << " " << ps.name(v) << "\n";
    std::cout << walk_names(ps, w.walk) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "two-sided popular matchings: verification, construction, "
        "constrained existence, weighted optimization, hardness instances"};
    app.require_subcommand(1);
    int exit_code = kExitYes;

    // --- verify -------------------------------------------------------------
    std::string v_inst, v_match;
    bool v_dominant = false;
    auto* verify = app.add_subcommand(
        "verify", "check popularity (and optionally dominance) of a matching");
    verify->add_option("-i,--instance", v_inst, "instance file")->required();
    verify->add_option("-m,--matching", v_match, "matching file")->required();
    verify->add_flag("--dominant", v_dominant, "also require dominance");
    verify->callback([&] {
        PreferenceSystem ps = parse_instance_file(v_inst);
        Matching m = parse_matching_file(ps, v_match);
        PopularityCertificate cert = is_popular(ps, m);
        if (!cert.verdict) {
            std::cout << "NOT POPULAR\n";
            if (cert.witness) print_witness(ps, *cert.witness);
            if (v_dominant) std::cout << "NOT DOMINANT\n";
            exit_code = kExitNo;
            return;
        }
        std::cout << "POPULAR\n";
        if (!v_dominant) return;
        DominanceCertificate dom = is_dominant(ps, m);
        if (dom.verdict) {
            std::cout << "DOMINANT\n";
        } else {
            std::cout << "NOT DOMINANT\n";
            if (dom.augmenting_path)
                std::cout << "# augmenting path\n"
                          << walk_names(ps, *dom.augmenting_path) << "\n";
            exit_code = kExitNo;
        }
    });

    // --- stable --------------------------------------------------------------
    std::string s_inst, s_side = "A", s_weights;
    bool s_max = false, s_list = false;
    long long s_cap = 1'000'000;
    auto* stable = app.add_subcommand("stable", "stable matchings");
    stable->add_option("-i,--instance", s_inst, "instance file")->required();
    stable->add_option("--side", s_side, "proposing side (default A)")
        ->check(CLI::IsMember({"A", "B"}));
    auto* s_wopt = stable->add_option("--weights", s_weights, "edge weight file");
    auto* s_mflag =
        stable->add_flag("--max", s_max, "maximize total weight over stable matchings");
    auto* s_lflag = stable->add_flag("--list", s_list, "list all stable matchings");
    stable->add_option("--cap", s_cap, "enumeration cap for --list");
    s_mflag->needs(s_wopt);
    s_wopt->needs(s_mflag);
    s_lflag->excludes(s_wopt);
    stable->callback([&] {
        PreferenceSystem ps = parse_instance_file(s_inst);
        if (s_list) {
            std::vector<Matching> all = all_stable_matchings(ps, s_cap);
            std::cout << "# count " << all.size() << "\n";
            for (std::size_t i = 0; i < all.size(); ++i)
                std::cout << "# matching " << i + 1 << "\n"
                          << render_matching(ps, all[i]);
            return;
        }
        if (s_max) {
            WeightMap w = WeightMap::parse_file(ps, s_weights);
            auto [m, value] = max_weight_stable(ps, w);
            std::cout << "# value " << value.str() << "\n" << render_matching(ps, m);
            return;
        }
        Matching m = gale_shapley(ps, s_side == "B" ? Side::B : Side::A);
        std::cout << render_matching(ps, m);
    });

    // --- dominant --------------------------------------------------------------
    std::string d_inst, d_weights, d_gprime;
    bool d_max = false;
    auto* dominant =
        app.add_subcommand("dominant", "dominant matching (two-level construction)");
    dominant->add_option("-i,--instance", d_inst, "instance file")->required();
    auto* d_wopt = dominant->add_option("--weights", d_weights, "edge weight file");
    auto* d_mflag = dominant->add_flag(
        "--max", d_max, "maximize total weight over dominant matchings");
    dominant->add_option("--emit-gprime", d_gprime,
                         "write the two-level companion instance to this file");
    d_mflag->needs(d_wopt);
    d_wopt->needs(d_mflag);
    dominant->callback([&] {
        PreferenceSystem ps = parse_instance_file(d_inst);
        if (!d_gprime.empty()) {
            LevelledInstance li = build_levelled_instance(ps);
            write_file(d_gprime, render_instance(li.gprime()));
        }
        if (d_max) {
            WeightMap w = WeightMap::parse_file(ps, d_weights);
            auto [m, value] = max_weight_dominant(ps, w);
            std::cout << "# value " << value.str() << "\n" << render_matching(ps, m);
            return;
        }
        Matching m = two_level_gale_shapley(ps);
        std::cout << render_matching(ps, m);
    });

    // --- pmffe --------------------------------------------------------------
    std::string p_inst;
    std::vector<std::string> p_force_nodes, p_forbid_nodes, p_force_edges,
        p_forbid_edges;
    bool p_allow = false;
    auto* pmffe = app.add_subcommand(
        "pmffe", "popular matching with forced/forbidden nodes and edges");
    pmffe->add_option("-i,--instance", p_inst, "instance file")->required();
    pmffe->add_option("--force-node", p_force_nodes, "vertex that must be matched");
    pmffe->add_option("--forbid-node", p_forbid_nodes,
                      "vertex that must stay exposed");
    pmffe->add_option("--force-edge", p_force_edges, "edge u:v that must be used");
    pmffe->add_option("--forbid-edge", p_forbid_edges,
                      "edge u:v that must not be used");
    pmffe->add_flag("--allow-exponential", p_allow,
                    "permit the exhaustive fallback on hard constraint shapes");
    pmffe->callback([&] {
        PreferenceSystem ps = parse_instance_file(p_inst);
        ConstraintSet cs;
        for (const std::string& n : p_force_nodes)
            cs.forced_nodes.push_back(ps.id_of(n));
        for (const std::string& n : p_forbid_nodes)
            cs.forbidden_nodes.push_back(ps.id_of(n));
        for (const std::string& e : p_force_edges) {
            auto [u, v] = edge_ids(ps, e);
            cs.forced_edges.push_back(ps.edge_index(u, v));
        }
        for (const std::string& e : p_forbid_edges) {
            auto [u, v] = edge_ids(ps, e);
            cs.forbidden_edges.push_back(ps.edge_index(u, v));
        }
        PmffeOutcome out = solve_pmffe(ps, cs, p_allow);
        std::cout << "# case " << out.case_tag << "\n";
        if (out.found()) {
            std::cout << render_matching(ps, *out.matching);
            exit_code = kExitYes;
        } else {
            std::cout << "# infeasible\n";
            exit_code = kExitNo;
        }
    });

    // --- mwp / miwp --------------------------------------------------------------
    std::string w_inst, w_weights, w_node_weights;
    bool w_exact = false, w_allow = false;
    auto add_weight_opts = [&](CLI::App* cmd) {
        cmd->add_option("-i,--instance", w_inst, "instance file")->required();
        auto* ew = cmd->add_option("--weights", w_weights, "edge weight file");
        auto* nw = cmd->add_option("--node-weights", w_node_weights,
                                   "node weight file (lines \"v <decimal>\")");
        ew->excludes(nw);
        cmd->add_flag("--exact", w_exact, "exact optimum by oracle enumeration");
        cmd->add_flag("--allow-exponential", w_allow,
                      "permit the exponential exact solver");
    };
    auto* mwp = app.add_subcommand("mwp", "max-weight popular matching");
    add_weight_opts(mwp);
    mwp->callback([&] {
        PreferenceSystem ps = parse_instance_file(w_inst);
        if (!w_node_weights.empty()) {
            NodeWeightMap nw = NodeWeightMap::parse_file(ps, w_node_weights);
            auto [m, value] = node_weighted_opt(ps, nw, OptDirection::Max);
            std::cout << "# value " << value.str() << "\n" << render_matching(ps, m);
            return;
        }
        if (w_weights.empty())
            throw ValidationError("mwp needs --weights or --node-weights");
        WeightMap w = WeightMap::parse_file(ps, w_weights);
        if (w_exact) {
            auto [m, value] = mwp_exact(ps, w, w_allow);
            std::cout << "# value " << value.str() << "\n" << render_matching(ps, m);
            return;
        }
        ApproxResult r = mwp_half_approx(ps, w);
        std::cout << "# value " << r.value.str() << "\n"
                  << "# stable-value " << r.stable_value.str() << "\n"
                  << "# dominant-value " << r.dominant_value.str() << "\n"
                  << render_matching(ps, r.matching);
    });
    auto* miwp = app.add_subcommand("miwp", "min-weight popular matching (exact only)");
    add_weight_opts(miwp);
    miwp->callback([&] {
        PreferenceSystem ps = parse_instance_file(w_inst);
        if (!w_node_weights.empty()) {
            NodeWeightMap nw = NodeWeightMap::parse_file(ps, w_node_weights);
            auto [m, value] = node_weighted_opt(ps, nw, OptDirection::Min);
            std::cout << "# value " << value.str() << "\n" << render_matching(ps, m);
            return;
        }
        if (w_weights.empty())
            throw ValidationError("miwp needs --weights or --node-weights");
        if (!w_exact)
            throw ValidationError(
                "miwp has no approximation mode; pass --exact --allow-exponential");
        WeightMap w = WeightMap::parse_file(ps, w_weights);
        auto [m, value] = miwp_exact(ps, w, w_allow);
        std::cout << "# value " << value.str() << "\n" << render_matching(ps, m);
    });

    // --- reduce --------------------------------------------------------------
    std::string r_in, r_out, r_map;
    bool r_normalize = false;
    auto* reduce = app.add_subcommand(
        "reduce", "DIMACS CNF -> gadget preference system + JSON map");
    reduce->add_option("-i,--input", r_in, "DIMACS CNF file")->required();
    reduce->add_option("-o,--output", r_out, "instance output file")->required();
    reduce->add_option("--map", r_map, "gadget map JSON output file")->required();
    reduce->add_flag("--normalize", r_normalize,
                     "monotonize and normalize the formula first");
    reduce->callback([&] {
        CnfFormula f = parse_dimacs_file(r_in);
        if (r_normalize) {
            if (!f.is_monotone()) f = to_monotone(f);
            f = normalize_monotone(f);
        } else {
            bool has_pos = false, has_neg = false;
            for (const auto& clause : f.clauses)
                for (const Literal& lit : clause) (lit.positive ? has_pos : has_neg) = true;
            if (!f.is_monotone() || !has_pos || !has_neg)
                throw ValidationError(
                    "formula is not monotone with both clause polarities; "
                    "rerun with --normalize");
        }
        BuiltGraph built = build_graph(f);
        write_file(r_out, render_instance(built.ps));
        write_file(r_map, built.map.to_json() + "\n");
        std::cout << "# vertices " << built.ps.vertex_count() << "\n"
                  << "# edges " << built.ps.edge_count() << "\n"
                  << "# gadgets " << built.map.gadgets.size() << "\n";
    });

    // --- enumerate --------------------------------------------------------------
    std::string e_inst, e_report;
    long long e_cap = 1'000'000;
    auto* enumerate =
        app.add_subcommand("enumerate", "exhaustive oracle report over all matchings");
    enumerate->add_option("-i,--instance", e_inst, "instance file")->required();
    enumerate->add_option("--cap", e_cap, "abort beyond this many matchings");
    enumerate->add_option("--report", e_report, "write the full report to this file");
    enumerate->callback([&] {
        PreferenceSystem ps = parse_instance_file(e_inst);
        oracle::EnumerationReport rep = oracle::popular_set(ps, e_cap);
        std::ostringstream summary;
        summary << "# total-matchings " << rep.total_matchings << "\n"
                << "# maximal " << rep.maximal.size() << "\n"
                << "# stable " << rep.stable.size() << "\n"
                << "# dominant " << rep.dominant.size() << "\n"
                << "# popular " << rep.popular.size() << "\n"
                << "# min-popular-size " << rep.min_popular_size << "\n"
                << "# max-popular-size " << rep.max_popular_size << "\n";
        std::ostringstream listing;
        for (std::size_t i = 0; i < rep.popular.size(); ++i)
            listing << "# popular-matching " << i + 1 << "\n"
                    << render_matching(ps, rep.popular[i]);
        std::cout << summary.str();
        if (e_report.empty())
            std::cout << listing.str();
        else
            write_file(e_report, summary.str() + listing.str());
    });

    // --- selftest --------------------------------------------------------------
    std::uint64_t t_seed = 20260819;
    auto* selftest = app.add_subcommand("selftest", "run the acceptance suite");
    selftest->add_option("--seed", t_seed, "seed for the random generators");
    selftest->callback([&] {
        auto results = run_acceptance(t_seed, &std::cout);
        int failed = 0;
        for (const auto& r : results) failed += r.passed ? 0 : 1;
        std::cout << results.size() - static_cast<std::size_t>(failed) << "/"
                  << results.size() << " criteria passed\n";
        exit_code = failed == 0 ? kExitYes : kExitNo;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitInput;
    } catch (const HardCaseError& e) {
        std::cerr << "hard case refused: " << e.what() << "\n";
        return kExitHard;
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return exit_code;
}
