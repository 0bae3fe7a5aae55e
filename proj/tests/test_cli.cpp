// End-to-end tests for the popmatch command-line tool. Each case shells out
// to the built binary (path injected by the build as POPMATCH_BIN), captures
// stdout/stderr and the exit code, and checks them against the documented
// contract: 0 affirmative/found, 1 negative/infeasible, 2 input error,
// 3 hard case refused without the exponential fallback.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "popmatch/instance.hpp"
#include "popmatch/instance_gen.hpp"

namespace fs = std::filesystem;
using namespace popmatch;

namespace {

const fs::path& tmp_dir() {
    static fs::path dir = [] {
        std::string tmpl =
            (fs::temp_directory_path() / "popmatch_cli_XXXXXX").string();
        char* made = mkdtemp(tmpl.data());
        REQUIRE(made != nullptr);
        return fs::path(made);
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path write_file(const std::string& name, const std::string& text) {
    fs::path p = tmp_dir() / name;
    std::ofstream out(p);
    out << text;
    return p;
}

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run(const std::string& args) {
    static int counter = 0;
    fs::path out = tmp_dir() / ("stdout." + std::to_string(counter));
    fs::path err = tmp_dir() / ("stderr." + std::to_string(counter));
    ++counter;
    std::string cmd = std::string(POPMATCH_BIN) + " " + args + " > " +
                      out.string() + " 2> " + err.string();
    int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    REQUIRE(WIFEXITED(rc));
    return {WEXITSTATUS(rc), slurp(out), slurp(err)};
}

bool contains(const std::string& text, const std::string& needle) {
    return text.find(needle) != std::string::npos;
}

// Instance files shared by the cases, generated from the library fixtures.
const std::string& i2x2_path() {
    static std::string p =
        write_file("i2x2.txt", render_instance(sample_half_size_instance()))
            .string();
    return p;
}

}  // namespace

TEST_CASE("cli: verify reports popularity with certificates") {
    std::string good = write_file("m_good.txt", "a2 b1\n").string();
    CliResult r = run("verify -i " + i2x2_path() + " -m " + good);
    CHECK(r.code == 0);
    CHECK(contains(r.out, "POPULAR"));
    CHECK_FALSE(contains(r.out, "NOT POPULAR"));

    // An unpopular matching: a2 b2 alone loses to the stable matching.
    std::string bad = write_file("m_bad.txt", "a2 b2\n").string();
    r = run("verify -i " + i2x2_path() + " -m " + bad);
    CHECK(r.code == 1);
    CHECK(contains(r.out, "NOT POPULAR"));
    CHECK(contains(r.out, "# violation"));

    // Popular but not dominant: --dominant demands more and emits the
    // augmenting path.
    r = run("verify --dominant -i " + i2x2_path() + " -m " + good);
    CHECK(r.code == 1);
    CHECK(contains(r.out, "POPULAR"));
    CHECK(contains(r.out, "NOT DOMINANT"));
    CHECK(contains(r.out, "# augmenting path"));
    CHECK(contains(r.out, "a1 b1 a2 b2"));

    // The maximum matching is dominant.
    std::string dom = write_file("m_dom.txt", "a1 b1\na2 b2\n").string();
    r = run("verify --dominant -i " + i2x2_path() + " -m " + dom);
    CHECK(r.code == 0);
    CHECK(contains(r.out, "DOMINANT"));

    // A matching file naming a non-edge is an input error.
    std::string nonedge = write_file("m_nonedge.txt", "a1 b2\n").string();
    r = run("verify -i " + i2x2_path() + " -m " + nonedge);
    CHECK(r.code == 2);
    CHECK(contains(r.err, "error"));
}

TEST_CASE("cli: stable emits the proposer-optimal matching and variants") {
    CliResult r = run("stable -i " + i2x2_path());
    CHECK(r.code == 0);
    CHECK(r.out == "a2 b1\n");

    r = run("stable --side B -i " + i2x2_path());
    CHECK(r.code == 0);
    CHECK(r.out == "a2 b1\n");

    r = run("stable --list -i " + i2x2_path());
    CHECK(r.code == 0);
    CHECK(contains(r.out, "# count 1"));
    CHECK(contains(r.out, "# matching 1"));
    CHECK(contains(r.out, "a2 b1"));

    std::string w =
        write_file("w_spike.txt", "a1 b1 1\na2 b1 5\na2 b2 1\n").string();
    r = run("stable --max --weights " + w + " -i " + i2x2_path());
    CHECK(r.code == 0);
    CHECK(contains(r.out, "# value 5"));
    CHECK(contains(r.out, "a2 b1"));

    // --list and --weights are mutually exclusive.
    r = run("stable --list --weights " + w + " -i " + i2x2_path());
    CHECK(r.code == 2);

    // --max without --weights is rejected.
    r = run("stable --max -i " + i2x2_path());
    CHECK(r.code == 2);
}

TEST_CASE("cli: dominant builds the maximum popular matching") {
    CliResult r = run("dominant -i " + i2x2_path());
    CHECK(r.code == 0);
    CHECK(r.out == "a1 b1\na2 b2\n");

    // The two-level companion instance round-trips through the parser.
    fs::path gprime = tmp_dir() / "gprime.txt";
    r = run("dominant --emit-gprime " + gprime.string() + " -i " + i2x2_path());
    CHECK(r.code == 0);
    PreferenceSystem gp = parse_instance_file(gprime.string());
    CHECK(gp.vertex_count() == 8);
    CHECK(gp.a_count() == 4);

    // Weighted maximization over dominant matchings only: a spike on the
    // stable edge is out of reach.
    std::string w =
        write_file("w_spike2.txt", "a1 b1 0\na2 b1 5\na2 b2 0\n").string();
    r = run("dominant --max --weights " + w + " -i " + i2x2_path());
    CHECK(r.code == 0);
    CHECK(contains(r.out, "# value 0"));
    CHECK_FALSE(contains(r.out, "a2 b1"));
}

TEST_CASE("cli: pmffe handles polynomial cases and refuses hard shapes") {
    CliResult r = run("pmffe --force-node a1 -i " + i2x2_path());
    CHECK(r.code == 0);
    CHECK(contains(r.out, "# case forced_nodes"));
    CHECK(contains(r.out, "a1 b1"));

    r = run("pmffe --forbid-node b1 -i " + i2x2_path());
    CHECK(r.code == 1);
    CHECK(contains(r.out, "# case forbidden_nodes"));
    CHECK(contains(r.out, "# infeasible"));

    r = run("pmffe --force-edge a2:b1 -i " + i2x2_path());
    CHECK(r.code == 0);
    CHECK(contains(r.out, "# case forced_edge"));
    CHECK(r.out.find("a2 b1\n") != std::string::npos);

    r = run("pmffe --forbid-edge a2:b1 -i " + i2x2_path());
    CHECK(r.code == 0);
    CHECK(contains(r.out, "# case forbidden_edge"));

    // Mixed node constraints are NP-hard in general: without the fallback
    // flag the tool refuses with exit code 3.
    r = run("pmffe --force-node a1 --forbid-node b2 -i " + i2x2_path());
    CHECK(r.code == 3);
    CHECK(contains(r.err, "hard case refused"));

    r = run("pmffe --force-node a1 --forbid-node b2 --allow-exponential -i " +
            i2x2_path());
    CHECK(r.code == 1);
    CHECK(contains(r.out, "# case exhaustive"));

    // A non-edge in --force-edge is an input error.
    r = run("pmffe --force-edge a1:b2 -i " + i2x2_path());
    CHECK(r.code == 2);
}

TEST_CASE("cli: mwp and miwp optimize edge and node weights") {
    std::string unit =
        write_file("w_unit.txt", "a1 b1 1\na2 b1 1\na2 b2 1\n").string();
    CliResult r = run("mwp --weights " + unit + " -i " + i2x2_path());
    CHECK(r.code == 0);
    CHECK(contains(r.out, "# value 2"));
    CHECK(contains(r.out, "# stable-value 1"));
    CHECK(contains(r.out, "# dominant-value 2"));
    CHECK(contains(r.out, "a1 b1"));
    CHECK(contains(r.out, "a2 b2"));

    // The exact solver is exponential and guarded.
    r = run("mwp --exact --weights " + unit + " -i " + i2x2_path());
    CHECK(r.code == 3);
    r = run("mwp --exact --allow-exponential --weights " + unit + " -i " +
            i2x2_path());
    CHECK(r.code == 0);
    CHECK(contains(r.out, "# value 2"));

    // Node weights: cover a1 if maximizing, avoid it if minimizing.
    std::string nw =
        write_file("w_node.txt", "a1 1\na2 0\nb1 0\nb2 0\n").string();
    r = run("mwp --node-weights " + nw + " -i " + i2x2_path());
    CHECK(r.code == 0);
    CHECK(contains(r.out, "# value 1"));
    CHECK(contains(r.out, "a1 b1"));
    r = run("miwp --node-weights " + nw + " -i " + i2x2_path());
    CHECK(r.code == 0);
    CHECK(contains(r.out, "# value 0"));

    // miwp over edge weights exists only in exact form.
    r = run("miwp --weights " + unit + " -i " + i2x2_path());
    CHECK(r.code == 2);
    CHECK(contains(r.err, "--exact"));
    std::string spike =
        write_file("w_spike3.txt", "a1 b1 0\na2 b1 1\na2 b2 0\n").string();
    r = run("miwp --exact --allow-exponential --weights " + spike + " -i " +
            i2x2_path());
    CHECK(r.code == 0);
    CHECK(contains(r.out, "# value 0"));

    // Weight file missing an edge is an input error.
    std::string partial = write_file("w_partial.txt", "a1 b1 1\n").string();
    r = run("mwp --weights " + partial + " -i " + i2x2_path());
    CHECK(r.code == 2);
}

TEST_CASE("cli: reduce turns formulas into instances and pmffe decides them") {
    // (x1) and (not x1): unsatisfiable, already in the accepted form.
    std::string unsat =
        write_file("unsat.cnf", "p cnf 1 2\n1 0\n-1 0\n").string();
    fs::path inst = tmp_dir() / "g_unsat.txt";
    fs::path map = tmp_dir() / "g_unsat.json";
    CliResult r = run("reduce -i " + unsat + " -o " + inst.string() +
                      " --map " + map.string());
    CHECK(r.code == 0);
    CHECK(contains(r.out, "# vertices 20"));
    CHECK(contains(r.out, "# edges 24"));
    CHECK(contains(r.out, "# gadgets 2"));

    PreferenceSystem gps = parse_instance_file(inst.string());
    CHECK(gps.vertex_count() == 20);
    nlohmann::json j = nlohmann::json::parse(slurp(map));
    CHECK(j["specials"]["s"] == "s");

    // Forbidding both designated edges asks for a popular matching avoiding
    // them; for an unsatisfiable formula none exists.
    r = run("pmffe --forbid-edge s:t --forbid-edge w:x --allow-exponential -i " +
            inst.string());
    CHECK(r.code == 1);
    CHECK(contains(r.out, "# infeasible"));

    // The same pipeline on a satisfiable formula finds a matching that
    // avoids both edges.
    std::string sat =
        write_file("sat.cnf", "p cnf 2 2\n1 2 0\n-1 -2 0\n").string();
    fs::path inst2 = tmp_dir() / "g_sat.txt";
    fs::path map2 = tmp_dir() / "g_sat.json";
    r = run("reduce -i " + sat + " -o " + inst2.string() + " --map " +
            map2.string());
    CHECK(r.code == 0);
    CHECK(contains(r.out, "# vertices 33"));
    CHECK(contains(r.out, "# edges 41"));

    r = run("pmffe --forbid-edge s:t --forbid-edge w:x --allow-exponential -i " +
            inst2.string());
    CHECK(r.code == 0);
    PreferenceSystem gps2 = parse_instance_file(inst2.string());
    fs::path found = write_file("found.txt", r.out);
    Matching m = parse_matching_file(gps2, found.string());
    CHECK_FALSE(m.contains_edge(gps2.id_of("s"), gps2.id_of("t")));
    CHECK_FALSE(m.contains_edge(gps2.id_of("w"), gps2.id_of("x")));

    // Mixed-polarity input needs --normalize.
    std::string mixed =
        write_file("mixed.cnf", "p cnf 2 2\n1 -2 0\n2 0\n").string();
    fs::path inst3 = tmp_dir() / "g_mixed.txt";
    fs::path map3 = tmp_dir() / "g_mixed.json";
    r = run("reduce -i " + mixed + " -o " + inst3.string() + " --map " +
            map3.string());
    CHECK(r.code == 2);
    CHECK(contains(r.err, "--normalize"));
    r = run("reduce --normalize -i " + mixed + " -o " + inst3.string() +
            " --map " + map3.string());
    CHECK(r.code == 0);
    CHECK_NOTHROW(parse_instance_file(inst3.string()));
}

TEST_CASE("cli: enumerate reports oracle counts") {
    CliResult r = run("enumerate -i " + i2x2_path());
    CHECK(r.code == 0);
    CHECK(contains(r.out, "# total-matchings 5"));
    CHECK(contains(r.out, "# maximal 2"));
    CHECK(contains(r.out, "# stable 1"));
    CHECK(contains(r.out, "# dominant 1"));
    CHECK(contains(r.out, "# popular 2"));
    CHECK(contains(r.out, "# min-popular-size 1"));
    CHECK(contains(r.out, "# max-popular-size 2"));
    CHECK(contains(r.out, "# popular-matching 1"));

    // With --report the listing moves into the file.
    fs::path rep = tmp_dir() / "report.txt";
    r = run("enumerate --report " + rep.string() + " -i " + i2x2_path());
    CHECK(r.code == 0);
    CHECK_FALSE(contains(r.out, "# popular-matching"));
    CHECK(contains(slurp(rep), "# popular-matching 2"));

    // A tiny cap turns into a refusal, not a wrong answer.
    r = run("enumerate --cap 2 -i " + i2x2_path());
    CHECK(r.code == 3);
    CHECK(contains(r.err, "hard case refused"));
}

TEST_CASE("cli: input and usage errors exit with code 2") {
    CliResult r = run("verify -i /nonexistent/file.txt -m /dev/null");
    CHECK(r.code == 2);

    r = run("frobnicate");
    CHECK(r.code == 2);

    r = run("");
    CHECK(r.code == 2);

    r = run("verify -i " + i2x2_path());  // missing -m
    CHECK(r.code == 2);

    r = run("--help");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "popular"));

    // A malformed instance file carries its line number in the message.
    std::string broken =
        write_file("broken.txt", "popmatch-instance v1\nA: a1\nB: b1\nnonsense\n")
            .string();
    r = run("verify -i " + broken + " -m /dev/null");
    CHECK(r.code == 2);
    CHECK(contains(r.err, "line 4"));
}
