// Popularity and dominance testing: frozen edge labels on the worked
// examples, witness validity and replay (every negative verdict must be
// demonstrable by an election the witness wins), agreement with the
// brute-force oracle, and alternating reachability.

#include <random>
#include <set>
#include <utility>
#include <vector>

#include "doctest.h"
#include "popmatch/instance.hpp"
#include "popmatch/instance_gen.hpp"
#include "popmatch/oracle.hpp"
#include "popmatch/popularity.hpp"
#include "popmatch/voting.hpp"

using namespace popmatch;

namespace {

// M xor the walk's edges: non-matching walk edges become matched (evicting
// off-walk partners), matched walk edges disappear. For a valid witness the
// result is the hand-checkable matching that beats M.
Matching replay_witness(const Matching& m, const PopularityWitness& w) {
    Matching out = m;
    auto detach = [&](int v) {
        int p = out.partner[v];
        if (p >= 0) {
            out.partner[p] = -1;
            out.partner[v] = -1;
        }
    };
    for (std::size_t i = 0; i + 1 < w.walk.size(); ++i) {
        int u = w.walk[i], v = w.walk[i + 1];
        if (m.contains_edge(u, v)) {
            if (out.partner[u] == v) {
                out.partner[u] = -1;
                out.partner[v] = -1;
            }
        } else {
            detach(u);
            detach(v);
            out.partner[u] = v;
            out.partner[v] = u;
        }
    }
    return out;
}

}  // namespace

TEST_CASE("labels: stable matching of the half-size example") {
    PreferenceSystem ps = sample_half_size_instance();
    int a1 = ps.id_of("a1"), a2 = ps.id_of("a2");
    int b1 = ps.id_of("b1"), b2 = ps.id_of("b2");
    Matching s = Matching::from_edges(ps, {{a2, b1}});
    LabeledGraph lg(ps, s);

    int e_a1b1 = ps.edge_index(a1, b1);
    int e_a2b1 = ps.edge_index(a2, b1);
    int e_a2b2 = ps.edge_index(a2, b2);

    CHECK(lg.matched_edge(e_a2b1));
    CHECK_THROWS_AS((void)lg.vote(e_a2b1, a2), PreconditionError);

    // a1 is unmatched (votes +); b1 holds its favourite a2 (votes -).
    CHECK(lg.vote(e_a1b1, a1) == Vote::Plus);
    CHECK(lg.vote(e_a1b1, b1) == Vote::Minus);
    // a2 holds its favourite b1 (votes -); b2 is unmatched (votes +).
    CHECK(lg.vote(e_a2b2, a2) == Vote::Minus);
    CHECK(lg.vote(e_a2b2, b2) == Vote::Plus);

    CHECK(lg.in_reduced(e_a1b1));
    CHECK(lg.in_reduced(e_a2b1));
    CHECK(lg.in_reduced(e_a2b2));
    CHECK(lg.plus_plus_edges().empty());
    CHECK_THROWS_AS((void)lg.vote(e_a1b1, a2), ValidationError);
}

TEST_CASE("labels: dominant matching of the half-size example") {
    PreferenceSystem ps = sample_half_size_instance();
    int a1 = ps.id_of("a1"), a2 = ps.id_of("a2");
    int b1 = ps.id_of("b1"), b2 = ps.id_of("b2");
    Matching d = Matching::from_edges(ps, {{a1, b1}, {a2, b2}});
    LabeledGraph lg(ps, d);

    // Both a2 and b1 would trade up to each other: a (+,+) edge.
    int e_a2b1 = ps.edge_index(a2, b1);
    CHECK(lg.vote(e_a2b1, a2) == Vote::Plus);
    CHECK(lg.vote(e_a2b1, b1) == Vote::Plus);
    CHECK(lg.plus_plus(e_a2b1));
    CHECK(lg.plus_plus_edges() == std::vector<int>{e_a2b1});
    // ... and yet d is popular: the (+,+) edge sits on no violating walk.
    CHECK(is_popular(ps, d).verdict);
}

TEST_CASE("popularity: verdicts on the worked examples") {
    PreferenceSystem ps = sample_half_size_instance();
    int a1 = ps.id_of("a1"), a2 = ps.id_of("a2");
    int b1 = ps.id_of("b1"), b2 = ps.id_of("b2");
    Matching s = Matching::from_edges(ps, {{a2, b1}});
    Matching d = Matching::from_edges(ps, {{a1, b1}, {a2, b2}});
    CHECK(is_popular(ps, s).verdict);
    CHECK(is_popular(ps, d).verdict);

    Matching bad = Matching::from_edges(ps, {{a2, b2}});
    PopularityCertificate cert = is_popular(ps, bad);
    REQUIRE(!cert.verdict);
    REQUIRE(cert.witness.has_value());
    CHECK(witness_is_valid(ps, bad, *cert.witness));
    Matching better = replay_witness(bad, *cert.witness);
    CHECK(is_more_popular(ps, better, bad));

    CHECK(!is_popular(ps, Matching::empty(ps)).verdict);
}

TEST_CASE("popularity: agreement with brute force on random instances") {
    std::mt19937_64 rng(101);
    for (int i = 0; i < 120; ++i) {
        PreferenceSystem ps = random_instance(rng, 3, 3, 7);
        for (const Matching& m : oracle::enumerate_matchings(ps, 100000)) {
            bool expect = oracle::is_popular_bruteforce(ps, m, 100000);
            PopularityCertificate cert = is_popular(ps, m);
            REQUIRE(cert.verdict == expect);
        }
    }
}

TEST_CASE("popularity: every negative verdict carries a replayable witness") {
    std::mt19937_64 rng(202);
    int negatives = 0;
    for (int i = 0; i < 150; ++i) {
        PreferenceSystem ps = random_instance(rng, 4, 4, 12);
        for (const Matching& m : oracle::enumerate_matchings(ps, 100000)) {
            PopularityCertificate cert = is_popular(ps, m);
            if (cert.verdict) continue;
            ++negatives;
            REQUIRE(cert.witness.has_value());
            REQUIRE(witness_is_valid(ps, m, *cert.witness));
            Matching better = replay_witness(m, *cert.witness);
            REQUIRE(is_more_popular(ps, better, m));
        }
    }
    CHECK(negatives > 1000);  // the sample really exercised the witness path
}

TEST_CASE("alternating reachability: worked examples") {
    PreferenceSystem ps = sample_half_size_instance();
    int a1 = ps.id_of("a1"), a2 = ps.id_of("a2");
    int b1 = ps.id_of("b1"), b2 = ps.id_of("b2");
    Matching s = Matching::from_edges(ps, {{a2, b1}});
    LabeledGraph lg(ps, s);

    std::set<std::pair<int, int>> expect{{b1, 1}, {a2, 0}, {b2, 1}};
    CHECK(alternating_reachability(lg, {a1}) == expect);
    CHECK(alternating_reachability(lg, {}).empty());

    PreferenceSystem single = single_edge_instance();
    int a = single.id_of("a"), b = single.id_of("b");
    Matching m = Matching::from_edges(single, {{a, b}});
    LabeledGraph lg2(single, m);
    CHECK(alternating_reachability(lg2, {a}).empty());
}

TEST_CASE("dominance: worked examples and precondition") {
    PreferenceSystem ps = sample_half_size_instance();
    int a1 = ps.id_of("a1"), a2 = ps.id_of("a2");
    int b1 = ps.id_of("b1"), b2 = ps.id_of("b2");
    Matching s = Matching::from_edges(ps, {{a2, b1}});
    Matching d = Matching::from_edges(ps, {{a1, b1}, {a2, b2}});

    DominanceCertificate ds = is_dominant(ps, s);
    CHECK(!ds.verdict);
    REQUIRE(ds.augmenting_path.has_value());
    std::vector<int> path{a1, b1, a2, b2};
    CHECK(*ds.augmenting_path == path);

    CHECK(is_dominant(ps, d).verdict);

    Matching bad = Matching::from_edges(ps, {{a2, b2}});
    CHECK_THROWS_AS((void)is_dominant(ps, bad), PreconditionError);

    PreferenceSystem p3 = path_three_instance();
    Matching m = Matching::from_edges(p3, {{p3.id_of("a1"), p3.id_of("b1")}});
    CHECK(is_dominant(p3, m).verdict);
}

TEST_CASE("dominance: agreement with the defeat oracle on random instances") {
    std::mt19937_64 rng(303);
    for (int i = 0; i < 80; ++i) {
        PreferenceSystem ps = random_instance(rng, 3, 3, 7);
        std::vector<Matching> all = oracle::enumerate_matchings(ps, 100000);
        for (const Matching& m : all) {
            if (!is_popular(ps, m).verdict) continue;
            bool undefeated = true;
            for (const Matching& other : all)
                if (defeats(ps, other, m)) undefeated = false;
            CHECK(is_dominant(ps, m).verdict == undefeated);
        }
    }
}
