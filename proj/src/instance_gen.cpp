// Fixtures and seeded random generators. Random draws use plain modulo on
// the raw engine output: bias is irrelevant for test-case generation and
// the sequences stay reproducible across standard-library versions.

#include "popmatch/instance_gen.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace popmatch {

namespace {

PreferenceSystem from_name_lists(
    std::vector<std::string> a_names, std::vector<std::string> b_names,
    const std::vector<std::vector<std::string>>& pref_names) {
    std::vector<std::string> all = a_names;
    all.insert(all.end(), b_names.begin(), b_names.end());
    std::vector<std::vector<int>> prefs(all.size());
    auto id = [&](const std::string& n) {
        return static_cast<int>(std::find(all.begin(), all.end(), n) - all.begin());
    };
    for (int v = 0; v < static_cast<int>(all.size()); ++v)
        for (const std::string& nb : pref_names[v]) prefs[v].push_back(id(nb));
    return PreferenceSystem(std::move(a_names), std::move(b_names),
                            std::move(prefs));
}

long long draw(std::mt19937_64& rng, long long n) {
    return static_cast<long long>(rng() % static_cast<unsigned long long>(n));
}

}  // namespace

PreferenceSystem sample_half_size_instance() {
    return from_name_lists({"a1", "a2"}, {"b1", "b2"},
                           {{"b1"}, {"b1", "b2"}, {"a2", "a1"}, {"a2"}});
}

PreferenceSystem sample_two_stable_instance() {
    return from_name_lists(
        {"a1", "a2"}, {"b1", "b2"},
        {{"b1", "b2"}, {"b2", "b1"}, {"a2", "a1"}, {"a1", "a2"}});
}

PreferenceSystem single_edge_instance() {
    return from_name_lists({"a"}, {"b"}, {{"b"}, {"a"}});
}

PreferenceSystem path_three_instance() {
    return from_name_lists({"a1", "a2"}, {"b1"}, {{"b1"}, {"b1"}, {"a1", "a2"}});
}

PreferenceSystem random_instance(std::mt19937_64& rng, int max_a, int max_b,
                                 int max_edges) {
    const int n_a = 1 + static_cast<int>(draw(rng, max_a));
    const int n_b = 1 + static_cast<int>(draw(rng, max_b));

    // Candidate edges in random order; first cover every vertex, then add
    // extras up to a random count within the cap.
    std::vector<std::pair<int, int>> candidates;
    for (int a = 0; a < n_a; ++a)
        for (int b = 0; b < n_b; ++b) candidates.push_back({a, b});
    for (int i = static_cast<int>(candidates.size()) - 1; i > 0; --i)
        std::swap(candidates[i], candidates[draw(rng, i + 1)]);

    std::vector<char> chosen(candidates.size(), 0);
    std::vector<int> deg_a(n_a, 0), deg_b(n_b, 0);
    int count = 0;
    for (int i = 0; i < static_cast<int>(candidates.size()); ++i) {
        auto [a, b] = candidates[i];
        if (deg_a[a] == 0 || deg_b[b] == 0) {
            chosen[i] = 1;
            ++deg_a[a];
            ++deg_b[b];
            ++count;
        }
    }
    int cap = std::min<long long>(max_edges, candidates.size());
    if (cap > count) {
        int target = count + static_cast<int>(draw(rng, cap - count + 1));
        for (int i = 0; i < static_cast<int>(candidates.size()) && count < target;
             ++i) {
            if (chosen[i]) continue;
            chosen[i] = 1;
            ++count;
        }
    }

    std::vector<std::vector<int>> prefs(n_a + n_b);
    for (int i = 0; i < static_cast<int>(candidates.size()); ++i) {
        if (!chosen[i]) continue;
        auto [a, b] = candidates[i];
        prefs[a].push_back(n_a + b);
        prefs[n_a + b].push_back(a);
    }
    for (auto& list : prefs)
        for (int i = static_cast<int>(list.size()) - 1; i > 0; --i)
            std::swap(list[i], list[draw(rng, i + 1)]);

    std::vector<std::string> a_names, b_names;
    for (int a = 0; a < n_a; ++a) a_names.push_back("a" + std::to_string(a + 1));
    for (int b = 0; b < n_b; ++b) b_names.push_back("b" + std::to_string(b + 1));
    return PreferenceSystem(std::move(a_names), std::move(b_names),
                            std::move(prefs));
}

WeightMap random_weights(std::mt19937_64& rng, const PreferenceSystem& ps,
                         int max_value) {
    std::vector<long long> values;
    for (int e = 0; e < ps.edge_count(); ++e)
        values.push_back(draw(rng, max_value + 1));
    return WeightMap::from_integers(ps, values);
}

CnfFormula random_normalized_formula(std::mt19937_64& rng, int max_vars,
                                     int max_clauses) {
    CnfFormula f;
    const int n_vars = 1 + static_cast<int>(draw(rng, max_vars));
    for (int i = 1; i <= n_vars; ++i) f.variables.push_back("x" + std::to_string(i));
    const int n_clauses = 1 + static_cast<int>(draw(rng, max_clauses));
    for (int c = 0; c < n_clauses; ++c) {
        bool positive = draw(rng, 2) == 0;
        int size = 1 + static_cast<int>(draw(rng, std::min(3, n_vars)));
        std::vector<int> vars(n_vars);
        std::iota(vars.begin(), vars.end(), 0);
        for (int i = n_vars - 1; i > 0; --i)
            std::swap(vars[i], vars[draw(rng, i + 1)]);
        std::vector<Literal> clause;
        for (int i = 0; i < size; ++i)
            clause.push_back({f.variables[vars[i]], positive});
        f.clauses.push_back(std::move(clause));
    }
    return normalize_monotone(f);
}

}  // namespace popmatch
