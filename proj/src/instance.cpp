#include "popmatch/instance.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace popmatch {

PreferenceSystem::PreferenceSystem(std::vector<std::string> a_names,
                                   std::vector<std::string> b_names,
                                   std::vector<std::vector<int>> prefs) {
    if (a_names.empty() || b_names.empty())
        throw ValidationError("both sides of the bipartition must be nonempty");
    a_count_ = static_cast<int>(a_names.size());
    names_ = std::move(a_names);
    names_.insert(names_.end(), b_names.begin(), b_names.end());
    prefs_ = std::move(prefs);
    if (static_cast<int>(prefs_.size()) != vertex_count())
        throw ValidationError("preference table size does not match vertex count");

    for (int v = 0; v < vertex_count(); ++v) {
        if (names_[v].empty()) throw ValidationError("empty vertex name");
        if (!id_.emplace(names_[v], v).second)
            throw ValidationError("duplicate vertex name '" + names_[v] + "'");
    }

    for (int v = 0; v < vertex_count(); ++v) {
        if (prefs_[v].empty())
            throw ValidationError("vertex '" + names_[v] + "' has an empty preference list "
                                  "(isolated vertices are not allowed)");
        int r = 0;
        for (int u : prefs_[v]) {
            if (u < 0 || u >= vertex_count())
                throw ValidationError("preference entry out of range");
            if (side_of(u) == side_of(v))
                throw ValidationError("vertex '" + names_[v] + "' lists same-side vertex '" +
                                      names_[u] + "'");
            if (!rank_.emplace(key(v, u), ++r).second)
                throw ValidationError("vertex '" + names_[v] + "' lists '" + names_[u] +
                                      "' twice");
        }
    }

    // Symmetry, and the canonical edge list (A-side endpoint first).
    for (int a = 0; a < a_count_; ++a)
        for (int b : prefs_[a]) {
            if (!rank_.count(key(b, a)))
                throw ValidationError("asymmetric lists: '" + names_[a] + "' ranks '" +
                                      names_[b] + "' but not vice versa");
            edges_.emplace_back(a, b);
        }
    for (int b = a_count_; b < vertex_count(); ++b)
        for (int a : prefs_[b])
            if (!rank_.count(key(a, b)))
                throw ValidationError("asymmetric lists: '" + names_[b] + "' ranks '" +
                                      names_[a] + "' but not vice versa");
    std::sort(edges_.begin(), edges_.end());
    for (int i = 0; i < static_cast<int>(edges_.size()); ++i)
        edge_idx_.emplace(key(edges_[i].first, edges_[i].second), i);
}

int PreferenceSystem::id_of(const std::string& name) const {
    auto it = id_.find(name);
    if (it == id_.end()) throw ValidationError("unknown vertex '" + name + "'");
    return it->second;
}

std::optional<int> PreferenceSystem::try_id(const std::string& name) const {
    auto it = id_.find(name);
    if (it == id_.end()) return std::nullopt;
    return it->second;
}

int PreferenceSystem::rank(int u, int v) const {
    auto it = rank_.find(key(u, v));
    if (it == rank_.end())
        throw ValidationError("'" + names_[u] + "' and '" + names_[v] + "' are not adjacent");
    return it->second;
}

int PreferenceSystem::edge_index(int u, int v) const {
    if (side_of(u) == Side::B) std::swap(u, v);
    auto it = edge_idx_.find(key(u, v));
    return it == edge_idx_.end() ? -1 : it->second;
}

Matching Matching::from_edges(const PreferenceSystem& ps,
                              const std::vector<std::pair<int, int>>& edges) {
    Matching m = Matching::empty(ps);
    for (auto [u, v] : edges) {
        if (!ps.adjacent(u, v))
            throw ValidationError("matching uses non-edge '" + ps.name(u) + " " + ps.name(v) +
                                  "'");
        if (m.partner[u] >= 0 || m.partner[v] >= 0)
            throw ValidationError("matching uses vertex '" +
                                  ps.name(m.partner[u] >= 0 ? u : v) + "' twice");
        m.partner[u] = v;
        m.partner[v] = u;
    }
    return m;
}

std::vector<std::pair<int, int>> Matching::edge_list(int n_a) const {
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < n_a; ++a)
        if (partner[a] >= 0) out.emplace_back(a, partner[a]);
    return out;  // already sorted: a ascending
}

// --- Parsing ---------------------------------------------------------------

namespace {

// Strips a '#' comment and splits the rest into whitespace-separated tokens.
std::vector<std::string> tokenize(const std::string& line) {
    std::string body = line.substr(0, line.find('#'));
    std::istringstream ss(body);
    std::vector<std::string> toks;
    std::string t;
    while (ss >> t) toks.push_back(t);
    return toks;
}

void check_name(const std::string& n, int line) {
    if (n.find(':') != std::string::npos)
        throw ParseError("vertex name '" + n + "' contains ':'", line);
}

}  // namespace

PreferenceSystem parse_instance(std::istream& in) {
    std::string line;
    int lineno = 0;

    // Header line (first non-blank, non-comment line).
    std::vector<std::string> toks;
    while (std::getline(in, line)) {
        ++lineno;
        toks = tokenize(line);
        if (!toks.empty()) break;
    }
    if (toks.size() != 2 || toks[0] != "popmatch-instance" || toks[1] != "v1")
        throw ParseError("expected header 'popmatch-instance v1'", lineno);

    std::vector<std::string> a_names, b_names;
    bool have_a = false, have_b = false;
    // name -> (line, raw neighbour names)
    std::vector<std::pair<std::string, std::vector<std::string>>> pref_lines;
    std::vector<int> pref_linenos;

    while (std::getline(in, line)) {
        ++lineno;
        toks = tokenize(line);
        if (toks.empty()) continue;
        if (toks[0] == "A:") {
            if (have_a) throw ParseError("duplicate A: line", lineno);
            have_a = true;
            for (size_t i = 1; i < toks.size(); ++i) {
                check_name(toks[i], lineno);
                a_names.push_back(toks[i]);
            }
        } else if (toks[0] == "B:") {
            if (have_b) throw ParseError("duplicate B: line", lineno);
            have_b = true;
            for (size_t i = 1; i < toks.size(); ++i) {
                check_name(toks[i], lineno);
                b_names.push_back(toks[i]);
            }
        } else if (toks[0] == "pref") {
            if (toks.size() < 2 || toks[1].size() < 2 || toks[1].back() != ':')
                throw ParseError("expected 'pref <vertex>: <neighbours...>'", lineno);
            std::string v = toks[1].substr(0, toks[1].size() - 1);
            check_name(v, lineno);
            std::vector<std::string> nbrs(toks.begin() + 2, toks.end());
            for (const auto& n : nbrs) check_name(n, lineno);
            pref_lines.emplace_back(v, std::move(nbrs));
            pref_linenos.push_back(lineno);
        } else {
            throw ParseError("unrecognized directive '" + toks[0] + "'", lineno);
        }
    }
    if (!have_a || !have_b) throw ParseError("missing A: or B: line");
    if (a_names.empty() || b_names.empty()) throw ParseError("a side is empty");

    std::unordered_map<std::string, int> id;
    int next = 0;
    for (const auto& n : a_names)
        if (!id.emplace(n, next++).second) throw ParseError("duplicate vertex name '" + n + "'");
    for (const auto& n : b_names)
        if (!id.emplace(n, next++).second) throw ParseError("duplicate vertex name '" + n + "'");

    std::vector<std::vector<int>> prefs(next);
    std::vector<bool> seen(next, false);
    for (size_t i = 0; i < pref_lines.size(); ++i) {
        const auto& [vname, nbrs] = pref_lines[i];
        int ln = pref_linenos[i];
        auto it = id.find(vname);
        if (it == id.end()) throw ParseError("pref line for unknown vertex '" + vname + "'", ln);
        int v = it->second;
        if (seen[v]) throw ParseError("duplicate pref line for '" + vname + "'", ln);
        seen[v] = true;
        if (nbrs.empty())
            throw ParseError("empty preference list for '" + vname + "'", ln);
        for (const auto& n : nbrs) {
            auto jt = id.find(n);
            if (jt == id.end())
                throw ParseError("'" + vname + "' lists unknown vertex '" + n + "'", ln);
            prefs[v].push_back(jt->second);
        }
    }
    for (int v = 0; v < next; ++v)
        if (!seen[v])
            throw ParseError("no pref line for vertex '" +
                             (v < static_cast<int>(a_names.size())
                                  ? a_names[v]
                                  : b_names[v - a_names.size()]) +
                             "' (isolated vertices are not allowed)");

    try {
        return PreferenceSystem(std::move(a_names), std::move(b_names), std::move(prefs));
    } catch (const ValidationError& e) {
        throw ParseError(e.what());
    }
}

PreferenceSystem parse_instance_string(const std::string& text) {
    std::istringstream ss(text);
    return parse_instance(ss);
}

PreferenceSystem parse_instance_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open '" + path + "'");
    return parse_instance(f);
}

std::string render_instance(const PreferenceSystem& ps) {
    std::ostringstream out;
    out << "popmatch-instance v1\n";
    out << "A:";
    for (int a = 0; a < ps.a_count(); ++a) out << ' ' << ps.name(a);
    out << "\nB:";
    for (int b = ps.a_count(); b < ps.vertex_count(); ++b) out << ' ' << ps.name(b);
    out << '\n';
    for (int v = 0; v < ps.vertex_count(); ++v) {
        out << "pref " << ps.name(v) << ':';
        for (int u : ps.neighbors(v)) out << ' ' << ps.name(u);
        out << '\n';
    }
    return out.str();
}

Matching parse_matching(const PreferenceSystem& ps, std::istream& in) {
    std::string line;
    int lineno = 0;
    std::vector<std::pair<int, int>> edges;
    while (std::getline(in, line)) {
        ++lineno;
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        if (toks.size() != 2) throw ParseError("expected 'u v' edge line", lineno);
        auto u = ps.try_id(toks[0]), v = ps.try_id(toks[1]);
        if (!u) throw ParseError("unknown vertex '" + toks[0] + "'", lineno);
        if (!v) throw ParseError("unknown vertex '" + toks[1] + "'", lineno);
        edges.emplace_back(*u, *v);
    }
    try {
        return Matching::from_edges(ps, edges);
    } catch (const ValidationError& e) {
        throw ParseError(e.what());
    }
}

Matching parse_matching_file(const PreferenceSystem& ps, const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open '" + path + "'");
    return parse_matching(ps, f);
}

std::string render_matching(const PreferenceSystem& ps, const Matching& m) {
    std::ostringstream out;
    for (auto [a, b] : m.edge_list(ps.a_count()))
        out << ps.name(a) << ' ' << ps.name(b) << '\n';
    return out.str();
}

}  // namespace popmatch
