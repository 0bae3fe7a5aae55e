#include "popmatch/weights.hpp"

#include <fstream>
#include <sstream>

namespace popmatch {

namespace {

BigInt pow10(int n) {
    BigInt x = 1;
    for (int i = 0; i < n; ++i) x *= 10;
    return x;
}

std::vector<std::string> tokenize(const std::string& line) {
    std::string body = line.substr(0, line.find('#'));
    std::istringstream ss(body);
    std::vector<std::string> toks;
    std::string t;
    while (ss >> t) toks.push_back(t);
    return toks;
}

}  // namespace

std::pair<BigInt, int> parse_decimal(const std::string& tok) {
    size_t i = 0;
    bool neg = false;
    if (i < tok.size() && (tok[i] == '+' || tok[i] == '-')) neg = tok[i++] == '-';
    std::string digits;
    int frac = -1;  // -1 = no point seen yet
    for (; i < tok.size(); ++i) {
        char c = tok[i];
        if (c == '.') {
            if (frac >= 0) throw ParseError("malformed decimal '" + tok + "'");
            frac = 0;
        } else if (c >= '0' && c <= '9') {
            digits += c;
            if (frac >= 0) ++frac;
        } else {
            throw ParseError("malformed decimal '" + tok + "'");
        }
    }
    if (digits.empty()) throw ParseError("malformed decimal '" + tok + "'");
    BigInt v(digits);
    if (neg) v = -v;
    return {v, frac < 0 ? 0 : frac};
}

std::string WeightValue::str() const {
    BigInt abs = scaled < 0 ? BigInt(-scaled) : scaled;
    BigInt p = pow10(scale);
    BigInt ip = abs / p, fp = abs % p;
    std::string out = (scaled < 0 && abs != 0) ? "-" : "";
    out += ip.str();
    if (fp != 0) {
        std::string f = fp.str();
        f.insert(f.begin(), scale - f.size(), '0');
        while (!f.empty() && f.back() == '0') f.pop_back();
        out += "." + f;
    }
    return out;
}

int WeightValue::compare(const WeightValue& x, const WeightValue& y) {
    // Bring both to the common (max) scale.
    int s = std::max(x.scale, y.scale);
    BigInt xs = x.scaled * pow10(s - x.scale);
    BigInt ys = y.scaled * pow10(s - y.scale);
    return xs < ys ? -1 : xs > ys ? 1 : 0;
}

namespace {

// Shared scaffolding: reads "<key tokens> <decimal>" lines, returns raw
// (key, value, fraction digits) triples plus the map-wide scale.
struct RawEntry {
    std::vector<std::string> keys;
    BigInt digits;
    int frac;
    int line;
};

std::pair<std::vector<RawEntry>, int> read_entries(std::istream& in, size_t key_tokens) {
    std::vector<RawEntry> entries;
    int scale = 0, lineno = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++lineno;
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        if (toks.size() != key_tokens + 1)
            throw ParseError("expected " + std::to_string(key_tokens) +
                                 " name token(s) and one weight",
                             lineno);
        RawEntry e;
        e.keys.assign(toks.begin(), toks.end() - 1);
        try {
            std::tie(e.digits, e.frac) = parse_decimal(toks.back());
        } catch (const ParseError& pe) {
            throw ParseError(pe.what(), lineno);
        }
        e.line = lineno;
        scale = std::max(scale, e.frac);
        entries.push_back(std::move(e));
    }
    return {entries, scale};
}

}  // namespace

WeightMap WeightMap::parse(const PreferenceSystem& ps, std::istream& in) {
    auto [entries, scale] = read_entries(in, 2);
    WeightMap wm;
    wm.scale_ = scale;
    wm.scaled_.assign(ps.edge_count(), 0);
    std::vector<char> seen(ps.edge_count(), 0);
    for (const auto& e : entries) {
        auto u = ps.try_id(e.keys[0]), v = ps.try_id(e.keys[1]);
        if (!u) throw ParseError("unknown vertex '" + e.keys[0] + "'", e.line);
        if (!v) throw ParseError("unknown vertex '" + e.keys[1] + "'", e.line);
        int idx = ps.edge_index(*u, *v);
        if (idx < 0)
            throw ParseError("'" + e.keys[0] + " " + e.keys[1] + "' is not an edge", e.line);
        if (seen[idx])
            throw ParseError("duplicate weight for edge '" + e.keys[0] + " " + e.keys[1] + "'",
                             e.line);
        seen[idx] = 1;
        wm.scaled_[idx] = e.digits * pow10(scale - e.frac);
    }
    for (int i = 0; i < ps.edge_count(); ++i)
        if (!seen[i])
            throw ParseError("missing weight for edge '" + ps.name(ps.edges()[i].first) + " " +
                             ps.name(ps.edges()[i].second) + "'");
    return wm;
}

WeightMap WeightMap::parse_file(const PreferenceSystem& ps, const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open '" + path + "'");
    return parse(ps, f);
}

WeightMap WeightMap::uniform(const PreferenceSystem& ps, long long v) {
    WeightMap wm;
    wm.scale_ = 0;
    wm.scaled_.assign(ps.edge_count(), BigInt(v));
    return wm;
}

WeightMap WeightMap::from_integers(const PreferenceSystem& ps,
                                   const std::vector<long long>& ints) {
    if (static_cast<int>(ints.size()) != ps.edge_count())
        throw ValidationError("weight vector size does not match edge count");
    WeightMap wm;
    wm.scale_ = 0;
    for (long long v : ints) wm.scaled_.emplace_back(v);
    return wm;
}

WeightMap WeightMap::from_scaled(const PreferenceSystem& ps, std::vector<BigInt> scaled,
                                 int scale) {
    if (static_cast<int>(scaled.size()) != ps.edge_count())
        throw ValidationError("weight vector size does not match edge count");
    WeightMap wm;
    wm.scale_ = scale;
    wm.scaled_ = std::move(scaled);
    return wm;
}

bool WeightMap::all_nonnegative() const {
    for (const BigInt& w : scaled_)
        if (w < 0) return false;
    return true;
}

WeightValue WeightMap::matching_weight(const PreferenceSystem& ps, const Matching& m) const {
    BigInt total = 0;
    for (auto [a, b] : m.edge_list(ps.a_count())) total += scaled_[ps.edge_index(a, b)];
    return {total, scale_};
}

NodeWeightMap NodeWeightMap::parse(const PreferenceSystem& ps, std::istream& in) {
    auto [entries, scale] = read_entries(in, 1);
    NodeWeightMap nm;
    nm.scale_ = scale;
    nm.scaled_.assign(ps.vertex_count(), 0);
    std::vector<char> seen(ps.vertex_count(), 0);
    for (const auto& e : entries) {
        auto v = ps.try_id(e.keys[0]);
        if (!v) throw ParseError("unknown vertex '" + e.keys[0] + "'", e.line);
        if (seen[*v]) throw ParseError("duplicate weight for vertex '" + e.keys[0] + "'", e.line);
        seen[*v] = 1;
        nm.scaled_[*v] = e.digits * pow10(scale - e.frac);
    }
    for (int v = 0; v < ps.vertex_count(); ++v)
        if (!seen[v]) throw ParseError("missing weight for vertex '" + ps.name(v) + "'");
    return nm;
}

NodeWeightMap NodeWeightMap::parse_file(const PreferenceSystem& ps, const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open '" + path + "'");
    return parse(ps, f);
}

WeightValue NodeWeightMap::covered_weight(const PreferenceSystem& ps, const Matching& m) const {
    BigInt total = 0;
    for (int v = 0; v < ps.vertex_count(); ++v)
        if (m.covers(v)) total += scaled_[v];
    return {total, scale_};
}

}  // namespace popmatch
