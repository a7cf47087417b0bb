#include "gcl/modifier.hpp"

#include <algorithm>
#include <cmath>

namespace gcl {

namespace {

Complex side_point(const HexagonDecomposition& dec, int s, double param) {
    return dec.sides[s].frame.apply(Complex(0.0, std::exp(param)));
}

}  // namespace

Relative proper_compare(const HexagonDecomposition& dec, const SymbolicWord& w, int p, int q) {
    if (p == q) return Relative::Stacked;
    const ItineraryCursor a(w, p), b(w, q);
    for (int t = 0; t < w.size(); ++t) {
        const int la = a.letter(t + 1), lb = b.letter(t + 1);
        if (la == lb) continue;
        // Diverging in the hexagon of letter t: compare exits counted
        // counter-clockwise from the entry side; nearer is further right.
        const int entry = a.letter(t) % 6;
        const int da = (dec.partner(la) % 6 - entry + 6) % 6;
        const int db = (dec.partner(lb) % 6 - entry + 6) % 6;
        return da < db ? Relative::RightOf : Relative::LeftOf;
    }
    return Relative::Stacked;
}

std::vector<int> proper_order(const HexagonDecomposition& dec, const SymbolicWord& w, int side) {
    std::vector<int> pts;
    for (int t = 0; t < w.size(); ++t) {
        if (w.letters[t] == side) pts.push_back(t);
    }
    auto before = [&](int p, int q) {
        const Relative r = proper_compare(dec, w, p, q);
        return r == Relative::LeftOf || (r == Relative::Stacked && p < q);
    };
    // Insertion sort needs no ordering axioms, so the audit below sees the
    // raw relation.
    std::vector<int> out;
    for (int p : pts) {
        auto it = out.begin();
        while (it != out.end() && before(*it, p)) ++it;
        out.insert(it, p);
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        for (std::size_t j = i + 1; j < out.size(); ++j) {
            if (proper_compare(dec, w, out[i], out[j]) == Relative::RightOf) {
                throw Error(ErrorKind::TransitivityViolation,
                            "proper ordering is not transitive on " + HexagonDecomposition::label(side));
            }
        }
    }
    return out;
}

double forward_key(const HexagonDecomposition& dec, const SymbolicWord& w, int p) {
    const ProjPoint f = forward_endpoint(ItineraryCursor(w, p));
    const ProjPoint x = dec.sides[w.letters[p]].frame.inverse().apply(f);
    return -x.p / x.q;
}

ModifiedCurve build_phi(const HexagonDecomposition& dec, const SymbolicWord& w, const PhiOptions& opts) {
    const int ns = static_cast<int>(dec.sides.size());
    const int n = w.size();
    ModifiedCurve mc;
    mc.base = w;
    EdgePointSystem& ps = mc.points;
    ps.outgoing.resize(ns);
    ps.param.assign(n, 0.0);
    for (int s = 0; s < ns; ++s) {
        if (opts.proper_ordering) {
            ps.outgoing[s] = proper_order(dec, w, s);
        } else {
            for (int t = 0; t < n; ++t) {
                if (w.letters[t] == s) ps.outgoing[s].push_back(t);
            }
        }
    }
    for (int s = 0; s < ns; ++s) {
        for (std::size_t i = 0; i + 1 < ps.outgoing[s].size(); ++i) {
            if (proper_compare(dec, w, ps.outgoing[s][i], ps.outgoing[s][i + 1]) == Relative::Stacked) ++ps.stacked;
        }
    }

    // One physical edge carries the outgoing points of both of its sides:
    // those of the smaller side first, then the others, reversed.
    for (int s = 0; s < ns; ++s) {
        const int s2 = dec.partner(s);
        if (s2 < s) continue;
        const auto& a = ps.outgoing[s];
        const auto& b = ps.outgoing[s2];
        const int total = static_cast<int>(a.size() + b.size());
        const double len = dec.sides[s].length;
        auto slot = [&](int j) { return len * (0.1 + 0.8 * (j + 0.5) / total); };
        for (std::size_t r = 0; r < a.size(); ++r) ps.param[a[r]] = slot(static_cast<int>(r));
        if (s2 == s) continue;
        for (std::size_t r = 0; r < b.size(); ++r) ps.param[b[r]] = len - slot(total - 1 - static_cast<int>(r));
    }

    mc.arcs.resize(n);
    for (int t = 0; t < n; ++t) {
        const int s = w.letters[t];
        const int next = w.letters[(t + 1) % n];
        const int exit = dec.partner(next);
        Chord& c = mc.arcs[t];
        c.hex = s / 6;
        c.in_side = s % 6;
        c.out_side = exit % 6;
        c.in_param = ps.param[t];
        c.out_param = dec.sides[exit].length - ps.param[(t + 1) % n];
        c.in_point = side_point(dec, s, c.in_param);
        c.out_point = side_point(dec, exit, c.out_param);
    }
    mc.crossings = count_from(classify_crossings(dec, mc.arcs));
    mc.crossings.multiplicity_adjusted = ps.stacked > 0;
    return mc;
}

nlohmann::json ModifiedCurve::to_json() const {
    nlohmann::json edges = nlohmann::json::object();
    for (std::size_t s = 0; s < points.outgoing.size(); ++s) {
        if (points.outgoing[s].empty()) continue;
        nlohmann::json v = nlohmann::json::array();
        for (int t : points.outgoing[s]) v.push_back({{"index", t}, {"param", points.param[t]}});
        edges[HexagonDecomposition::label(static_cast<int>(s))] = v;
    }
    return {{"word", base.to_json()["word"]}, {"edges", edges}, {"crossings", crossings.to_json()}};
}

EdgeWords extract_edge_words(const HexagonDecomposition& dec, const ModifiedCurve& mc) {
    const int ns = static_cast<int>(dec.sides.size());
    const SymbolicWord& w = mc.base;
    const int n = w.size();
    EdgeWords ew;
    ew.outgoing.resize(ns);
    ew.incoming.resize(ns);
    for (int s = 0; s < ns; ++s) {
        for (int t : mc.points.outgoing[s]) ew.outgoing[s].push_back(dec.partner(w.letters[(t + 1) % n]));
    }
    // Incoming points on s are the outgoing points of its partner side, in
    // the partner's order.
    for (int s = 0; s < ns; ++s) {
        for (int t : mc.points.outgoing[dec.partner(s)]) ew.incoming[s].push_back(w.letters[(t + n - 1) % n]);
    }
    return ew;
}

nlohmann::json EdgeWords::to_json() const {
    auto words = [](const std::vector<std::vector<int>>& v) {
        nlohmann::json j = nlohmann::json::object();
        for (std::size_t s = 0; s < v.size(); ++s) {
            nlohmann::json letters = nlohmann::json::array();
            for (int l : v[s]) letters.push_back(HexagonDecomposition::label(l));
            j[HexagonDecomposition::label(static_cast<int>(s))] = letters;
        }
        return j;
    };
    return {{"outgoing", words(outgoing)}, {"incoming", words(incoming)}};
}

SymbolicWord reconstruct_word(const HexagonDecomposition& dec, const EdgeWords& words) {
    const int ns = static_cast<int>(dec.sides.size());
    if (static_cast<int>(words.outgoing.size()) != ns || static_cast<int>(words.incoming.size()) != ns) {
        throw Error(ErrorKind::InconsistentWords, "expected one outgoing and one incoming word per side");
    }
    for (int s = 0; s < ns; ++s) {
        if (words.incoming[s].size() != words.outgoing[dec.partner(s)].size()) {
            throw Error(ErrorKind::InconsistentWords,
                        "incoming count on " + HexagonDecomposition::label(s) + " differs from its partner");
        }
        for (int l : words.outgoing[s]) {
            if (l < 0 || l >= ns || l / 6 != s / 6 || l == s) {
                throw Error(ErrorKind::InconsistentWords, "outgoing letter outside the hexagon");
            }
        }
        for (int l : words.incoming[s]) {
            if (l < 0 || l >= ns || l / 6 != s / 6 || l == s) {
                throw Error(ErrorKind::InconsistentWords, "incoming letter outside the hexagon");
            }
        }
    }

    // next[s][i]: the outgoing point (side, index) reached from the i-th
    // outgoing point on s.
    std::vector<std::vector<std::pair<int, int>>> next(ns);
    for (int e = 0; e < ns; ++e) {
        next[e].assign(words.outgoing[e].size(), {-1, -1});
        for (int k = 0; k < 6; ++k) {
            const int e2 = 6 * (e / 6) + k;
            if (e2 == e) continue;
            std::vector<int> from, to;
            for (std::size_t i = 0; i < words.outgoing[e].size(); ++i) {
                if (words.outgoing[e][i] == e2) from.push_back(static_cast<int>(i));
            }
            for (std::size_t i = 0; i < words.incoming[e2].size(); ++i) {
                if (words.incoming[e2][i] == e) to.push_back(static_cast<int>(i));
            }
            if (from.size() != to.size()) {
                throw Error(ErrorKind::InconsistentWords, "arc counts from " + HexagonDecomposition::label(e) +
                                                              " to " + HexagonDecomposition::label(e2) + " disagree");
            }
            for (std::size_t i = 0; i < from.size(); ++i) next[e][from[i]] = {dec.partner(e2), to[i]};
        }
    }

    int total = 0;
    int start = -1;
    for (int s = 0; s < ns; ++s) {
        total += static_cast<int>(words.outgoing[s].size());
        if (start < 0 && !words.outgoing[s].empty()) start = s;
    }
    SymbolicWord w;
    if (start < 0) throw Error(ErrorKind::InconsistentWords, "no arcs");
    std::pair<int, int> cur{start, 0};
    do {
        w.letters.push_back(cur.first);
        if (static_cast<int>(w.letters.size()) > total) break;
        cur = next[cur.first][cur.second];
    } while (cur != std::pair<int, int>{start, 0});
    if (static_cast<int>(w.letters.size()) != total) {
        throw Error(ErrorKind::InconsistentWords, "edge words describe more than one closed curve");
    }
    return w;
}

}  // namespace gcl
