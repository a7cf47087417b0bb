#include "gcl/census.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "gcl/coder.hpp"
#include "gcl/parallel.hpp"

namespace gcl {

namespace {

struct Candidate {
    Isometry g;
    double length;
};

bool axis_meets_tile(const Isometry& g, const Isometry& chart, const Hexagon& hex) {
    const GeodesicLine ax = axis(g);
    const Isometry n = normalizer(ax.from, ax.to) * chart;
    double lo = 1.0, hi = -1.0;
    for (const Complex& v : hex.vertices) {
        const Complex w = n.apply(v);
        const double x = w.real() / std::abs(w);
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    return lo <= 1e-9 && hi >= -1e-9;
}

}  // namespace

std::string word_to_string(const std::vector<int>& w) {
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) s += ' ';
        s += HexagonDecomposition::label(w[i]);
    }
    return s;
}

std::string ClosedGeodesic::word_string() const { return word_to_string(word); }

std::vector<int> dedup_signature(const HexagonDecomposition& dec, const std::vector<int>& word) {
    const std::vector<int> r = cyclic_reduce(dec, word);
    const std::vector<int> a = canonical_rotation(r);
    const std::vector<int> b = canonical_rotation(inverse_word(dec, r));
    return std::min(a, b);
}

std::vector<int> class_signature(const HexagonDecomposition& dec, const Isometry& g) {
    const std::vector<int> a = canonical_rotation(hypercycle_letters(dec, g));
    const std::vector<int> b = canonical_rotation(hypercycle_letters(dec, g.inverse()));
    return std::min(a, b);
}

std::vector<ClosedGeodesic> enumerate_geodesics(const HexagonDecomposition& dec, double max_length,
                                                const CensusOptions& opts) {
    if (!(max_length > 0.0)) throw Error(ErrorKind::InvalidSpec, "max length must be positive");
    const int nh = dec.num_hexagons();

    std::vector<std::vector<Candidate>> per_hex(nh);
    parallel_for(nh, opts.threads, [&](int h) {
        const double reach = max_length + 2.0 * dec.hexagons[h].radius;
        const TileBall ball(dec, h, reach, opts.budget);
        for (const Isometry& g : ball.deck_elements(reach)) {
            if (g.near_identity(1e-6)) continue;
            const double l = translation_length(g);
            if (l > max_length + 1e-9) continue;
            if (!axis_meets_tile(g, dec.placement[h], dec.hexagons[h])) continue;
            per_hex[h].push_back({g, l});
        }
    });

    std::vector<Candidate> all;
    for (const auto& v : per_hex) all.insert(all.end(), v.begin(), v.end());
    std::vector<std::vector<int>> keys(all.size());
    parallel_for(static_cast<int>(all.size()), opts.threads,
                 [&](int i) { keys[i] = class_signature(dec, all[i].g); });

    std::map<std::vector<int>, std::size_t> seen;
    std::vector<ClosedGeodesic> out;
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (seen.count(keys[i])) continue;
        const int period = primitive_period(keys[i]);
        const int power = static_cast<int>(keys[i].size()) / period;
        seen[keys[i]] = i;
        if (opts.primitive_only && power > 1) continue;
        ClosedGeodesic c;
        c.word = keys[i];
        c.matrix = all[i].g;
        c.length = all[i].length;
        c.power = power;
        c.primitive = power == 1;
        out.push_back(std::move(c));
    }
    std::sort(out.begin(), out.end(), [](const ClosedGeodesic& a, const ClosedGeodesic& b) {
        const long long la = std::llround(a.length * 1e9), lb = std::llround(b.length * 1e9);
        if (la != lb) return la < lb;
        return a.word < b.word;
    });
    return out;
}

}  // namespace gcl
