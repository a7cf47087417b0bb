#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "gcl/census.hpp"
#include "gcl/coder.hpp"

using namespace gcl;

namespace {

struct Fixture {
    SurfaceSpec spec = SurfaceSpec::default_genus2();
    Holonomy hol = build_holonomy(spec);
    HexagonDecomposition dec = build_hexagon_decomposition(spec, hol);
};

const Fixture& fixture() {
    static const Fixture f;
    return f;
}

// Group elements reachable by generator words whose basepoint image stays
// within `radius`.
std::vector<Isometry> word_ball(const Holonomy& hol, Complex o, double radius) {
    std::vector<Isometry> gens;
    for (const Isometry& g : hol.generators) {
        gens.push_back(g);
        gens.push_back(g.inverse());
    }
    std::vector<Isometry> out{Isometry{}};
    std::vector<Complex> imgs{o};
    std::map<std::pair<long long, long long>, std::vector<int>> grid;
    auto key = [](Complex z) {
        const Complex w = to_disk(z);
        return std::make_pair(static_cast<long long>(std::floor(w.real() * 1e9)),
                              static_cast<long long>(std::floor(w.imag() * 1e9)));
    };
    auto known = [&](Complex z) {
        const auto k = key(z);
        for (long long dx = -1; dx <= 1; ++dx) {
            for (long long dy = -1; dy <= 1; ++dy) {
                auto it = grid.find({k.first + dx, k.second + dy});
                if (it == grid.end()) continue;
                for (int i : it->second) {
                    if (distance(imgs[i], z) < 1e-6) return true;
                }
            }
        }
        return false;
    };
    grid[key(o)].push_back(0);
    for (std::size_t head = 0; head < out.size(); ++head) {
        for (const Isometry& s : gens) {
            const Isometry w = out[head] * s;
            const Complex z = w.apply(o);
            if (distance(o, z) > radius || known(z)) continue;
            out.push_back(w);
            imgs.push_back(z);
            grid[key(z)].push_back(static_cast<int>(out.size()) - 1);
        }
    }
    return out;
}

bool axis_meets(const Isometry& g, const std::vector<Complex>& poly) {
    const GeodesicLine ax = axis(g);
    const Isometry n = normalizer(ax.from, ax.to);
    double lo = 1.0, hi = -1.0;
    for (Complex v : poly) {
        const Complex w = n.apply(v);
        lo = std::min(lo, w.real() / std::abs(w));
        hi = std::max(hi, w.real() / std::abs(w));
    }
    return lo <= 0.0 && hi >= 0.0;
}

// Counts unoriented conjugacy classes with length <= T using only the
// generator matrices: classes are merged by an explicit conjugator search.
std::vector<double> brute_force_lengths(const Fixture& f, double T) {
    std::vector<std::vector<Complex>> tiles;
    std::vector<Complex> all_vertices;
    for (int h = 0; h < f.dec.num_hexagons(); ++h) {
        std::vector<Complex> poly;
        for (Complex v : f.dec.hexagons[h].vertices) poly.push_back(f.dec.placement[h].apply(v));
        all_vertices.insert(all_vertices.end(), poly.begin(), poly.end());
        tiles.push_back(poly);
    }
    const Complex o = centroid(all_vertices);
    double r_dom = 0.0;
    for (Complex v : all_vertices) r_dom = std::max(r_dom, distance(o, v));
    const double radius = T + 2.0 * r_dom;
    const std::vector<Isometry> ball = word_ball(f.hol, o, radius + r_dom);
    std::vector<Isometry> conj;
    for (const Isometry& h : ball) {
        if (distance(o, h.apply(o)) <= 2.0 * r_dom + T / 2.0 + 1e-6) conj.push_back(h);
    }
    std::vector<Isometry> cands;
    for (const Isometry& g : ball) {
        if (g.near_identity(1e-6) || distance(o, g.apply(o)) > radius) continue;
        if (translation_length(g) > T + 1e-9) continue;
        bool meets = false;
        for (const auto& poly : tiles) meets = meets || axis_meets(g, poly);
        if (meets) cands.push_back(g);
    }
    std::vector<int> root(cands.size());
    std::iota(root.begin(), root.end(), 0);
    auto find = [&](int x) {
        while (root[x] != x) x = root[x] = root[root[x]];
        return x;
    };
    for (std::size_t i = 0; i < cands.size(); ++i) {
        for (const Isometry& h : conj) {
            const Isometry c = h * cands[i] * h.inverse();
            const Isometry ci = c.inverse();
            for (std::size_t j = i + 1; j < cands.size(); ++j) {
                if (std::abs(cands[j].trace() - c.trace()) > 1e-6) continue;
                const double scale = 1.0 + std::abs(c.a()) + std::abs(c.b()) + std::abs(c.c()) + std::abs(c.d());
                if (cands[j].distance_pm(c) < 1e-8 * scale || cands[j].distance_pm(ci) < 1e-8 * scale) {
                    root[find(static_cast<int>(j))] = find(static_cast<int>(i));
                }
            }
        }
    }
    std::vector<double> lengths;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        if (find(static_cast<int>(i)) == static_cast<int>(i)) lengths.push_back(translation_length(cands[i]));
    }
    std::sort(lengths.begin(), lengths.end());
    return lengths;
}

std::vector<double> census_lengths(const std::vector<ClosedGeodesic>& c) {
    std::vector<double> out;
    for (const auto& g : c) out.push_back(g.length);
    std::sort(out.begin(), out.end());
    return out;
}

void check_same_lengths(const std::vector<double>& a, const std::vector<double>& b, double tol) {
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < tol);
}

std::vector<double> spectrum(SurfaceSpec spec, double T) {
    const Holonomy hol = build_holonomy(spec);
    const HexagonDecomposition dec = build_hexagon_decomposition(spec, hol);
    CensusOptions o;
    o.primitive_only = false;
    return census_lengths(enumerate_geodesics(dec, T, o));
}

}  // namespace

TEST_CASE("pants curves appear with their lengths") {
    const auto& f = fixture();
    const auto census = enumerate_geodesics(f.dec, 3.0);
    for (double l : f.spec.lengths) {
        const bool found = std::any_of(census.begin(), census.end(),
                                       [&](const ClosedGeodesic& g) { return std::abs(g.length - l) < 1e-9; });
        CHECK(found);
    }
}

TEST_CASE("census matches the brute-force conjugacy oracle at T = 4") {
    const auto& f = fixture();
    CensusOptions o;
    o.primitive_only = false;
    const auto census = enumerate_geodesics(f.dec, 4.0, o);
    check_same_lengths(census_lengths(census), brute_force_lengths(f, 4.0), 1e-9);
}

TEST_CASE("census invariants") {
    const auto& f = fixture();
    CensusOptions all;
    all.primitive_only = false;
    const auto small = enumerate_geodesics(f.dec, 4.0, all);
    const auto big = enumerate_geodesics(f.dec, 5.5, all);
    const double sys = systole(f.spec, f.hol, 2.7);
    std::map<std::vector<int>, double> big_words;
    for (const auto& g : big) {
        big_words[g.word] = g.length;
        CHECK(g.length >= sys - 1e-9);
        CHECK(g.length == doctest::Approx(translation_length(g.matrix)).epsilon(1e-12));
    }
    CHECK(big_words.size() == big.size());
    for (const auto& g : small) CHECK(big_words.count(g.word) == 1);
    // powers of primitive classes are present
    for (const auto& g : big) {
        if (!g.primitive) continue;
        for (int k = 2; k * g.length <= 5.5; ++k) {
            std::vector<int> w;
            for (int r = 0; r < k; ++r) w.insert(w.end(), g.word.begin(), g.word.end());
            REQUIRE(big_words.count(w) == 1);
            CHECK(big_words[w] == doctest::Approx(k * g.length).epsilon(1e-9));
        }
    }
    // primitive-only output drops exactly the powers
    const auto prim = enumerate_geodesics(f.dec, 5.5);
    CHECK(std::all_of(prim.begin(), prim.end(), [](const ClosedGeodesic& g) { return g.primitive; }));
    CHECK(prim.size() == static_cast<std::size_t>(std::count_if(big.begin(), big.end(), [](const auto& g) { return g.primitive; })));
    // sorted by (length, word)
    for (std::size_t i = 1; i < big.size(); ++i) CHECK(big[i - 1].length <= big[i].length + 1e-9);
}

TEST_CASE("census is deterministic across thread counts") {
    const auto& f = fixture();
    CensusOptions one, four;
    four.threads = 4;
    const auto a = enumerate_geodesics(f.dec, 5.0, one);
    const auto b = enumerate_geodesics(f.dec, 5.0, four);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].word == b[i].word);
        CHECK(a[i].length == b[i].length);
    }
}

TEST_CASE("signature is a conjugacy and inversion invariant") {
    const auto& f = fixture();
    const auto census = enumerate_geodesics(f.dec, 5.0);
    std::mt19937_64 rng(0xC0FFEE);
    std::vector<Isometry> gens;
    for (const Isometry& g : f.hol.generators) {
        gens.push_back(g);
        gens.push_back(g.inverse());
    }
    std::uniform_int_distribution<int> pick(0, static_cast<int>(gens.size()) - 1);
    for (int n = 0; n < 100; ++n) {
        const ClosedGeodesic& c = census[n % census.size()];
        Isometry u;
        for (int k = 0; k < 3; ++k) u = u * gens[pick(rng)];
        const Isometry conj = u * c.matrix * u.inverse();
        CHECK(class_signature(f.dec, conj) == c.word);
        CHECK(class_signature(f.dec, conj.inverse()) == c.word);
    }
}

TEST_CASE("dedup_signature on walks") {
    const auto& f = fixture();
    const auto census = enumerate_geodesics(f.dec, 5.0);
    std::mt19937_64 rng(0xC0FFEE);
    int tested = 0;
    for (const auto& c : census) {
        SymbolicWord w;
        try {
            w = code_word(c.matrix, f.dec);
        } catch (const Error&) {
            continue;
        }
        const auto sig = dedup_signature(f.dec, w.letters);
        CHECK(sig == c.word);
        CHECK(dedup_signature(f.dec, inverse_word(f.dec, w.letters)) == sig);
        for (int n = 0; n < 5; ++n) {
            // conjugate by a random detour: leave through a side, wander, come back
            std::uniform_int_distribution<int> rot(0, w.size() - 1);
            std::vector<int> base = w.letters;
            std::rotate(base.begin(), base.begin() + rot(rng), base.end());
            const int h0 = base[0] / 6;
            std::vector<int> detour;
            int cur = h0;
            std::uniform_int_distribution<int> side(0, 5);
            for (int k = 0; k < 4; ++k) {
                const int s = 6 * cur + side(rng);
                detour.push_back(f.dec.partner(s));
                cur = f.dec.partner(s) / 6;
            }
            // after entering h0 take the detour and retrace it
            const std::vector<int> back = inverse_word(f.dec, detour);
            std::vector<int> conj{base[0]};
            conj.insert(conj.end(), detour.begin(), detour.end());
            conj.insert(conj.end(), back.begin(), back.end());
            conj.insert(conj.end(), base.begin() + 1, base.end());
            CHECK(is_valid_walk(f.dec, conj));
            CHECK(dedup_signature(f.dec, conj) == sig);
            ++tested;
        }
    }
    CHECK(tested >= 100);
}

TEST_CASE("twist bookkeeping keeps the length spectrum continuous and periodic") {
    SurfaceSpec spec = SurfaceSpec::default_genus2();
    spec.twists = {0.25 - 1e-9, -0.23, 0.05};
    const auto below = spectrum(spec, 4.5);
    spec.twists[0] = 0.25 + 1e-9;
    const auto above = spectrum(spec, 4.5);
    check_same_lengths(below, above, 1e-6);

    spec.twists = {0.5, -0.23, 0.05};
    const auto plus = spectrum(spec, 4.5);
    spec.twists[0] = -0.5;
    const auto minus = spectrum(spec, 4.5);
    check_same_lengths(plus, minus, 1e-8);

    spec.twists = {1e-9, -0.23, 0.05};
    const auto pos = spectrum(spec, 4.5);
    spec.twists[0] = -1e-9;
    check_same_lengths(pos, spectrum(spec, 4.5), 1e-6);
}
