#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

#include "gcl/census.hpp"
#include "gcl/coder.hpp"
#include "gcl/tiling.hpp"

using namespace gcl;

namespace {

struct Fixture {
    SurfaceSpec spec = SurfaceSpec::default_genus2();
    Holonomy hol = build_holonomy(spec);
    HexagonDecomposition dec = build_hexagon_decomposition(spec, hol);
    std::vector<ClosedGeodesic> census = enumerate_geodesics(dec, 5.0);
};

const Fixture& fixture() {
    static const Fixture f;
    return f;
}

// Census members that are not pants curves, with their codings.
std::vector<std::pair<const ClosedGeodesic*, SymbolicWord>> coded() {
    const Fixture& f = fixture();
    std::vector<std::pair<const ClosedGeodesic*, SymbolicWord>> out;
    for (const ClosedGeodesic& c : f.census) {
        try {
            out.emplace_back(&c, code_word(c.matrix, f.dec));
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::OnSkeleton) throw;
        }
    }
    return out;
}

std::vector<Isometry> signed_generators(const Holonomy& hol) {
    std::vector<Isometry> gens;
    for (const Isometry& g : hol.generators) {
        gens.push_back(g);
        gens.push_back(g.inverse());
    }
    return gens;
}

bool same_tile(const HexagonDecomposition& dec, const Location& a, const Location& b) {
    return a.hex == b.hex &&
           distance(a.chart.apply(dec.hexagons[a.hex].center), b.chart.apply(dec.hexagons[b.hex].center)) < 1e-6;
}

// Letter of the crossing from tile a into the adjacent tile b, if adjacent.
std::optional<int> crossing_letter(const HexagonDecomposition& dec, const Location& a, const Location& b) {
    for (int k = 0; k < 6; ++k) {
        const int e = 6 * a.hex + k;
        const int l = dec.partner(e);
        if (l / 6 != b.hex) continue;
        const Isometry c = a.chart * dec.sides[e].pairing;
        const Complex z = c.apply(dec.hexagons[b.hex].center);
        if (distance(z, b.chart.apply(dec.hexagons[b.hex].center)) < 1e-6) return l;
    }
    return std::nullopt;
}

// Slow coding: sample the axis densely, locate every sample, and bisect
// between samples in different tiles until each gap is a single crossing.
std::vector<int> sampled_letters(const HexagonDecomposition& dec, const Isometry& g) {
    const double ell = translation_length(g);
    const GeodesicLine ax = axis(g);
    const Isometry from_ray = normalizer(ax.from, ax.to).inverse();
    const Complex o = dec.placement[0].apply(dec.hexagons[0].center);
    const double s0 = std::log(std::abs(normalizer(ax.from, ax.to).apply(o))) + 0.01234;
    auto at = [&](double s) { return locate(dec, 0, from_ray.apply(Complex(0.0, std::exp(s)))); };

    std::vector<int> letters;
    auto refine = [&](auto&& self, double s1, const Location& a, double s2, const Location& b, int depth) -> void {
        if (same_tile(dec, a, b)) return;
        if (auto l = crossing_letter(dec, a, b)) {
            letters.push_back(*l);
            return;
        }
        REQUIRE(depth < 60);
        double sm = 0.5 * (s1 + s2);
        std::optional<Location> m = at(sm);
        for (int k = 1; !m && k < 8; ++k) m = at(sm + (s2 - s1) * 1e-3 * k);
        REQUIRE(m.has_value());
        self(self, s1, a, sm, *m, depth + 1);
        self(self, sm, *m, s2, b, depth + 1);
    };

    const int steps = std::max(200, static_cast<int>(ell / 0.005));
    std::optional<Location> prev = at(s0);
    REQUIRE(prev.has_value());
    double sprev = s0;
    for (int i = 1; i <= steps; ++i) {
        const double s = s0 + ell * i / steps;
        std::optional<Location> cur = at(s);
        if (!cur) continue;
        refine(refine, sprev, *prev, s, *cur, 0);
        prev = cur;
        sprev = s;
    }
    return letters;
}

}  // namespace

TEST_CASE("combinatorial length counts letters") {
    SymbolicWord w;
    w.letters = {0, 6};
    CHECK(combinatorial_length(w) == 2);
    for (const auto& [c, word] : coded()) CHECK(combinatorial_length(word) >= 1);
}

TEST_CASE("pants curves lie on the skeleton") {
    const Fixture& f = fixture();
    for (const Isometry& g : f.hol.curve_elements) {
        CHECK_THROWS_AS(code_word(g, f.dec), Error);
        try {
            code_word(g, f.dec);
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::OnSkeleton);
        }
    }
}

TEST_CASE("coded walks are valid and match the class signature") {
    const Fixture& f = fixture();
    const auto all = coded();
    CHECK(all.size() + 3 == f.census.size());
    for (const auto& [c, w] : all) {
        CHECK(is_valid_walk(f.dec, w.letters));
        CHECK(w.chords.size() == w.letters.size());
        CHECK(w.charts.size() == w.letters.size());
        CHECK(std::abs(w.length - c->length) < 1e-9);
        for (int t = 0; t < w.size(); ++t) {
            const Chord& ch = w.chords[t];
            const int next = w.letters[(t + 1) % w.size()];
            CHECK(ch.hex == w.letters[t] / 6);
            CHECK(ch.in_side == w.letters[t] % 6);
            CHECK(f.dec.partner(6 * ch.hex + ch.out_side) == next);
        }
        CHECK(dedup_signature(f.dec, w.letters) == c->word);
    }
}

TEST_CASE("combinatorial length is linearly bounded by length") {
    const Fixture& f = fixture();
    const ConstantsLedger led = constants_ledger(f.spec, f.hol);
    for (const auto& [c, w] : coded()) CHECK(combinatorial_length(w) <= led.cX_bound * c->length);
}

TEST_CASE("coding agrees with a dense sampling oracle") {
    const Fixture& f = fixture();
    int non_simple = 0;
    for (const auto& [c, w] : coded()) {
        if (c->length > 4.0 + 1e-9) continue;
        const std::vector<int> slow = sampled_letters(f.dec, w.matrix);
        CHECK(slow.size() == w.letters.size());
        CHECK(cyclically_equal(slow, w.letters));
        if (c->length > 3.5) ++non_simple;
    }
    CHECK(non_simple >= 1);
}

TEST_CASE("coding is constant on conjugacy classes") {
    const Fixture& f = fixture();
    const auto all = coded();
    const auto gens = signed_generators(f.hol);
    std::mt19937_64 rng(0xC0FFEE);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(gens.size()) - 1);
    std::uniform_int_distribution<int> len(1, 3);
    for (int n = 0; n < 200; ++n) {
        const auto& [c, w] = all[n % all.size()];
        Isometry u;
        for (int k = len(rng); k > 0; --k) u = u * gens[pick(rng)];
        const SymbolicWord v = code_word(u * c->matrix * u.inverse(), f.dec);
        CHECK(cyclically_equal(v.letters, w.letters));
    }
}

TEST_CASE("powers repeat the word") {
    const Fixture& f = fixture();
    for (const auto& [c, w] : coded()) {
        Isometry gk = c->matrix;
        for (int k = 2; k <= 3; ++k) {
            gk = gk * c->matrix;
            const SymbolicWord wk = code_word(gk, f.dec);
            CHECK(combinatorial_length(wk) == k * combinatorial_length(w));
            std::vector<int> rep;
            for (int i = 0; i < k; ++i) rep.insert(rep.end(), w.letters.begin(), w.letters.end());
            CHECK(cyclically_equal(wk.letters, rep));
        }
    }
}

TEST_CASE("reversal replaces letters by partners in reverse order") {
    const Fixture& f = fixture();
    int tested = 0;
    for (const auto& [c, w] : coded()) {
        if (w.size() > 12) continue;
        const SymbolicWord r = code_word(c->matrix.inverse(), f.dec);
        CHECK(cyclically_equal(r.letters, inverse_word(f.dec, w.letters)));
        ++tested;
    }
    CHECK(tested >= 10);
}

TEST_CASE("word holonomy recovers the class") {
    const Fixture& f = fixture();
    for (const auto& [c, w] : coded()) {
        const Isometry h = word_holonomy(f.dec, w.letters);
        CHECK(std::abs(h.trace() - c->matrix.trace()) < 1e-8 * c->matrix.trace());
        const Isometry back = w.charts[0] * f.dec.placement[w.letters[0] / 6].inverse() * h *
                              f.dec.placement[w.letters[0] / 6] * w.charts[0].inverse();
        CHECK(distance(back.apply(Complex(0.3, 1.7)), w.matrix.apply(Complex(0.3, 1.7))) < 1e-7);
    }
}

TEST_CASE("forward boundary points") {
    const Fixture& f = fixture();
    for (const auto& [c, w] : coded()) {
        for (int t = 0; t < w.size(); ++t) {
            const ItineraryCursor cur(w, t);
            CHECK(cur.letter(0) == w.letters[t]);
            CHECK(cur.letter(w.size()) == w.letters[t]);
            CHECK(cur.letter(-1) == w.letters[(t + w.size() - 1) % w.size()]);
            // The chord points toward f+ in the hexagon's model chart.
            const Chord& ch = cur.chord(0);
            const Isometry fr = frame_from_points(ch.in_point, ch.out_point);
            const double ahead = BoundaryPoint::from_proj(fr.apply(ProjPoint{1.0, 0.0})).angle;
            const double fp = forward_boundary_point(cur).angle;
            const double d = std::abs(std::remainder(ahead - fp, 2.0 * std::numbers::pi));
            CHECK(d < 1e-7);
        }
        // Same axis for the square, so f+ is unchanged at matching positions.
        const SymbolicWord w2 = code_word(c->matrix * c->matrix, f.dec);
        for (int t = 0; t < w2.size(); ++t) {
            const ItineraryCursor c2(w2, t);
            bool found = false;
            for (int s = 0; s < w.size() && !found; ++s) {
                const ItineraryCursor c1(w, s);
                if (c1.letter(0) != c2.letter(0)) continue;
                const double d = std::abs(
                    std::remainder(forward_boundary_point(c1).angle - forward_boundary_point(c2).angle,
                                   2.0 * std::numbers::pi));
                found = d < 1e-7;
            }
            CHECK(found);
        }
    }
}

TEST_CASE("cyclic word helpers") {
    CHECK(canonical_rotation({3, 1, 2, 1, 1}) == std::vector<int>{1, 1, 3, 1, 2});
    CHECK(cyclically_equal({1, 2, 3}, {3, 1, 2}));
    CHECK_FALSE(cyclically_equal({1, 2, 3}, {1, 3, 2}));
    CHECK(primitive_period({1, 2, 1, 2, 1, 2}) == 2);
    CHECK(primitive_period({1, 2, 1, 2, 1}) == 5);
    const Fixture& f = fixture();
    const int a = 0, pa = f.dec.partner(0);
    CHECK(cyclic_reduce(f.dec, {a, pa}).empty());
    CHECK(inverse_word(f.dec, inverse_word(f.dec, {1, 7, 13})) == std::vector<int>{1, 7, 13});
}
