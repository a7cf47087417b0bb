#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "gcl/surface.hpp"
#include "gcl/tiling.hpp"

using namespace gcl;

namespace {

SurfaceSpec symmetric_spec() {
    SurfaceSpec s = SurfaceSpec::default_genus2();
    s.lengths = {2.0, 2.0, 2.0};
    s.twists = {0.0, 0.0, 0.0};
    return s;
}

void check_decomposition(const SurfaceSpec& spec) {
    const Holonomy hol = build_holonomy(spec);
    CHECK(hol.relator_defect < 1e-8);
    CHECK(hol.curve_trace_error < 1e-8);
    const HexagonDecomposition dec = build_hexagon_decomposition(spec, hol);
    CHECK(dec.num_hexagons() == 4 * spec.genus - 4);
    CHECK(dec.num_labels() == 24 * spec.genus - 24);
    for (int s = 0; s < dec.num_labels(); ++s) {
        const HexSide& side = dec.sides[s];
        CHECK(side.partner != s);
        CHECK(dec.partner(side.partner) == s);
        CHECK((side.kind == SideKind::CuffArc) == (s % 2 == 0));
        CHECK(dec.sides[side.partner].kind == side.kind);
        // gluing matches endpoints with reversed orientation
        const HexSide& other = dec.sides[side.partner];
        CHECK(std::abs(side.pairing.apply(other.start) - side.end) < 1e-9);
        CHECK(std::abs(side.pairing.apply(other.end) - side.start) < 1e-9);
    }
}

}  // namespace

TEST_CASE("symmetric genus 2 holonomy traces") {
    const SurfaceSpec spec = symmetric_spec();
    const Holonomy hol = build_holonomy(spec);
    for (const Isometry& c : hol.curve_elements) CHECK(c.trace() == doctest::Approx(2.0 * std::cosh(1.0)).epsilon(1e-10));
    CHECK(std::abs(hol.curve_elements[0].trace() - 3.08616) < 1e-5);
    CHECK(hol.relator_defect < 1e-8);
    CHECK(hol.generators.size() == 9u);
    for (const Isometry& g : hol.generators) CHECK(is_hyperbolic(g));
}

TEST_CASE("default surface decomposition") {
    const SurfaceSpec spec = SurfaceSpec::default_genus2();
    check_decomposition(spec);
    const Holonomy hol = build_holonomy(spec);
    const HexagonDecomposition dec = build_hexagon_decomposition(spec, hol);
    std::set<std::pair<int, int>> seams;
    for (int s = 0; s < dec.num_labels(); ++s) {
        if (dec.sides[s].kind == SideKind::Seam) seams.insert({std::min(s, dec.partner(s)), std::max(s, dec.partner(s))});
    }
    CHECK(seams.size() == 6u);
    for (int s = 0; s < dec.num_labels(); ++s) {
        if (dec.sides[s].kind == SideKind::CuffArc) {
            CHECK(dec.sides[s].length == doctest::Approx(spec.lengths[dec.sides[s].curve] / 2.0).epsilon(1e-12));
        }
    }
    for (const auto& a : dec.adjustments) {
        CHECK(std::abs(a.shift) <= 0.25 * 2.7 + 1e-12);
    }
}

TEST_CASE("vertex cycles meet four hexagons with full angle") {
    const SurfaceSpec spec = SurfaceSpec::default_genus2();
    const HexagonDecomposition dec = build_hexagon_decomposition(spec, build_holonomy(spec));
    for (int h = 0; h < dec.num_hexagons(); ++h) {
        for (int k = 0; k < 6; ++k) {
            int ch = h, ck = k, n = 0;
            double angle = 0.0;
            do {
                angle += dec.hexagons[ch].angles[ck];
                const int p = dec.partner(6 * ch + (ck + 5) % 6);
                ch = p / 6;
                ck = p % 6;
                ++n;
            } while (ch != h || ck != k);
            CHECK(n == 4);
            CHECK(angle == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-9));
        }
    }
}

TEST_CASE("twists across the range give valid decompositions") {
    for (double t : {-0.5, -0.37, -0.25, -0.1, 0.0, 0.2, 0.25, 0.26, 0.49, 0.5}) {
        SurfaceSpec spec = SurfaceSpec::default_genus2();
        spec.twists = {t, -t / 2.0, 0.3};
        check_decomposition(spec);
    }
}

TEST_CASE("genus 3 with a loop") {
    SurfaceSpec spec;
    spec.genus = 3;
    spec.pants_edges = {{0, 0}, {0, 1}, {1, 2}, {1, 3}, {2, 3}, {2, 3}};
    spec.lengths = {1.9, 2.2, 2.4, 2.1, 2.6, 2.3};
    spec.twists = {0.1, -0.2, 0.3, 0.05, -0.15, 0.4};
    check_decomposition(spec);
}

TEST_CASE("spec validation and json") {
    SurfaceSpec bad = SurfaceSpec::default_genus2();
    bad.lengths[1] = -1.0;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = SurfaceSpec::default_genus2();
    bad.pants_edges = {{0, 0}, {0, 1}, {1, 1}};
    CHECK_NOTHROW(bad.validate());
    bad.pants_edges = {{0, 0}, {0, 0}, {1, 1}};
    CHECK_THROWS_AS(bad.validate(), Error);
    SurfaceSpec tiny = SurfaceSpec::default_genus2();
    tiny.lengths[0] = 1e-8;
    try {
        build_holonomy(tiny);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DegenerateSpec);
    }
    const SurfaceSpec s = SurfaceSpec::default_genus2();
    const SurfaceSpec r = SurfaceSpec::from_json(s.to_json());
    CHECK(r.lengths == s.lengths);
    CHECK(r.twists == s.twists);
    CHECK(r.pants_edges == s.pants_edges);
    CHECK(s.to_json()["format"] == "surface-spec-v1");
    CHECK_THROWS_AS(SurfaceSpec::from_json(nlohmann::json{{"genus", 2}}), Error);
}

TEST_CASE("systole") {
    const SurfaceSpec sym = symmetric_spec();
    const Holonomy hol = build_holonomy(sym);
    CHECK(systole(sym, hol, 2.5) == doctest::Approx(2.0).epsilon(1e-8));
    CHECK_THROWS_AS(systole(sym, hol, 1.5), Error);

    const SurfaceSpec spec = SurfaceSpec::default_genus2();
    const Holonomy dh = build_holonomy(spec);
    const double sys = systole(spec, dh, 2.7);
    CHECK(sys <= 2.0 + 1e-12);
    CHECK(sys <= 2.0 * std::log(4.0 * 2 - 2.0));

    // renaming pants and swapping the two sides of a curve leave the surface unchanged
    SurfaceSpec renamed = spec;
    renamed.pants_edges = {{1, 0}, {1, 0}, {1, 0}};
    CHECK(systole(renamed, build_holonomy(renamed), 2.7) == doctest::Approx(sys).epsilon(1e-9));
    SurfaceSpec rotated = spec;
    rotated.lengths = {2.3, 2.7, 2.0};
    rotated.twists = {-0.23, 0.05, 0.11};
    CHECK(systole(rotated, build_holonomy(rotated), 2.7) == doctest::Approx(sys).epsilon(1e-9));
}

TEST_CASE("constants ledger") {
    const ConstantsLedger c = constants_ledger(2, 2.0);
    CHECK(c.bg_bound == 385.0);
    CHECK(c.I_bound == 1.0);
    CHECK(c.cX_bound == doctest::Approx(552.0));
    CHECK(c.bX_bound == doctest::Approx(std::numbers::e * 552.0));
    CHECK(c.bX_closed_form == doctest::Approx(1493.5));
    CHECK(c.closed_form_smaller);
}

TEST_CASE("point location finds the tile containing a point") {
    const SurfaceSpec spec = SurfaceSpec::default_genus2();
    const HexagonDecomposition dec = build_hexagon_decomposition(spec, build_holonomy(spec));
    const TileBall ball(dec, 0, 5.0);
    int checked = 0, skipped = 0;
    for (const Tile& t : ball.tiles()) {
        if (t.dist > 5.0) continue;
        const auto loc = locate(dec, 0, t.center);
        if (!loc) {
            ++skipped;
            continue;
        }
        CHECK(loc->hex == t.hex);
        CHECK(loc->chart.distance_pm(t.chart) < 1e-6);
        ++checked;
    }
    CHECK(checked > 100);
    CHECK(skipped * 20 < checked);
}
