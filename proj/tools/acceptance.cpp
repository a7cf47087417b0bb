// One PASS/FAIL line per acceptance criterion; exit status 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "gcl/bounds.hpp"
#include "gcl/census.hpp"
#include "gcl/coder.hpp"
#include "gcl/intersection.hpp"
#include "gcl/modifier.hpp"
#include "gcl/reports.hpp"

using namespace gcl;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Coded {
    const ClosedGeodesic* c = nullptr;
    bool codable = false;
    SymbolicWord w;
};

struct World {
    SurfaceSpec spec = SurfaceSpec::default_genus2();
    Holonomy hol = build_holonomy(spec);
    HexagonDecomposition dec = build_hexagon_decomposition(spec, hol);
    ConstantsLedger ledger = constants_ledger(spec, hol);
    IntersectionEngine engine{dec, ledger.sys};
    std::vector<ClosedGeodesic> census5, census6;
    std::vector<Coded> coded5;

    World() {
        CensusOptions opts;
        opts.primitive_only = false;
        census5 = enumerate_geodesics(dec, 5.0, opts);
        census6 = enumerate_geodesics(dec, 6.0, opts);
        for (const ClosedGeodesic& c : census5) {
            Coded k;
            k.c = &c;
            try {
                k.w = code_word(c.matrix, dec);
                k.codable = true;
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::OnSkeleton) throw;
            }
            coded5.push_back(std::move(k));
        }
    }
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// Pairs of chords in one hexagon whose Klein-model segments cross.
int klein_crossings(const SymbolicWord& w) {
    auto klein = [](Complex z) {
        const Complex d = to_disk(z);
        return 2.0 * d / (1.0 + std::norm(d));
    };
    auto orient = [](Complex p, Complex q, Complex r) {
        const Complex u = q - p, v = r - p;
        return u.real() * v.imag() - u.imag() * v.real();
    };
    int n = 0;
    for (std::size_t a = 0; a < w.chords.size(); ++a) {
        for (std::size_t b = a + 1; b < w.chords.size(); ++b) {
            const Chord& x = w.chords[a];
            const Chord& y = w.chords[b];
            if (x.hex != y.hex) continue;
            const Complex p = klein(x.in_point), q = klein(x.out_point);
            const Complex r = klein(y.in_point), s = klein(y.out_point);
            n += orient(p, q, r) * orient(p, q, s) < 0.0 && orient(r, s, p) * orient(r, s, q) < 0.0;
        }
    }
    return n;
}

Outcome lcom_bound(const World& w) {
    long long checked = 0, bad = 0, skipped = 0;
    double worst = 0.0;
    for (const Coded& k : w.coded5) {
        if (!k.codable) {
            ++skipped;
            continue;
        }
        const double ratio = combinatorial_length(k.w) / k.c->length;
        worst = std::max(worst, ratio);
        bad += combinatorial_length(k.w) > w.ledger.cX_bound * k.c->length;
        ++checked;
    }
    return {bad == 0 && checked > 0,
            fmt("%lld violations over %lld classes (%lld on the skeleton), max lcom/length %.3f <= %.0f", bad, checked,
                skipped, worst, w.ledger.cX_bound)};
}

Outcome phi_properties(const World& w) {
    long long checked = 0, bad = 0, fewer = 0;
    for (const Coded& k : w.coded5) {
        if (!k.codable || !k.c->primitive) continue;
        const IntersectionCount orig = count_from(classify_crossings(w.dec, k.w.chords));
        const IntersectionCount phi = build_phi(w.dec, k.w).crossings;
        const long long t2 = phi.by_type[1] + phi.by_type[2], o2 = orig.by_type[1] + orig.by_type[2];
        bad += phi.by_type[1] != 0 || phi.by_type[3] != 0 || t2 > o2;
        fewer += t2 < o2;
        ++checked;
    }
    return {bad == 0 && checked > 0, fmt("%lld violations over %lld classes, %lld with fewer type-2", bad, checked, fewer)};
}

Outcome dual_intersection(const World& w) {
    long long checked = 0, bad = 0, skeleton = 0;
    for (const Coded& k : w.coded5) {
        if (!k.c->primitive) continue;
        const long long linking = w.engine.linking_self(k.c->matrix);
        if (!k.codable) {
            bad += linking != 0;
            ++skeleton;
            continue;
        }
        const long long chords = count_from(classify_crossings(w.dec, k.w.chords)).total;
        bad += chords != linking;
        ++checked;
    }
    // Figure-eight: the shortest class with one self-intersection, checked
    // by direct segment crossings before the two main algorithms.
    const ClosedGeodesic* eight = nullptr;
    int brute = -1;
    long long chords8 = -1, linking8 = -1;
    for (const ClosedGeodesic& c : w.census6) {
        if (!c.primitive) continue;
        SymbolicWord s;
        try {
            s = code_word(c.matrix, w.dec);
        } catch (const Error&) {
            continue;
        }
        brute = klein_crossings(s);
        if (brute != 1) continue;
        eight = &c;
        chords8 = count_from(classify_crossings(w.dec, s.chords)).total;
        linking8 = w.engine.linking_self(c.matrix);
        break;
    }
    const bool eight_ok = eight && chords8 == 1 && linking8 == 1;
    return {bad == 0 && checked > 0 && eight_ok,
            fmt("%lld disagreements over %lld coded classes, %lld skeleton classes at 0; figure-eight of length %.4f: "
                "brute %d, chords %lld, linking %lld",
                bad, checked, skeleton, eight ? eight->length : 0.0, brute, chords8, linking8)};
}

Outcome interaction(const World& w) {
    long long bad = 0;
    double worst = 0.0;
    const double I = 4.0 / (w.ledger.sys * w.ledger.sys);
    for (const ClosedGeodesic& c : w.census6) {
        const long long i = w.engine.self_intersection(c).total;
        bad += static_cast<double>(i) > I * c.length * c.length;
        worst = std::max(worst, i / (c.length * c.length));
    }
    return {bad == 0, fmt("%lld violations over %zu classes up to length 6, max i/length^2 %.4f <= %.4f", bad,
                          w.census6.size(), worst, I)};
}

Outcome admissible() {
    long long checked = 0, bad = 0;
    double tightest = 1e300;
    for (int n = 1; n <= 12; ++n) {
        for (double eps : {0.1, 0.15, 0.2, 0.3}) {
            if (eps * n * n < 1.0) continue;
            const double se = std::sqrt(eps);
            const double tri = 2.0 * se * n * std::pow(std::exp(1.0) / se, 2.0 * se * n);
            const double hex = 16.0 * eps * eps * std::pow(n, 4) * std::pow(std::exp(1.0) / se, 8.0 * se * n);
            for (Shape shape : {Shape::Triangle, Shape::Hexagon}) {
                const double closed = shape == Shape::Hexagon ? hex : tri;
                const AdmissibleBound b = admissible_bound({n, eps, shape});
                const double exact = static_cast<double>(count_admissible_exact({n, eps, shape}));
                bad += exact > closed || std::abs(b.value - closed) > 1e-9 * closed;
                tightest = std::min(tightest, closed / exact);
                ++checked;
            }
        }
    }
    return {bad == 0 && checked > 0,
            fmt("%lld violations over %lld (n, eps, shape) cases, smallest bound/exact %.3f", bad, checked, tightest)};
}

Outcome census_bound(const World& w) {
    const fs::path dir = fs::temp_directory_path() / "gcl-acceptance";
    fs::remove_all(dir);
    RunConfig cfg;
    cfg.outputs = dir.string();
    cfg.max_length = 5.0;
    cfg.eps_grid = {0.02, 0.05, 0.1};
    cfg.T_grid = {3.0, 4.0, 5.0};
    std::ostringstream log;
    if (cmd_build(cfg, log) || cmd_census(cfg, log) || cmd_bounds(cfg, log)) return {false, "pipeline failed"};
    std::ifstream rep(dir / "report.md");
    std::stringstream md;
    md << rep.rdbuf();
    const bool flagged = md.str().find("Non-asymptotic evidence only") != std::string::npos;

    std::vector<CensusRow> rows;
    for (const ClosedGeodesic& c : w.census5) rows.push_back({c.length, w.engine.self_intersection(c).total});
    int held = 0, total = 0;
    double min_margin = 1e300;
    std::string cells;
    for (double eps : cfg.eps_grid) {
        for (double T : cfg.T_grid) {
            const BoundReport r = census_P(rows, 5.0, T, eps, w.ledger);
            const double direct = w.ledger.bg_bound * std::sqrt(eps) * T * std::log(w.ledger.bX_bound / std::sqrt(eps));
            held += r.large_T_ok && std::abs(r.log_thm_bound - direct) <= 1e-9 * direct;
            min_margin = std::min(min_margin, r.log_thm_bound - std::log(std::max<long long>(r.census_count, 1)));
            cells += fmt(" P=%lld", r.census_count);
            ++total;
        }
    }
    std::ifstream csv(dir / "bounds.csv");
    std::string line;
    int csv_holds = 0;
    while (std::getline(csv, line)) csv_holds += line.size() > 6 && line.substr(line.size() - 6) == ",holds";
    return {held == total && csv_holds == total && flagged,
            fmt("%d/%d cells hold (report agrees on %d), min log margin %.1f, flagged non-asymptotic: %s;%s", held,
                total, csv_holds, min_margin, flagged ? "yes" : "no", cells.c_str())};
}

Outcome quad_formula() {
    // Hyperboloid model: base geodesic (cosh s, sinh s, 0), common normal (0, 0, 1).
    std::mt19937_64 rng(0xC0FFEE);
    std::uniform_real_distribution<double> legs(0.0, 3.0), deltas(0.0, 0.5);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const double T = 3.0 - legs(rng), d = 0.5 - deltas(rng);
        auto foot = [&](double s) {
            return std::array<double, 3>{std::cosh(T) * std::cosh(s), std::cosh(T) * std::sinh(s), std::sinh(T)};
        };
        const auto a = foot(0.0), b = foot(d);
        const double dt = a[0] - b[0], dx = a[1] - b[1], dy = a[2] - b[2];
        const double chord = std::sqrt(-dt * dt + dx * dx + dy * dy);
        const double dist = 2.0 * std::asinh(chord / 2.0);
        worst = std::max(worst, std::abs(dist - quad_fourth_side(T, d)));
    }
    return {worst <= 1e-9, fmt("100 random pairs, max deviation %.2e", worst)};
}

Outcome entropy() {
    const ConstantsLedger led = constants_ledger(2, 2.0);
    bool ok = entropy_bound(0.0, led) == 0.0 && led.bg_bound == 385.0;
    double worst_rel = 0.0;
    for (double i : {1e-8, 1e-3, 0.25, 1.0, 4.0, 50.0, 1e5}) {
        const double a = entropy_bound(i, led);
        const double b = std::exp(std::log(385.0) + 0.5 * std::log(i)) * std::abs(std::log(led.bX_bound) - 0.5 * std::log(i));
        worst_rel = std::max(worst_rel, std::abs(a - b) / b);
    }
    ok = ok && worst_rel <= 1e-12;
    double prev = entropy_bound(1.0, led);
    bool monotone = true;
    for (int k = 1; k <= 40; ++k) {
        const double v = entropy_bound(std::pow(10.0, -k), led);
        monotone = monotone && v < prev && v > 0.0;
        prev = v;
    }
    ok = ok && monotone && prev < 1e-15;
    return {ok, fmt("h(0)=0, dual-path relative gap %.1e, monotone on 1e-1..1e-40 down to %.2e", worst_rel, prev)};
}

Outcome roundtrip(const World& w) {
    long long checked = 0, bad = 0;
    std::vector<const SymbolicWord*> usable;
    for (const Coded& k : w.coded5) {
        if (!k.codable || !k.c->primitive) continue;
        usable.push_back(&k.w);
        bad += !cyclically_equal(reconstruct_word(w.dec, extract_edge_words(w.dec, build_phi(w.dec, k.w))).letters,
                                 k.w.letters);
        ++checked;
    }
    // Corruptions need an edge with two different letters, so draw from the
    // longer census when the short one has none.
    std::vector<SymbolicWord> longer;
    for (const ClosedGeodesic& c : w.census6) {
        if (!c.primitive) continue;
        try {
            longer.push_back(code_word(c.matrix, w.dec));
        } catch (const Error&) {
        }
    }
    std::mt19937_64 rng(0xC0FFEE);
    int mutations = 0, silent = 0, rejected = 0;
    for (int trial = 0; mutations < 100 && trial < 100000 && !longer.empty(); ++trial) {
        const SymbolicWord& word = longer[trial % longer.size()];
        EdgeWords ew = extract_edge_words(w.dec, build_phi(w.dec, word));
        std::vector<std::vector<int>*> lists;
        for (auto& v : ew.outgoing) lists.push_back(&v);
        for (auto& v : ew.incoming) lists.push_back(&v);
        std::vector<int>& v = *lists[rng() % lists.size()];
        if (v.size() < 2) continue;
        const std::size_t a = rng() % v.size(), b = rng() % v.size();
        if (v[a] == v[b]) continue;
        std::swap(v[a], v[b]);
        ++mutations;
        try {
            silent += cyclically_equal(reconstruct_word(w.dec, ew).letters, word.letters);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::InconsistentWords) throw;
            ++rejected;
        }
    }
    return {bad == 0 && checked > 0 && mutations == 100 && silent == 0,
            fmt("%lld/%lld round trips exact; %d corruptions, %d silent matches, %d rejected as inconsistent",
                checked - bad, checked, mutations, silent, rejected)};
}

}  // namespace

int main() {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    const World w;
    const double setup = std::chrono::duration<double>(clock::now() - t0).count();
    std::cout << fmt("census: %zu classes up to length 5, %zu up to length 6 (%.1f s)\n", w.census5.size(),
                     w.census6.size(), setup);

    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"combinatorial length bound", [&] { return lcom_bound(w); }},
        {"modified curve crossing types", [&] { return phi_properties(w); }},
        {"dual intersection agreement", [&] { return dual_intersection(w); }},
        {"interaction strength", [&] { return interaction(w); }},
        {"admissible word counts", [] { return admissible(); }},
        {"census bound table", [&] { return census_bound(w); }},
        {"quadrilateral fourth side", [] { return quad_formula(); }},
        {"entropy bound", [] { return entropy(); }},
        {"edge word reconstruction", [&] { return roundtrip(w); }},
    };
    bool all = true;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const auto start = clock::now();
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(clock::now() - start).count();
        all = all && o.pass;
        std::cout << (o.pass ? "PASS " : "FAIL ") << k + 1 << " " << criteria[k].first << ": " << o.detail
                  << fmt(" (%.2f s)", secs) << "\n";
    }
    return all ? 0 : 1;
}
