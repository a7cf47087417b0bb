#include "gcl/coder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gcl/tiling.hpp"

namespace gcl {

namespace {

struct Step {
    Isometry chart;
    int hex;
    int side;
    double param;
    double r;
};

struct Exit {
    int side = -1;
    RayHit hit{std::numeric_limits<double>::infinity(), 0.0};
};

Exit find_exit(const HexagonDecomposition& dec, const Isometry& ray, const Isometry& chart, int hex, int entry,
               double cur, double theta) {
    Exit best;
    for (int k = 0; k < 6; ++k) {
        const HexSide& side = dec.side(hex, k);
        bool collinear = false;
        const auto hits = ray_side_hits(ray * chart * side.frame, side.length, theta, &collinear);
        if (collinear) throw Error(ErrorKind::OnSkeleton, "geodesic runs along side " + HexagonDecomposition::label(6 * hex + k));
        const double floor = k == entry ? cur * (1.0 + 1e-9) : cur;
        for (const RayHit& h : hits) {
            if (h.r > floor && h.r < best.hit.r) {
                best.hit = h;
                best.side = k;
            }
        }
    }
    return best;
}

// Conjugate of g by a deck element whose axis crosses a placed base
// hexagon, recovered exactly from side pairings when possible.
Isometry reduce_to_base(const HexagonDecomposition& dec, const Isometry& g) {
    const GeodesicLine ax = axis(g);
    const Isometry to_ray = normalizer(ax.from, ax.to);
    const Complex o = dec.placement[0].apply(dec.hexagons[0].center);
    const double rho0 = std::abs(to_ray.apply(o));
    std::optional<Location> loc;
    for (int attempt = 0; attempt < 8 && !loc; ++attempt) {
        const double shift = 0.2713 * ((attempt + 1) / 2) * (attempt % 2 == 0 ? 1.0 : -1.0);
        loc = locate(dec, 0, to_ray.inverse().apply(Complex(0.0, rho0 * std::exp(shift))));
    }
    if (!loc) return g;
    const int h = loc->hex;
    const Isometry deck = loc->chart * dec.placement[h].inverse();
    if (deck.near_identity(1e-9)) return g;
    const Isometry g1 = deck.inverse() * g * deck;
    const Complex oh = dec.placement[h].apply(dec.hexagons[h].center);
    const Complex q = g1.apply(oh);
    const auto snap = locate(dec, h, q);
    if (snap && snap->hex == h && distance(snap->chart.apply(dec.hexagons[h].center), q) < 1e-2) {
        const Isometry exact = snap->chart * dec.placement[h].inverse();
        if (std::abs(exact.trace() - g1.trace()) < 1e-2 * std::abs(g1.trace())) return exact;
    }
    return g1;
}

Complex side_point(const HexSide& side, double param) {
    return side.frame.apply(Complex(0.0, std::exp(param)));
}

}  // namespace

SymbolicWord develop(const HexagonDecomposition& dec, const Isometry& input, const WalkOptions& opts) {
    translation_length(input);
    const Isometry g = reduce_to_base(dec, input);
    const double ell = translation_length(g);
    const GeodesicLine ax = axis(g);
    const Isometry to_ray = normalizer(ax.from, ax.to);
    const Isometry from_ray = to_ray.inverse();
    const Complex dir(std::cos(opts.theta), std::sin(opts.theta));

    const Complex o = dec.placement[0].apply(dec.hexagons[0].center);
    const double rho0 = std::abs(to_ray.apply(o));
    std::optional<Location> start;
    double rho = rho0;
    for (int attempt = 0; attempt < 16 && !start; ++attempt) {
        const double shift = 0.2713 * ((attempt + 1) / 2) * (attempt % 2 == 0 ? 1.0 : -1.0);
        rho = rho0 * std::exp(shift);
        auto loc = locate(dec, 0, from_ray.apply(rho * dir));
        if (loc && loc->margin > 1e-6) start = loc;
    }
    if (!start) throw Error(ErrorKind::OnSkeleton, "no start point off the skeleton");

    const double stop = rho * std::exp(ell);
    Isometry chart = start->chart;
    int hex = start->hex;
    int entry = -1;
    double cur = rho;
    std::vector<Step> steps;
    for (;;) {
        const Exit ex = find_exit(dec, to_ray, chart, hex, entry, cur, opts.theta);
        if (ex.side < 0) throw Error(ErrorKind::VertexDegeneracy, "lost the curve inside a hexagon");
        if (ex.hit.r >= stop) break;
        const double len = dec.side(hex, ex.side).length;
        if (ex.hit.param < opts.vertex_tol || ex.hit.param > len - opts.vertex_tol) {
            throw Error(ErrorKind::VertexDegeneracy, "crossing within tolerance of a vertex of side " +
                                                         HexagonDecomposition::label(6 * hex + ex.side));
        }
        steps.push_back({chart, hex, ex.side, ex.hit.param, ex.hit.r});
        if (static_cast<int>(steps.size()) > opts.max_crossings) {
            throw Error(ErrorKind::BudgetExceeded, "development exceeds crossing budget");
        }
        const int s = 6 * hex + ex.side;
        chart = chart * dec.sides[s].pairing;
        const int p = dec.partner(s);
        hex = p / 6;
        entry = p % 6;
        cur = ex.hit.r;
    }

    const int m = static_cast<int>(steps.size());
    const Complex expect = g.apply(start->chart.apply(dec.hexagons[start->hex].center));
    if (m == 0 || hex != start->hex || distance(chart.apply(dec.hexagons[hex].center), expect) > 1e-6) {
        throw Error(ErrorKind::VertexDegeneracy, "development did not close up after one period");
    }

    SymbolicWord w;
    w.matrix = g;
    w.length = ell;
    w.letters.resize(m);
    w.chords.resize(m);
    w.charts.resize(m);
    for (int i = 0; i < m; ++i) {
        const Step& st = steps[i];
        const int s = 6 * st.hex + st.side;
        const int p = dec.partner(s);
        w.letters[i] = p;
        w.charts[i] = st.chart * dec.sides[s].pairing;
        Chord& c = w.chords[i];
        c.hex = p / 6;
        c.in_side = p % 6;
        c.in_param = dec.sides[p].length - st.param;
        const Step& next = steps[(i + 1) % m];
        c.out_side = next.side;
        c.out_param = next.param;
        c.in_point = side_point(dec.sides[p], c.in_param);
        c.out_point = side_point(dec.side(c.hex, c.out_side), c.out_param);
    }
    for (int i = 0; i < m; ++i) {
        if (w.chords[i].hex != steps[(i + 1) % m].hex) {
            throw Error(ErrorKind::VertexDegeneracy, "inconsistent hexagon sequence");
        }
    }
    return w;
}

SymbolicWord code_word(const Isometry& g, const HexagonDecomposition& dec) {
    return develop(dec, g);
}

std::vector<int> hypercycle_letters(const HexagonDecomposition& dec, const Isometry& g, double offset) {
    static constexpr double kScales[] = {1.0, 2.31, 0.437, 3.73, 0.171};
    for (double sc : kScales) {
        WalkOptions opts;
        opts.theta = std::numbers::pi / 2.0 + offset * sc;
        try {
            return develop(dec, g, opts).letters;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::VertexDegeneracy) throw;
        }
    }
    throw Error(ErrorKind::VertexDegeneracy, "every hypercycle offset met a vertex");
}

int combinatorial_length(const SymbolicWord& w) { return w.size(); }

Isometry word_holonomy(const HexagonDecomposition& dec, const std::vector<int>& letters) {
    const int n = static_cast<int>(letters.size());
    const int h0 = letters[0] / 6;
    Isometry c = dec.placement[h0];
    for (int i = 0; i < n; ++i) {
        const int exit = dec.partner(letters[(i + 1) % n]);
        c = c * dec.sides[exit].pairing;
    }
    return c * dec.placement[h0].inverse();
}

bool is_valid_walk(const HexagonDecomposition& dec, const std::vector<int>& letters) {
    const int n = static_cast<int>(letters.size());
    for (int i = 0; i < n; ++i) {
        if (dec.partner(letters[(i + 1) % n]) / 6 != letters[i] / 6) return false;
    }
    return n > 0;
}

int ItineraryCursor::index(int t) const {
    const int n = word_->size();
    return ((pos_ + t) % n + n) % n;
}

ProjPoint forward_endpoint(const ItineraryCursor& cursor) {
    const SymbolicWord& w = cursor.word();
    return w.charts[cursor.index(0)].inverse().apply(axis(w.matrix).to);
}

BoundaryPoint forward_boundary_point(const ItineraryCursor& cursor) {
    return BoundaryPoint::from_proj(forward_endpoint(cursor));
}

nlohmann::json SymbolicWord::to_json() const {
    nlohmann::json labels = nlohmann::json::array();
    for (int l : letters) labels.push_back(HexagonDecomposition::label(l));
    nlohmann::json cj = nlohmann::json::array();
    for (const Chord& c : chords) {
        const Complex a = to_disk(c.in_point), b = to_disk(c.out_point);
        cj.push_back({a.real(), a.imag(), b.real(), b.imag(), c.hex});
    }
    return {{"word", labels}, {"letters", letters}, {"chords", cj}, {"length", length}};
}

std::vector<int> canonical_rotation(const std::vector<int>& w) {
    const std::size_t n = w.size();
    std::size_t best = 0;
    for (std::size_t r = 1; r < n; ++r) {
        for (std::size_t i = 0; i < n; ++i) {
            const int a = w[(r + i) % n], b = w[(best + i) % n];
            if (a != b) {
                if (a < b) best = r;
                break;
            }
        }
    }
    std::vector<int> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = w[(best + i) % n];
    return out;
}

bool cyclically_equal(const std::vector<int>& a, const std::vector<int>& b) {
    return a.size() == b.size() && canonical_rotation(a) == canonical_rotation(b);
}

std::vector<int> inverse_word(const HexagonDecomposition& dec, const std::vector<int>& w) {
    std::vector<int> out;
    out.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(dec.partner(*it));
    return out;
}

std::vector<int> cyclic_reduce(const HexagonDecomposition& dec, const std::vector<int>& w) {
    std::vector<int> st;
    for (int l : w) {
        if (!st.empty() && dec.partner(st.back()) == l) {
            st.pop_back();
        } else {
            st.push_back(l);
        }
    }
    std::size_t lo = 0, hi = st.size();
    while (hi - lo >= 2 && dec.partner(st[hi - 1]) == st[lo]) {
        ++lo;
        --hi;
    }
    return {st.begin() + static_cast<long>(lo), st.begin() + static_cast<long>(hi)};
}

int primitive_period(const std::vector<int>& w) {
    const int n = static_cast<int>(w.size());
    for (int d = 1; d < n; ++d) {
        if (n % d) continue;
        bool ok = true;
        for (int i = 0; i + d < n && ok; ++i) ok = w[i] == w[i + d];
        if (ok) return d;
    }
    return n;
}

}  // namespace gcl
