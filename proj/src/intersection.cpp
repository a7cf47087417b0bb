#include "gcl/intersection.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

namespace gcl {

namespace {

constexpr double kEdgeTol = 1e-9;    // endpoints closer than this are one point
constexpr double kNearEdge = 1e-7;   // closer than this but not equal: ambiguous

// Endpoint of a chord: curve (0 or 1), chord index, 0 = entry, 1 = exit.
struct End {
    int curve;
    int chord;
    int which;
    auto operator<=>(const End&) const = default;
};

struct EdgeEvent {
    int side;  // global side index
    End x, y;
    auto operator<=>(const EdgeEvent&) const = default;
};

double boundary_position(const HexagonDecomposition& dec, int hex, int side, double param) {
    return side + param / dec.side(hex, side).length;
}

// Strictly between a and b going counter-clockwise on [0, 6).
bool between(double a, double b, double x) {
    const double span = std::fmod(b - a + 12.0, 6.0);
    const double off = std::fmod(x - a + 12.0, 6.0);
    return off > 0.0 && off < span;
}

Complex to_klein(Complex z) {
    const Complex w = to_disk(z);
    return 2.0 * w / (1.0 + std::norm(w));
}

Complex from_klein(Complex k) {
    return from_disk(k / (1.0 + std::sqrt(std::max(0.0, 1.0 - std::norm(k)))));
}

End twin(End e, int size) {
    if (e.which == 0) return {e.curve, (e.chord + size - 1) % size, 1};
    return {e.curve, (e.chord + 1) % size, 0};
}

}  // namespace

const char* to_string(CrossingType t) {
    switch (t) {
    case CrossingType::One: return "1";
    case CrossingType::TwoA: return "2a";
    case CrossingType::TwoB: return "2b";
    case CrossingType::Three: return "3";
    }
    return "?";
}

CrossingType crossing_type(bool start_shared, bool end_shared) {
    if (start_shared && end_shared) return CrossingType::Three;
    if (start_shared) return CrossingType::TwoA;
    if (end_shared) return CrossingType::TwoB;
    return CrossingType::One;
}

std::optional<Complex> chord_intersection(const Chord& a, const Chord& b) {
    const Complex p = to_klein(a.in_point), r = to_klein(a.out_point) - p;
    const Complex q = to_klein(b.in_point), s = to_klein(b.out_point) - q;
    auto cross = [](Complex u, Complex v) { return u.real() * v.imag() - u.imag() * v.real(); };
    const double den = cross(r, s);
    if (std::abs(den) < 1e-300) return std::nullopt;
    const double t = cross(q - p, s) / den;
    const double u = cross(q - p, r) / den;
    if (t <= 0.0 || t >= 1.0 || u <= 0.0 || u >= 1.0) return std::nullopt;
    return from_klein(p + t * r);
}

std::vector<CrossingRecord> classify_crossings(const HexagonDecomposition& dec, const std::vector<Chord>& a,
                                               const std::vector<Chord>* b) {
    const bool same = b == nullptr;
    const std::vector<Chord>& other = same ? a : *b;
    const int na = static_cast<int>(a.size()), nb = static_cast<int>(other.size());

    std::vector<std::vector<int>> by_hex_a(dec.num_hexagons()), by_hex_b(dec.num_hexagons());
    for (int i = 0; i < na; ++i) by_hex_a[a[i].hex].push_back(i);
    for (int j = 0; j < nb; ++j) by_hex_b[other[j].hex].push_back(j);

    std::vector<CrossingRecord> out;
    std::set<EdgeEvent> events;
    for (int h = 0; h < dec.num_hexagons(); ++h) {
        for (int i : by_hex_a[h]) {
            for (int j : by_hex_b[h]) {
                if (same && j <= i) continue;
                const Chord& x = a[i];
                const Chord& y = other[j];
                const std::array<std::pair<int, double>, 2> ex{{{x.in_side, x.in_param}, {x.out_side, x.out_param}}};
                const std::array<std::pair<int, double>, 2> ey{{{y.in_side, y.in_param}, {y.out_side, y.out_param}}};
                int shared = 0;
                int side = -1;
                End ux{}, uy{};
                for (int p = 0; p < 2; ++p) {
                    for (int q = 0; q < 2; ++q) {
                        if (ex[p].first != ey[q].first) continue;
                        const double gap = std::abs(ex[p].second - ey[q].second);
                        if (gap < kEdgeTol) {
                            ++shared;
                            side = 6 * h + ex[p].first;
                            ux = {0, i, p};
                            uy = {same ? 0 : 1, j, q};
                        } else if (gap < kNearEdge) {
                            throw Error(ErrorKind::EdgeAmbiguity,
                                        "crossing too close to edge " + HexagonDecomposition::label(6 * h + ex[p].first));
                        }
                    }
                }
                if (shared > 1) throw Error(ErrorKind::EdgeAmbiguity, "overlapping chords");
                const CrossingType type = crossing_type(x.in_side == y.in_side, x.out_side == y.out_side);
                if (shared == 1) {
                    events.insert({side, std::min(ux, uy), std::max(ux, uy)});
                    if (side > dec.partner(side)) continue;
                    out.push_back({i, j, h, ux.which == 0 ? x.in_point : x.out_point, true, type});
                    continue;
                }
                const double a0 = boundary_position(dec, h, x.in_side, x.in_param);
                const double a1 = boundary_position(dec, h, x.out_side, x.out_param);
                const double b0 = boundary_position(dec, h, y.in_side, y.in_param);
                const double b1 = boundary_position(dec, h, y.out_side, y.out_param);
                if (between(a0, a1, b0) == between(a0, a1, b1)) continue;
                const auto pt = chord_intersection(x, y);
                out.push_back({i, j, h, pt ? *pt : x.in_point, false, type});
            }
        }
    }

    // Every edge crossing must be seen from both hexagons.
    for (const EdgeEvent& e : events) {
        const End tx = twin(e.x, e.x.curve == 0 ? na : nb);
        const End ty = twin(e.y, e.y.curve == 0 ? na : nb);
        const EdgeEvent t{dec.partner(e.side), std::min(tx, ty), std::max(tx, ty)};
        if (!events.count(t)) {
            throw Error(ErrorKind::EdgeAmbiguity,
                        "edge crossing on " + HexagonDecomposition::label(e.side) + " not confirmed across the edge");
        }
    }

    std::sort(out.begin(), out.end(), [](const CrossingRecord& p, const CrossingRecord& q) {
        return std::tie(p.hex, p.chord_a, p.chord_b) < std::tie(q.hex, q.chord_a, q.chord_b);
    });
    return out;
}

IntersectionCount count_from(std::vector<CrossingRecord> crossings) {
    IntersectionCount c;
    for (const CrossingRecord& r : crossings) ++c.by_type[static_cast<int>(r.type)];
    c.total = static_cast<long long>(crossings.size());
    c.crossings = std::move(crossings);
    return c;
}

nlohmann::json IntersectionCount::to_json() const {
    return {{"total", total},
            {"by_type", {{"1", by_type[0]}, {"2a", by_type[1]}, {"2b", by_type[2]}, {"3", by_type[3]}}},
            {"multiplicity_adjusted", multiplicity_adjusted},
            {"method", from_chords ? "chords" : "linking"}};
}

int cuff_crossings(const HexagonDecomposition& dec, const SymbolicWord& w, int curve) {
    int n = 0;
    for (int l : w.letters) {
        if (dec.sides[l].kind == SideKind::CuffArc && dec.sides[l].curve == curve) ++n;
    }
    return n;
}

// ---- engine ---------------------------------------------------------------

IntersectionEngine::IntersectionEngine(const HexagonDecomposition& dec, double sys) : dec_(&dec), sys_(sys) {
    if (!(sys > 0.0)) throw Error(ErrorKind::InvalidSpec, "systole must be positive");
}

double IntersectionEngine::default_window(double length) const {
    return length + 4.0 * std::asinh(1.0 / std::sinh(sys_ / 2.0));
}

IntersectionEngine::Axis IntersectionEngine::prepare(const Isometry& g) const {
    Axis a;
    a.g = g;
    a.length = translation_length(g);
    const GeodesicLine ax = axis(g);
    const Isometry n = normalizer(ax.from, ax.to);
    a.offset = 1e300;
    Complex foot;
    for (int h = 0; h < dec_->num_hexagons(); ++h) {
        const Complex w = n.apply(dec_->placement[h].apply(dec_->hexagons[h].center));
        const double d = std::asinh(std::abs(w.real()) / w.imag());
        if (d < a.offset) {
            a.offset = d;
            a.hex = h;
            foot = w;
        }
    }
    a.to_ray = Isometry::translation(-std::log(std::abs(foot))) * n;
    return a;
}

std::vector<Isometry> IntersectionEngine::deck_near(int hex, int type, double max_disp) const {
    std::shared_ptr<const TileBall> ball;
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = balls_.find(hex);
        if (it == balls_.end() || it->second->radius() < max_disp) {
            const double r = it == balls_.end() ? max_disp : std::max(max_disp, it->second->radius() + 1.0);
            balls_[hex] = std::make_shared<const TileBall>(*dec_, hex, r);
        }
        ball = balls_[hex];
    }
    std::vector<Isometry> out;
    const Isometry inv = dec_->placement[type].inverse();
    for (const Tile& t : ball->tiles()) {
        if (t.hex == type && t.dist <= max_disp) out.push_back(t.chart * inv);
    }
    return out;
}

long long IntersectionEngine::linked_lines(const Axis& a, const Axis& b, double window, bool same) const {
    const GeodesicLine bx = axis(b.g);
    const Isometry from_b = b.to_ray.inverse();
    const Complex mb = from_b.apply(Complex(0.0, 1.0));
    const Isometry from_a = a.to_ray.inverse();
    const Complex ma = from_a.apply(Complex(0.0, 1.0));
    const double half = a.length / 2.0;

    std::vector<std::pair<double, double>> lines;  // (height log, forward endpoint angle)
    for (const Isometry& h : deck_near(a.hex, b.hex, window + a.offset + b.offset)) {
        if (distance(ma, h.apply(mb)) > window) continue;
        const Isometry m = a.to_ray * h;
        const ProjPoint p = m.apply(bx.from), q = m.apply(bx.to);
        const double sp = std::hypot(p.p, p.q), sq = std::hypot(q.p, q.q);
        if (std::abs(p.q) < 1e-12 * sp || std::abs(q.q) < 1e-12 * sq) continue;
        const double x1 = p.p / p.q, x2 = q.p / q.q;
        if (same && std::abs(x1) < 1e-9 && std::abs(x2) < 1e-9) continue;
        if (!(x1 * x2 < 0.0)) continue;
        const double s = 0.5 * std::log(-x1 * x2);
        if (s < -half || s >= half) continue;
        lines.emplace_back(s, std::atan(x2));
    }
    std::sort(lines.begin(), lines.end());
    long long n = 0;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        bool dup = false;
        for (std::size_t j = i; j-- > 0 && lines[i].first - lines[j].first < 1e-9;) {
            if (std::abs(lines[i].second - lines[j].second) < 1e-9) dup = true;
        }
        if (!dup) ++n;
    }
    return n;
}

int IntersectionEngine::power_of(const Axis& a) const {
    const Isometry from_a = a.to_ray.inverse();
    const Complex ma = from_a.apply(Complex(0.0, 1.0));
    double root = a.length;
    for (const Isometry& h : deck_near(a.hex, a.hex, a.length + 2.0 * a.offset + 1e-9)) {
        if (distance(ma, h.apply(ma)) > a.length + 1e-9) continue;
        const Isometry m = a.to_ray * h * from_a;
        const double scale = std::abs(m.a()) + std::abs(m.d());
        if (std::abs(m.b()) > 1e-7 * scale || std::abs(m.c()) > 1e-7 * scale) continue;
        const double l = std::abs(std::log(std::abs(m.a() / m.d())));
        if (l > 1e-6) root = std::min(root, l);
    }
    return static_cast<int>(std::llround(a.length / root));
}

long long IntersectionEngine::linking_self(const Isometry& g, std::optional<double> window) const {
    const Axis a = prepare(g);
    const double w = window.value_or(default_window(a.length));
    if (w < a.length) throw Error(ErrorKind::WindowTooSmall, "window shorter than the curve");
    const long long lines = linked_lines(a, a, w, true);
    if (lines % 2) throw Error(ErrorKind::EdgeAmbiguity, "odd number of crossing branches");
    const int k = power_of(a);
    return k * (lines / 2);
}

long long IntersectionEngine::linking_pair(const Isometry& g1, const Isometry& g2, std::optional<double> window) const {
    const Axis a = prepare(g1), b = prepare(g2);
    const double need = 0.5 * (a.length + b.length);
    const double w = window.value_or(default_window(need));
    if (w < need) throw Error(ErrorKind::WindowTooSmall, "window shorter than the mean length");
    return power_of(b) * linked_lines(a, b, w, false);
}

IntersectionCount IntersectionEngine::self_intersection(const ClosedGeodesic& g) const {
    if (g.primitive) {
        try {
            const SymbolicWord w = code_word(g.matrix, *dec_);
            return count_from(classify_crossings(*dec_, w.chords));
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::OnSkeleton) throw;
        }
    }
    IntersectionCount c;
    c.from_chords = false;
    c.total = linking_self(g.matrix);
    c.multiplicity_adjusted = !g.primitive;
    return c;
}

IntersectionCount IntersectionEngine::pair_intersection(const ClosedGeodesic& a, const ClosedGeodesic& b) const {
    if (a.word == b.word) throw Error(ErrorKind::SameClass, "use self_intersection for a single class");
    if (a.primitive && b.primitive) {
        try {
            const SymbolicWord wa = code_word(a.matrix, *dec_);
            const SymbolicWord wb = code_word(b.matrix, *dec_);
            return count_from(classify_crossings(*dec_, wa.chords, &wb.chords));
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::OnSkeleton) throw;
        }
    }
    IntersectionCount c;
    c.from_chords = false;
    c.total = linking_pair(a.matrix, b.matrix);
    c.multiplicity_adjusted = !(a.primitive && b.primitive);
    return c;
}

}  // namespace gcl
