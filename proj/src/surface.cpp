#include "gcl/surface.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <queue>
#include <sstream>

#include "gcl/tiling.hpp"

namespace gcl {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

struct CuffSlot {
    int curve = -1;
    int role = 0;  // 0: first pants listed for the curve, 1: second
};

std::vector<std::array<CuffSlot, 3>> assign_slots(const SurfaceSpec& spec) {
    std::vector<std::array<CuffSlot, 3>> slots(spec.num_pants());
    std::vector<int> used(spec.num_pants(), 0);
    for (int j = 0; j < spec.num_curves(); ++j) {
        for (int e = 0; e < 2; ++e) {
            const int n = spec.pants_edges[j][e];
            if (used[n] >= 3) throw Error(ErrorKind::InvalidSpec, "pants " + std::to_string(n) + " has degree > 3");
            slots[n][used[n]++] = {j, e};
        }
    }
    for (int n = 0; n < spec.num_pants(); ++n) {
        if (used[n] != 3) throw Error(ErrorKind::InvalidSpec, "pants " + std::to_string(n) + " is not trivalent");
    }
    return slots;
}

// Side index of cuff k inside the positive or mirrored hexagon.
int cuff_side(int sign, int k) {
    static constexpr int plus[3] = {0, 2, 4};
    static constexpr int minus[3] = {0, 4, 2};
    return sign == 0 ? plus[k] : minus[k];
}

// Seam side glued across the pants: positive side -> mirrored side.
int seam_partner(int side) {
    switch (side) {
        case 1: return 5;
        case 3: return 3;
        case 5: return 1;
    }
    return -1;
}

TwistAdjustment adjust_twist(double length, double twist) {
    TwistAdjustment adj;
    const double half = length / 2.0;
    adj.twist = twist * length;
    double d = -adj.twist - half * std::round(-adj.twist / half);
    if (d <= -half / 2.0) d += half;
    if (d > half / 2.0) d -= half;
    adj.shift = d;
    const long m = std::lround((adj.shift + adj.twist) / half);
    adj.parity = static_cast<int>(((m % 2) + 2) % 2);
    return adj;
}

bool is_tree_side(const std::vector<int>& parent_side, const HexagonDecomposition& dec, int s) {
    const int h = s / 6;
    const int p = dec.partner(s);
    const int hp = p / 6;
    return parent_side[hp] == s || parent_side[h] == p;
}

HexagonDecomposition build_geometry(const SurfaceSpec& spec) {
    spec.validate();
    for (double l : spec.lengths) {
        if (l < 1e-6) throw Error(ErrorKind::DegenerateSpec, "pants curve length below 1e-6");
    }
    const auto slots = assign_slots(spec);

    HexagonDecomposition dec;
    dec.genus = spec.genus;
    for (int j = 0; j < spec.num_curves(); ++j) {
        dec.adjustments.push_back(adjust_twist(spec.lengths[j], spec.twists[j]));
    }

    const int np = spec.num_pants();
    dec.hexagons.resize(2 * np);
    dec.sides.resize(12 * np);

    for (int n = 0; n < np; ++n) {
        std::array<double, 3> a;
        for (int k = 0; k < 3; ++k) a[k] = spec.lengths[slots[n][k].curve] / 2.0;
        const auto opp = right_hexagon_sides(a[0], a[1], a[2]);
        const double b01 = opp[2], b12 = opp[0], b20 = opp[1];

        for (int sign = 0; sign < 2; ++sign) {
            const std::array<double, 6> walk = sign == 0 ? std::array<double, 6>{a[0], b01, a[1], b12, a[2], b20}
                                                         : std::array<double, 6>{a[0], b20, a[2], b12, a[1], b01};
            std::array<Isometry, 6> rframes;
            Isometry f;
            for (int k = 0; k < 6; ++k) {
                rframes[k] = f;
                f = f * Isometry::translation(walk[k]) * Isometry::rotation(kHalfPi);
            }
            if (!f.near_identity(1e-8)) {
                throw Error(ErrorKind::DegenerateDecomposition, "right-angled hexagon does not close");
            }

            const int h = 2 * n + sign;
            Hexagon& hex = dec.hexagons[h];
            hex.pants = n;
            hex.sign = sign;
            for (int k = 0; k < 3; ++k) {
                const int c = cuff_side(sign, k);
                const CuffSlot slot = slots[n][k];
                const double shift = slot.role == 1 ? dec.adjustments[slot.curve].shift : 0.0;
                const Complex i(0.0, 1.0);
                hex.vertices[c] = (rframes[c] * Isometry::translation(shift)).apply(i);
                hex.vertices[c + 1] = (rframes[c] * Isometry::translation(a[k] + shift)).apply(i);
                HexSide& side = dec.sides[6 * h + c];
                side.kind = SideKind::CuffArc;
                side.curve = slot.curve;
            }
            for (int k = 0; k < 6; ++k) {
                HexSide& side = dec.sides[6 * h + k];
                side.start = hex.vertices[k];
                side.end = hex.vertices[(k + 1) % 6];
                side.length = distance(side.start, side.end);
                side.frame = frame_from_points(side.start, side.end);
                if (side.kind == SideKind::Seam && side.length < kDefaultTol.geo) {
                    throw Error(ErrorKind::DegenerateDecomposition, "seam shorter than tolerance");
                }
            }
            for (int k = 0; k < 6; ++k) {
                const Isometry inv = dec.sides[6 * h + k].frame.inverse();
                for (int m = 0; m < 6; ++m) {
                    if (m == k || m == (k + 1) % 6) continue;
                    if (inv.apply(hex.vertices[m]).real() > -kDefaultTol.geo) {
                        throw Error(ErrorKind::DegenerateDecomposition, "hexagon is not strictly convex");
                    }
                }
                const Complex back = inv.apply(hex.vertices[(k + 5) % 6]);
                hex.angles[k] = std::arg(to_disk(back));
            }
            hex.center = centroid(hex.vertices);
            for (const Complex& v : hex.vertices) hex.radius = std::max(hex.radius, distance(hex.center, v));
        }
    }

    // seams pair the two halves of a pants
    for (int n = 0; n < np; ++n) {
        for (int k : {1, 3, 5}) {
            const int s = 6 * (2 * n) + k;
            const int t = 6 * (2 * n + 1) + seam_partner(k);
            dec.sides[s].partner = t;
            dec.sides[t].partner = s;
        }
    }
    // cuff arcs pair across pants curves
    std::vector<std::array<int, 2>> curve_slots(spec.num_curves(), {-1, -1});
    for (int n = 0; n < np; ++n) {
        for (int k = 0; k < 3; ++k) curve_slots[slots[n][k].curve][slots[n][k].role] = n * 3 + k;
    }
    for (int j = 0; j < spec.num_curves(); ++j) {
        const int np_ = curve_slots[j][0] / 3, kp = curve_slots[j][0] % 3;
        const int nq = curve_slots[j][1] / 3, kq = curve_slots[j][1] % 3;
        for (int s = 0; s < 2; ++s) {
            const int q = ((-s - 1 - dec.adjustments[j].parity) % 2 + 2) % 2 == 0 ? 0 : 1;
            const int a = 6 * (2 * np_ + s) + cuff_side(s, kp);
            const int b = 6 * (2 * nq + q) + cuff_side(q, kq);
            dec.sides[a].partner = b;
            dec.sides[b].partner = a;
        }
    }

    for (int s = 0; s < dec.num_labels(); ++s) {
        HexSide& side = dec.sides[s];
        const HexSide& other = dec.sides[side.partner];
        if (dec.partner(side.partner) != s || side.partner == s) {
            throw Error(ErrorKind::DegenerateDecomposition, "gluing is not a fixed-point-free involution");
        }
        if (std::abs(side.length - other.length) > 1e-9) {
            throw Error(ErrorKind::DegenerateDecomposition, "glued sides differ in length");
        }
        side.pairing = side.frame * Isometry::translation(side.length) * Isometry::rotation(std::numbers::pi) *
                       other.frame.inverse();
    }

    // placement along a spanning tree of the dual graph
    const int nh = dec.num_hexagons();
    dec.placement.assign(nh, Isometry{});
    std::vector<bool> seen(nh, false);
    std::queue<int> todo;
    todo.push(0);
    seen[0] = true;
    while (!todo.empty()) {
        const int h = todo.front();
        todo.pop();
        for (int k = 0; k < 6; ++k) {
            const int s = 6 * h + k;
            const int hp = dec.partner(s) / 6;
            if (seen[hp]) continue;
            seen[hp] = true;
            dec.placement[hp] = dec.placement[h] * dec.sides[s].pairing;
            todo.push(hp);
        }
    }
    return dec;
}

std::vector<int> tree_parent_sides(const HexagonDecomposition& dec) {
    const int nh = dec.num_hexagons();
    std::vector<int> parent(nh, -1);
    std::vector<bool> seen(nh, false);
    std::queue<int> todo;
    todo.push(0);
    seen[0] = true;
    while (!todo.empty()) {
        const int h = todo.front();
        todo.pop();
        for (int k = 0; k < 6; ++k) {
            const int s = 6 * h + k;
            const int hp = dec.partner(s) / 6;
            if (seen[hp]) continue;
            seen[hp] = true;
            parent[hp] = s;
            todo.push(hp);
        }
    }
    return parent;
}

}  // namespace

SurfaceSpec SurfaceSpec::default_genus2() {
    SurfaceSpec s;
    s.genus = 2;
    s.pants_edges = {{0, 1}, {0, 1}, {0, 1}};
    s.lengths = {2.0, 2.3, 2.7};
    s.twists = {0.11, -0.23, 0.05};
    return s;
}

void SurfaceSpec::validate() const {
    if (genus < 2) throw Error(ErrorKind::InvalidSpec, "genus must be at least 2");
    const int nc = num_curves();
    if (static_cast<int>(pants_edges.size()) != nc) {
        throw Error(ErrorKind::InvalidSpec, "expected " + std::to_string(nc) + " pants curves");
    }
    if (static_cast<int>(lengths.size()) != nc || static_cast<int>(twists.size()) != nc) {
        throw Error(ErrorKind::InvalidSpec, "lengths and twists must have one entry per pants curve");
    }
    const int np = num_pants();
    std::vector<int> degree(np, 0);
    std::vector<int> root(np);
    std::iota(root.begin(), root.end(), 0);
    auto find = [&](int x) {
        while (root[x] != x) x = root[x] = root[root[x]];
        return x;
    };
    for (const auto& e : pants_edges) {
        for (int n : e) {
            if (n < 0 || n >= np) throw Error(ErrorKind::InvalidSpec, "pants index out of range");
            ++degree[n];
        }
        root[find(e[0])] = find(e[1]);
    }
    for (int n = 0; n < np; ++n) {
        if (degree[n] != 3) throw Error(ErrorKind::InvalidSpec, "pants graph is not trivalent");
        if (find(n) != find(0)) throw Error(ErrorKind::InvalidSpec, "pants graph is not connected");
    }
    for (double l : lengths) {
        if (!(l > 0.0) || !std::isfinite(l)) throw Error(ErrorKind::InvalidSpec, "lengths must be positive");
    }
    for (double t : twists) {
        if (!(t >= -0.5 && t <= 0.5)) throw Error(ErrorKind::InvalidSpec, "twists must lie in [-1/2, 1/2]");
    }
}

SurfaceSpec SurfaceSpec::from_json(const nlohmann::json& j) {
    SurfaceSpec s;
    try {
        if (j.contains("format") && j.at("format") != "surface-spec-v1") {
            throw Error(ErrorKind::InvalidSpec, "unsupported format " + j.at("format").dump());
        }
        s.genus = j.at("genus").get<int>();
        s.pants_edges = j.at("pants_edges").get<std::vector<std::array<int, 2>>>();
        s.lengths = j.at("lengths").get<std::vector<double>>();
        s.twists = j.at("twists").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::InvalidSpec, e.what());
    }
    s.validate();
    return s;
}

nlohmann::json SurfaceSpec::to_json() const {
    return {{"format", "surface-spec-v1"},
            {"genus", genus},
            {"pants_edges", pants_edges},
            {"lengths", lengths},
            {"twists", twists}};
}

SurfaceSpec load_surface_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::InvalidSpec, "cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::InvalidSpec, path + ": " + e.what());
    }
    return SurfaceSpec::from_json(j);
}

double HexagonDecomposition::max_radius() const {
    double r = 0.0;
    for (const auto& h : hexagons) r = std::max(r, h.radius);
    return r;
}

nlohmann::json HexagonDecomposition::to_json() const {
    nlohmann::json hexes = nlohmann::json::array();
    for (int h = 0; h < num_hexagons(); ++h) {
        nlohmann::json sj = nlohmann::json::array();
        for (int k = 0; k < 6; ++k) {
            const HexSide& s = side(h, k);
            const Complex a = to_disk(s.start), b = to_disk(s.end);
            sj.push_back({{"label", label(6 * h + k)},
                          {"kind", s.kind == SideKind::CuffArc ? "cuff" : "seam"},
                          {"curve", s.curve},
                          {"glued_to", label(s.partner)},
                          {"length", s.length},
                          {"disk_endpoints", {a.real(), a.imag(), b.real(), b.imag()}}});
        }
        hexes.push_back({{"id", h}, {"pants", hexagons[h].pants}, {"half", hexagons[h].sign}, {"sides", sj}});
    }
    nlohmann::json adj = nlohmann::json::array();
    for (const auto& a : adjustments) adj.push_back({{"twist", a.twist}, {"shift", a.shift}, {"parity", a.parity}});
    return {{"format", "hexagons-v1"}, {"genus", genus}, {"hexagons", hexes}, {"twist_adjustments", adj}};
}

Holonomy build_holonomy(const SurfaceSpec& spec) {
    const HexagonDecomposition dec = build_geometry(spec);
    Holonomy hol;

    const auto parent = tree_parent_sides(dec);
    for (int s = 0; s < dec.num_labels(); ++s) {
        const int p = dec.partner(s);
        if (p < s || is_tree_side(parent, dec, s)) continue;
        hol.generators.push_back(dec.placement[s / 6] * dec.sides[s].pairing * dec.placement[p / 6].inverse());
    }

    for (int h = 0; h < dec.num_hexagons(); ++h) {
        for (int k = 0; k < 6; ++k) {
            Isometry c;
            double angle = 0.0;
            int ch = h, ck = k, steps = 0;
            do {
                angle += dec.hexagons[ch].angles[ck];
                const int s = 6 * ch + (ck + 5) % 6;
                c = c * dec.sides[s].pairing;
                const int p = dec.partner(s);
                ch = p / 6;
                ck = p % 6;
                ++steps;
            } while ((ch != h || ck != k) && steps <= 12);
            if (ch != h || ck != k || std::abs(angle - 2.0 * std::numbers::pi) > 1e-7) {
                throw Error(ErrorKind::DegenerateDecomposition, "vertex cycle does not close");
            }
            hol.relator_defect = std::max(hol.relator_defect, c.distance_pm(Isometry{}));
        }
    }

    const auto slots = assign_slots(spec);
    hol.curve_elements.resize(spec.num_curves());
    for (int n = 0; n < spec.num_pants(); ++n) {
        for (int k = 0; k < 3; ++k) {
            if (slots[n][k].role != 0) continue;
            const int j = slots[n][k].curve;
            const int hp = 2 * n, hm = 2 * n + 1;
            const Isometry loop = dec.sides[6 * hp + cuff_side(0, k) + 1].pairing *
                                  dec.sides[6 * hm + cuff_side(1, k) + 1].pairing;
            hol.curve_elements[j] = dec.placement[hp] * loop * dec.placement[hp].inverse();
            const double expect = 2.0 * std::cosh(spec.lengths[j] / 2.0);
            hol.curve_trace_error = std::max(hol.curve_trace_error, std::abs(hol.curve_elements[j].trace() - expect));
        }
    }
    return hol;
}

HexagonDecomposition build_hexagon_decomposition(const SurfaceSpec& spec, const Holonomy& hol) {
    if (hol.relator_defect > 1e-7) {
        throw Error(ErrorKind::DegenerateDecomposition, "holonomy relator defect too large");
    }
    return build_geometry(spec);
}

double systole(const SurfaceSpec& spec, const Holonomy& hol, double search_radius) {
    double longest = 0.0;
    for (double l : spec.lengths) longest = std::max(longest, l);
    if (search_radius < longest) {
        throw Error(ErrorKind::RadiusTooSmall, "search radius below the longest pants curve");
    }
    const HexagonDecomposition dec = build_hexagon_decomposition(spec, hol);
    double best = longest;
    for (int h = 0; h < dec.num_hexagons(); ++h) {
        const TileBall ball(dec, h, search_radius + 2.0 * dec.hexagons[h].radius);
        for (const Isometry& g : ball.deck_elements(search_radius + 2.0 * dec.hexagons[h].radius)) {
            if (g.near_identity(1e-6)) continue;
            best = std::min(best, translation_length(g));
        }
    }
    return best;
}

ConstantsLedger constants_ledger(int genus, double sys) {
    ConstantsLedger c;
    c.genus = genus;
    c.sys = sys;
    c.I_bound = 4.0 / (sys * sys);
    c.bers_bound = 26.0 * (genus - 1);
    c.cX_bound = c.I_bound * (21.0 * genus - 21.0) * c.bers_bound + 12.0 / sys;
    c.bX_bound = std::numbers::e * c.cX_bound;
    c.bg_bound = 385.0 * (genus - 1);
    c.bX_closed_form = 5974.0 * (genus - 1) * (genus - 1) / (sys * sys);
    c.closed_form_smaller = c.bX_closed_form < c.bX_bound;
    return c;
}

ConstantsLedger constants_ledger(const SurfaceSpec& spec, const Holonomy& hol) {
    double longest = 0.0;
    for (double l : spec.lengths) longest = std::max(longest, l);
    return constants_ledger(spec.genus, systole(spec, hol, longest));
}

nlohmann::json ConstantsLedger::to_json() const {
    return {{"format", "ledger-v1"},
            {"genus", genus},
            {"sys", sys},
            {"I_bound", I_bound},
            {"bers_bound", bers_bound},
            {"cX_bound", cX_bound},
            {"bX_bound", bX_bound},
            {"bg_bound", bg_bound},
            {"bX_closed_form", bX_closed_form},
            {"closed_form_smaller", closed_form_smaller}};
}

}  // namespace gcl
