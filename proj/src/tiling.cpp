#include "gcl/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>

namespace gcl {

namespace {

constexpr double kGrid = 1e-9;
constexpr double kSameTile = 1e-6;
constexpr double kHitSlack = 1e-6;

long long grid_key(long long ix, long long iy) {
    return static_cast<long long>((static_cast<unsigned long long>(ix + (1LL << 31)) << 32) |
                                  static_cast<unsigned long long>(iy + (1LL << 31)));
}

ProjPoint unit(ProjPoint v) {
    const double n = std::hypot(v.p, v.q);
    return {v.p / n, v.q / n};
}

}  // namespace

TileBall::TileBall(const HexagonDecomposition& dec, int base_hex, double radius, std::size_t budget)
    : dec_(&dec), base_(base_hex), radius_(radius) {
    const Isometry start = dec.placement[base_hex];
    origin_ = start.apply(dec.hexagons[base_hex].center);
    const double limit = radius + dec.max_radius();

    tiles_.push_back({start, base_hex, origin_, 0.0});
    insert(0);
    std::size_t head = 0;
    while (head < tiles_.size()) {
        const Tile cur = tiles_[head++];
        for (int k = 0; k < 6; ++k) {
            const int s = 6 * cur.hex + k;
            const int hp = dec.partner(s) / 6;
            const Isometry chart = cur.chart * dec.sides[s].pairing;
            const Complex c = chart.apply(dec.hexagons[hp].center);
            const double d = distance(origin_, c);
            if (d > limit) continue;
            if (lookup(c, hp) >= 0) continue;
            if (tiles_.size() >= budget) {
                throw Error(ErrorKind::BudgetExceeded, "tile ball exceeds " + std::to_string(budget) + " tiles");
            }
            tiles_.push_back({chart, hp, c, d});
            insert(static_cast<int>(tiles_.size()) - 1);
        }
    }
}

int TileBall::lookup(Complex center, int hex) const {
    const Complex w = to_disk(center);
    const long long ix = static_cast<long long>(std::floor(w.real() / kGrid));
    const long long iy = static_cast<long long>(std::floor(w.imag() / kGrid));
    for (long long dx = -1; dx <= 1; ++dx) {
        for (long long dy = -1; dy <= 1; ++dy) {
            const auto it = grid_.find(grid_key(ix + dx, iy + dy));
            if (it == grid_.end()) continue;
            for (int idx : it->second) {
                const Tile& t = tiles_[idx];
                if (t.hex == hex && distance(t.center, center) < kSameTile) return idx;
            }
        }
    }
    return -1;
}

void TileBall::insert(int index) {
    const Complex w = to_disk(tiles_[index].center);
    const long long ix = static_cast<long long>(std::floor(w.real() / kGrid));
    const long long iy = static_cast<long long>(std::floor(w.imag() / kGrid));
    grid_[grid_key(ix, iy)].push_back(index);
}

std::vector<Isometry> TileBall::deck_elements(double max_disp) const {
    std::vector<Isometry> out;
    const Isometry inv = dec_->placement[base_].inverse();
    for (const Tile& t : tiles_) {
        if (t.hex == base_ && t.dist <= max_disp) out.push_back(t.chart * inv);
    }
    return out;
}

int TileBall::find(const Isometry& chart, int hex) const {
    return lookup(chart.apply(dec_->hexagons[hex].center), hex);
}

std::vector<RayHit> ray_side_hits(const Isometry& frame, double len, double theta, bool* collinear) {
    if (collinear) *collinear = false;
    const ProjPoint u = unit({frame.b(), frame.d()});  // image of 0
    const ProjPoint v = unit({frame.a(), frame.c()});  // image of infinity
    const double ct = std::cos(theta);
    const double A = u.q * v.q;
    const double B = (u.p * v.q + v.p * u.q) * ct;
    const double C = u.p * v.p;

    std::vector<double> roots;
    if (std::abs(A) < 1e-15 && std::abs(C) < 1e-15) {
        // line with endpoints 0 and infinity
        if (collinear && std::abs(ct) < 1e-12) *collinear = true;
        return {};
    }
    if (std::abs(A) <= 1e-15 * (std::abs(B) + std::abs(C))) {
        if (B != 0.0) roots.push_back(C / B);
    } else if (B == 0.0) {
        const double r2 = -C / A;
        if (r2 > 0.0) roots.push_back(std::sqrt(r2));
    } else {
        const double disc = B * B - 4.0 * A * C;
        if (disc < 0.0) return {};
        const double q = 0.5 * (B + std::copysign(std::sqrt(disc), B));
        roots.push_back(q / A);
        if (q != 0.0) roots.push_back(C / q);
    }

    std::vector<RayHit> hits;
    const Isometry inv = frame.inverse();
    const Complex dir(ct, std::sin(theta));
    for (double r : roots) {
        if (!(r > 0.0) || !std::isfinite(r)) continue;
        const Complex w = inv.apply(r * dir);
        const double param = std::log(std::abs(w));
        if (param < -kHitSlack || param > len + kHitSlack) continue;
        hits.push_back({r, param});
    }
    std::sort(hits.begin(), hits.end(), [](const RayHit& a, const RayHit& b) { return a.r < b.r; });
    return hits;
}

double side_margin(const Isometry& frame, Complex z) {
    const Complex w = frame.inverse().apply(z);
    return std::asinh(-w.real() / w.imag());
}

std::optional<Location> locate(const HexagonDecomposition& dec, int base_hex, Complex z, double tol) {
    Isometry chart = dec.placement[base_hex];
    int hex = base_hex;
    const Complex o = chart.apply(dec.hexagons[base_hex].center);
    const double d = distance(o, z);

    auto finish = [&]() {
        Location loc{chart, hex, std::numeric_limits<double>::infinity()};
        for (int k = 0; k < 6; ++k) {
            loc.margin = std::min(loc.margin, side_margin(chart * dec.side(hex, k).frame, z));
        }
        return loc;
    };
    if (d < 1e-12) return finish();

    const Isometry ray = frame_from_points(o, z).inverse();
    const double target = std::exp(d);
    double cur = 1.0;
    int entry = -1;
    for (int step = 0; step < 1'000'000; ++step) {
        int best_k = -1;
        RayHit best{std::numeric_limits<double>::infinity(), 0.0};
        for (int k = 0; k < 6; ++k) {
            if (k == entry) continue;
            const HexSide& side = dec.side(hex, k);
            bool collinear = false;
            const auto hits = ray_side_hits(ray * chart * side.frame, side.length, std::numbers::pi / 2.0, &collinear);
            if (collinear) return std::nullopt;
            for (const RayHit& h : hits) {
                if (h.r > cur * (1.0 - 1e-12) && h.r < best.r) {
                    best = h;
                    best_k = k;
                }
            }
        }
        if (best_k < 0) return std::nullopt;
        if (best.r >= target) return finish();
        const double len = dec.side(hex, best_k).length;
        if (best.param < tol || best.param > len - tol) return std::nullopt;
        const int s = 6 * hex + best_k;
        chart = chart * dec.sides[s].pairing;
        const int p = dec.partner(s);
        hex = p / 6;
        entry = p % 6;
        cur = best.r;
    }
    return std::nullopt;
}

}  // namespace gcl
