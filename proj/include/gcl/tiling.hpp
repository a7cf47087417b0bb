#pragma once

// Lifted hexagon tiles in the universal cover. A tile is a pair (C, h):
// the isometry C carries the model chart of hexagon h into chart 0.

#include <cstddef>
#include <optional>
#include <unordered_map>
#include <vector>

#include "gcl/surface.hpp"

namespace gcl {

struct Tile {
    Isometry chart;
    int hex = 0;
    Complex center;  // chart-0 image of the model center
    double dist = 0.0;  // from the ball origin
};

inline constexpr std::size_t kDefaultTileBudget = 20'000'000;

/// All tiles whose centers lie within `radius` + max hexagon radius of the
/// center of the placed base hexagon.
class TileBall {
public:
    TileBall(const HexagonDecomposition& dec, int base_hex, double radius,
             std::size_t budget = kDefaultTileBudget);

    const std::vector<Tile>& tiles() const { return tiles_; }
    int base_hex() const { return base_; }
    Complex origin() const { return origin_; }
    double radius() const { return radius_; }

    /// Deck elements C P_h^{-1} of tiles of the base type with center
    /// displacement at most `max_disp`, identity included.
    std::vector<Isometry> deck_elements(double max_disp) const;

    /// Index of the tile (chart, hex) or -1.
    int find(const Isometry& chart, int hex) const;

private:
    int lookup(Complex center, int hex) const;
    void insert(int index);

    const HexagonDecomposition* dec_;
    int base_;
    double radius_;
    Complex origin_;
    std::vector<Tile> tiles_;
    std::unordered_map<long long, std::vector<int>> grid_;
};

/// Crossing of a Euclidean ray {r e^{i theta}} with a geodesic side whose
/// frame (already expressed in the ray's chart) is `frame` and length `len`.
struct RayHit {
    double r = 0.0;      // Euclidean radius along the ray
    double param = 0.0;  // arclength from the side's start vertex
};

/// Returns 0, 1 or 2 hits (sorted by r). `collinear` is set when the side
/// lies on the ray's line (theta = pi/2 only).
std::vector<RayHit> ray_side_hits(const Isometry& frame, double len, double theta, bool* collinear = nullptr);

/// Signed hyperbolic distance from z to the line of a side; positive inside.
double side_margin(const Isometry& frame, Complex z);

struct Location {
    Isometry chart;
    int hex = 0;
    double margin = 0.0;  // distance from the point to the tile boundary
};

/// Walks the segment from the placed center of `base_hex` to `z` (chart 0).
/// Returns nullopt when the walk passes within `tol` of a vertex.
std::optional<Location> locate(const HexagonDecomposition& dec, int base_hex, Complex z, double tol = 1e-7);

}  // namespace gcl
