#pragma once

// Self and pairwise intersection numbers of closed geodesics, from hexagon
// chords and, independently, from linked endpoints of lifts.

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include <json.hpp>

#include "gcl/census.hpp"
#include "gcl/coder.hpp"
#include "gcl/tiling.hpp"

namespace gcl {

enum class CrossingType { One, TwoA, TwoB, Three };

const char* to_string(CrossingType t);

/// Type from shared start and end edges of two crossing chords.
CrossingType crossing_type(bool start_shared, bool end_shared);

struct CrossingRecord {
    int chord_a = 0;  // index into the first curve's chords
    int chord_b = 0;  // index into the second curve's chords (same curve for self crossings)
    int hex = 0;
    Complex point;    // model chart of `hex`
    bool on_edge = false;
    CrossingType type = CrossingType::One;
};

struct IntersectionCount {
    long long total = 0;
    std::array<long long, 4> by_type{};  // 1, 2a, 2b, 3
    bool multiplicity_adjusted = false;
    bool from_chords = true;  // false for linking counts, which carry no types
    std::vector<CrossingRecord> crossings;

    nlohmann::json to_json() const;
};

/// Transverse crossings between chords of `a` and chords of `b`, or among
/// the chords of `a` when `b` is null. Crossings on a glued edge are reported
/// once, from the side with the smaller global index.
std::vector<CrossingRecord> classify_crossings(const HexagonDecomposition& dec, const std::vector<Chord>& a,
                                               const std::vector<Chord>* b = nullptr);

/// Geometric intersection point of two chords of one hexagon, if any.
std::optional<Complex> chord_intersection(const Chord& a, const Chord& b);

IntersectionCount count_from(std::vector<CrossingRecord> crossings);

/// Number of crossings of the coded curve with pants curve `curve`.
int cuff_crossings(const HexagonDecomposition& dec, const SymbolicWord& w, int curve);

class IntersectionEngine {
public:
    IntersectionEngine(const HexagonDecomposition& dec, double sys);

    /// Chord count for primitive curves off the skeleton, the linking count
    /// (with multiplicity) otherwise.
    IntersectionCount self_intersection(const ClosedGeodesic& g) const;
    IntersectionCount pair_intersection(const ClosedGeodesic& a, const ClosedGeodesic& b) const;

    /// Default window: length plus four collar half-widths.
    double default_window(double length) const;

    /// Linked lift pairs modulo the deck group; k^2 i(root) for a k-th power.
    long long linking_self(const Isometry& g, std::optional<double> window = std::nullopt) const;
    long long linking_pair(const Isometry& a, const Isometry& b, std::optional<double> window = std::nullopt) const;

    const HexagonDecomposition& decomposition() const { return *dec_; }

private:
    struct Axis {
        Isometry g;
        double length;
        int hex;          // placed hexagon whose center is closest to the axis
        double offset;    // distance from that center to the axis
        Isometry to_ray;  // sends the axis to the imaginary axis, foot point to i
    };
    Axis prepare(const Isometry& g) const;
    /// Deck elements h with h(center of `type`) within `max_disp` of the
    /// center of `hex`.
    std::vector<Isometry> deck_near(int hex, int type, double max_disp) const;
    long long linked_lines(const Axis& a, const Axis& b, double window, bool same) const;
    int power_of(const Axis& a) const;

    const HexagonDecomposition* dec_;
    double sys_;
    mutable std::mutex mu_;
    mutable std::map<int, std::shared_ptr<const TileBall>> balls_;
};

}  // namespace gcl
