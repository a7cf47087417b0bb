#pragma once

// Genus-g surfaces from Fenchel-Nielsen data, cut into 4g-4 hexagons.

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

#include "gcl/hyp.hpp"

namespace gcl {

struct SurfaceSpec {
    int genus = 2;
    std::vector<std::array<int, 2>> pants_edges;  // one entry per pants curve
    std::vector<double> lengths;
    std::vector<double> twists;  // fraction of a full twist, in [-1/2, 1/2]

    /// Genus 2, theta graph, lengths (2, 2.3, 2.7), twists (0.11, -0.23, 0.05).
    static SurfaceSpec default_genus2();

    /// Throws InvalidSpec on structural problems.
    void validate() const;

    static SurfaceSpec from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    int num_pants() const { return 2 * genus - 2; }
    int num_curves() const { return 3 * genus - 3; }
};

SurfaceSpec load_surface_spec(const std::string& path);

enum class SideKind { CuffArc, Seam };

struct HexSide {
    SideKind kind = SideKind::Seam;
    int curve = -1;     // pants curve for cuff arcs, -1 for seams
    int partner = -1;   // global side index 6h'+k' glued to this one
    Complex start;      // endpoints in the hexagon's model chart
    Complex end;
    double length = 0.0;
    Isometry frame;     // sends i to start, upward ray along the side
    Isometry pairing;   // model chart of the partner hexagon -> neighbour across this side
};

struct Hexagon {
    int pants = 0;
    int sign = 0;  // 0 for the positive half of the pants, 1 for its mirror
    std::array<Complex, 6> vertices;  // vertex k is the start of side k
    std::array<double, 6> angles{};   // interior angles
    Complex center;
    double radius = 0.0;  // max distance from center to a vertex
};

/// Per pants curve: how the seams of the second pants were slid.
struct TwistAdjustment {
    double twist = 0.0;  // metric twist, twists[j] * lengths[j]
    double shift = 0.0;  // slide of the second pants' seam feet
    int parity = 0;      // which half of the second pants meets the first half-arc
};

struct HexagonDecomposition {
    int genus = 2;
    std::vector<Hexagon> hexagons;
    std::vector<HexSide> sides;           // 6 per hexagon, index 6h+k
    std::vector<Isometry> placement;      // model chart of h -> chart 0 (spanning tree)
    std::vector<TwistAdjustment> adjustments;

    int num_hexagons() const { return static_cast<int>(hexagons.size()); }
    int num_labels() const { return static_cast<int>(sides.size()); }
    const HexSide& side(int h, int k) const { return sides[6 * h + k]; }
    int partner(int s) const { return sides[s].partner; }
    double max_radius() const;

    /// Edge label e_{n}, 1-based, of side index s.
    static std::string label(int s) { return "e" + std::to_string(s + 1); }

    nlohmann::json to_json() const;
};

struct Holonomy {
    std::vector<Isometry> generators;      // deck transformations from non-tree side pairings
    double relator_defect = 0.0;           // worst vertex-cycle distance from +-I
    std::vector<Isometry> curve_elements;  // one deck element per pants curve
    double curve_trace_error = 0.0;
};

struct ConstantsLedger {
    int genus = 2;
    double sys = 0.0;
    double I_bound = 0.0;
    double bers_bound = 0.0;
    double cX_bound = 0.0;
    double bX_bound = 0.0;
    double bg_bound = 0.0;
    double bX_closed_form = 0.0;  // 5974(g-1)^2 / sys^2
    bool closed_form_smaller = false;

    nlohmann::json to_json() const;
};

Holonomy build_holonomy(const SurfaceSpec& spec);
HexagonDecomposition build_hexagon_decomposition(const SurfaceSpec& spec, const Holonomy& hol);

double systole(const SurfaceSpec& spec, const Holonomy& hol, double search_radius);

ConstantsLedger constants_ledger(int genus, double sys);
ConstantsLedger constants_ledger(const SurfaceSpec& spec, const Holonomy& hol);

}  // namespace gcl
