#pragma once

// Proper ordering of crossing points on each edge, the rebuilt curve with
// those positions, and the edge words that determine it.

#include <vector>

#include <json.hpp>

#include "gcl/coder.hpp"
#include "gcl/intersection.hpp"

namespace gcl {

enum class Relative { LeftOf, RightOf, Stacked };

/// Relative position of crossing points p and q (indices into w.letters,
/// same letter) on their common edge, seen from the hexagon of their
/// forward arcs. Right means towards the end vertex of the side.
Relative proper_compare(const HexagonDecomposition& dec, const SymbolicWord& w, int p, int q);

/// Crossing points with letter `side`, left to right. Throws
/// TransitivityViolation if the pairwise relation is not a linear order.
std::vector<int> proper_order(const HexagonDecomposition& dec, const SymbolicWord& w, int side);

/// Position of a crossing point for the geometric order: increases from the
/// start vertex of the side towards its end.
double forward_key(const HexagonDecomposition& dec, const SymbolicWord& w, int p);

struct EdgePointSystem {
    std::vector<std::vector<int>> outgoing;  // per side, crossing indices left to right
    std::vector<double> param;               // per crossing index, along the side of its letter
    int stacked = 0;                         // pairs with identical itineraries
};

struct ModifiedCurve {
    SymbolicWord base;
    EdgePointSystem points;
    std::vector<Chord> arcs;  // arc t runs in the hexagon of letter t
    IntersectionCount crossings;

    nlohmann::json to_json() const;
};

struct PhiOptions {
    bool proper_ordering = true;  // false keeps word order on each edge (fault injection)
};

/// Places the crossing points of each edge at equally spaced parameters in
/// the middle 80% of the edge, in proper order, and joins them by chords.
ModifiedCurve build_phi(const HexagonDecomposition& dec, const SymbolicWord& w, const PhiOptions& opts = {});

struct EdgeWords {
    std::vector<std::vector<int>> outgoing;  // per side: exit side of each outgoing arc
    std::vector<std::vector<int>> incoming;  // per side: entry side of each incoming arc

    int count() const { return static_cast<int>(outgoing.size() + incoming.size()); }
    nlohmann::json to_json() const;
};

EdgeWords extract_edge_words(const HexagonDecomposition& dec, const ModifiedCurve& mc);

/// Letters of the curve determined by the edge words; geometry left empty.
/// Throws InconsistentWords when the words cannot come from one closed curve.
SymbolicWord reconstruct_word(const HexagonDecomposition& dec, const EdgeWords& words);

}  // namespace gcl
