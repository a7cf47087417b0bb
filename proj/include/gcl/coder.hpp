#pragma once

// Symbolic coding of closed geodesics by their crossings with the lifted
// hexagon tiling.

#include <numbers>
#include <vector>

#include <json.hpp>

#include "gcl/surface.hpp"

namespace gcl {

/// Piece of the curve inside one hexagon, in that hexagon's model chart.
struct Chord {
    int hex = 0;
    int in_side = 0;   // 0..5, side carrying the entry point (the letter)
    int out_side = 0;  // 0..5, side carrying the exit point
    double in_param = 0.0;  // arclength from the side's start vertex
    double out_param = 0.0;
    Complex in_point;
    Complex out_point;
};

/// Letter t is the global side index 6h+k of the crossing point t, taken in
/// the hexagon containing the arc that follows it. Chord t runs in that
/// hexagon from letter t to the partner of letter t+1.
struct SymbolicWord {
    std::vector<int> letters;
    std::vector<Chord> chords;
    std::vector<Isometry> charts;  // chart-0 placement of the hexagon of chord t
    Isometry matrix;               // conjugate of the input whose axis crosses a placed base hexagon
    double length = 0.0;

    int size() const { return static_cast<int>(letters.size()); }
    nlohmann::json to_json() const;
};

struct WalkOptions {
    double theta = std::numbers::pi / 2.0;  // pi/2 walks the axis; larger values walk a left hypercycle
    double vertex_tol = 1e-7;
    int max_crossings = 200000;
};

/// Develops the curve `g` (chart 0) through the tiling for one period.
/// Throws VertexDegeneracy, OnSkeleton, NotHyperbolic or BudgetExceeded.
SymbolicWord develop(const HexagonDecomposition& dec, const Isometry& g, const WalkOptions& opts = {});

/// Coding of the closed geodesic with holonomy `g`.
SymbolicWord code_word(const Isometry& g, const HexagonDecomposition& dec);

/// Cutting sequence of the left hypercycle at distance about `offset` from the
/// axis; defined for skeleton curves too.
std::vector<int> hypercycle_letters(const HexagonDecomposition& dec, const Isometry& g, double offset = 1e-4);

int combinatorial_length(const SymbolicWord& w);

/// Deck element obtained by following the letters around once, conjugated
/// into chart 0 through the placement of the first hexagon.
Isometry word_holonomy(const HexagonDecomposition& dec, const std::vector<int>& letters);

/// True when consecutive letters are sides of a common hexagon.
bool is_valid_walk(const HexagonDecomposition& dec, const std::vector<int>& letters);

class ItineraryCursor {
public:
    ItineraryCursor(const SymbolicWord& w, int position) : word_(&w), pos_(position) {}

    int position() const { return pos_; }
    int index(int t) const;
    /// Letter of f_t(p).
    int letter(int t) const { return word_->letters[index(t)]; }
    const Chord& chord(int t) const { return word_->chords[index(t)]; }
    const SymbolicWord& word() const { return *word_; }

private:
    const SymbolicWord* word_;
    int pos_;
};

/// Forward endpoint of the lift through the cursor's hexagon, in that
/// hexagon's model chart.
BoundaryPoint forward_boundary_point(const ItineraryCursor& cursor);
ProjPoint forward_endpoint(const ItineraryCursor& cursor);

// ---- cyclic words over the side alphabet ---------------------------------

std::vector<int> canonical_rotation(const std::vector<int>& w);
bool cyclically_equal(const std::vector<int>& a, const std::vector<int>& b);
/// Reverse the walk: reversed order, each letter replaced by its partner.
std::vector<int> inverse_word(const HexagonDecomposition& dec, const std::vector<int>& w);
/// Cancels backtracks (a letter followed by its partner), cyclically.
std::vector<int> cyclic_reduce(const HexagonDecomposition& dec, const std::vector<int>& w);
/// Smallest d with w = u^(n/d); returns n for primitive words.
int primitive_period(const std::vector<int>& w);

}  // namespace gcl
