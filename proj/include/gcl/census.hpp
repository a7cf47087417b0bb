#pragma once

// Closed geodesics up to a length bound, one per unoriented free homotopy class.

#include <cstddef>
#include <string>
#include <vector>

#include "gcl/surface.hpp"
#include "gcl/tiling.hpp"

namespace gcl {

struct ClosedGeodesic {
    std::vector<int> word;  // class signature over side labels
    Isometry matrix;        // chart 0
    double length = 0.0;
    bool primitive = true;
    int power = 1;

    std::string word_string() const;
};

struct CensusOptions {
    bool primitive_only = true;
    std::size_t budget = kDefaultTileBudget;
    int threads = 1;
};

std::vector<ClosedGeodesic> enumerate_geodesics(const HexagonDecomposition& dec, double max_length,
                                                const CensusOptions& opts = {});

/// Canonical form of a cyclic side word, equal for conjugate and inverse walks.
std::vector<int> dedup_signature(const HexagonDecomposition& dec, const std::vector<int>& word);

/// Signature of the unoriented class of `g`, from left-hypercycle cutting
/// sequences of g and g^-1.
std::vector<int> class_signature(const HexagonDecomposition& dec, const Isometry& g);

std::string word_to_string(const std::vector<int>& w);

}  // namespace gcl
