#pragma once

// Admissible-word counts, the census count P_eps(T) with its theoretical
// bound, the entropy bound, and desk-scale growth rates.

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include <json.hpp>

#include "gcl/surface.hpp"

namespace gcl {

enum class Shape { Triangle, Hexagon };

struct AdmissibleQuery {
    int n = 1;
    double eps = 0.1;
    Shape shape = Shape::Hexagon;
    int n_max = 12;
    int threads = 1;
};

inline constexpr double kEpsInfinity = std::numeric_limits<double>::infinity();

int target_count(Shape s);

/// Arcs from n equally spaced points on the first edge of a regular polygon
/// to midpoints of the other edges; counts the assignments with at most
/// floor(eps n^2) transverse crossings. Throws TooLarge past n_max.
std::uint64_t count_admissible_exact(const AdmissibleQuery& q);

/// Number of transverse crossings for one assignment of targets (0-based
/// edge offsets from the first edge's successor).
int assignment_crossings(Shape shape, const std::vector<int>& targets);

struct AdmissibleBound {
    double value = 0.0;     // closed form with real exponents
    double log_value = 0.0;
    double binomial = 0.0;  // triangle: 2 s C(n, floor(s))^2, hexagon: its 4th power; s = sqrt(eps) n
};

/// Throws GuardViolated unless eps n^2 >= 1 and eps < 1.
AdmissibleBound admissible_bound(const AdmissibleQuery& q);

struct CensusRow {
    double length = 0.0;
    long long self_intersection = 0;
};

struct BoundReport {
    double T = 0.0;
    double eps = 0.0;
    long long census_count = 0;
    double log_thm_bound = 0.0;  // natural log of (bX/sqrt eps)^(bg sqrt eps T)
    double thm_bound = 0.0;      // may be +inf
    double ratio = 0.0;          // census_count / thm_bound, 0 when the bound overflows
    bool large_T_ok = false;     // census_count <= thm_bound

    nlohmann::json to_json() const;
};

/// Classes with length <= T and i <= eps T^2. Throws IncompleteCensus when
/// T exceeds the certified census length.
long long count_P(std::span<const CensusRow> rows, double certified_T, double T, double eps);
BoundReport census_P(std::span<const CensusRow> rows, double certified_T, double T, double eps,
                     const ConstantsLedger& ledger);

/// bg sqrt(i) |log(bX / sqrt(i))|, zero for i = 0.
double entropy_bound(double i_cc, const ConstantsLedger& ledger);

struct GrowthEstimate {
    double slope = 0.0;      // least squares slope of log count against T
    double intercept = 0.0;
    std::vector<double> log_over_T;
};

/// Throws InsufficientData with fewer than three rows or a zero count.
GrowthEstimate growth_rate_estimate(std::span<const BoundReport> rows);

}  // namespace gcl
