#pragma once

// Hyperbolic plane primitives. Matrix algebra lives in the upper half-plane;
// boundary ordering uses angles on the Poincare disk (fixed Cayley map).

#include <array>
#include <complex>
#include <span>

#include "gcl/error.hpp"

namespace gcl {

using Complex = std::complex<double>;

struct Tolerances {
    double det = 1e-12;  // renormalize when |det - 1| exceeds this
    double geo = 1e-9;   // geometric predicates
};

inline constexpr Tolerances kDefaultTol{};

/// Projective 2-vector (p : q) standing for the boundary point p/q of the
/// half-plane; q == 0 is infinity.
struct ProjPoint {
    double p = 1.0;
    double q = 0.0;
};

/// Orientation-preserving isometry of H^2, an element of PSL(2,R).
/// m and -m are the same isometry; stored with nonnegative trace.
class Isometry {
public:
    Isometry() = default;
    Isometry(double a, double b, double c, double d);

    static Isometry identity() { return {}; }
    /// Translation by distance `d` along the imaginary axis (i -> i e^d).
    static Isometry translation(double d);
    /// Counter-clockwise rotation by `angle` about i.
    static Isometry rotation(double angle);

    double a() const { return m_[0]; }
    double b() const { return m_[1]; }
    double c() const { return m_[2]; }
    double d() const { return m_[3]; }

    double trace() const { return m_[0] + m_[3]; }
    double det() const { return m_[0] * m_[3] - m_[1] * m_[2]; }

    Isometry operator*(const Isometry& o) const;
    Isometry inverse() const { return Isometry(m_[3], -m_[1], -m_[2], m_[0]); }

    Complex apply(Complex z) const;
    ProjPoint apply(ProjPoint v) const;

    /// max |entry| distance to +-other.
    double distance_pm(const Isometry& o) const;
    bool near_identity(double tol) const { return distance_pm(Isometry{}) < tol; }

    Isometry renormalized() const;

private:
    void canonicalize(const Tolerances& tol = kDefaultTol);
    std::array<double, 4> m_{1.0, 0.0, 0.0, 1.0};
};

/// Angle on the unit circle in [0, 2pi), Cayley image of a half-plane
/// boundary point.
struct BoundaryPoint {
    double angle = 0.0;

    static BoundaryPoint from_proj(ProjPoint v);
    static BoundaryPoint from_real(double x) { return from_proj({x, 1.0}); }
};

/// Oriented geodesic: from repelling to attracting endpoint.
struct GeodesicLine {
    ProjPoint from;
    ProjPoint to;

    BoundaryPoint from_angle() const { return BoundaryPoint::from_proj(from); }
    BoundaryPoint to_angle() const { return BoundaryPoint::from_proj(to); }
};

// ---- points --------------------------------------------------------------

double distance(Complex z, Complex w);
Complex to_disk(Complex z);
Complex from_disk(Complex w);

/// Isometry sending i to `p` and the upward unit direction at i to the
/// direction of the geodesic from `p` towards `q`.
Isometry frame_from_points(Complex p, Complex q);

/// Isometry normalizing the line through `p` (repelling) and `q` (attracting)
/// boundary points to the imaginary axis with p -> 0, q -> infinity.
Isometry normalizer(ProjPoint from, ProjPoint to);

/// Hyperboloid-model barycenter of a point set, projected back.
Complex centroid(std::span<const Complex> pts);

/// Point at parameter t in [0,1] along the geodesic segment [p, q]
/// (arclength fraction).
Complex segment_point(Complex p, Complex q, double t);

// ---- isometry invariants ---------------------------------------------------

double translation_length(const Isometry& g, const Tolerances& tol = kDefaultTol);
GeodesicLine axis(const Isometry& g, const Tolerances& tol = kDefaultTol);
bool is_hyperbolic(const Isometry& g, const Tolerances& tol = kDefaultTol);

// ---- trigonometry ----------------------------------------------------------

/// Fourth side of a quadrilateral with right angles at the two ends of a base
/// of length `delta`, both legs of length `leg`.
double quad_fourth_side(double leg, double delta);

/// Sides opposite to the alternating sides (a, b, c) of a right-angled
/// hexagon: result[0] is opposite a, etc.
std::array<double, 3> right_hexagon_sides(double a, double b, double c);

/// Boundary-interval helpers on the unit circle.
double ccw_angle_from(double from, double to);

}  // namespace gcl
