#include "gcl/hyp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gcl {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NotHyperbolic: return "NotHyperbolic";
        case ErrorKind::DegenerateSpec: return "DegenerateSpec";
        case ErrorKind::DegenerateDecomposition: return "DegenerateDecomposition";
        case ErrorKind::InvalidSpec: return "InvalidSpec";
        case ErrorKind::RadiusTooSmall: return "RadiusTooSmall";
        case ErrorKind::BudgetExceeded: return "BudgetExceeded";
        case ErrorKind::VertexDegeneracy: return "VertexDegeneracy";
        case ErrorKind::OnSkeleton: return "OnSkeleton";
        case ErrorKind::EdgeAmbiguity: return "EdgeAmbiguity";
        case ErrorKind::SameClass: return "SameClass";
        case ErrorKind::WindowTooSmall: return "WindowTooSmall";
        case ErrorKind::TransitivityViolation: return "TransitivityViolation";
        case ErrorKind::InconsistentWords: return "InconsistentWords";
        case ErrorKind::TooLarge: return "TooLarge";
        case ErrorKind::GuardViolated: return "GuardViolated";
        case ErrorKind::IncompleteCensus: return "IncompleteCensus";
        case ErrorKind::InsufficientData: return "InsufficientData";
    }
    return "Unknown";
}

Isometry::Isometry(double a, double b, double c, double d) : m_{a, b, c, d} {
    canonicalize();
}

Isometry Isometry::translation(double d) {
    const double e = std::exp(d / 2.0);
    return Isometry(e, 0.0, 0.0, 1.0 / e);
}

Isometry Isometry::rotation(double angle) {
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    return Isometry(c, s, -s, c);
}

void Isometry::canonicalize(const Tolerances& tol) {
    const double dt = det();
    if (std::abs(dt - 1.0) > tol.det && dt > 0.0) {
        const double s = 1.0 / std::sqrt(dt);
        for (double& x : m_) x *= s;
    }
    bool flip = false;
    const double tr = trace();
    if (std::abs(tr) > tol.geo) {
        flip = tr < 0.0;
    } else {
        for (double x : m_) {
            if (std::abs(x) > 1e-12) {
                flip = x < 0.0;
                break;
            }
        }
    }
    if (flip) {
        for (double& x : m_) x = -x;
    }
}

Isometry Isometry::operator*(const Isometry& o) const {
    return Isometry(m_[0] * o.m_[0] + m_[1] * o.m_[2], m_[0] * o.m_[1] + m_[1] * o.m_[3],
                    m_[2] * o.m_[0] + m_[3] * o.m_[2], m_[2] * o.m_[1] + m_[3] * o.m_[3]);
}

Complex Isometry::apply(Complex z) const {
    return (m_[0] * z + m_[1]) / (m_[2] * z + m_[3]);
}

ProjPoint Isometry::apply(ProjPoint v) const {
    ProjPoint r{m_[0] * v.p + m_[1] * v.q, m_[2] * v.p + m_[3] * v.q};
    const double n = std::hypot(r.p, r.q);
    if (n > 0.0) {
        r.p /= n;
        r.q /= n;
    }
    return r;
}

double Isometry::distance_pm(const Isometry& o) const {
    double plus = 0.0;
    double minus = 0.0;
    for (int k = 0; k < 4; ++k) {
        plus = std::max(plus, std::abs(m_[k] - o.m_[k]));
        minus = std::max(minus, std::abs(m_[k] + o.m_[k]));
    }
    return std::min(plus, minus);
}

Isometry Isometry::renormalized() const {
    Isometry r = *this;
    const double s = 1.0 / std::sqrt(det());
    for (double& x : r.m_) x *= s;
    return r;
}

BoundaryPoint BoundaryPoint::from_proj(ProjPoint v) {
    double a = 2.0 * std::atan2(-v.q, v.p);
    const double two_pi = 2.0 * std::numbers::pi;
    a = std::fmod(a, two_pi);
    if (a < 0.0) a += two_pi;
    if (a >= two_pi) a -= two_pi;
    return {a};
}

double distance(Complex z, Complex w) {
    const double num = std::abs(z - w);
    return 2.0 * std::asinh(num / (2.0 * std::sqrt(z.imag() * w.imag())));
}

Complex to_disk(Complex z) {
    const Complex i(0.0, 1.0);
    return (z - i) / (z + i);
}

Complex from_disk(Complex w) {
    const Complex i(0.0, 1.0);
    return i * (1.0 + w) / (1.0 - w);
}

Isometry frame_from_points(Complex p, Complex q) {
    const double x = p.real();
    const double y = p.imag();
    const double sy = std::sqrt(y);
    // z -> (z - x) / y
    const Isometry to_i(1.0 / sy, -x / sy, 0.0, sy);
    const Complex w = to_i.apply(q);
    const double theta = std::arg(to_disk(w));
    return to_i.inverse() * Isometry::rotation(theta);
}

Isometry normalizer(ProjPoint from, ProjPoint to) {
    double a1 = to.p, a2 = to.q, r1 = from.p, r2 = from.q;
    double dt = a1 * r2 - r1 * a2;
    if (dt < 0.0) {
        r1 = -r1;
        r2 = -r2;
        dt = -dt;
    }
    if (dt <= 0.0) throw Error(ErrorKind::NotHyperbolic, "normalizer: coincident endpoints");
    const double s = 1.0 / std::sqrt(dt);
    const Isometry inv(a1 * s, r1 * s, a2 * s, r2 * s);
    return inv.inverse();
}

Complex centroid(std::span<const Complex> pts) {
    double t = 0.0, u = 0.0, v = 0.0;
    for (Complex z : pts) {
        const double r2 = std::norm(z);
        t += (1.0 + r2) / (2.0 * z.imag());
        u += z.real() / z.imag();
        v += (r2 - 1.0) / (2.0 * z.imag());
    }
    const double n = std::sqrt(t * t - u * u - v * v);
    t /= n;
    u /= n;
    v /= n;
    const double y = 1.0 / (t - v);
    return {u * y, y};
}

Complex segment_point(Complex p, Complex q, double t) {
    const Isometry f = frame_from_points(p, q);
    const double d = distance(p, q);
    return f.apply(Complex(0.0, std::exp(t * d)));
}

bool is_hyperbolic(const Isometry& g, const Tolerances& tol) {
    return std::abs(g.trace()) > 2.0 + tol.geo;
}

double translation_length(const Isometry& g, const Tolerances& tol) {
    const double tr = std::abs(g.trace());
    if (tr <= 2.0 + tol.geo) {
        throw Error(ErrorKind::NotHyperbolic, "|trace| = " + std::to_string(tr));
    }
    return 2.0 * std::acosh(tr / 2.0);
}

GeodesicLine axis(const Isometry& g, const Tolerances& tol) {
    if (!is_hyperbolic(g, tol)) {
        throw Error(ErrorKind::NotHyperbolic, "axis of non-hyperbolic element");
    }
    const double t = g.trace();  // nonnegative by canonical form
    const double root = std::sqrt(t * t - 4.0);
    const double lam = (t + root) / 2.0;
    const double mu = 1.0 / lam;
    auto eigvec = [&](double e) {
        ProjPoint v1{g.b(), e - g.a()};
        ProjPoint v2{e - g.d(), g.c()};
        const double n1 = std::hypot(v1.p, v1.q);
        const double n2 = std::hypot(v2.p, v2.q);
        ProjPoint v = n1 >= n2 ? v1 : v2;
        const double n = std::max(n1, n2);
        v.p /= n;
        v.q /= n;
        return v;
    };
    return {eigvec(mu), eigvec(lam)};
}

double quad_fourth_side(double leg, double delta) {
    const double ch = std::cosh(leg);
    return std::acosh(ch * ch * (std::cosh(delta) - 1.0) + 1.0);
}

std::array<double, 3> right_hexagon_sides(double a, double b, double c) {
    auto opp = [](double x, double y, double z) {
        return std::acosh((std::cosh(y) * std::cosh(z) + std::cosh(x)) / (std::sinh(y) * std::sinh(z)));
    };
    return {opp(a, b, c), opp(b, c, a), opp(c, a, b)};
}

double ccw_angle_from(double from, double to) {
    const double two_pi = 2.0 * std::numbers::pi;
    double d = std::fmod(to - from, two_pi);
    if (d < 0.0) d += two_pi;
    return d;
}

}  // namespace gcl
