#include "gcl/bounds.hpp"

#include <array>
#include <cmath>
#include <complex>

#include "gcl/error.hpp"
#include "gcl/parallel.hpp"

namespace gcl {

namespace {

using Point = std::complex<double>;

double orient(Point p, Point q, Point r) {
    const Point u = q - p, v = r - p;
    return u.real() * v.imag() - u.imag() * v.real();
}

bool proper_cross(Point p, Point q, Point r, Point s) {
    return orient(p, q, r) * orient(p, q, s) < 0.0 && orient(r, s, p) * orient(r, s, q) < 0.0;
}

// Regular polygon with vertices on the unit circle, counter-clockwise.
struct Model {
    std::vector<Point> starts;   // points on the first edge
    std::vector<Point> targets;  // midpoints of the other edges

    Model(Shape shape, int n) {
        const int k = shape == Shape::Hexagon ? 6 : 3;
        std::vector<Point> v(k);
        for (int i = 0; i < k; ++i) v[i] = std::polar(1.0, 2.0 * M_PI * i / k);
        for (int j = 0; j < n; ++j) {
            const double t = 0.1 + 0.8 * (j + 0.5) / n;
            starts.push_back(v[0] + t * (v[1] - v[0]));
        }
        for (int i = 1; i < k; ++i) targets.push_back(0.5 * (v[i] + v[(i + 1) % k]));
    }
};

}  // namespace

int target_count(Shape s) { return s == Shape::Hexagon ? 5 : 2; }

int assignment_crossings(Shape shape, const std::vector<int>& targets) {
    const int n = static_cast<int>(targets.size());
    const Model m(shape, n);
    int c = 0;
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            c += proper_cross(m.starts[a], m.targets[targets[a]], m.starts[b], m.targets[targets[b]]);
        }
    }
    return c;
}

std::uint64_t count_admissible_exact(const AdmissibleQuery& q) {
    if (q.n < 1) throw Error(ErrorKind::InvalidSpec, "n must be positive");
    if (!(q.eps > 0.0)) throw Error(ErrorKind::InvalidSpec, "eps must be positive");
    if (q.n > q.n_max) throw Error(ErrorKind::TooLarge, "exhaustive count limited to n <= " + std::to_string(q.n_max));
    const int n = q.n;
    const int k = target_count(q.shape);
    const double limit_real = std::floor(q.eps * n * n);
    const long long limit = std::isfinite(limit_real) ? static_cast<long long>(limit_real) : n * n;
    const Model m(q.shape, n);

    // cross[((a * n + b) * k + ta) * k + tb] for a < b.
    std::vector<char> cross(static_cast<std::size_t>(n) * n * k * k, 0);
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            for (int ta = 0; ta < k; ++ta) {
                for (int tb = 0; tb < k; ++tb) {
                    cross[((a * n + b) * k + ta) * k + tb] =
                        proper_cross(m.starts[a], m.targets[ta], m.starts[b], m.targets[tb]);
                }
            }
        }
    }

    std::vector<std::uint64_t> by_first(k, 0);
    parallel_for(k, q.threads, [&](int first) {
        std::vector<int> t(n, 0);
        t[0] = first;
        std::uint64_t count = 0;
        auto dfs = [&](auto&& self, int j, long long crossings) -> void {
            if (j == n) {
                ++count;
                return;
            }
            for (int tj = 0; tj < k; ++tj) {
                long long c = crossings;
                for (int a = 0; a < j && c <= limit; ++a) c += cross[((a * n + j) * k + t[a]) * k + tj];
                if (c > limit) continue;
                t[j] = tj;
                self(self, j + 1, c);
            }
        };
        dfs(dfs, 1, 0);
        by_first[first] = count;
    });
    std::uint64_t total = 0;
    for (std::uint64_t c : by_first) total += c;
    return total;
}

AdmissibleBound admissible_bound(const AdmissibleQuery& q) {
    if (!(q.eps > 0.0) || !(q.eps < 1.0) || q.eps * q.n * q.n < 1.0) {
        throw Error(ErrorKind::GuardViolated, "bound needs 1/n^2 <= eps < 1");
    }
    const double s = std::sqrt(q.eps) * q.n;
    const double log_tri = std::log(2.0 * s) + 2.0 * s * (1.0 - 0.5 * std::log(q.eps));
    const int fs = static_cast<int>(std::floor(s));
    const double log_binom = std::lgamma(q.n + 1.0) - std::lgamma(fs + 1.0) - std::lgamma(q.n - fs + 1.0);
    const double log_tri_binom = std::log(2.0 * s) + 2.0 * log_binom;
    const double power = q.shape == Shape::Hexagon ? 4.0 : 1.0;
    AdmissibleBound b;
    b.log_value = power * log_tri;
    b.value = std::exp(b.log_value);
    b.binomial = std::exp(power * log_tri_binom);
    return b;
}

long long count_P(std::span<const CensusRow> rows, double certified_T, double T, double eps) {
    if (T > certified_T + 1e-12) {
        throw Error(ErrorKind::IncompleteCensus, "census certified only up to length " + std::to_string(certified_T));
    }
    const double cap = eps * T * T;
    long long n = 0;
    for (const CensusRow& r : rows) {
        if (r.length <= T + 1e-9 && static_cast<double>(r.self_intersection) <= cap) ++n;
    }
    return n;
}

BoundReport census_P(std::span<const CensusRow> rows, double certified_T, double T, double eps,
                     const ConstantsLedger& ledger) {
    BoundReport r;
    r.T = T;
    r.eps = eps;
    r.census_count = count_P(rows, certified_T, T, eps);
    if (!std::isfinite(eps)) {
        // No bound is claimed without the intersection filter.
        r.log_thm_bound = r.thm_bound = kEpsInfinity;
        r.large_T_ok = true;
        return r;
    }
    const double se = std::sqrt(eps);
    r.log_thm_bound = ledger.bg_bound * se * T * std::log(ledger.bX_bound / se);
    r.thm_bound = std::exp(r.log_thm_bound);
    r.ratio = std::isfinite(r.thm_bound) ? r.census_count / r.thm_bound : 0.0;
    r.large_T_ok = r.census_count == 0 || std::log(static_cast<double>(r.census_count)) <= r.log_thm_bound;
    return r;
}

nlohmann::json BoundReport::to_json() const {
    auto num = [](double x) -> nlohmann::json {
        if (std::isfinite(x)) return x;
        return x > 0 ? "inf" : "-inf";
    };
    return {{"T", T},
            {"eps", num(eps)},
            {"census_count", census_count},
            {"log_thm_bound", num(log_thm_bound)},
            {"thm_bound", num(thm_bound)},
            {"ratio", ratio},
            {"large_T_ok", large_T_ok}};
}

double entropy_bound(double i_cc, const ConstantsLedger& ledger) {
    if (i_cc <= 0.0) return 0.0;
    const double r = std::sqrt(i_cc);
    return ledger.bg_bound * r * std::abs(std::log(ledger.bX_bound / r));
}

GrowthEstimate growth_rate_estimate(std::span<const BoundReport> rows) {
    if (rows.size() < 3) throw Error(ErrorKind::InsufficientData, "need at least three rows");
    GrowthEstimate g;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const BoundReport& r : rows) {
        if (r.census_count <= 0) throw Error(ErrorKind::InsufficientData, "zero count at T = " + std::to_string(r.T));
        const double y = std::log(static_cast<double>(r.census_count));
        g.log_over_T.push_back(y / r.T);
        sx += r.T;
        sy += y;
        sxx += r.T * r.T;
        sxy += r.T * y;
    }
    const double n = static_cast<double>(rows.size());
    const double den = n * sxx - sx * sx;
    if (std::abs(den) < 1e-300) throw Error(ErrorKind::InsufficientData, "rows share one length");
    g.slope = (n * sxy - sx * sy) / den;
    g.intercept = (sy - g.slope * sx) / n;
    return g;
}

}  // namespace gcl
