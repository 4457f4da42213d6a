// Metric-space layer: metrics on R^d points, finite point sets, distances to
// sets, Hausdorff distances, eps-neighborhood checks and greedy covers.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "apw/common.hpp"

namespace apw {

using Point = std::vector<double>;

enum class MetricKind { euclidean, chebyshev, custom };

inline const char* to_string(MetricKind k) {
    switch (k) {
        case MetricKind::euclidean: return "euclidean";
        case MetricKind::chebyshev: return "chebyshev";
        case MetricKind::custom: return "custom";
    }
    return "?";
}

// A metric rho on R^d. The bounded companion rho'(x,y) = min{1, rho(x,y)} is
// exposed separately; both are metrics.
class Metric {
public:
    using Fn = std::function<double(std::span<const double>, std::span<const double>)>;

    static Metric euclidean(int dim) { return Metric(MetricKind::euclidean, dim, {}); }
    static Metric chebyshev(int dim) { return Metric(MetricKind::chebyshev, dim, {}); }
    static Metric custom(int dim, Fn fn) {
        if (!fn) throw std::invalid_argument("Metric::custom: null function");
        return Metric(MetricKind::custom, dim, std::move(fn));
    }

    double operator()(std::span<const double> a, std::span<const double> b) const {
        check(a, b);
        switch (kind_) {
            case MetricKind::euclidean: {
                double s = 0.0;
                for (std::size_t i = 0; i < a.size(); ++i) {
                    const double d = a[i] - b[i];
                    s += d * d;
                }
                return std::sqrt(s);
            }
            case MetricKind::chebyshev: {
                double m = 0.0;
                for (std::size_t i = 0; i < a.size(); ++i)
                    m = std::max(m, std::abs(a[i] - b[i]));
                return m;
            }
            case MetricKind::custom: return fn_(a, b);
        }
        return 0.0;
    }

    // rho'
    double bounded(std::span<const double> a, std::span<const double> b) const {
        return std::min(1.0, (*this)(a, b));
    }

    double eval(std::span<const double> a, std::span<const double> b, bool use_bounded) const {
        return use_bounded ? bounded(a, b) : (*this)(a, b);
    }

    int dimension() const { return dim_; }
    MetricKind kind() const { return kind_; }

private:
    Metric(MetricKind kind, int dim, Fn fn) : kind_(kind), dim_(dim), fn_(std::move(fn)) {
        if (dim <= 0) throw std::invalid_argument("Metric: dimension must be positive");
    }

    void check(std::span<const double> a, std::span<const double> b) const {
        if (a.size() != static_cast<std::size_t>(dim_) || b.size() != static_cast<std::size_t>(dim_))
            throw std::invalid_argument("Metric: point dimension mismatch");
    }

    MetricKind kind_;
    int dim_;
    Fn fn_;
};

inline void validate_point(const Point& p, int dim) {
    if (p.size() != static_cast<std::size_t>(dim))
        throw std::invalid_argument("point dimension mismatch");
    for (double c : p)
        if (std::isnan(c)) throw std::invalid_argument("point has NaN coordinate");
}

// Nonempty finite set of points, canonicalized (lexicographic sort, exact
// dedup) so that set equality is plain vector equality.
class PointSet {
public:
    PointSet(std::initializer_list<Point> pts) : PointSet(std::vector<Point>(pts)) {}

    explicit PointSet(std::vector<Point> pts) : pts_(std::move(pts)) {
        if (pts_.empty()) throw std::invalid_argument("PointSet: empty");
        const int dim = static_cast<int>(pts_.front().size());
        for (const auto& p : pts_) validate_point(p, dim);
        std::sort(pts_.begin(), pts_.end());
        pts_.erase(std::unique(pts_.begin(), pts_.end()), pts_.end());
    }

    const std::vector<Point>& points() const { return pts_; }
    std::size_t size() const { return pts_.size(); }
    int dimension() const { return static_cast<int>(pts_.front().size()); }
    const Point& operator[](std::size_t i) const { return pts_[i]; }

    bool operator==(const PointSet& other) const { return pts_ == other.pts_; }

private:
    std::vector<Point> pts_;
};

// rho(x, F) = min over members.
inline double dist_point_set(std::span<const double> x, const PointSet& F, const Metric& m) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& y : F.points()) best = std::min(best, m(x, y));
    return best;
}

// Index of the nearest member (lowest index on ties; canonical order makes
// this deterministic).
inline std::size_t nearest_member(std::span<const double> x, const PointSet& F, const Metric& m) {
    std::size_t arg = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < F.size(); ++i) {
        const double d = m(x, F[i]);
        if (d < best) {
            best = d;
            arg = i;
        }
    }
    return arg;
}

inline double directed_hausdorff(const PointSet& A, const PointSet& B, const Metric& m) {
    double worst = 0.0;
    for (const auto& a : A.points()) worst = std::max(worst, dist_point_set(a, B, m));
    return worst;
}

// dist(A,B) = max of the two directed sup-inf distances; bounded variant
// clamps to min{1, dist(A,B)}.
inline double hausdorff(const PointSet& A, const PointSet& B, const Metric& m,
                        bool bounded = false) {
    const double d = std::max(directed_hausdorff(A, B, m), directed_hausdorff(B, A, m));
    return bounded ? std::min(1.0, d) : d;
}

// True iff F is contained in the open eps-neighborhood of the centers,
// i.e. every y in F has rho(y, some center) < eps (strict).
inline bool eps_net_check(const std::vector<Point>& centers, const PointSet& F, double eps,
                          const Metric& m) {
    if (centers.empty()) throw std::invalid_argument("eps_net_check: no centers");
    if (eps <= 0.0) throw std::invalid_argument("eps_net_check: eps must be positive");
    for (const auto& y : F.points()) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& c : centers) best = std::min(best, m(y, c));
        if (!(best < eps)) return false;
    }
    return true;
}

// Greedy farthest-point cover: centers drawn from pts until every point lies
// strictly within delta of some center. Deterministic (first point seeds,
// ties break to the lowest index).
inline std::vector<Point> greedy_cover(const std::vector<Point>& pts, double delta,
                                       const Metric& m) {
    if (pts.empty()) throw std::invalid_argument("greedy_cover: no points");
    if (delta <= 0.0) throw std::invalid_argument("greedy_cover: delta must be positive");
    std::vector<Point> centers;
    std::vector<double> dmin(pts.size(), std::numeric_limits<double>::infinity());
    std::size_t next = 0;
    while (true) {
        centers.push_back(pts[next]);
        double worst = 0.0;
        std::size_t arg = 0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            dmin[i] = std::min(dmin[i], m(pts[i], centers.back()));
            if (dmin[i] > worst) {
                worst = dmin[i];
                arg = i;
            }
        }
        if (worst < delta) break;
        next = arg;
    }
    return centers;
}

}  // namespace apw
