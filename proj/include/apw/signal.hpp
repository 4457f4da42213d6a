// Sampled point-valued and set-valued signals on a uniform grid, plus the
// pointwise machinery built on them: generators, shifts with explicit
// overlap accounting, radius truncation, sgn, and superposition.

#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <variant>

#include "apw/metric.hpp"

namespace apw {

// Uniform sampling lattice: samples t_k = t0 + k*h for k = 0..n-1, window
// length L = n*h.
struct Grid {
    double t0;
    double h;
    std::size_t n;

    Grid(double t0_, double h_, std::size_t n_) : t0(t0_), h(h_), n(n_) {
        if (!(h > 0.0)) throw std::invalid_argument("Grid: step must be positive");
        if (n < 2) throw std::invalid_argument("Grid: need at least two samples");
    }

    double length() const { return h * static_cast<double>(n); }
    double time(std::size_t k) const { return t0 + static_cast<double>(k) * h; }

    bool operator==(const Grid& o) const { return t0 == o.t0 && h == o.h && n == o.n; }
};

inline void require_same_grid(const Grid& a, const Grid& b) {
    if (!(a == b)) throw std::invalid_argument("signals must share a grid");
}

// Point-valued sampled function t -> f(t) in (R^d, rho). Values are stored
// flat, row-major; immutable after construction.
class Signal {
public:
    Signal(Grid grid, Metric metric, std::vector<double> flat)
        : grid_(grid), metric_(std::move(metric)), data_(std::move(flat)) {
        const std::size_t d = static_cast<std::size_t>(metric_.dimension());
        if (data_.size() != grid_.n * d)
            throw std::invalid_argument("Signal: value count does not match grid");
        for (double v : data_)
            if (std::isnan(v)) throw std::invalid_argument("Signal: NaN value");
    }

    static Signal constant(const Grid& grid, const Metric& metric, const Point& x) {
        validate_point(x, metric.dimension());
        std::vector<double> flat;
        flat.reserve(grid.n * x.size());
        for (std::size_t k = 0; k < grid.n; ++k) flat.insert(flat.end(), x.begin(), x.end());
        return Signal(grid, metric, std::move(flat));
    }

    static Signal zeros(const Grid& grid, const Metric& metric) {
        return Signal(grid, metric, std::vector<double>(grid.n * metric.dimension(), 0.0));
    }

    const Grid& grid() const { return grid_; }
    const Metric& metric() const { return metric_; }
    int dimension() const { return metric_.dimension(); }
    std::size_t size() const { return grid_.n; }

    std::span<const double> value(std::size_t k) const {
        const std::size_t d = static_cast<std::size_t>(metric_.dimension());
        return {data_.data() + k * d, d};
    }

    const std::vector<double>& flat() const { return data_; }

private:
    Grid grid_;
    Metric metric_;
    std::vector<double> data_;
};

// Sampled multivalued map t -> F(t), each value a finite nonempty point set.
class SetValuedSignal {
public:
    SetValuedSignal(Grid grid, Metric metric, std::vector<PointSet> values)
        : grid_(grid), metric_(std::move(metric)), values_(std::move(values)) {
        if (values_.size() != grid_.n)
            throw std::invalid_argument("SetValuedSignal: value count does not match grid");
        for (const auto& F : values_)
            if (F.dimension() != metric_.dimension())
                throw std::invalid_argument("SetValuedSignal: member dimension mismatch");
    }

    const Grid& grid() const { return grid_; }
    const Metric& metric() const { return metric_; }
    std::size_t size() const { return grid_.n; }
    const PointSet& value(std::size_t k) const { return values_[k]; }

private:
    Grid grid_;
    Metric metric_;
    std::vector<PointSet> values_;
};

// Boolean mask on a grid; realizes a measurable set T and its indicator.
class Mask {
public:
    Mask(Grid grid, std::vector<std::uint8_t> bits) : grid_(grid), bits_(std::move(bits)) {
        if (bits_.size() != grid_.n)
            throw std::invalid_argument("Mask: bit count does not match grid");
    }

    static Mask full(const Grid& grid) { return Mask(grid, std::vector<std::uint8_t>(grid.n, 1)); }
    static Mask empty(const Grid& grid) { return Mask(grid, std::vector<std::uint8_t>(grid.n, 0)); }

    // Samples t_k with lo <= t_k < hi.
    static Mask interval(const Grid& grid, double lo, double hi) {
        std::vector<std::uint8_t> bits(grid.n, 0);
        for (std::size_t k = 0; k < grid.n; ++k) {
            const double t = grid.time(k);
            bits[k] = (t >= lo && t < hi) ? 1 : 0;
        }
        return Mask(grid, std::move(bits));
    }

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return grid_.n; }
    bool operator[](std::size_t k) const { return bits_[k] != 0; }
    const std::vector<std::uint8_t>& bits() const { return bits_; }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto b : bits_) c += b;
        return c;
    }
    double fraction() const { return static_cast<double>(count()) / static_cast<double>(grid_.n); }

    // Indicator as a scalar signal (values 0/1, euclidean metric).
    Signal indicator() const {
        std::vector<double> flat(grid_.n);
        for (std::size_t k = 0; k < grid_.n; ++k) flat[k] = bits_[k] ? 1.0 : 0.0;
        return Signal(grid_, Metric::euclidean(1), std::move(flat));
    }

    bool operator==(const Mask& o) const { return grid_ == o.grid_ && bits_ == o.bits_; }

private:
    Grid grid_;
    std::vector<std::uint8_t> bits_;
};

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

// Sum of c_j * exp(i lambda_j t); sampled as a d=2 signal (Re, Im).
struct ComplexTrigSpec {
    struct Term {
        std::complex<double> c;
        double lambda;
    };
    std::vector<Term> terms;
};

// Sum of amp_j * sin(omega_j t + phase_j); scalar output.
struct RealTrigSpec {
    struct Term {
        double amplitude;
        double omega;
        double phase = 0.0;
    };
    std::vector<Term> terms;
};

// One period of samples repeated over the grid (nearest-sample lookup).
struct PeriodicTemplateSpec {
    double period;
    int dim;
    std::vector<double> samples;  // flat, row-major, one period
};

// Limit-periodic style sum: sum_k decay^k * sin(2*pi*t / (base_period * 2^k)).
struct LimitPeriodicSpec {
    double base_period;
    int levels;
    double decay;
};

// Elementary function sum_j x_j * chi_{T_j}; `rest` fills uncovered samples.
struct StepSpec {
    std::vector<std::pair<Mask, Point>> pieces;
    std::optional<Point> rest;
};

struct NoiseSpec;

using GeneratorSpec = std::variant<ComplexTrigSpec, RealTrigSpec, PeriodicTemplateSpec,
                                   LimitPeriodicSpec, StepSpec, NoiseSpec>;

// Base generator plus uniform noise in [-amplitude, amplitude]^d, seeded.
struct NoiseSpec {
    std::shared_ptr<const GeneratorSpec> base;
    double amplitude;
    std::uint64_t seed;
};

inline Signal generate(const GeneratorSpec& spec, const Grid& grid);

namespace detail {

inline Signal generate_complex_trig(const ComplexTrigSpec& s, const Grid& grid) {
    if (s.terms.empty()) throw std::invalid_argument("generate: empty trig spec");
    std::vector<double> flat(grid.n * 2);
    for (std::size_t k = 0; k < grid.n; ++k) {
        const double t = grid.time(k);
        std::complex<double> v{0.0, 0.0};
        for (const auto& term : s.terms)
            v += term.c * std::exp(std::complex<double>(0.0, term.lambda * t));
        flat[2 * k] = v.real();
        flat[2 * k + 1] = v.imag();
    }
    return Signal(grid, Metric::euclidean(2), std::move(flat));
}

inline Signal generate_real_trig(const RealTrigSpec& s, const Grid& grid) {
    if (s.terms.empty()) throw std::invalid_argument("generate: empty trig spec");
    std::vector<double> flat(grid.n);
    for (std::size_t k = 0; k < grid.n; ++k) {
        const double t = grid.time(k);
        double v = 0.0;
        for (const auto& term : s.terms) v += term.amplitude * std::sin(term.omega * t + term.phase);
        flat[k] = v;
    }
    return Signal(grid, Metric::euclidean(1), std::move(flat));
}

inline Signal generate_periodic_template(const PeriodicTemplateSpec& s, const Grid& grid) {
    if (s.samples.empty() || s.dim <= 0 || s.samples.size() % s.dim != 0)
        throw std::invalid_argument("generate: bad periodic template");
    if (!(s.period > 0.0)) throw std::invalid_argument("generate: period must be positive");
    const std::size_t m = s.samples.size() / s.dim;
    std::vector<double> flat(grid.n * s.dim);
    for (std::size_t k = 0; k < grid.n; ++k) {
        double u = std::fmod(grid.time(k) - grid.t0, s.period);
        if (u < 0) u += s.period;
        std::size_t idx = static_cast<std::size_t>(std::llround(u / s.period * m)) % m;
        for (int c = 0; c < s.dim; ++c) flat[k * s.dim + c] = s.samples[idx * s.dim + c];
    }
    return Signal(grid, Metric::euclidean(s.dim), std::move(flat));
}

inline Signal generate_limit_periodic(const LimitPeriodicSpec& s, const Grid& grid) {
    if (s.levels < 1 || !(s.base_period > 0.0))
        throw std::invalid_argument("generate: bad limit-periodic spec");
    RealTrigSpec trig;
    double a = 1.0;
    double period = s.base_period;
    for (int k = 0; k < s.levels; ++k) {
        trig.terms.push_back({a, 2.0 * std::acos(-1.0) / period, 0.0});
        a *= s.decay;
        period *= 2.0;
    }
    return generate_real_trig(trig, grid);
}

inline Signal generate_step(const StepSpec& s, const Grid& grid) {
    if (s.pieces.empty()) throw std::invalid_argument("generate: empty step spec");
    const int dim = static_cast<int>(s.pieces.front().second.size());
    std::vector<double> flat(grid.n * dim, 0.0);
    std::vector<std::uint8_t> covered(grid.n, 0);
    for (const auto& [mask, x] : s.pieces) {
        require_same_grid(mask.grid(), grid);
        validate_point(x, dim);
        for (std::size_t k = 0; k < grid.n; ++k) {
            if (!mask[k]) continue;
            if (covered[k]) throw std::invalid_argument("generate: step masks overlap");
            covered[k] = 1;
            for (int c = 0; c < dim; ++c) flat[k * dim + c] = x[c];
        }
    }
    for (std::size_t k = 0; k < grid.n; ++k) {
        if (covered[k]) continue;
        if (!s.rest) throw std::invalid_argument("generate: step masks do not cover the grid");
        validate_point(*s.rest, dim);
        for (int c = 0; c < dim; ++c) flat[k * dim + c] = (*s.rest)[c];
    }
    return Signal(grid, Metric::euclidean(dim), std::move(flat));
}

inline Signal generate_noise(const NoiseSpec& s, const Grid& grid) {
    if (!s.base) throw std::invalid_argument("generate: noise spec without base");
    const Signal base = generate(*s.base, grid);
    std::mt19937_64 rng(s.seed);
    std::uniform_real_distribution<double> dist(-s.amplitude, s.amplitude);
    std::vector<double> flat = base.flat();
    for (double& v : flat) v += dist(rng);
    return Signal(grid, base.metric(), std::move(flat));
}

}  // namespace detail

inline Signal generate(const GeneratorSpec& spec, const Grid& grid) {
    return std::visit(
        [&](const auto& s) -> Signal {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ComplexTrigSpec>)
                return detail::generate_complex_trig(s, grid);
            else if constexpr (std::is_same_v<T, RealTrigSpec>)
                return detail::generate_real_trig(s, grid);
            else if constexpr (std::is_same_v<T, PeriodicTemplateSpec>)
                return detail::generate_periodic_template(s, grid);
            else if constexpr (std::is_same_v<T, LimitPeriodicSpec>)
                return detail::generate_limit_periodic(s, grid);
            else if constexpr (std::is_same_v<T, StepSpec>)
                return detail::generate_step(s, grid);
            else
                return detail::generate_noise(s, grid);
        },
        spec);
}

// ---------------------------------------------------------------------------
// Shifts and overlap
// ---------------------------------------------------------------------------

inline Signal restrict_signal(const Signal& f, std::size_t start, std::size_t count) {
    if (start + count > f.size() || count < 2)
        throw std::invalid_argument("restrict_signal: range out of bounds");
    const std::size_t d = static_cast<std::size_t>(f.dimension());
    std::vector<double> flat(f.flat().begin() + start * d, f.flat().begin() + (start + count) * d);
    return Signal(Grid(f.grid().time(start), f.grid().h, count), f.metric(), std::move(flat));
}

// f and f(.+tau) on their common overlap subgrid. tau snaps to the nearest
// grid multiple; shifts never wrap.
template <typename S>
struct OverlapPairT {
    S base;
    S shifted;
    double tau_snapped;
    double snap_error;
    std::size_t overlap;
};

using OverlapPair = OverlapPairT<Signal>;
using SetOverlapPair = OverlapPairT<SetValuedSignal>;

inline OverlapPair shift_overlap(const Signal& f, double tau) {
    double snap_err = 0.0;
    const std::int64_t s = snap_to_step(tau, f.grid().h, &snap_err);
    const std::size_t mag = static_cast<std::size_t>(s < 0 ? -s : s);
    if (mag + 2 > f.size())
        throw std::invalid_argument("shift: no overlap (|tau| too large for the window)");
    const std::size_t count = f.size() - mag;
    const std::size_t d = static_cast<std::size_t>(f.dimension());
    const std::size_t base_start = (s >= 0) ? 0 : mag;
    const std::size_t shift_start = (s >= 0) ? mag : 0;
    const Grid sub(f.grid().time(base_start), f.grid().h, count);
    std::vector<double> base_flat(f.flat().begin() + base_start * d,
                                  f.flat().begin() + (base_start + count) * d);
    std::vector<double> shift_flat(f.flat().begin() + shift_start * d,
                                   f.flat().begin() + (shift_start + count) * d);
    return {Signal(sub, f.metric(), std::move(base_flat)),
            Signal(sub, f.metric(), std::move(shift_flat)),
            static_cast<double>(s) * f.grid().h, snap_err, count};
}

inline SetOverlapPair shift_overlap(const SetValuedSignal& F, double tau) {
    double snap_err = 0.0;
    const std::int64_t s = snap_to_step(tau, F.grid().h, &snap_err);
    const std::size_t mag = static_cast<std::size_t>(s < 0 ? -s : s);
    if (mag + 2 > F.size())
        throw std::invalid_argument("shift: no overlap (|tau| too large for the window)");
    const std::size_t count = F.size() - mag;
    const std::size_t base_start = (s >= 0) ? 0 : mag;
    const std::size_t shift_start = (s >= 0) ? mag : 0;
    const Grid sub(F.grid().time(base_start), F.grid().h, count);
    std::vector<PointSet> base_vals, shift_vals;
    base_vals.reserve(count);
    shift_vals.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        base_vals.push_back(F.value(base_start + k));
        shift_vals.push_back(F.value(shift_start + k));
    }
    return {SetValuedSignal(sub, F.metric(), std::move(base_vals)),
            SetValuedSignal(sub, F.metric(), std::move(shift_vals)),
            static_cast<double>(s) * F.grid().h, snap_err, count};
}

// Shifted signal alone (on the overlap subgrid).
struct Shifted {
    Signal signal;
    double tau_snapped;
    double snap_error;
    std::size_t overlap;
};

inline Shifted shift(const Signal& f, double tau) {
    auto pair = shift_overlap(f, tau);
    return {std::move(pair.shifted), pair.tau_snapped, pair.snap_error, pair.overlap};
}

// ---------------------------------------------------------------------------
// Pointwise distance sequences (the raw material for all seminorms)
// ---------------------------------------------------------------------------

inline std::vector<double> pointwise_distance(const Signal& f, const Signal& g,
                                              bool bounded = false) {
    require_same_grid(f.grid(), g.grid());
    if (f.dimension() != g.dimension())
        throw std::invalid_argument("pointwise_distance: dimension mismatch");
    std::vector<double> rho(f.size());
    for (std::size_t k = 0; k < f.size(); ++k)
        rho[k] = f.metric().eval(f.value(k), g.value(k), bounded);
    return rho;
}

inline std::vector<double> pointwise_distance(const SetValuedSignal& F, const SetValuedSignal& G,
                                              bool bounded = false) {
    require_same_grid(F.grid(), G.grid());
    std::vector<double> rho(F.size());
    for (std::size_t k = 0; k < F.size(); ++k)
        rho[k] = hausdorff(F.value(k), G.value(k), F.metric(), bounded);
    return rho;
}

// rho(g(t), F(t)) per sample.
inline std::vector<double> pointwise_dist_to_sets(const Signal& g, const SetValuedSignal& F) {
    require_same_grid(g.grid(), F.grid());
    std::vector<double> rho(g.size());
    for (std::size_t k = 0; k < g.size(); ++k)
        rho[k] = dist_point_set(g.value(k), F.value(k), g.metric());
    return rho;
}

// ---------------------------------------------------------------------------
// Pointwise transforms
// ---------------------------------------------------------------------------

// f_R(x0; t): f(t) where rho(f(t), x0) <= R, else x0.
inline Signal truncate_fR(const Signal& f, const Point& x0, double R) {
    validate_point(x0, f.dimension());
    if (R < 0.0) throw std::invalid_argument("truncate_fR: R must be nonnegative");
    const std::size_t d = static_cast<std::size_t>(f.dimension());
    std::vector<double> flat = f.flat();
    for (std::size_t k = 0; k < f.size(); ++k) {
        if (f.metric()(f.value(k), x0) > R)
            std::copy(x0.begin(), x0.end(), flat.begin() + k * d);
    }
    return Signal(f.grid(), f.metric(), std::move(flat));
}

struct SgnResult {
    Signal signal;
    Mask zero_set;  // T = { t : f(t) = 0 }
};

// Pointwise h/|h| (euclidean norm), zero vector at zeros of f.
inline SgnResult sgn_signal(const Signal& f) {
    const std::size_t d = static_cast<std::size_t>(f.dimension());
    std::vector<double> flat(f.flat().size());
    std::vector<std::uint8_t> zero(f.size(), 0);
    for (std::size_t k = 0; k < f.size(); ++k) {
        auto v = f.value(k);
        double norm = 0.0;
        for (double c : v) norm += c * c;
        norm = std::sqrt(norm);
        if (norm == 0.0) {
            zero[k] = 1;
            continue;
        }
        for (std::size_t c = 0; c < d; ++c) flat[k * d + c] = v[c] / norm;
    }
    return {Signal(f.grid(), f.metric(), std::move(flat)), Mask(f.grid(), std::move(zero))};
}

// Built-in uniformly continuous maps for superposition.
class PointMap {
public:
    static PointMap identity(int dim) {
        PointMap m;
        m.kind_ = Kind::identity;
        m.in_dim_ = m.out_dim_ = dim;
        return m;
    }

    // x -> A x + b, A given row-major (out x in).
    static PointMap affine(int in_dim, int out_dim, std::vector<double> A, Point b) {
        if (A.size() != static_cast<std::size_t>(in_dim * out_dim) ||
            b.size() != static_cast<std::size_t>(out_dim))
            throw std::invalid_argument("PointMap::affine: shape mismatch");
        PointMap m;
        m.kind_ = Kind::affine;
        m.in_dim_ = in_dim;
        m.out_dim_ = out_dim;
        m.matrix_ = std::move(A);
        m.offset_ = std::move(b);
        return m;
    }

    // Coordinatewise polynomial clamped to [lo, hi] (keeps it uniformly
    // continuous and bounded on all of R^d).
    static PointMap clamped_polynomial(int dim, std::vector<double> coeffs, double lo, double hi) {
        if (coeffs.empty() || !(lo < hi))
            throw std::invalid_argument("PointMap::clamped_polynomial: bad parameters");
        PointMap m;
        m.kind_ = Kind::clamped_poly;
        m.in_dim_ = m.out_dim_ = dim;
        m.matrix_ = std::move(coeffs);
        m.lo_ = lo;
        m.hi_ = hi;
        return m;
    }

    // x -> rho(x, S), scalar output.
    static PointMap distance_to_set(PointSet S, Metric metric) {
        PointMap m;
        m.kind_ = Kind::dist_to_set;
        m.in_dim_ = metric.dimension();
        m.out_dim_ = 1;
        m.set_ = std::make_shared<PointSet>(std::move(S));
        m.set_metric_ = std::make_shared<Metric>(std::move(metric));
        return m;
    }

    int in_dimension() const { return in_dim_; }
    int out_dimension() const { return out_dim_; }

    Point apply(std::span<const double> x) const {
        if (x.size() != static_cast<std::size_t>(in_dim_))
            throw std::invalid_argument("PointMap: dimension mismatch");
        switch (kind_) {
            case Kind::identity: return Point(x.begin(), x.end());
            case Kind::affine: {
                Point y(out_dim_);
                for (int r = 0; r < out_dim_; ++r) {
                    double s = offset_[r];
                    for (int c = 0; c < in_dim_; ++c) s += matrix_[r * in_dim_ + c] * x[c];
                    y[r] = s;
                }
                return y;
            }
            case Kind::clamped_poly: {
                Point y(out_dim_);
                for (int c = 0; c < in_dim_; ++c) {
                    double s = 0.0;
                    for (auto it = matrix_.rbegin(); it != matrix_.rend(); ++it) s = s * x[c] + *it;
                    y[c] = std::clamp(s, lo_, hi_);
                }
                return y;
            }
            case Kind::dist_to_set: return {dist_point_set(x, *set_, *set_metric_)};
        }
        return {};
    }

private:
    enum class Kind { identity, affine, clamped_poly, dist_to_set };
    PointMap() = default;

    Kind kind_ = Kind::identity;
    int in_dim_ = 0;
    int out_dim_ = 0;
    std::vector<double> matrix_;  // affine matrix or polynomial coefficients (a0, a1, ...)
    Point offset_;
    double lo_ = 0.0, hi_ = 0.0;
    std::shared_ptr<PointSet> set_;
    std::shared_ptr<Metric> set_metric_;
};

inline Signal compose(const PointMap& F, const Signal& f) {
    if (F.in_dimension() != f.dimension())
        throw std::invalid_argument("compose: dimension mismatch");
    const std::size_t od = static_cast<std::size_t>(F.out_dimension());
    std::vector<double> flat(f.size() * od);
    for (std::size_t k = 0; k < f.size(); ++k) {
        const Point y = F.apply(f.value(k));
        std::copy(y.begin(), y.end(), flat.begin() + k * od);
    }
    return Signal(f.grid(), Metric::euclidean(F.out_dimension()), std::move(flat));
}

// Time-dependent family: the t-th map is applied at sample t. The built-in
// maps are uniformly continuous by construction; growth-style sufficient
// conditions for unbounded map families are out of scope and not checked.
inline Signal compose(const std::vector<PointMap>& family, const Signal& f) {
    if (family.size() != f.size())
        throw std::invalid_argument("compose: family size does not match grid");
    const int od = family.front().out_dimension();
    std::vector<double> flat(f.size() * od);
    for (std::size_t k = 0; k < f.size(); ++k) {
        if (family[k].out_dimension() != od || family[k].in_dimension() != f.dimension())
            throw std::invalid_argument("compose: dimension mismatch in family");
        const Point y = family[k].apply(f.value(k));
        std::copy(y.begin(), y.end(), flat.begin() + k * od);
    }
    return Signal(f.grid(), Metric::euclidean(od), std::move(flat));
}

}  // namespace apw
