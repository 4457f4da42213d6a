// Constructive decomposition machinery: covering centers, the sinusoidal
// separator and its level-by-level construction, level-set masks, mask
// algebra, and the decomposition of a signal into a disjoint mask family
// with per-mask centers.

#pragma once

#include "apw/almost_periodicity.hpp"
#include "apw/seminorms.hpp"

namespace apw {

// ---------------------------------------------------------------------------
// Covering centers
// ---------------------------------------------------------------------------

struct CoveringResult {
    std::vector<Point> centers;
    double achieved_fraction = 0.0;  // share of samples farther than delta from all centers
    double l_used = 0.0;
};

// Greedy farthest-point selection over the sample values until the fraction
// of samples farther than delta from every center drops below eps.
inline CoveringResult covering_centers(const Signal& f, double delta, double eps) {
    if (!(delta > 0.0)) throw std::invalid_argument("covering_centers: delta must be positive");
    if (!(eps > 0.0)) throw std::invalid_argument("covering_centers: eps must be positive");
    const Metric& m = f.metric();
    const std::size_t n = f.size();
    std::vector<double> dmin(n, std::numeric_limits<double>::infinity());
    CoveringResult out;
    out.l_used = f.grid().length();
    std::size_t next = 0;
    while (true) {
        const auto c = f.value(next);
        out.centers.emplace_back(c.begin(), c.end());
        std::size_t far_count = 0;
        double worst = -1.0;
        for (std::size_t k = 0; k < n; ++k) {
            dmin[k] = std::min(dmin[k], m(f.value(k), c));
            if (dmin[k] >= delta) ++far_count;
            if (dmin[k] > worst) {
                worst = dmin[k];
                next = k;
            }
        }
        out.achieved_fraction = static_cast<double>(far_count) / static_cast<double>(n);
        if (out.achieved_fraction < eps) break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Separation measure and the separator
// ---------------------------------------------------------------------------

namespace detail {

inline void require_scalar(const Signal& f, const char* who) {
    if (f.dimension() != 1) throw std::invalid_argument(std::string(who) + ": scalar signal required");
}

inline double separation_from_samples(const std::vector<double>& sum, double delta, double l,
                                      const Grid& grid) {
    const std::size_t m = window_samples(l, grid);
    std::vector<double> bad(sum.size());
    for (std::size_t k = 0; k < sum.size(); ++k) bad[k] = std::abs(sum[k]) < delta ? 1.0 : 0.0;
    return window_sup_mean(bad, m);
}

}  // namespace detail

// Worst-case fraction, over windows of length l, of samples where |f + g|
// dips below delta.
inline double separation_measure(const Signal& f, const Signal& g, double delta, double l) {
    detail::require_scalar(f, "separation_measure");
    detail::require_scalar(g, "separation_measure");
    require_same_grid(f.grid(), g.grid());
    std::vector<double> sum(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) sum[k] = f.value(k)[0] + g.value(k)[0];
    return detail::separation_from_samples(sum, delta, l, f.grid());
}

struct SeparatorLevel {
    double Delta_j;  // amplitude of the level term
    double alpha_j;  // frequency, in (2*pi/b) * N
    double delta_j;  // separation margin certified at this level
    double l_j;      // window length used by the level check
    double eps_j;    // 2^{-j-1}, the level's measure budget
};

// b-periodic sum g(t) = sum_j Delta_j sin(alpha_j t) with the amplitude
// chain Delta_0 = Delta/2, Delta_j < 2^{-(j+1)} Delta and
// Delta_j <= 2^{-(j-k)} delta_k for k < j, so sup|g| < Delta and the tail
// past level j stays within delta_{j-1}.
struct Separator {
    double base_period = 0.0;
    double Delta = 0.0;  // the sup-norm budget the separator was built for
    std::vector<SeparatorLevel> levels;

    double sup_norm_bound() const {
        double s = 0.0;
        for (const auto& lv : levels) s += lv.Delta_j;
        return s;
    }

    // sum_{k >= j} Delta_k
    double tail_bound(std::size_t j) const {
        double s = 0.0;
        for (std::size_t k = j; k < levels.size(); ++k) s += levels[k].Delta_j;
        return s;
    }

    double eval(double t) const {
        double s = 0.0;
        for (const auto& lv : levels) s += lv.Delta_j * std::sin(lv.alpha_j * t);
        return s;
    }

    Signal sample(const Grid& grid) const {
        std::vector<double> flat(grid.n);
        for (std::size_t k = 0; k < grid.n; ++k) flat[k] = eval(grid.time(k));
        return Signal(grid, Metric::euclidean(1), std::move(flat));
    }

    void check_invariants() const {
        double sum = 0.0;
        for (std::size_t j = 0; j < levels.size(); ++j) {
            const auto& lv = levels[j];
            if (j == 0) {
                if (lv.Delta_j != Delta / 2.0)
                    throw certificate_error("separator: Delta_0 must equal Delta/2");
            } else {
                if (!(lv.Delta_j < std::pow(2.0, -static_cast<double>(j + 1)) * Delta))
                    throw certificate_error("separator: amplitude chain violated vs Delta");
                for (std::size_t k = 0; k < j; ++k)
                    if (!(lv.Delta_j <=
                          std::pow(2.0, -static_cast<double>(j - k)) * levels[k].delta_j))
                        throw certificate_error("separator: amplitude chain violated vs delta_k");
            }
            sum += lv.Delta_j;
        }
        if (!(sum < Delta)) throw certificate_error("separator: sup norm bound violated");
    }
};

inline double separation_measure(const Signal& f, const Separator& g, double delta, double l) {
    return separation_measure(f, g.sample(f.grid()), delta, l);
}

// Margin parameters of the level check, following the explicit chain
// N -> eps' -> delta' -> delta with (N+1)^{-1} < eps/3 and
// delta' = 2 sin(pi/2N) sin(pi eps'/6), delta = min{1, delta' Delta / 3}.
struct LevelMargins {
    int N;
    double eps_prime;
    double delta_prime;
    double delta;
};

inline LevelMargins level_margins(double eps, double Delta) {
    const int N = std::max(3, static_cast<int>(std::floor(3.0 / eps)) + 1);
    const double eps_prime = eps / (3.0 * N * (N + 1));
    const double pi = std::acos(-1.0);
    const double delta_prime = 2.0 * std::sin(pi / (2.0 * N)) * std::sin(pi * eps_prime / 6.0);
    return {N, eps_prime, delta_prime, std::min(1.0, delta_prime * Delta / 3.0)};
}

// Build a separator for the family of scalar signals, level by level. At
// level j the amplitude Delta_j is fixed by the chain, the margin delta_j
// comes from the explicit level formula at eps_j = 2^{-j-1}, and alpha_j is
// the smallest multiple of 2*pi/b for which every accumulated family signal
// keeps |f_j + Delta_j sin(alpha_j t)| >= 2*delta_j outside a fraction
// eps_j of every window. The factor 2 on delta_j leaves room for the tail
// (bounded by delta_j), so the finished separator satisfies the per-level
// measure bound against the full g.
inline Separator build_separator(double Delta, double b, int depth,
                                 const std::vector<Signal>& family,
                                 std::size_t alpha_limit = 4096) {
    if (!(Delta > 0.0) || !(b > 0.0) || depth < 1)
        throw std::invalid_argument("build_separator: need Delta > 0, b > 0, depth >= 1");
    if (family.empty()) throw std::invalid_argument("build_separator: empty family");
    const Grid grid = family.front().grid();
    for (const auto& f : family) {
        detail::require_scalar(f, "build_separator");
        require_same_grid(f.grid(), grid);
    }

    const double pi = std::acos(-1.0);
    const double l_j = static_cast<double>(grid.n / 2) * grid.h;

    Separator sep;
    sep.base_period = b;
    sep.Delta = Delta;

    // accumulated f_j per family member
    std::vector<std::vector<double>> accum;
    for (const auto& f : family) {
        std::vector<double> v(f.size());
        for (std::size_t k = 0; k < f.size(); ++k) v[k] = f.value(k)[0];
        accum.push_back(std::move(v));
    }

    for (int j = 0; j < depth; ++j) {
        double Delta_j;
        if (j == 0) {
            Delta_j = Delta / 2.0;
        } else {
            Delta_j = std::pow(2.0, -(j + 2)) * Delta;
            for (int k = 0; k < j; ++k)
                Delta_j = std::min(Delta_j, std::pow(2.0, -(j - k)) * sep.levels[k].delta_j);
        }
        const double eps_j = std::pow(2.0, -(j + 1));
        const double delta_j = level_margins(eps_j, Delta_j).delta;

        bool found = false;
        double alpha_j = 0.0;
        double best_fraction = 1.0;
        for (std::size_t q = 1; q <= alpha_limit && !found; ++q) {
            const double alpha = 2.0 * pi * static_cast<double>(q) / b;
            double worst = 0.0;
            for (const auto& base : accum) {
                std::vector<double> sum(base.size());
                for (std::size_t k = 0; k < base.size(); ++k)
                    sum[k] = base[k] + Delta_j * std::sin(alpha * grid.time(k));
                worst = std::max(worst,
                                 detail::separation_from_samples(sum, 2.0 * delta_j, l_j, grid));
                if (worst >= eps_j) break;
            }
            best_fraction = std::min(best_fraction, worst);
            if (worst < eps_j) {
                found = true;
                alpha_j = alpha;
            }
        }
        if (!found)
            throw construction_error(
                "build_separator: alpha search exhausted at level " + std::to_string(j) +
                " (best fraction " + std::to_string(best_fraction) + ", budget " +
                std::to_string(eps_j) + ")");

        sep.levels.push_back({Delta_j, alpha_j, delta_j, l_j, eps_j});
        for (auto& base : accum)
            for (std::size_t k = 0; k < base.size(); ++k)
                base[k] += Delta_j * std::sin(alpha_j * grid.time(k));
    }

    sep.check_invariants();
    return sep;
}

// ---------------------------------------------------------------------------
// Level sets and mask algebra
// ---------------------------------------------------------------------------

// Mask T = { t : f(t) + g(t) <= a + 2 eps/3 } for a separator g with
// sup|g| < eps/3. On T the signal stays below a + eps; off T it stays above
// a. Samples exactly at the threshold belong to the mask.
inline Mask level_set(const Signal& f, double a, double eps, const Separator& sep,
                      std::size_t* boundary_count = nullptr) {
    detail::require_scalar(f, "level_set");
    if (!(eps > 0.0)) throw std::invalid_argument("level_set: eps must be positive");
    if (!(sep.sup_norm_bound() < eps / 3.0))
        throw std::invalid_argument("level_set: separator sup norm must stay below eps/3");
    const double threshold = a + 2.0 * eps / 3.0;
    const double margin = sep.levels.empty() ? 0.0 : sep.levels.back().delta_j;
    std::vector<std::uint8_t> bits(f.size(), 0);
    std::size_t boundary = 0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        const double v = f.value(k)[0] + sep.eval(f.grid().time(k));
        bits[k] = v <= threshold ? 1 : 0;
        if (std::abs(v - threshold) < margin) ++boundary;
    }
    if (boundary_count) *boundary_count = boundary;
    return Mask(f.grid(), std::move(bits));
}

enum class MaskOp { set_union, set_intersection, set_difference, set_complement };

inline Mask mask_union(const Mask& A, const Mask& B) {
    require_same_grid(A.grid(), B.grid());
    std::vector<std::uint8_t> bits(A.size());
    for (std::size_t k = 0; k < A.size(); ++k) bits[k] = (A[k] || B[k]) ? 1 : 0;
    return Mask(A.grid(), std::move(bits));
}

inline Mask mask_intersection(const Mask& A, const Mask& B) {
    require_same_grid(A.grid(), B.grid());
    std::vector<std::uint8_t> bits(A.size());
    for (std::size_t k = 0; k < A.size(); ++k) bits[k] = (A[k] && B[k]) ? 1 : 0;
    return Mask(A.grid(), std::move(bits));
}

inline Mask mask_difference(const Mask& A, const Mask& B) {
    require_same_grid(A.grid(), B.grid());
    std::vector<std::uint8_t> bits(A.size());
    for (std::size_t k = 0; k < A.size(); ++k) bits[k] = (A[k] && !B[k]) ? 1 : 0;
    return Mask(A.grid(), std::move(bits));
}

inline Mask mask_complement(const Mask& A) {
    std::vector<std::uint8_t> bits(A.size());
    for (std::size_t k = 0; k < A.size(); ++k) bits[k] = A[k] ? 0 : 1;
    return Mask(A.grid(), std::move(bits));
}

inline Mask mask_algebra(const Mask& A, const Mask& B, MaskOp op) {
    switch (op) {
        case MaskOp::set_union: return mask_union(A, B);
        case MaskOp::set_intersection: return mask_intersection(A, B);
        case MaskOp::set_difference: return mask_difference(A, B);
        case MaskOp::set_complement: return mask_complement(A);
    }
    throw std::invalid_argument("mask_algebra: unknown op");
}

// ---------------------------------------------------------------------------
// Decomposition into a disjoint mask family
// ---------------------------------------------------------------------------

struct MaskClassification {
    APReport report;       // the scan that produced the class
    double l_passed = 0.0; // ladder window at which the class was established
};

struct MaskFamily {
    std::vector<Mask> masks;     // pairwise disjoint
    std::vector<Point> centers;  // one per mask
    double tail_fraction = 0.0;  // share of samples outside the union
    std::vector<double> tail_fraction_by_level;  // after masks 1..k; non-increasing
    std::string module_tag;
    std::vector<SeparatorLevel> levels;          // separator parameters used
    std::vector<double> level_fractions;         // achieved per-level separation fractions
    std::vector<MaskClassification> mask_classes;

    void check_disjoint() const {
        if (masks.empty()) return;
        std::vector<std::uint8_t> seen(masks.front().size(), 0);
        for (const auto& mk : masks)
            for (std::size_t k = 0; k < mk.size(); ++k) {
                if (mk[k] && seen[k]) throw certificate_error("MaskFamily: masks overlap");
                if (mk[k]) seen[k] = 1;
            }
    }
};

struct DecomposeOptions {
    std::size_t alpha_limit = 4096;
    double cover_eps = 0.0;  // 0 -> eps
    bool classify = true;
    double class_eps = 0.25;
    std::vector<double> class_ladder;  // empty -> {L/8, L/4, L/2} snapped
    double class_tau_span = 0.0;       // 0 -> L/4
    double class_tau_step = 0.0;       // 0 -> grid step
};

// Classify a mask indicator over a ladder of window lengths; the class is
// the strongest one established at any ladder window.
inline MaskClassification classify_mask(const Mask& mask, double eps_class,
                                        const std::vector<double>& ladder, double tau_span,
                                        double tau_step) {
    const Signal chi = mask.indicator();
    MaskClassification out;
    bool have = false;
    for (double l : ladder) {
        APQuery q;
        q.eps = eps_class;
        q.p = 1.0;
        q.l = l;
        q.tau_min = -tau_span;
        q.tau_max = tau_span;
        q.tau_step = tau_step;
        const APReport rep = scan_almost_periods(chi, q);
        if (!have || static_cast<int>(rep.ap_class) < static_cast<int>(out.report.ap_class)) {
            out.report = rep;
            out.l_passed = l;
            have = true;
        }
        if (out.report.ap_class == APClass::bohr) break;
    }
    return out;
}

// Decomposition into a disjoint mask family: covering centers at delta = eps/3, one
// separator (sup norm < eps/3) shared by the whole family of center-distance
// signals, level-set masks T'_j = { rho(f, x_j) + g <= 2 eps/3 } and
// first-hit disjointification. Guarantees rho(f(t), x_j) < eps on T_j
// samplewise; the guarantee is asserted, not assumed.
inline MaskFamily decompose(const Signal& f, double eps, double b, int depth,
                            const DecomposeOptions& options = {}) {
    if (!(eps > 0.0)) throw std::invalid_argument("decompose: eps must be positive");
    if (!(b > 0.0)) throw std::invalid_argument("decompose: b must be positive");
    if (depth < 1) throw std::invalid_argument("decompose: depth must be >= 1");

    const double cover_eps = options.cover_eps > 0.0 ? options.cover_eps : eps;
    const CoveringResult cover = covering_centers(f, eps / 3.0, cover_eps);

    MaskFamily family;
    family.centers = cover.centers;

    // center-distance signals rho(f(.), x_j), shifted by the threshold
    std::vector<Signal> dist_signals;
    std::vector<Signal> shifted_family;
    for (const auto& x : cover.centers) {
        std::vector<double> v(f.size());
        for (std::size_t k = 0; k < f.size(); ++k) v[k] = f.metric()(f.value(k), x);
        dist_signals.emplace_back(f.grid(), Metric::euclidean(1), v);
        for (double& c : v) c -= 2.0 * eps / 3.0;
        shifted_family.emplace_back(f.grid(), Metric::euclidean(1), std::move(v));
    }

    std::vector<Mask> prime;
    {
        const Separator sep = build_separator(eps / 3.0, b, depth, shifted_family,
                                              options.alpha_limit);
        family.levels = sep.levels;
        for (const auto& lv : sep.levels) {
            double worst = 0.0;
            for (const auto& s : shifted_family)
                worst = std::max(worst, separation_measure(s, sep, lv.delta_j, lv.l_j));
            family.level_fractions.push_back(worst);
            if (!(worst < lv.eps_j))
                throw certificate_error("decompose: per-level separation bound violated");
        }
        for (const auto& ds : dist_signals) prime.push_back(level_set(ds, 0.0, eps, sep));
    }

    // disjointify in center order: T_1 = T'_1, T_j = T'_j \ union of earlier
    std::vector<std::uint8_t> taken(f.size(), 0);
    std::vector<Mask> masks;
    std::vector<Point> kept_centers;
    std::vector<Signal> kept_dist;
    for (std::size_t j = 0; j < prime.size(); ++j) {
        std::vector<std::uint8_t> bits(f.size(), 0);
        std::size_t count = 0;
        for (std::size_t k = 0; k < f.size(); ++k) {
            if (prime[j][k] && !taken[k]) {
                bits[k] = 1;
                taken[k] = 1;
                ++count;
            }
        }
        if (count == 0) continue;  // null masks are deleted (their centers with them)
        masks.emplace_back(f.grid(), std::move(bits));
        kept_centers.push_back(cover.centers[j]);
        kept_dist.push_back(dist_signals[j]);
    }
    family.masks = std::move(masks);
    family.centers = std::move(kept_centers);

    // coverage accounting
    std::size_t covered = 0;
    family.tail_fraction_by_level.clear();
    std::vector<std::uint8_t> acc(f.size(), 0);
    for (const auto& mk : family.masks) {
        for (std::size_t k = 0; k < f.size(); ++k)
            if (mk[k] && !acc[k]) {
                acc[k] = 1;
                ++covered;
            }
        family.tail_fraction_by_level.push_back(
            1.0 - static_cast<double>(covered) / static_cast<double>(f.size()));
    }
    family.tail_fraction = family.tail_fraction_by_level.empty()
                               ? 1.0
                               : family.tail_fraction_by_level.back();

    // hard center-inequality certificate: rho(f(t), x_j) < eps on every mask sample
    for (std::size_t j = 0; j < family.masks.size(); ++j)
        for (std::size_t k = 0; k < f.size(); ++k)
            if (family.masks[j][k] && !(kept_dist[j].value(k)[0] < eps))
                throw certificate_error("decompose: center inequality violated on a mask sample");

    family.check_disjoint();

    if (options.classify) {
        std::vector<double> ladder = options.class_ladder;
        if (ladder.empty()) {
            const double h = f.grid().h;
            for (std::size_t div : {8, 4, 2}) {
                const double l = static_cast<double>(f.grid().n / div) * h;
                if (l > 0.0 && (ladder.empty() || l > ladder.back())) ladder.push_back(l);
            }
        }
        double span = options.class_tau_span > 0.0 ? options.class_tau_span
                                                   : f.grid().length() / 4.0;
        span = std::max(span, ladder.back() / 2.0 + f.grid().h);  // query needs 2*span >= l
        const double step = options.class_tau_step > 0.0 ? options.class_tau_step : f.grid().h;
        for (const auto& mk : family.masks)
            family.mask_classes.push_back(
                classify_mask(mk, options.class_eps, ladder, span, step));
    }

    family.module_tag = "finite surrogate of M^(W)(Mod f): disjoint level-set masks, base period " +
                        std::to_string(b) + ", " + std::to_string(family.masks.size()) +
                        " centers at eps " + std::to_string(eps);
    return family;
}

// ---------------------------------------------------------------------------
// Piecewise assembly
// ---------------------------------------------------------------------------

struct AssembledSignal {
    Signal signal;
    Mask tail;  // samples outside every mask; they carry parts[0]'s value
};

inline AssembledSignal assemble_piecewise(const std::vector<Signal>& parts,
                                          const MaskFamily& family) {
    if (parts.size() < family.masks.size())
        throw std::invalid_argument("assemble_piecewise: fewer parts than masks");
    if (parts.empty()) throw std::invalid_argument("assemble_piecewise: no parts");
    const Grid grid = parts.front().grid();
    const std::size_t d = static_cast<std::size_t>(parts.front().dimension());
    for (const auto& p : parts) {
        require_same_grid(p.grid(), grid);
        if (static_cast<std::size_t>(p.dimension()) != d)
            throw std::invalid_argument("assemble_piecewise: dimension mismatch");
    }
    for (const auto& mk : family.masks) require_same_grid(mk.grid(), grid);

    std::vector<double> flat(grid.n * d);
    std::vector<std::uint8_t> tail(grid.n, 1);
    for (std::size_t j = 0; j < family.masks.size(); ++j) {
        const auto& mk = family.masks[j];
        for (std::size_t k = 0; k < grid.n; ++k) {
            if (!mk[k]) continue;
            tail[k] = 0;
            const auto v = parts[j].value(k);
            std::copy(v.begin(), v.end(), flat.begin() + k * d);
        }
    }
    for (std::size_t k = 0; k < grid.n; ++k) {
        if (!tail[k]) continue;
        const auto v = parts[0].value(k);
        std::copy(v.begin(), v.end(), flat.begin() + k * d);
    }
    return {Signal(grid, parts.front().metric(), std::move(flat)), Mask(grid, std::move(tail))};
}

// ---------------------------------------------------------------------------
// Empirical A^(W) diagnostic
// ---------------------------------------------------------------------------

struct AWDiagnostic {
    double l = 0.0;
    double tau0 = 0.0;
};

// Reports an empirical (l, tau0) pair with D_l(f, f(.+tau)) < eps for every
// grid tau in (0, tau0]; no claim beyond the scanned range.
inline std::optional<AWDiagnostic> aw_diagnostic(const Signal& f, double eps,
                                                 const std::vector<double>& l_ladder,
                                                 double tau_limit) {
    if (!(eps > 0.0)) throw std::invalid_argument("aw_diagnostic: eps must be positive");
    std::optional<AWDiagnostic> best;
    const std::size_t steps = static_cast<std::size_t>(tau_limit / f.grid().h + 1e-9);
    for (double l : l_ladder) {
        double tau0 = 0.0;
        for (std::size_t k = 1; k <= steps; ++k) {
            const double tau = static_cast<double>(k) * f.grid().h;
            if (f.grid().length() - tau < l) break;
            const auto pair = shift_overlap(f, tau);
            if (!(d_pl(pair.base, pair.shifted, 1.0, l, true) < eps)) break;
            tau0 = pair.tau_snapped;
        }
        if (tau0 > 0.0 && (!best || tau0 > best->tau0)) best = AWDiagnostic{l, tau0};
    }
    return best;
}

}  // namespace apw
