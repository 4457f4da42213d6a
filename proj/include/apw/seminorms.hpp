// Distance machinery on sampled signals: windowed p-means D_{p,l}, Weyl
// estimates over a window ladder, norms against the origin, and the tail
// functional J_p with the M_p-sharp test.
//
// Integrals are left Riemann sums and window starts range over grid points;
// with l = m*h the windowed mean over [xi, xi+l) is just the mean of m
// consecutive samples.

#pragma once

#include <set>

#include "apw/signal.hpp"

namespace apw {

inline constexpr double kMinP = 1.0;
inline constexpr double kMaxP = 8.0;  // larger p invites overflow with no desk-scale payoff

struct WindowLadder {
    std::vector<double> lengths;  // strictly increasing, each a multiple of h

    static WindowLadder single(double l) { return {{l}}; }

    void validate() const {
        if (lengths.empty()) throw std::invalid_argument("WindowLadder: empty");
        for (std::size_t i = 1; i < lengths.size(); ++i)
            if (!(lengths[i] > lengths[i - 1]))
                throw std::invalid_argument("WindowLadder: lengths must be strictly increasing");
    }
};

namespace detail {

inline void check_p(double p) {
    if (!(p >= kMinP && p <= kMaxP))
        throw std::invalid_argument("p must lie in [1, 8]");
}

// Number of samples per window; l must be a positive multiple of h that fits
// the signal.
inline std::size_t window_samples(double l, const Grid& grid) {
    const auto m = snap_to_step(l, grid.h);
    if (m < 1 || !nearly_equal(static_cast<double>(m) * grid.h, l))
        throw std::invalid_argument("window length must be a positive multiple of the grid step");
    if (static_cast<std::size_t>(m) > grid.n)
        throw std::invalid_argument("window length exceeds the signal window");
    return static_cast<std::size_t>(m);
}

inline std::vector<double> pow_samples(std::vector<double> rho, double p) {
    if (p != 1.0)
        for (double& v : rho) v = std::pow(v, p);
    return rho;
}

// max over window starts of the mean of m consecutive samples.
inline double window_sup_mean(const std::vector<double>& vals, std::size_t m) {
    std::vector<long double> prefix(vals.size() + 1, 0.0L);
    for (std::size_t i = 0; i < vals.size(); ++i) prefix[i + 1] = prefix[i] + vals[i];
    long double best = 0.0L;
    for (std::size_t j = 0; j + m <= vals.size(); ++j)
        best = std::max(best, prefix[j + m] - prefix[j]);
    return static_cast<double>(best / static_cast<long double>(m));
}

// max over window starts of (sum of the k largest of m consecutive samples)/m.
// Sliding two-multiset structure; k = 0 gives 0.
inline double window_sup_topk_mean(const std::vector<double>& vals, std::size_t m, std::size_t k) {
    if (k == 0) return 0.0;
    if (k >= m) return window_sup_mean(vals, m);
    std::multiset<double> top, rest;
    long double top_sum = 0.0L;
    auto insert = [&](double v) {
        if (top.size() < k || v > *top.begin()) {
            top.insert(v);
            top_sum += v;
            if (top.size() > k) {
                auto it = top.begin();
                top_sum -= *it;
                rest.insert(*it);
                top.erase(it);
            }
        } else {
            rest.insert(v);
        }
    };
    auto erase = [&](double v) {
        if (auto it = top.find(v); it != top.end()) {
            top_sum -= v;
            top.erase(it);
            if (!rest.empty()) {
                auto mx = std::prev(rest.end());
                top.insert(*mx);
                top_sum += *mx;
                rest.erase(mx);
            }
        } else {
            rest.erase(rest.find(v));
        }
    };
    long double best = 0.0L;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        insert(vals[i]);
        if (i + 1 >= m) {
            best = std::max(best, top_sum);
            erase(vals[i + 1 - m]);
        }
    }
    return static_cast<double>(best / static_cast<long double>(m));
}

}  // namespace detail

// D_{p,l} on a precomputed per-sample distance sequence (already rho or
// rho'); the grid only supplies the step.
inline double d_pl_from_samples(const std::vector<double>& rho, double p, double l,
                                const Grid& grid) {
    detail::check_p(p);
    const std::size_t m = detail::window_samples(l, grid);
    if (rho.size() != grid.n) throw std::invalid_argument("d_pl: sample count mismatch");
    const double mean = detail::window_sup_mean(detail::pow_samples(rho, p), m);
    return p == 1.0 ? mean : std::pow(mean, 1.0 / p);
}

// D^{(rho)}_{p,l}(f,g). With bounded=true this is D_l = D^{(rho')}_{1,l}:
// the bounded metric is used and p is forced to 1.
inline double d_pl(const Signal& f, const Signal& g, double p, double l, bool bounded = false) {
    return d_pl_from_samples(pointwise_distance(f, g, bounded), bounded ? 1.0 : p, l, f.grid());
}

// Hausdorff-metric variant for multivalued maps.
inline double d_pl(const SetValuedSignal& F, const SetValuedSignal& G, double p, double l,
                   bool bounded = false) {
    return d_pl_from_samples(pointwise_distance(F, G, bounded), bounded ? 1.0 : p, l, F.grid());
}

struct SeminormEntry {
    double l;
    double value;
};

struct SeminormReport {
    double p = 1.0;
    bool bounded = false;
    std::vector<SeminormEntry> entries;
    double weyl_estimate = 0.0;       // min over entries (lim = inf over l)
    double monotonicity_defect = 0.0; // worst sandwich violation, power scale
    double slack = 0.0;               // declared discretization slack, power scale
};

namespace detail {

inline SeminormReport weyl_from_samples(const std::vector<double>& rho, double p, bool bounded,
                                        const WindowLadder& ladder, const Grid& grid) {
    ladder.validate();
    const double p_eff = bounded ? 1.0 : p;
    detail::check_p(p_eff);
    const std::vector<double> rp = detail::pow_samples(rho, p_eff);
    SeminormReport report;
    report.p = p_eff;
    report.bounded = bounded;
    double max_rp = 0.0;
    for (double v : rp) max_rp = std::max(max_rp, v);
    double min_l = ladder.lengths.front();
    for (double l : ladder.lengths) {
        const std::size_t m = detail::window_samples(l, grid);
        const double mean = detail::window_sup_mean(rp, m);
        report.entries.push_back({l, p_eff == 1.0 ? mean : std::pow(mean, 1.0 / p_eff)});
        min_l = std::min(min_l, l);
    }
    report.weyl_estimate = report.entries.front().value;
    for (const auto& e : report.entries) report.weyl_estimate = std::min(report.weyl_estimate, e.value);
    // Sandwich check for consecutive ladder pairs, on the power scale:
    //   (l/l1) * D_l^p <= D_l1^p <= (1 + l/l1) * D_l^p
    for (std::size_t i = 0; i + 1 < report.entries.size(); ++i) {
        const double l = report.entries[i].l, l1 = report.entries[i + 1].l;
        const double a = std::pow(report.entries[i].value, p_eff);
        const double b = std::pow(report.entries[i + 1].value, p_eff);
        const double lower_violation = (l / l1) * a - b;
        const double upper_violation = b - (1.0 + l / l1) * a;
        report.monotonicity_defect =
            std::max({report.monotonicity_defect, lower_violation, upper_violation});
    }
    report.slack = 2.0 * grid.h * max_rp / min_l;
    return report;
}

}  // namespace detail

// D^{(rho),W}_p estimated on a finite ladder. The limit over l equals the
// infimum, so the ladder minimum is a certified upper bound.
inline SeminormReport weyl_seminorm(const Signal& f, const Signal& g, double p,
                                    const WindowLadder& ladder, bool bounded = false) {
    return detail::weyl_from_samples(pointwise_distance(f, g, bounded), p, bounded, ladder,
                                     f.grid());
}

inline SeminormReport weyl_seminorm(const SetValuedSignal& F, const SetValuedSignal& G, double p,
                                    const WindowLadder& ladder, bool bounded = false) {
    return detail::weyl_from_samples(pointwise_distance(F, G, bounded), p, bounded, ladder,
                                     F.grid());
}

// ||f||_{p,l}: distance to the origin of the Banach space.
inline double norm_pl(const Signal& f, double p, double l) {
    return d_pl(f, Signal::zeros(f.grid(), f.metric()), p, l, false);
}

inline SeminormReport norm_weyl(const Signal& f, double p, const WindowLadder& ladder) {
    return weyl_seminorm(f, Signal::zeros(f.grid(), f.metric()), p, ladder, false);
}

struct JpEntry {
    double delta;
    double l;
    double value;
};

struct JpReport {
    double p = 1.0;
    std::vector<JpEntry> table;
    double estimate = 0.0;  // value at (min delta, max l)
};

// J_p(f,g) desk-scale table: for each (delta, l) the sup over windows of the
// p-mean restricted to the worst subset of measure <= delta*l, i.e. the
// floor(delta*m) largest samples of rho^p in the window.
inline JpReport j_p_from_samples(const std::vector<double>& rho, double p,
                                 const std::vector<double>& deltas, const WindowLadder& ladder,
                                 const Grid& grid) {
    detail::check_p(p);
    ladder.validate();
    if (deltas.empty()) throw std::invalid_argument("j_p: empty delta ladder");
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (!(deltas[i] > 0.0 && deltas[i] < 1.0))
            throw std::invalid_argument("j_p: deltas must lie in (0,1)");
        if (i > 0 && !(deltas[i] < deltas[i - 1]))
            throw std::invalid_argument("j_p: deltas must be strictly decreasing");
    }
    const std::vector<double> rp = detail::pow_samples(rho, p);
    JpReport report;
    report.p = p;
    for (double delta : deltas) {
        for (double l : ladder.lengths) {
            const std::size_t m = detail::window_samples(l, grid);
            const std::size_t k = static_cast<std::size_t>(delta * static_cast<double>(m));
            const double mean = detail::window_sup_topk_mean(rp, m, k);
            report.table.push_back({delta, l, p == 1.0 ? mean : std::pow(mean, 1.0 / p)});
        }
    }
    // (min delta, max l) = last delta, last ladder entry.
    report.estimate = report.table.back().value;
    return report;
}

inline JpReport j_p(const Signal& f, const Signal& g, double p, const std::vector<double>& deltas,
                    const WindowLadder& ladder) {
    return j_p_from_samples(pointwise_distance(f, g, false), p, deltas, ladder, f.grid());
}

// M_p-sharp membership surrogate: the J_p estimate against a constant origin
// stays below tol at the finest delta.
inline bool mp_sharp_test(const Signal& f, double p, const std::vector<double>& deltas,
                          const WindowLadder& ladder, double tol) {
    const JpReport r = j_p(f, Signal::zeros(f.grid(), f.metric()), p, deltas, ladder);
    return r.estimate < tol;
}

}  // namespace apw
