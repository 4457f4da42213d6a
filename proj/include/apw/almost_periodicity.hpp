// Almost-period detection and classification at tolerance. A finite window
// can never certify almost periodicity, only consistency with it at the
// query's (eps, l, range); every report carries its query.

#pragma once

#include <optional>

#include "apw/seminorms.hpp"

namespace apw {

struct APQuery {
    double eps;
    double p = 1.0;
    double l;
    bool bounded = false;
    double tau_min;
    double tau_max;
    double tau_step;

    void validate(const Grid& grid) const {
        if (!(eps > 0.0)) throw std::invalid_argument("APQuery: eps must be positive");
        if (!(tau_step > 0.0)) throw std::invalid_argument("APQuery: tau_step must be positive");
        if (!(tau_max - tau_min >= l))
            throw std::invalid_argument("APQuery: tau range must span at least one window");
        const double max_abs = std::max(std::abs(tau_min), std::abs(tau_max));
        if (grid.length() - max_abs < l)
            throw std::invalid_argument("APQuery: overlap at the largest tau is below l");
    }
};

enum class APClass { bohr, stepanov, equi_weyl, none };

inline const char* to_string(APClass c) {
    switch (c) {
        case APClass::bohr: return "bohr";
        case APClass::stepanov: return "stepanov";
        case APClass::equi_weyl: return "equi_weyl";
        case APClass::none: return "none";
    }
    return "?";
}

struct APReport {
    APQuery query;
    std::vector<double> accepted_taus;  // snapped; acceptance under the query (p,l) mean
    double max_gap = 0.0;               // worst uncovered stretch of [tau_min, tau_max]
    std::optional<double> relatively_dense_at;
    APClass ap_class = APClass::none;
    bool bohr_dense = false;
    bool stepanov_dense = false;
    bool equi_weyl_dense = false;
    double stepanov_l = 1.0;  // actual window used for the unit-window criterion
};

namespace detail {

inline std::vector<double> tau_grid(const APQuery& q, double h) {
    const std::int64_t step = std::max<std::int64_t>(1, snap_to_step(q.tau_step, h));
    const double stride = static_cast<double>(step) * h;
    const auto j_lo = static_cast<std::int64_t>(std::ceil(q.tau_min / stride - 1e-9));
    const auto j_hi = static_cast<std::int64_t>(std::floor(q.tau_max / stride + 1e-9));
    if (j_hi < j_lo) throw std::invalid_argument("scan_almost_periods: empty tau grid");
    std::vector<double> taus;
    taus.reserve(static_cast<std::size_t>(j_hi - j_lo + 1));
    for (std::int64_t j = j_lo; j <= j_hi; ++j) taus.push_back(static_cast<double>(j) * stride);
    return taus;
}

inline double max_gap_of(const std::vector<double>& accepted, double lo, double hi) {
    if (accepted.empty()) return hi - lo;
    double gap = accepted.front() - lo;
    for (std::size_t i = 1; i < accepted.size(); ++i)
        gap = std::max(gap, accepted[i] - accepted[i - 1]);
    return std::max(gap, hi - accepted.back());
}

// Generic scan over a shiftable signal type; Dist(sigobj, tau) must return
// the per-sample distance sequence on the overlap together with its grid.
template <typename Sig>
APReport scan_impl(const Sig& f, const APQuery& q) {
    q.validate(f.grid());
    const double h = f.grid().h;
    const std::vector<double> taus = tau_grid(q, h);
    const double p_eff = q.bounded ? 1.0 : q.p;

    struct PerTau {
        bool ew = false, st = false, bohr = false;
        double tau = 0.0;
    };
    std::vector<PerTau> rows(taus.size());

    // unit-window sample count for the Stepanov criterion, snapped to >= 1
    const std::size_t m_unit = static_cast<std::size_t>(
        std::max<std::int64_t>(1, std::llround(1.0 / h)));

    parallel_for(taus.size(), [&](std::size_t i) {
        const auto pair = shift_overlap(f, taus[i]);
        std::vector<double> rho = pointwise_distance(pair.base, pair.shifted, false);
        double sup = 0.0;
        for (double v : rho) sup = std::max(sup, v);
        if (q.bounded)
            for (double& v : rho) v = std::min(1.0, v);
        const std::vector<double> rp = detail::pow_samples(rho, p_eff);
        const std::size_t m_q = detail::window_samples(q.l, pair.base.grid());
        const double d_query = p_eff == 1.0 ? detail::window_sup_mean(rp, m_q)
                                            : std::pow(detail::window_sup_mean(rp, m_q), 1.0 / p_eff);
        const std::size_t m_s = std::min(m_unit, pair.overlap);
        const double d_unit = p_eff == 1.0 ? detail::window_sup_mean(rp, m_s)
                                           : std::pow(detail::window_sup_mean(rp, m_s), 1.0 / p_eff);
        rows[i] = {d_query < q.eps, d_unit < q.eps, sup < q.eps, pair.tau_snapped};
    });

    APReport report;
    report.query = q;
    report.stepanov_l = static_cast<double>(m_unit) * h;
    std::vector<double> bohr_taus, st_taus;
    for (const auto& row : rows) {
        if (row.ew) report.accepted_taus.push_back(row.tau);
        if (row.st) st_taus.push_back(row.tau);
        if (row.bohr) bohr_taus.push_back(row.tau);
    }
    report.max_gap = max_gap_of(report.accepted_taus, q.tau_min, q.tau_max);
    if (!report.accepted_taus.empty()) report.relatively_dense_at = report.max_gap;

    const double dense_bar = (q.tau_max - q.tau_min) / 2.0;
    auto dense = [&](const std::vector<double>& acc) {
        return !acc.empty() && max_gap_of(acc, q.tau_min, q.tau_max) <= dense_bar;
    };
    report.bohr_dense = dense(bohr_taus);
    report.stepanov_dense = dense(st_taus);
    report.equi_weyl_dense = dense(report.accepted_taus);
    report.ap_class = report.bohr_dense      ? APClass::bohr
                      : report.stepanov_dense ? APClass::stepanov
                      : report.equi_weyl_dense ? APClass::equi_weyl
                                               : APClass::none;
    return report;
}

}  // namespace detail

inline APReport scan_almost_periods(const Signal& f, const APQuery& q) {
    return detail::scan_impl(f, q);
}

// Hausdorff-metric scan for multivalued maps.
inline APReport scan_almost_periods(const SetValuedSignal& F, const APQuery& q) {
    return detail::scan_impl(F, q);
}

// Measure-based almost-period criterion: true iff on every window of length l inside the
// overlap, the samples with rho(f(t), f(t+tau)) >= delta occupy measure < eps*l.
inline bool measure_criterion(const Signal& f, double tau, double eps, double delta, double l) {
    if (!(eps > 0.0) || !(delta > 0.0))
        throw std::invalid_argument("measure_criterion: eps and delta must be positive");
    const auto pair = shift_overlap(f, tau);
    const std::vector<double> rho = pointwise_distance(pair.base, pair.shifted, false);
    const std::size_t m = detail::window_samples(l, pair.base.grid());
    std::vector<double> bad(rho.size());
    for (std::size_t k = 0; k < rho.size(); ++k) bad[k] = rho[k] >= delta ? 1.0 : 0.0;
    const double worst_fraction = detail::window_sup_mean(bad, m);
    // measure = fraction * l, so the bound meas < eps*l reads fraction < eps
    return worst_fraction < eps;
}

struct EpsDeltaL {
    double eps;
    double delta;
    double l;
};

// Finite proxy for an f-returning sequence: for every ladder entry some
// suffix of the taus passes the measure criterion.
inline bool returning_sequence_check(const Signal& f, const std::vector<double>& taus,
                                     const std::vector<EpsDeltaL>& ladder) {
    for (const auto& entry : ladder) {
        bool suffix_found = false;
        // smallest suffix is the last element alone; scan backwards
        for (std::size_t j = taus.size(); j-- > 0;) {
            if (!measure_criterion(f, taus[j], entry.eps, entry.delta, entry.l)) break;
            suffix_found = true;
        }
        if (!taus.empty() && !suffix_found) return false;
    }
    return true;
}

struct ModContainment {
    double fraction = 0.0;   // share of candidate taus accepted for f at 2*eps
    bool supported = false;  // containment supported iff fraction == 1
    bool degenerate = false; // f within tolerance of a constant; proxy skipped
    std::size_t checked = 0;
};

// Degenerate means Mod f = {0} at desk scale: f stays within tol (in the
// windowed mean) of its best constant.
inline bool is_degenerate(const Signal& f, double tol) {
    const std::size_t d = static_cast<std::size_t>(f.dimension());
    Point mean(d, 0.0);
    for (std::size_t k = 0; k < f.size(); ++k)
        for (std::size_t c = 0; c < d; ++c) mean[c] += f.value(k)[c];
    for (double& c : mean) c /= static_cast<double>(f.size());
    const Signal constant = Signal::constant(f.grid(), f.metric(), mean);
    return d_pl(f, constant, 1.0, f.grid().length(), false) < tol;
}

// Proxy for Mod f contained in Mod g: candidate taus are accepted almost
// periods of g under gq; each is retested on f at relaxed tolerance 2*eps
// (the factor absorbs discretization; a heuristic margin, not a proved bound).
inline ModContainment mod_containment_proxy(const Signal& f, const APQuery& gq,
                                            const std::vector<double>& candidate_taus) {
    ModContainment out;
    out.checked = candidate_taus.size();
    if (is_degenerate(f, gq.eps)) {
        out.degenerate = true;
        out.fraction = 1.0;
        out.supported = true;
        return out;
    }
    if (candidate_taus.empty()) return out;
    std::size_t hits = 0;
    for (double tau : candidate_taus) {
        const auto pair = shift_overlap(f, tau);
        const double p_eff = gq.bounded ? 1.0 : gq.p;
        const std::size_t m = detail::window_samples(gq.l, pair.base.grid());
        std::vector<double> rho = pointwise_distance(pair.base, pair.shifted, gq.bounded);
        const std::vector<double> rp = detail::pow_samples(rho, p_eff);
        const double d = p_eff == 1.0 ? detail::window_sup_mean(rp, m)
                                      : std::pow(detail::window_sup_mean(rp, m), 1.0 / p_eff);
        if (d < 2.0 * gq.eps) ++hits;
    }
    out.fraction = static_cast<double>(hits) / static_cast<double>(candidate_taus.size());
    out.supported = hits == candidate_taus.size();
    return out;
}

}  // namespace apw
