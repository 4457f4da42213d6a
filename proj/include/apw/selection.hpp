// Construction of almost-periodic selections of set-valued signals:
// successive-refinement eps-selections, modulus-controlled selections by
// dyadic stratification, dense selection families, and eps-net selections.
//
// All constructions pick actual members of the sampled sets, so membership
// is exact and the distance certificates hold samplewise with zero slack.

#pragma once

#include <functional>
#include <map>

#include "apw/decomposition.hpp"
#include "apw/fourier.hpp"

namespace apw {

// Gauge eta in N: nondecreasing, eta(0) = 0, eta(t) > 0 for t > 0.
class Modulus {
public:
    enum class Kind { linear, power, table };

    static Modulus linear(double c) {
        if (!(c > 0.0)) throw std::invalid_argument("Modulus: c must be positive");
        Modulus m;
        m.kind_ = Kind::linear;
        m.c_ = c;
        return m;
    }

    static Modulus power(double c, double beta) {
        if (!(c > 0.0) || !(beta > 0.0))
            throw std::invalid_argument("Modulus: c and beta must be positive");
        Modulus m;
        m.kind_ = Kind::power;
        m.c_ = c;
        m.beta_ = beta;
        return m;
    }

    // Piecewise-linear through (0,0) and the given (t, eta) knots.
    static Modulus from_table(std::vector<std::pair<double, double>> knots) {
        if (knots.empty()) throw std::invalid_argument("Modulus: empty table");
        double prev_t = 0.0, prev_v = 0.0;
        for (const auto& [t, v] : knots) {
            if (!(t > prev_t) || !(v > 0.0) || v < prev_v)
                throw std::invalid_argument("Modulus: table must be increasing with positive values");
            prev_t = t;
            prev_v = v;
        }
        Modulus m;
        m.kind_ = Kind::table;
        m.table_ = std::move(knots);
        return m;
    }

    Kind kind() const { return kind_; }
    double c() const { return c_; }
    double beta() const { return beta_; }
    const std::vector<std::pair<double, double>>& table() const { return table_; }

    double operator()(double t) const {
        if (t < 0.0) throw std::invalid_argument("Modulus: negative argument");
        if (t == 0.0) return 0.0;
        switch (kind_) {
            case Kind::linear: return c_ * t;
            case Kind::power: return c_ * std::pow(t, beta_);
            case Kind::table: {
                double t0 = 0.0, v0 = 0.0;
                for (const auto& [tk, vk] : table_) {
                    if (t <= tk) return v0 + (vk - v0) * (t - t0) / (tk - t0);
                    t0 = tk;
                    v0 = vk;
                }
                return v0;  // flat beyond the last knot
            }
        }
        return 0.0;
    }

private:
    Modulus() = default;
    Kind kind_ = Kind::linear;
    double c_ = 1.0;
    double beta_ = 1.0;
    std::vector<std::pair<double, double>> table_;
};

struct SelectionLevel {
    double gamma_n = 0.0;
    double max_jump = 0.0;
    double bound = 0.0;  // 2 (gamma_{n-1} + gamma_n) eps; 0 for the anchor level
    std::size_t cells = 0;
};

struct StratumInfo {
    int level = 0;
    double eps_level = 0.0;  // eta(2^{-j-1}) used for the stratum selection
    std::size_t samples = 0;
};

struct APTransfer {
    std::vector<double> joint_taus;  // accepted for both F and g at the query
    double fraction = 0.0;           // share also accepted for the selection at relax*eps
    bool supported = false;
    double relax = 4.0;
};

struct SelectionReport {
    explicit SelectionReport(Signal s) : selection(std::move(s)) {}

    Signal selection;
    double membership_defect = 0.0;     // max over samples of rho(f(t), F(t)); 0 exactly
    double distance_certificate = 0.0;  // max of rho(f,g) - rho(g,F) - eta(rho(g,F)); <= 0
    std::optional<APTransfer> ap_transfer;
    int refinement_depth = 0;
    std::vector<SelectionLevel> per_level;
    std::vector<StratumInfo> strata;  // select_modulus only
    std::vector<double> sup_gap;      // select_modulus: sup rho(f, f(n;.)) per n
};

namespace detail {

// Greedy farthest-point cover of the listed samples under a pairwise
// distance callable; returns center sample indices and the per-sample cell
// assignment (nearest center, lowest index on ties). Covers strictly within
// radius.
struct SampleCover {
    std::vector<std::size_t> centers;
    std::vector<std::size_t> cell;  // indexed like `samples`
};

template <typename Dist>
SampleCover cover_samples(const std::vector<std::size_t>& samples, double radius, Dist&& dist) {
    SampleCover out;
    if (samples.empty()) return out;
    const std::size_t count = samples.size();
    std::vector<double> dmin(count, std::numeric_limits<double>::infinity());
    out.cell.assign(count, 0);
    std::size_t next = 0;
    while (true) {
        const std::size_t c = samples[next];
        const std::size_t cid = out.centers.size();
        out.centers.push_back(c);
        double worst = -1.0;
        std::size_t arg = 0;
        for (std::size_t i = 0; i < count; ++i) {
            const double d = dist(samples[i], c);
            if (d < dmin[i]) {
                dmin[i] = d;
                out.cell[i] = cid;
            }
            if (dmin[i] > worst) {
                worst = dmin[i];
                arg = i;
            }
        }
        if (worst < radius) break;
        next = arg;
    }
    return out;
}

struct EpsSelectionCore {
    std::vector<Point> picks;          // per active sample, the selected member of F(t)
    std::vector<SelectionLevel> levels;
};

// Successive refinement on an arbitrary subset of samples.
inline EpsSelectionCore select_eps_core(const SetValuedSignal& F, const Signal& g, double eps,
                                        int depth, const std::vector<std::size_t>& active) {
    const Metric& metric = F.metric();
    auto joint_dist = [&](std::size_t s, std::size_t t) {
        return std::max(hausdorff(F.value(s), F.value(t), metric, true),
                        metric.bounded(g.value(s), g.value(t)));
    };
    auto gamma = [&](int n) { return std::pow(2.0, -(n + 1)) / 6.0; };

    EpsSelectionCore core;
    if (active.empty()) return core;

    // level 1: anchor picks per cell, nearest member to the cell's g-representative
    const auto cover1 = cover_samples(active, gamma(1) * eps, joint_dist);
    std::vector<Point> pick(cover1.centers.size());
    std::vector<std::size_t> chain(active.size());
    for (std::size_t c = 0; c < cover1.centers.size(); ++c) {
        const std::size_t s = cover1.centers[c];
        pick[c] = F.value(s)[nearest_member(g.value(s), F.value(s), metric)];
    }
    for (std::size_t i = 0; i < active.size(); ++i) chain[i] = cover1.cell[i];
    core.levels.push_back({gamma(1), 0.0, 0.0, cover1.centers.size()});

    for (int n = 2; n <= depth; ++n) {
        const double g_prev = gamma(n - 1), g_cur = gamma(n);
        const double bound = 2.0 * (g_prev + g_cur) * eps;
        const auto cover = cover_samples(active, g_cur * eps, joint_dist);
        // refine per realized (previous chain, new cell) pair
        std::map<std::pair<std::size_t, std::size_t>, std::size_t> chain_ids;
        std::vector<Point> new_pick;
        std::vector<std::size_t> new_chain(active.size());
        double max_jump = 0.0;
        for (std::size_t i = 0; i < active.size(); ++i) {
            const std::pair<std::size_t, std::size_t> key{chain[i], cover.cell[i]};
            auto it = chain_ids.find(key);
            if (it == chain_ids.end()) {
                const std::size_t center_sample = cover.centers[cover.cell[i]];
                const PointSet& rep = F.value(center_sample);
                const Point& prev = pick[key.first];
                const Point cand = rep[nearest_member(prev, rep, metric)];
                const double jump = metric(prev, cand);
                if (!(jump <= bound))
                    throw certificate_error(
                        "select_eps: refinement jump " + std::to_string(jump) +
                        " exceeds bound " + std::to_string(bound) + " at level " +
                        std::to_string(n) + ", cell " + std::to_string(cover.cell[i]));
                max_jump = std::max(max_jump, jump);
                it = chain_ids.emplace(key, new_pick.size()).first;
                new_pick.push_back(cand);
            }
            new_chain[i] = it->second;
        }
        pick = std::move(new_pick);
        chain = std::move(new_chain);
        core.levels.push_back({g_cur, max_jump, bound, cover.centers.size()});
    }

    // close the membership gap: project each sample's pick onto the true F(t)
    core.picks.resize(active.size());
    for (std::size_t i = 0; i < active.size(); ++i) {
        const PointSet& Ft = F.value(active[i]);
        core.picks[i] = Ft[nearest_member(pick[chain[i]], Ft, metric)];
    }
    return core;
}

inline void require_selection_inputs(const SetValuedSignal& F, const Signal& g) {
    require_same_grid(F.grid(), g.grid());
    if (F.metric().dimension() != g.metric().dimension())
        throw std::invalid_argument("selection: dimension mismatch between F and g");
}

inline Signal picks_to_signal(const SetValuedSignal& F, const Signal& g,
                              const std::vector<std::size_t>& active,
                              const std::vector<Point>& picks) {
    // default everywhere: nearest member to g (overwritten on active samples)
    const std::size_t d = static_cast<std::size_t>(F.metric().dimension());
    std::vector<double> flat(F.size() * d);
    for (std::size_t k = 0; k < F.size(); ++k) {
        const PointSet& Ft = F.value(k);
        const Point& m = Ft[nearest_member(g.value(k), Ft, F.metric())];
        std::copy(m.begin(), m.end(), flat.begin() + k * d);
    }
    for (std::size_t i = 0; i < active.size(); ++i)
        std::copy(picks[i].begin(), picks[i].end(), flat.begin() + active[i] * d);
    return Signal(F.grid(), F.metric(), std::move(flat));
}

inline double membership_defect_of(const Signal& sel, const SetValuedSignal& F) {
    double worst = 0.0;
    for (std::size_t k = 0; k < F.size(); ++k)
        worst = std::max(worst, dist_point_set(sel.value(k), F.value(k), F.metric()));
    return worst;
}

}  // namespace detail

// Eps-selection by successive refinement: joint decomposition of (F, g) at shrinking
// tolerances gamma_n * eps, nearest-member anchor picks, refinement with the
// jump bound 2 (gamma_{n-1} + gamma_n) eps enforced, and a final projection
// onto the true F(t).
inline SelectionReport select_eps(const SetValuedSignal& F, const Signal& g, double eps,
                                  int depth) {
    detail::require_selection_inputs(F, g);
    if (!(eps > 0.0)) throw std::invalid_argument("select_eps: eps must be positive");
    if (depth < 1) throw std::invalid_argument("select_eps: depth must be >= 1");

    std::vector<std::size_t> active(F.size());
    for (std::size_t k = 0; k < F.size(); ++k) active[k] = k;
    auto core = detail::select_eps_core(F, g, eps, depth, active);

    SelectionReport report{detail::picks_to_signal(F, g, active, core.picks)};
    report.refinement_depth = depth;
    report.per_level = std::move(core.levels);
    report.membership_defect = detail::membership_defect_of(report.selection, F);
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < F.size(); ++k) {
        const double toF = dist_point_set(g.value(k), F.value(k), F.metric());
        worst = std::max(worst, F.metric()(report.selection.value(k), g.value(k)) - toF - eps);
    }
    report.distance_certificate = worst;
    return report;
}

// Dyadic strata via separator level sets of rho(g(.), F(.)), one
// eps-selection per stratum at tolerance eta(2^{-j-1}), glued piecewise; on
// the core (where rho(g, F) has dropped below the last threshold) the
// selection is the nearest member to g.
inline SelectionReport select_modulus(const SetValuedSignal& F, const Signal& g,
                                      const Modulus& eta, int maxlevel, double b = 0.0,
                                      int separator_depth = 1, int inner_depth = 2) {
    detail::require_selection_inputs(F, g);
    if (maxlevel < 1) throw std::invalid_argument("select_modulus: maxlevel must be >= 1");

    const std::vector<double> dist = pointwise_dist_to_sets(g, F);
    const Signal ds(F.grid(), Metric::euclidean(1), dist);

    // base period for the stratum separators; auto = dominant exponent of
    // the distance signal, or none when it is degenerate
    bool have_b = b > 0.0;
    if (!have_b && !is_degenerate(ds, 1e-9)) {
        const double L = F.grid().length();
        const double pi = std::acos(-1.0);
        const auto table = scan_exponents(ds, 0.05, 8.0, pi / L, 4, 1e-3);
        if (!table.entries.empty()) {
            b = 2.0 * pi / std::abs(table.entries.front().lambda);
            have_b = true;
        }
    }

    // nested masks T_j with rho(g,F) < 2^{-j} on T_j and > 2^{-j-1} off T_j
    std::vector<Mask> T;
    T.push_back(Mask::full(F.grid()));
    for (int j = 1; j <= maxlevel; ++j) {
        const double a = std::pow(2.0, -j - 1);
        const double eps_j = a;
        Separator sep;
        if (have_b) {
            std::vector<double> shifted(dist.size());
            const double threshold = a + 2.0 * eps_j / 3.0;
            for (std::size_t k = 0; k < dist.size(); ++k) shifted[k] = dist[k] - threshold;
            sep = build_separator(eps_j / 3.0, b, separator_depth,
                                  {Signal(F.grid(), Metric::euclidean(1), shifted)});
        } else {
            sep.Delta = eps_j / 3.0;  // empty separator; degenerate distance signal
        }
        Mask Tj = level_set(ds, a, eps_j, sep);
        T.push_back(mask_intersection(Tj, T.back()));  // enforce nesting
    }

    // per-stratum selections f_j on T_{j-1}
    std::vector<std::vector<Point>> stratum_picks(maxlevel + 1);
    std::vector<std::vector<std::size_t>> stratum_active(maxlevel + 1);
    SelectionReport report{Signal::zeros(F.grid(), Metric::euclidean(F.metric().dimension()))};
    for (int j = 1; j <= maxlevel; ++j) {
        std::vector<std::size_t> active;
        const Mask& host = T[j - 1];
        for (std::size_t k = 0; k < F.size(); ++k)
            if (host[k]) active.push_back(k);
        const double eps_j = eta(std::pow(2.0, -j - 1));
        auto core = detail::select_eps_core(F, g, eps_j, inner_depth, active);
        stratum_picks[j] = std::move(core.picks);
        stratum_active[j] = std::move(active);
    }

    // glue: f_j on T_{j-1} \ T_j, nearest member to g on the core T_maxlevel
    const std::size_t d = static_cast<std::size_t>(F.metric().dimension());
    std::vector<double> flat(F.size() * d);
    std::vector<int> stratum_of(F.size(), -1);
    for (int j = 1; j <= maxlevel; ++j) {
        std::size_t members = 0;
        for (std::size_t i = 0; i < stratum_active[j].size(); ++i) {
            const std::size_t k = stratum_active[j][i];
            if (T[j][k]) continue;  // not in the stratum, deeper levels own it
            if (stratum_of[k] != -1) continue;
            stratum_of[k] = j;
            ++members;
            std::copy(stratum_picks[j][i].begin(), stratum_picks[j][i].end(),
                      flat.begin() + k * d);
        }
        report.strata.push_back({j, eta(std::pow(2.0, -j - 1)), members});
    }
    std::size_t core_members = 0;
    for (std::size_t k = 0; k < F.size(); ++k) {
        if (stratum_of[k] != -1) continue;
        const PointSet& Ft = F.value(k);
        const Point& m = Ft[nearest_member(g.value(k), Ft, F.metric())];
        std::copy(m.begin(), m.end(), flat.begin() + k * d);
        ++core_members;
    }
    report.strata.push_back({maxlevel + 1, 0.0, core_members});
    report.refinement_depth = maxlevel;

    // the proof's partial glue f(n;.) = sum_{j<=n} f_j chi_strata + f_{n+1} chi_{T_n}
    for (int n = 1; n <= maxlevel - 1; ++n) {
        std::vector<double> nflat(flat.size(), 0.0);
        std::vector<std::uint8_t> set(F.size(), 0);
        for (int j = 1; j <= n; ++j)
            for (std::size_t i = 0; i < stratum_active[j].size(); ++i) {
                const std::size_t k = stratum_active[j][i];
                if (stratum_of[k] == j) {
                    std::copy(stratum_picks[j][i].begin(), stratum_picks[j][i].end(),
                              nflat.begin() + k * d);
                    set[k] = 1;
                }
            }
        for (std::size_t i = 0; i < stratum_active[n + 1].size(); ++i) {
            const std::size_t k = stratum_active[n + 1][i];
            if (!set[k]) {
                std::copy(stratum_picks[n + 1][i].begin(), stratum_picks[n + 1][i].end(),
                          nflat.begin() + k * d);
                set[k] = 1;
            }
        }
        double gap = 0.0;
        for (std::size_t k = 0; k < F.size(); ++k) {
            if (!set[k]) continue;  // every sample sits in a stratum or in T_n
            const std::span<const double> a(flat.data() + k * d, d);
            const std::span<const double> bb(nflat.data() + k * d, d);
            gap = std::max(gap, F.metric()(a, bb));
        }
        report.sup_gap.push_back(gap);
    }
    report.selection = Signal(F.grid(), F.metric(), std::move(flat));

    report.membership_defect = detail::membership_defect_of(report.selection, F);
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < F.size(); ++k) {
        const double toF = dist[k];
        worst = std::max(worst, F.metric()(report.selection.value(k), g.value(k)) - toF - eta(toF));
    }
    report.distance_certificate = worst;
    return report;
}

struct DenseFamilyResult {
    std::vector<SelectionReport> selections;
    std::vector<Point> anchors;
    std::vector<double> coverage_defect_by_count;  // Hausdorff defect after 1..count selections
};

// Dense selection family: anchors cover the pooled value cloud, and
// each (anchor, ladder eps) pair contributes the eps-selection against the
// constant anchor signal.
inline DenseFamilyResult dense_family(const SetValuedSignal& F, std::size_t count,
                                      const std::vector<double>& eps_ladder, int depth = 2) {
    if (count < 1) throw std::invalid_argument("dense_family: count must be >= 1");
    if (eps_ladder.empty()) throw std::invalid_argument("dense_family: empty eps ladder");
    for (double e : eps_ladder)
        if (!(e > 0.0)) throw std::invalid_argument("dense_family: eps must be positive");

    std::vector<Point> cloud;
    for (std::size_t k = 0; k < F.size(); ++k)
        for (const auto& p : F.value(k).points()) cloud.push_back(p);
    const double delta = 0.5 * *std::min_element(eps_ladder.begin(), eps_ladder.end());

    DenseFamilyResult out;
    out.anchors = greedy_cover(cloud, delta, F.metric());

    for (const auto& anchor : out.anchors) {
        for (double e : eps_ladder) {
            if (out.selections.size() >= count) break;
            const Signal ga = Signal::constant(F.grid(), F.metric(), anchor);
            out.selections.push_back(select_eps(F, ga, e, depth));
        }
        if (out.selections.size() >= count) break;
    }

    // coverage defect after the first j selections
    for (std::size_t j = 1; j <= out.selections.size(); ++j) {
        double worst = 0.0;
        for (std::size_t k = 0; k < F.size(); ++k) {
            std::vector<Point> sels;
            for (std::size_t i = 0; i < j; ++i) {
                auto v = out.selections[i].selection.value(k);
                sels.emplace_back(v.begin(), v.end());
            }
            worst = std::max(worst, hausdorff(F.value(k), PointSet(sels), F.metric()));
        }
        out.coverage_defect_by_count.push_back(worst);
    }
    return out;
}

struct EpsNetResult {
    std::vector<SelectionReport> selections;
    double eps_prime = 0.0;
    double worst_net_radius = 0.0;  // max over samples of the realized net radius
};

namespace detail {

// n-point eps-net from the members of F, if one exists: greedy first, exact
// subset search as fallback. Returns member indices.
inline std::optional<std::vector<std::size_t>> find_eps_net(const PointSet& F, std::size_t n,
                                                            double eps, const Metric& m) {
    const std::size_t size = F.size();
    if (size <= n) {
        std::vector<std::size_t> all(size);
        for (std::size_t i = 0; i < size; ++i) all[i] = i;
        return all;
    }
    auto is_net = [&](const std::vector<std::size_t>& idx) {
        for (std::size_t i = 0; i < size; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t j : idx) best = std::min(best, m(F[i], F[j]));
            if (!(best < eps)) return false;
        }
        return true;
    };
    // greedy farthest-member attempt
    std::vector<std::size_t> greedy{0};
    std::vector<double> dmin(size, std::numeric_limits<double>::infinity());
    while (greedy.size() <= n) {
        double worst = -1.0;
        std::size_t arg = 0;
        for (std::size_t i = 0; i < size; ++i) {
            dmin[i] = std::min(dmin[i], m(F[i], F[greedy.back()]));
            if (dmin[i] > worst) {
                worst = dmin[i];
                arg = i;
            }
        }
        if (worst < eps) return greedy;
        if (greedy.size() == n) break;
        greedy.push_back(arg);
    }
    // exact search over n-subsets
    if (size > 24)
        throw construction_error("find_eps_net: exact net search space too large (" +
                                 std::to_string(size) + " members)");
    std::vector<std::size_t> idx(n);
    std::function<std::optional<std::vector<std::size_t>>(std::size_t, std::size_t)> rec =
        [&](std::size_t start, std::size_t chosen) -> std::optional<std::vector<std::size_t>> {
        if (chosen == n) return is_net(idx) ? std::optional(idx) : std::nullopt;
        for (std::size_t i = start; i + (n - chosen) <= size; ++i) {
            idx[chosen] = i;
            if (auto r = rec(i + 1, chosen + 1)) return r;
        }
        return std::nullopt;
    };
    return rec(0, 0);
}

}  // namespace detail

// Eps-net selections: verify the pointwise net precondition,
// cover the samples by Hausdorff distance at radius (eps' - eps)/2, fix one
// n-point net per cell, and project each net point onto the true F(t).
inline EpsNetResult select_eps_net(const SetValuedSignal& F, std::size_t n, double eps,
                                   double eps_prime) {
    if (n < 1) throw std::invalid_argument("select_eps_net: n must be >= 1");
    if (!(eps > 0.0) || !(eps_prime > eps))
        throw std::invalid_argument("select_eps_net: need eps' > eps > 0");
    const Metric& metric = F.metric();

    // precondition: every F(t) admits an n-point eps-net from its members
    for (std::size_t k = 0; k < F.size(); ++k)
        if (!detail::find_eps_net(F.value(k), n, eps, metric))
            throw std::invalid_argument(
                "select_eps_net: no n-point eps-net exists at sample " + std::to_string(k) +
                " (t = " + std::to_string(F.grid().time(k)) + ")");

    const double radius = (eps_prime - eps) / 2.0;
    std::vector<std::size_t> samples(F.size());
    for (std::size_t k = 0; k < F.size(); ++k) samples[k] = k;
    const auto cover = detail::cover_samples(samples, radius, [&](std::size_t s, std::size_t t) {
        return hausdorff(F.value(s), F.value(t), metric, false);
    });

    // one fixed net per cell, padded to n points by repetition
    std::vector<std::vector<Point>> cell_net(cover.centers.size());
    for (std::size_t c = 0; c < cover.centers.size(); ++c) {
        const PointSet& rep = F.value(cover.centers[c]);
        const auto net = detail::find_eps_net(rep, n, eps, metric);
        for (std::size_t j : *net) cell_net[c].push_back(rep[j]);
        while (cell_net[c].size() < n) cell_net[c].push_back(cell_net[c].front());
    }

    EpsNetResult out;
    out.eps_prime = eps_prime;
    const std::size_t d = static_cast<std::size_t>(metric.dimension());
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> flat(F.size() * d);
        for (std::size_t k = 0; k < F.size(); ++k) {
            const PointSet& Ft = F.value(k);
            const Point& target = cell_net[cover.cell[k]][j];
            const Point& m = Ft[nearest_member(target, Ft, metric)];
            std::copy(m.begin(), m.end(), flat.begin() + k * d);
        }
        SelectionReport rep{Signal(F.grid(), metric, std::move(flat))};
        rep.membership_defect = detail::membership_defect_of(rep.selection, F);
        out.selections.push_back(std::move(rep));
    }

    // certify the eps'-net property samplewise
    for (std::size_t k = 0; k < F.size(); ++k) {
        std::vector<Point> centers;
        for (const auto& rep : out.selections) {
            auto v = rep.selection.value(k);
            centers.emplace_back(v.begin(), v.end());
        }
        double worst = 0.0;
        for (const auto& y : F.value(k).points()) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& c : centers) best = std::min(best, metric(y, c));
            worst = std::max(worst, best);
        }
        out.worst_net_radius = std::max(out.worst_net_radius, worst);
        if (!(worst < eps_prime))
            throw certificate_error("select_eps_net: eps'-net certificate violated at sample " +
                                    std::to_string(k));
    }
    return out;
}

// Desk-scale proxy for Mod f inside Mod F + Mod g: every tau accepted
// jointly for F (Hausdorff scan) and g at the query tolerance must be
// accepted for the selection at relax * eps.
inline APTransfer ap_transfer_check(const SetValuedSignal& F, const Signal& g,
                                    const Signal& selection, const APQuery& q,
                                    double relax = 4.0) {
    const APReport rf = scan_almost_periods(F, q);
    const APReport rg = scan_almost_periods(g, q);
    APTransfer out;
    out.relax = relax;
    for (double tau : rf.accepted_taus) {
        const bool in_g = std::any_of(rg.accepted_taus.begin(), rg.accepted_taus.end(),
                                      [&](double t) { return std::abs(t - tau) < 1e-9; });
        if (in_g) out.joint_taus.push_back(tau);
    }
    if (out.joint_taus.empty()) {
        out.supported = true;  // vacuous
        out.fraction = 1.0;
        return out;
    }
    std::size_t hits = 0;
    for (double tau : out.joint_taus) {
        const auto pair = shift_overlap(selection, tau);
        if (d_pl(pair.base, pair.shifted, q.p, q.l, q.bounded) < relax * q.eps) ++hits;
    }
    out.fraction = static_cast<double>(hits) / static_cast<double>(out.joint_taus.size());
    out.supported = hits == out.joint_taus.size();
    return out;
}

}  // namespace apw
