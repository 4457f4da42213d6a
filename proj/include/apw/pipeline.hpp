// Report assembly shared by the CLI and in-process callers: one JSON shape
// per command, so tool output and library output can be compared byte for
// byte.

#pragma once

#include "apw/io.hpp"

namespace apw {

// Base period with 2*pi/b at the strongest nonzero estimated exponent;
// falls back to a quarter window when no usable exponent is found.
inline double default_base_period(const Signal& f) {
    const double pi = std::acos(-1.0);
    const double L = f.grid().length();
    const double resolution = 2.0 * pi / L;
    const double nyquist = pi / f.grid().h;
    const auto table = scan_exponents(f, resolution, std::min(64.0, nyquist / 2.0),
                                      std::max(resolution / 2.0, pi / L), 8, 1e-6);
    for (const auto& e : table.entries)
        if (std::abs(e.lambda) > resolution / 2.0) return 2.0 * pi / std::abs(e.lambda);
    return L / 4.0;
}

struct AnalyzeParams {
    double p = 1.0;
    WindowLadder ladder;
    std::vector<double> deltas{0.2, 0.05};
    double mp_tol = 0.5;
    APQuery ap;
    double lambda_min = -8.0;
    double lambda_max = 8.0;
    double lambda_step = 0.0;  // 0 -> pi/L
    std::size_t top_k = 8;
    double floor = 1e-3;
};

inline json analyze_report(const Signal& f, const AnalyzeParams& params) {
    const double L = f.grid().length();
    const double pi = std::acos(-1.0);
    const double step = params.lambda_step > 0.0 ? params.lambda_step : pi / L;

    const SeminormReport norms = norm_weyl(f, params.p, params.ladder);
    const JpReport jp = j_p(f, Signal::zeros(f.grid(), f.metric()), params.p, params.deltas,
                            params.ladder);
    const bool sharp = jp.estimate < params.mp_tol;
    const APReport ap = scan_almost_periods(f, params.ap);
    const ExponentTable table =
        scan_exponents(f, params.lambda_min, params.lambda_max, step, params.top_k, params.floor);

    return {{"grid", {{"t0", f.grid().t0}, {"h", f.grid().h}, {"n", f.grid().n}}},
            {"dimension", f.dimension()},
            {"norms", to_json(norms)},
            {"jp", to_json(jp)},
            {"mp_sharp", {{"tol", params.mp_tol}, {"pass", sharp}}},
            {"almost_periods", to_json(ap)},
            {"fourier", to_json(table)}};
}

struct DecomposeParams {
    double eps = 0.5;
    double b = 0.0;  // 0 -> default_base_period
    int depth = 2;
    DecomposeOptions options;
};

inline json decompose_report(const Signal& f, const DecomposeParams& params,
                             MaskFamily* family_out = nullptr) {
    const double b = params.b > 0.0 ? params.b : default_base_period(f);
    MaskFamily family = decompose(f, params.eps, b, params.depth, params.options);
    json j = to_json(family);
    j["eps"] = params.eps;
    j["b"] = b;
    j["depth"] = params.depth;
    if (family_out) *family_out = std::move(family);
    return j;
}

enum class SelectMode { eps, modulus, net, dense };

struct SelectParams {
    SelectMode mode = SelectMode::eps;
    double eps = 0.1;
    int depth = 2;
    std::optional<Modulus> eta;  // modulus mode
    int maxlevel = 4;
    double b = 0.0;
    int separator_depth = 1;
    std::size_t net_n = 2;  // net mode
    double eps_prime = 0.0;
    std::size_t count = 4;  // dense mode
    std::vector<double> eps_ladder{0.5, 0.25};
    std::optional<APQuery> ap_query;  // attach an AP-transfer check
    double relax = 4.0;
    std::optional<Modulus> certify_eta;  // recheck the certificate against this gauge
};

inline double recertify(const SelectionReport& rep, const SetValuedSignal& F, const Signal& g,
                        const Modulus& eta) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < F.size(); ++k) {
        const double toF = dist_point_set(g.value(k), F.value(k), F.metric());
        worst = std::max(worst,
                         F.metric()(rep.selection.value(k), g.value(k)) - toF - eta(toF));
    }
    return worst;
}

struct SelectOutcome {
    json report;
    std::vector<SelectionReport> selections;
    bool certificate_ok = true;
};

inline SelectOutcome select_run(const SetValuedSignal& F, const Signal& g,
                                const SelectParams& params) {
    SelectOutcome out;
    json reports = json::array();
    switch (params.mode) {
        case SelectMode::eps: {
            SelectionReport rep = select_eps(F, g, params.eps, params.depth);
            if (params.ap_query)
                rep.ap_transfer = ap_transfer_check(F, g, rep.selection, *params.ap_query,
                                                    params.relax);
            out.selections.push_back(std::move(rep));
            break;
        }
        case SelectMode::modulus: {
            if (!params.eta) throw std::invalid_argument("select: modulus mode needs --eta");
            SelectionReport rep = select_modulus(F, g, *params.eta, params.maxlevel, params.b,
                                                 params.separator_depth, params.depth);
            if (params.ap_query)
                rep.ap_transfer = ap_transfer_check(F, g, rep.selection, *params.ap_query,
                                                    params.relax);
            out.selections.push_back(std::move(rep));
            break;
        }
        case SelectMode::net: {
            const double eps_prime = params.eps_prime > 0.0 ? params.eps_prime : 1.1 * params.eps;
            EpsNetResult res = select_eps_net(F, params.net_n, params.eps, eps_prime);
            out.report["eps_prime"] = res.eps_prime;
            out.report["worst_net_radius"] = res.worst_net_radius;
            out.selections = std::move(res.selections);
            break;
        }
        case SelectMode::dense: {
            DenseFamilyResult res = dense_family(F, params.count, params.eps_ladder, params.depth);
            json anchors = json::array();
            for (const auto& a : res.anchors) anchors.push_back(a);
            out.report["anchors"] = anchors;
            out.report["coverage_defect_by_count"] = res.coverage_defect_by_count;
            out.selections = std::move(res.selections);
            break;
        }
    }
    for (const auto& rep : out.selections) {
        json jr = to_json(rep);
        if (params.certify_eta) {
            const double cert = recertify(rep, F, g, *params.certify_eta);
            jr["certify"] = {{"certificate", cert}};
            if (cert > 0.0) out.certificate_ok = false;
        }
        if (rep.membership_defect != 0.0 || rep.distance_certificate > 0.0)
            out.certificate_ok = false;
        if (rep.ap_transfer && !rep.ap_transfer->supported) out.certificate_ok = false;
        reports.push_back(std::move(jr));
    }
    out.report["selections"] = reports;
    out.report["certificate_ok"] = out.certificate_ok;
    return out;
}

// plot-ready columns: t, rho(g(t), F(t)), rho(f(t), g(t))
inline std::string plot_csv(const SetValuedSignal& F, const Signal& g, const Signal& f) {
    std::ostringstream os;
    os << "t,dist_g_F,dist_f_g\n";
    for (std::size_t k = 0; k < F.size(); ++k) {
        os << format_double(F.grid().time(k)) << ","
           << format_double(dist_point_set(g.value(k), F.value(k), F.metric())) << ","
           << format_double(F.metric()(f.value(k), g.value(k))) << "\n";
    }
    return os.str();
}

}  // namespace apw
