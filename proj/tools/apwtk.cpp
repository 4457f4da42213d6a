// apwtk: generate sampled fixtures, analyze signals (seminorms, almost
// periods, Fourier exponents), decompose them into mask families, and build
// selections of set-valued signals. JSON reports, CSV sample data.
//
// Exit codes: 0 ok, 2 input validation, 3 certificate violation,
// 4 construction failure.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "apw/pipeline.hpp"

namespace fs = std::filesystem;
using namespace apw;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Common {
    std::string out_dir = ".";
    bool force = false;
    unsigned threads = 0;
    std::string metric = "euclidean";
};

MetricKind metric_kind(const std::string& name) {
    if (name == "euclidean") return MetricKind::euclidean;
    if (name == "chebyshev") return MetricKind::chebyshev;
    throw std::invalid_argument("unknown metric '" + name + "' (euclidean|chebyshev)");
}

Grid parse_grid(const std::string& spec) {
    double t0 = 0.0, h = 0.0;
    long n = 0;
    if (std::sscanf(spec.c_str(), "%lf,%lf,%ld", &t0, &h, &n) != 3 || n < 2)
        throw std::invalid_argument("bad --grid spec '" + spec + "' (want t0,h,n)");
    return Grid(t0, h, static_cast<std::size_t>(n));
}

std::vector<double> parse_list(const std::string& spec) {
    std::vector<double> out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stod(item));
    if (out.empty()) throw std::invalid_argument("empty list '" + spec + "'");
    return out;
}

RealTrigSpec parse_terms(const std::string& spec) {
    RealTrigSpec trig;
    std::stringstream ss(spec);
    std::string term;
    while (std::getline(ss, term, ';')) {
        if (term.empty()) continue;
        const auto parts = parse_list(term);
        if (parts.size() < 2 || parts.size() > 3)
            throw std::invalid_argument("bad trig term '" + term + "' (want amp,omega[,phase])");
        trig.terms.push_back({parts[0], parts[1], parts.size() == 3 ? parts[2] : 0.0});
    }
    if (trig.terms.empty()) throw std::invalid_argument("no trig terms in '" + spec + "'");
    return trig;
}

Modulus parse_eta(const std::string& spec) {
    std::stringstream ss(spec);
    std::string kind;
    std::getline(ss, kind, ',');
    std::string rest;
    std::getline(ss, rest);
    if (kind == "linear") return Modulus::linear(std::stod(rest));
    if (kind == "power") {
        const auto p = parse_list(rest);
        if (p.size() != 2) throw std::invalid_argument("power eta wants c,beta");
        return Modulus::power(p[0], p[1]);
    }
    if (kind == "table") {
        std::vector<std::pair<double, double>> knots;
        std::stringstream rs(rest);
        std::string knot;
        while (std::getline(rs, knot, ',')) {
            const auto colon = knot.find(':');
            if (colon == std::string::npos)
                throw std::invalid_argument("table eta wants t:v,t:v,...");
            knots.emplace_back(std::stod(knot.substr(0, colon)),
                               std::stod(knot.substr(colon + 1)));
        }
        return Modulus::from_table(std::move(knots));
    }
    throw std::invalid_argument("unknown eta kind '" + kind + "' (linear|power|table)");
}

void write_file(const Common& common, const std::string& name, const std::string& content) {
    fs::create_directories(common.out_dir);
    const fs::path path = fs::path(common.out_dir) / name;
    if (fs::exists(path) && !common.force)
        throw std::invalid_argument("refusing to overwrite " + path.string() +
                                    " (pass --force)");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::invalid_argument("cannot write " + path.string());
    os << content;
}

void write_json(const Common& common, const std::string& name, const json& j) {
    write_file(common, name, j.dump(2) + "\n");
}

Signal load_signal(const std::string& path, const std::string& metric) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot read " + path);
    return read_signal_csv(is, metric_kind(metric));
}

SetValuedSignal load_set(const std::string& path, const std::string& metric) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot read " + path);
    return read_set_csv(is, metric_kind(metric));
}

void apply_threads(const Common& common) {
    if (common.threads >= 1) set_thread_count(common.threads);
}

void write_set_csv_file(const Common& common, const SetValuedSignal& F) {
    std::ostringstream os;
    write_set_csv(os, F);
    write_file(common, "set.csv", os.str());
}

// ---------------------------------------------------------------------------

int run_gen(const Common& common, const std::string& grid_spec, const std::string& preset,
            const std::string& terms, double value, double amp, double period, double low,
            double high, double gap, int count, double offset, double noise,
            std::uint64_t seed, bool have_seed) {
    const Grid grid = parse_grid(grid_spec);
    if (noise > 0.0 && !have_seed)
        throw std::invalid_argument("--noise requires an explicit --seed");

    auto with_noise = [&](GeneratorSpec spec) -> Signal {
        if (noise > 0.0)
            return generate(NoiseSpec{std::make_shared<GeneratorSpec>(std::move(spec)),
                                      noise, seed},
                            grid);
        return generate(spec, grid);
    };
    auto add_offset = [&](Signal s) -> Signal {
        if (offset == 0.0) return s;
        std::vector<double> flat = s.flat();
        for (double& v : flat) v += offset;
        return Signal(s.grid(), s.metric(), std::move(flat));
    };

    if (preset == "constant") {
        const Signal f = add_offset(with_noise(RealTrigSpec{{{value, 0.0, kPi / 2.0}}}));
        write_file(common, "signal.csv", signal_csv_string(f));
    } else if (preset == "trig") {
        const Signal f = add_offset(with_noise(parse_terms(terms)));
        write_file(common, "signal.csv", signal_csv_string(f));
    } else if (preset == "quasi") {
        const Signal f = add_offset(
            with_noise(RealTrigSpec{{{amp, 1.0, 0.0}, {amp, std::sqrt(2.0), 0.0}}}));
        write_file(common, "signal.csv", signal_csv_string(f));
    } else if (preset == "step") {
        PeriodicTemplateSpec sq;
        sq.period = period;
        sq.dim = 1;
        sq.samples.assign(64, low);
        for (int i = 32; i < 64; ++i) sq.samples[i] = high;
        const Signal f = add_offset(with_noise(sq));
        write_file(common, "signal.csv", signal_csv_string(f));
    } else if (preset == "spikes") {
        std::vector<double> flat(grid.n, 0.0);
        const std::size_t stride = std::max<std::size_t>(grid.n / (count + 1), 1);
        for (int k = 0; k < count; ++k) {
            const std::size_t at = (k + 1) * stride;
            if (at < grid.n) flat[at] = std::pow(2.0, k);
        }
        write_file(common, "signal.csv",
                   signal_csv_string(Signal(grid, Metric::euclidean(1), flat)));
    } else if (preset == "two_branch" || preset == "three_branch") {
        const Signal base = add_offset(with_noise(
            terms.empty() ? RealTrigSpec{{{amp, 2.0 * kPi / period, 0.0}}} : parse_terms(terms)));
        const int branches = preset == "two_branch" ? 2 : 3;
        std::vector<PointSet> values;
        for (std::size_t k = 0; k < grid.n; ++k) {
            std::vector<Point> pts;
            for (int j = 0; j < branches; ++j)
                pts.push_back(Point{base.value(k)[0] + j * gap});
            values.emplace_back(pts);
        }
        write_set_csv_file(common, SetValuedSignal(grid, Metric::euclidean(1), values));
    } else {
        throw std::invalid_argument("unknown preset '" + preset + "'");
    }
    return 0;
}

int run_analyze(const Common& common, const std::string& in, AnalyzeParams params) {
    apply_threads(common);
    const Signal f = load_signal(in, common.metric);
    if (params.ladder.lengths.empty()) {
        for (std::size_t div : {8, 4, 2}) {
            const double l = static_cast<double>(f.grid().n / div) * f.grid().h;
            if (l > 0.0 &&
                (params.ladder.lengths.empty() || l > params.ladder.lengths.back()))
                params.ladder.lengths.push_back(l);
        }
    }
    if (params.ap.l <= 0.0) params.ap.l = params.ladder.lengths.front();
    if (params.ap.tau_step <= 0.0) params.ap.tau_step = f.grid().h;
    if (params.ap.tau_max <= params.ap.tau_min) {
        params.ap.tau_max = f.grid().length() / 4.0;
        params.ap.tau_min = -params.ap.tau_max;
    }
    write_json(common, "report.json", analyze_report(f, params));
    return 0;
}

int run_decompose(const Common& common, const std::string& in, DecomposeParams params) {
    apply_threads(common);
    const Signal f = load_signal(in, common.metric);
    MaskFamily family;
    const json report = decompose_report(f, params, &family);
    write_json(common, "family.json", report);

    std::ostringstream os;
    os << "t";
    for (std::size_t j = 1; j <= family.masks.size(); ++j) os << ",m" << j;
    os << ",tail\n";
    for (std::size_t k = 0; k < f.size(); ++k) {
        os << format_double(f.grid().time(k));
        bool covered = false;
        for (const auto& mk : family.masks) {
            os << "," << (mk[k] ? 1 : 0);
            covered = covered || mk[k];
        }
        os << "," << (covered ? 0 : 1) << "\n";
    }
    write_file(common, "masks.csv", os.str());
    return 0;
}

int run_select(const Common& common, const std::string& in, const std::string& g_path,
               const SelectParams& params, bool plot) {
    apply_threads(common);
    const SetValuedSignal F = load_set(in, common.metric);
    const Signal g = load_signal(g_path, common.metric);
    const SelectOutcome outcome = select_run(F, g, params);
    write_json(common, "selection.json", outcome.report);
    write_file(common, "selection.csv",
               signal_csv_string(outcome.selections.front().selection));
    if (plot)
        write_file(common, "plot.csv",
                   plot_csv(F, g, outcome.selections.front().selection));
    return outcome.certificate_ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"almost-periodic analysis toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    Common common;
    app.add_option("--out", common.out_dir, "output directory");
    app.add_flag("--force", common.force, "overwrite existing outputs");
    app.add_option("--threads", common.threads, "worker threads (default: APWTK_THREADS or 1)");
    app.add_option("--metric", common.metric, "euclidean|chebyshev");

    // gen
    auto* gen = app.add_subcommand("gen", "generate fixture CSVs");
    std::string grid_spec = "0,0.03125,4096", preset = "trig", terms;
    double value = 1.0, amp = 1.0, period = 1.0, low = 0.0, high = 5.0, gap = 2.0, offset = 0.0,
           noise = 0.0;
    int count = 8;
    std::uint64_t seed = 0;
    bool have_seed = false;
    gen->add_option("--grid", grid_spec, "t0,h,n");
    gen->add_option("--preset", preset,
                    "constant|trig|quasi|step|spikes|two_branch|three_branch");
    gen->add_option("--terms", terms, "amp,omega[,phase];... for trig presets");
    gen->add_option("--value", value, "constant preset value");
    gen->add_option("--amp", amp, "amplitude for quasi/branch presets");
    gen->add_option("--period", period, "period for step/branch presets");
    gen->add_option("--low", low, "step preset low level");
    gen->add_option("--high", high, "step preset high level");
    gen->add_option("--gap", gap, "branch separation");
    gen->add_option("--count", count, "spike count");
    gen->add_option("--offset", offset, "additive offset");
    gen->add_option("--noise", noise, "uniform noise amplitude (needs --seed)");
    gen->add_option("--seed", seed, "64-bit noise seed")->each([&](const std::string&) {
        have_seed = true;
    });

    // analyze
    auto* analyze = app.add_subcommand("analyze", "seminorms, almost periods, exponents");
    std::string in_path, ladder_spec, deltas_spec;
    AnalyzeParams aparams;
    aparams.ap = APQuery{0.25, 1.0, 0.0, false, 0.0, 0.0, 0.0};
    analyze->add_option("--in", in_path, "input signal CSV")->required();
    analyze->add_option("--p", aparams.p, "mean exponent p in [1,8]");
    analyze->add_option("--ladder", ladder_spec, "window lengths l1,l2,...");
    analyze->add_option("--deltas,--delta", deltas_spec, "J_p deltas, strictly decreasing");
    analyze->add_option("--mp-tol", aparams.mp_tol, "M_p-sharp tolerance");
    analyze->add_option("--eps", aparams.ap.eps, "almost-period tolerance");
    analyze->add_option("--l", aparams.ap.l, "almost-period window length");
    analyze->add_flag("--bounded", aparams.ap.bounded, "use the bounded metric rho'");
    analyze->add_option("--tau-min", aparams.ap.tau_min, "scan start");
    analyze->add_option("--tau-max", aparams.ap.tau_max, "scan end");
    analyze->add_option("--tau-step", aparams.ap.tau_step, "scan step");
    analyze->add_option("--lambda-min", aparams.lambda_min, "exponent scan start");
    analyze->add_option("--lambda-max", aparams.lambda_max, "exponent scan end");
    analyze->add_option("--lambda-step", aparams.lambda_step, "exponent scan step (0: pi/L)");
    analyze->add_option("--top-k", aparams.top_k, "table size limit");
    analyze->add_option("--floor", aparams.floor, "exponent magnitude floor");

    // decompose
    auto* dec = app.add_subcommand("decompose", "mask-family decomposition");
    DecomposeParams dparams;
    std::string class_ladder_spec;
    dec->add_option("--in", in_path, "input signal CSV")->required();
    dec->add_option("--eps", dparams.eps, "decomposition tolerance");
    dec->add_option("--b", dparams.b, "separator base period (0: from the exponent table)");
    dec->add_option("--depth", dparams.depth, "separator depth");
    dec->add_option("--alpha-limit", dparams.options.alpha_limit, "alpha search bound");
    dec->add_option("--cover-eps", dparams.options.cover_eps, "covering fraction budget");
    bool no_classify = false;
    dec->add_flag("--no-classify", no_classify, "skip per-mask classification");
    dec->add_option("--class-eps", dparams.options.class_eps, "classification tolerance");
    dec->add_option("--class-ladder", class_ladder_spec, "classification windows l1,l2,...");
    dec->add_option("--class-tau-span", dparams.options.class_tau_span, "classification range");
    dec->add_option("--class-tau-step", dparams.options.class_tau_step, "classification step");

    // select
    auto* sel = app.add_subcommand("select", "selections of set-valued signals");
    SelectParams sparams;
    std::string g_path, mode = "eps", eta_spec, certify_spec, eps_ladder_spec;
    bool plot = false;
    double ap_eps = 0.0, ap_l = 0.0, ap_range = 0.0, ap_step = 0.0;
    sel->add_option("--in", in_path, "input set-valued CSV")->required();
    sel->add_option("--g", g_path, "comparison signal CSV")->required();
    sel->add_option("--mode", mode, "eps|modulus|net|dense");
    sel->add_option("--eps", sparams.eps, "tolerance (eps/net modes)");
    sel->add_option("--depth", sparams.depth, "refinement depth");
    sel->add_option("--eta", eta_spec, "gauge kind,params (modulus mode)");
    sel->add_option("--maxlevel", sparams.maxlevel, "dyadic levels (modulus mode)");
    sel->add_option("--b", sparams.b, "stratum separator base period (0: auto)");
    sel->add_option("--sep-depth", sparams.separator_depth, "stratum separator depth");
    sel->add_option("--n", sparams.net_n, "net size (net mode)");
    sel->add_option("--eps-prime", sparams.eps_prime, "net radius eps' > eps (net mode)");
    sel->add_option("--count", sparams.count, "family size (dense mode)");
    sel->add_option("--eps-ladder", eps_ladder_spec, "dense-mode eps ladder e1,e2,...");
    sel->add_option("--ap-eps", ap_eps, "AP transfer tolerance (enables the check)");
    sel->add_option("--ap-l", ap_l, "AP transfer window");
    sel->add_option("--ap-range", ap_range, "AP transfer scan half-range");
    sel->add_option("--ap-step", ap_step, "AP transfer scan step");
    sel->add_option("--relax", sparams.relax, "AP transfer relaxation factor");
    sel->add_option("--certify-eta", certify_spec, "recheck the certificate against this gauge");
    sel->add_flag("--plot", plot, "emit plot.csv with (t, rho(g,F), rho(f,g))");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        if (gen->parsed())
            return run_gen(common, grid_spec, preset, terms, value, amp, period, low, high, gap,
                           count, offset, noise, seed, have_seed);
        if (analyze->parsed()) {
            if (!ladder_spec.empty()) aparams.ladder.lengths = parse_list(ladder_spec);
            if (!deltas_spec.empty()) aparams.deltas = parse_list(deltas_spec);
            return run_analyze(common, in_path, aparams);
        }
        if (dec->parsed()) {
            dparams.options.classify = !no_classify;
            if (!class_ladder_spec.empty())
                dparams.options.class_ladder = parse_list(class_ladder_spec);
            return run_decompose(common, in_path, dparams);
        }
        if (sel->parsed()) {
            if (mode == "eps")
                sparams.mode = SelectMode::eps;
            else if (mode == "modulus")
                sparams.mode = SelectMode::modulus;
            else if (mode == "net")
                sparams.mode = SelectMode::net;
            else if (mode == "dense")
                sparams.mode = SelectMode::dense;
            else
                throw std::invalid_argument("unknown mode '" + mode + "'");
            if (!eta_spec.empty()) sparams.eta = parse_eta(eta_spec);
            if (!certify_spec.empty()) sparams.certify_eta = parse_eta(certify_spec);
            if (!eps_ladder_spec.empty()) sparams.eps_ladder = parse_list(eps_ladder_spec);
            if (ap_eps > 0.0) {
                APQuery q;
                q.eps = ap_eps;
                q.l = ap_l;
                q.tau_min = -ap_range;
                q.tau_max = ap_range;
                q.tau_step = ap_step;
                sparams.ap_query = q;
            }
            return run_select(common, in_path, g_path, sparams, plot);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const certificate_error& e) {
        std::cerr << "certificate violation: " << e.what() << "\n";
        return 3;
    } catch (const construction_error& e) {
        std::cerr << "construction failure: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
