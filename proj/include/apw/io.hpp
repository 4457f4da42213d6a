// CSV signal formats and JSON report serialization.
//
// Signal CSV: header `t,v1..vd`, one row per sample. Set-valued CSV:
// `t,k,v1..vd` with k the member index within F(t). Values are written
// with 17 significant digits so read/write round-trips bit-exactly.

#pragma once

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "apw/almost_periodicity.hpp"
#include "apw/decomposition.hpp"
#include "apw/fourier.hpp"
#include "apw/selection.hpp"

namespace apw {

using json = nlohmann::ordered_json;

// --------------------------------------------------------------------------
// CSV
// --------------------------------------------------------------------------

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_signal_csv(std::ostream& os, const Signal& f) {
    os << "t";
    for (int c = 1; c <= f.dimension(); ++c) os << ",v" << c;
    os << "\n";
    for (std::size_t k = 0; k < f.size(); ++k) {
        os << format_double(f.grid().time(k));
        for (double v : f.value(k)) os << "," << format_double(v);
        os << "\n";
    }
}

inline std::string signal_csv_string(const Signal& f) {
    std::ostringstream os;
    write_signal_csv(os, f);
    return os.str();
}

inline void write_set_csv(std::ostream& os, const SetValuedSignal& F) {
    os << "t,k";
    for (int c = 1; c <= F.metric().dimension(); ++c) os << ",v" << c;
    os << "\n";
    for (std::size_t s = 0; s < F.size(); ++s) {
        const double t = F.grid().time(s);
        for (std::size_t k = 0; k < F.value(s).size(); ++k) {
            os << format_double(t) << "," << k;
            for (double v : F.value(s)[k]) os << "," << format_double(v);
            os << "\n";
        }
    }
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

inline double parse_double(const std::string& s) {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("csv: malformed number '" + s + "'");
    return v;
}

inline Grid grid_from_times(const std::vector<double>& times) {
    if (times.size() < 2) throw std::invalid_argument("csv: need at least two samples");
    const double h = times[1] - times[0];
    if (!(h > 0.0)) throw std::invalid_argument("csv: time column must be increasing");
    for (std::size_t k = 1; k < times.size(); ++k)
        if (!nearly_equal(times[k] - times[k - 1], h, 1e-9))
            throw std::invalid_argument("csv: non-uniform sampling step");
    return Grid(times[0], h, times.size());
}

}  // namespace detail

inline Signal read_signal_csv(std::istream& is, MetricKind kind = MetricKind::euclidean) {
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("csv: empty input");
    const auto header = detail::split_csv_line(line);
    if (header.size() < 2 || header[0] != "t")
        throw std::invalid_argument("csv: expected header t,v1..vd");
    const int dim = static_cast<int>(header.size()) - 1;

    std::vector<double> times;
    std::vector<double> flat;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto cells = detail::split_csv_line(line);
        if (cells.size() != header.size()) throw std::invalid_argument("csv: ragged row");
        times.push_back(detail::parse_double(cells[0]));
        for (std::size_t c = 1; c < cells.size(); ++c) flat.push_back(detail::parse_double(cells[c]));
    }
    const Grid grid = detail::grid_from_times(times);
    const Metric metric = kind == MetricKind::chebyshev ? Metric::chebyshev(dim)
                                                        : Metric::euclidean(dim);
    return Signal(grid, metric, std::move(flat));
}

inline SetValuedSignal read_set_csv(std::istream& is, MetricKind kind = MetricKind::euclidean) {
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("csv: empty input");
    const auto header = detail::split_csv_line(line);
    if (header.size() < 3 || header[0] != "t" || header[1] != "k")
        throw std::invalid_argument("csv: expected header t,k,v1..vd");
    const int dim = static_cast<int>(header.size()) - 2;

    std::vector<double> times;
    std::vector<std::vector<Point>> groups;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto cells = detail::split_csv_line(line);
        if (cells.size() != header.size()) throw std::invalid_argument("csv: ragged row");
        const double t = detail::parse_double(cells[0]);
        Point p;
        for (std::size_t c = 2; c < cells.size(); ++c) p.push_back(detail::parse_double(cells[c]));
        if (times.empty() || times.back() != t) {
            times.push_back(t);
            groups.emplace_back();
        }
        groups.back().push_back(std::move(p));
    }
    const Grid grid = detail::grid_from_times(times);
    const Metric metric = kind == MetricKind::chebyshev ? Metric::chebyshev(dim)
                                                        : Metric::euclidean(dim);
    std::vector<PointSet> values;
    values.reserve(groups.size());
    for (auto& g : groups) values.emplace_back(std::move(g));
    return SetValuedSignal(grid, metric, std::move(values));
}

// --------------------------------------------------------------------------
// JSON
// --------------------------------------------------------------------------

inline json to_json(const SeminormReport& r) {
    json entries = json::array();
    for (const auto& e : r.entries) entries.push_back({{"l", e.l}, {"value", e.value}});
    return {{"p", r.p},
            {"bounded", r.bounded},
            {"entries", entries},
            {"weyl_estimate", r.weyl_estimate},
            {"monotonicity_defect", r.monotonicity_defect},
            {"slack", r.slack}};
}

inline json to_json(const JpReport& r) {
    json table = json::array();
    for (const auto& e : r.table)
        table.push_back({{"delta", e.delta}, {"l", e.l}, {"value", e.value}});
    return {{"p", r.p}, {"table", table}, {"estimate", r.estimate}};
}

inline json to_json(const APQuery& q) {
    return {{"eps", q.eps},       {"p", q.p},
            {"l", q.l},           {"bounded", q.bounded},
            {"tau_min", q.tau_min}, {"tau_max", q.tau_max},
            {"tau_step", q.tau_step}};
}

inline json to_json(const APReport& r) {
    json j{{"query", to_json(r.query)},
           {"accepted_taus", r.accepted_taus},
           {"max_gap", r.max_gap},
           {"class", to_string(r.ap_class)}};
    if (r.relatively_dense_at)
        j["relatively_dense_at"] = *r.relatively_dense_at;
    else
        j["relatively_dense_at"] = nullptr;
    j["bohr_dense"] = r.bohr_dense;
    j["stepanov_dense"] = r.stepanov_dense;
    j["equi_weyl_dense"] = r.equi_weyl_dense;
    j["stepanov_l"] = r.stepanov_l;
    return j;
}

inline json to_json(const ExponentTable& t) {
    json entries = json::array();
    for (const auto& e : t.entries) {
        json re = json::array(), im = json::array();
        for (const auto& c : e.coeff) {
            re.push_back(c.real());
            im.push_back(c.imag());
        }
        entries.push_back({{"lambda", e.lambda},
                           {"re", re},
                           {"im", im},
                           {"magnitude", e.magnitude},
                           {"crosstalk", e.crosstalk_flag}});
    }
    return {{"entries", entries}, {"resolution", t.resolution}};
}

inline json mask_rle(const Mask& m) {
    json runs = json::array();
    std::size_t k = 0;
    const bool first = m.size() ? m[0] : false;
    while (k < m.size()) {
        const bool bit = m[k];
        std::size_t len = 0;
        while (k < m.size() && m[k] == bit) {
            ++len;
            ++k;
        }
        runs.push_back(len);
    }
    return {{"first", first ? 1 : 0}, {"runs", runs}};
}

inline Mask mask_from_rle(const json& j, const Grid& grid) {
    std::vector<std::uint8_t> bits;
    bits.reserve(grid.n);
    bool bit = j.at("first").get<int>() != 0;
    for (const auto& run : j.at("runs")) {
        for (std::size_t i = 0; i < run.get<std::size_t>(); ++i)
            bits.push_back(bit ? 1 : 0);
        bit = !bit;
    }
    return Mask(grid, std::move(bits));
}

inline json to_json(const MaskFamily& f) {
    json centers = json::array();
    for (const auto& c : f.centers) centers.push_back(c);
    json masks = json::array();
    for (const auto& m : f.masks) masks.push_back(mask_rle(m));
    json levels = json::array();
    for (const auto& lv : f.levels)
        levels.push_back({{"delta_j", lv.delta_j},
                          {"l_j", lv.l_j},
                          {"alpha_j", lv.alpha_j},
                          {"Delta_j", lv.Delta_j},
                          {"eps_j", lv.eps_j}});
    json classes = json::array();
    for (const auto& mc : f.mask_classes)
        classes.push_back({{"class", to_string(mc.report.ap_class)},
                           {"l_passed", mc.l_passed},
                           {"max_gap", mc.report.max_gap},
                           {"eps", mc.report.query.eps}});
    return {{"centers", centers},
            {"masks", masks},
            {"tail_fraction", f.tail_fraction},
            {"levels", levels},
            {"tail_fraction_by_level", f.tail_fraction_by_level},
            {"level_fractions", f.level_fractions},
            {"module_tag", f.module_tag},
            {"mask_classes", classes}};
}

inline json to_json(const ModContainment& m) {
    return {{"fraction", m.fraction},
            {"supported", m.supported},
            {"degenerate", m.degenerate},
            {"checked", m.checked}};
}

inline json to_json(const APTransfer& t) {
    return {{"joint_taus", t.joint_taus},
            {"fraction", t.fraction},
            {"supported", t.supported},
            {"relax", t.relax}};
}

inline json to_json(const SelectionReport& r) {
    json per_level = json::array();
    for (const auto& lv : r.per_level)
        per_level.push_back({{"gamma_n", lv.gamma_n},
                             {"max_jump", lv.max_jump},
                             {"bound", lv.bound},
                             {"cells", lv.cells}});
    json strata = json::array();
    for (const auto& s : r.strata)
        strata.push_back({{"level", s.level}, {"eps_level", s.eps_level}, {"samples", s.samples}});
    json j{{"selection", signal_csv_string(r.selection)},
           {"membership_defect", r.membership_defect},
           {"distance_certificate", r.distance_certificate},
           {"ap_transfer", r.ap_transfer ? to_json(*r.ap_transfer) : json(nullptr)},
           {"refinement_depth", r.refinement_depth},
           {"per_level", per_level}};
    if (!r.strata.empty()) j["strata"] = strata;
    if (!r.sup_gap.empty()) j["sup_gap"] = r.sup_gap;
    return j;
}

inline json to_json(const CoveringResult& c) {
    json centers = json::array();
    for (const auto& p : c.centers) centers.push_back(p);
    return {{"centers", centers},
            {"achieved_fraction", c.achieved_fraction},
            {"l_used", c.l_used}};
}

}  // namespace apw
