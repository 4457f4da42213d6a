#include <doctest.h>

#include "apw/almost_periodicity.hpp"
#include "helpers.hpp"

using namespace apw;
using testutil::kPi;

namespace {

APQuery query(double eps, double l, double tau_lo, double tau_hi, double step, double p = 1.0) {
    APQuery q;
    q.eps = eps;
    q.p = p;
    q.l = l;
    q.tau_min = tau_lo;
    q.tau_max = tau_hi;
    q.tau_step = step;
    return q;
}

}  // namespace

TEST_CASE("tau = 0 is always accepted") {
    auto r = testutil::rng(31);
    const Grid grid(0.0, 0.25, 256);
    const Signal f = testutil::random_signal(r, grid, 2);
    const auto rep = scan_almost_periods(f, query(1e-9, 8.0, -16.0, 16.0, 4.0));
    CHECK(std::find(rep.accepted_taus.begin(), rep.accepted_taus.end(), 0.0) !=
          rep.accepted_taus.end());
}

TEST_CASE("periodic signal: all period multiples accepted, gap bounded by the period") {
    const Grid grid(0.0, 1.0 / 64.0, 4096);  // L = 64
    const double b = 2.0;
    const Signal f = testutil::sine_signal(grid, 1.0, 2.0 * kPi / b);
    const auto rep = scan_almost_periods(f, query(1e-6, 8.0, -24.0, 24.0, 0.5));
    for (double tau : {-b, b, 2.0 * b, 6.0}) {
        const bool found = std::any_of(rep.accepted_taus.begin(), rep.accepted_taus.end(),
                                       [&](double t) { return std::abs(t - tau) < 1e-9; });
        CHECK(found);
    }
    CHECK(rep.max_gap <= b + 1e-9);
    CHECK(rep.ap_class == APClass::bohr);  // exact grid period, sup criterion passes
}

TEST_CASE("quasi-periodic signal has a relatively dense accepted set") {
    const Grid grid(0.0, 1.0 / 8.0, 6400);  // L = 800
    const Signal f = generate(
        RealTrigSpec{{{1.0, 1.0, 0.0}, {1.0, std::sqrt(2.0), 0.0}}}, grid);
    const auto rep = scan_almost_periods(f, query(0.1, 50.0, -200.0, 200.0, 0.125, 1.0));
    CHECK(!rep.accepted_taus.empty());
    CHECK(rep.relatively_dense_at.has_value());
    CHECK(rep.max_gap < 400.0);
    CHECK(rep.equi_weyl_dense);
}

TEST_CASE("classification is monotone: bohr implies stepanov implies equi-weyl") {
    auto r = testutil::rng(32);
    const Grid grid(0.0, 1.0 / 16.0, 2048);  // h divides 1, l integral
    for (int trial = 0; trial < 4; ++trial) {
        std::uniform_real_distribution<double> amp(0.3, 1.5);
        const Signal f = generate(
            RealTrigSpec{{{amp(r), 2.0 * kPi / 4.0, 0.0}, {amp(r), 2.0 * kPi / 8.0, 0.0}}}, grid);
        for (double eps : {0.05, 0.3, 1.0}) {
            const auto rep = scan_almost_periods(f, query(eps, 16.0, -48.0, 48.0, 1.0));
            if (rep.bohr_dense) CHECK(rep.stepanov_dense);
            if (rep.stepanov_dense) CHECK(rep.equi_weyl_dense);
        }
    }
}

TEST_CASE("accepted set is symmetric for symmetric ranges") {
    const Grid grid(0.0, 1.0 / 32.0, 4096);
    const Signal f = generate(RealTrigSpec{{{1.0, 1.7, 0.0}, {0.5, 0.4, 0.2}}}, grid);
    const auto rep = scan_almost_periods(f, query(0.25, 16.0, -32.0, 32.0, 0.5));
    for (double tau : rep.accepted_taus) {
        const bool mirrored = std::any_of(rep.accepted_taus.begin(), rep.accepted_taus.end(),
                                          [&](double t) { return std::abs(t + tau) < 1e-9; });
        CHECK(mirrored);
    }
}

TEST_CASE("query validation") {
    const Grid grid(0.0, 0.25, 64);  // L = 16
    const Signal f = Signal::zeros(grid, Metric::euclidean(1));
    CHECK_THROWS_AS(scan_almost_periods(f, query(0.1, 8.0, -2.0, 2.0, 0.5)),
                    std::invalid_argument);  // range shorter than l
    CHECK_THROWS_AS(scan_almost_periods(f, query(0.1, 8.0, -12.0, 12.0, 0.5)),
                    std::invalid_argument);  // overlap at max tau below l
    CHECK_THROWS_AS(scan_almost_periods(f, query(0.0, 4.0, -6.0, 6.0, 0.5)),
                    std::invalid_argument);
}

TEST_CASE("measure_criterion basics") {
    const Grid grid(0.0, 0.1, 400);
    const Signal c = Signal::constant(grid, Metric::euclidean(1), {3.0});
    CHECK(measure_criterion(c, 1.0, 0.01, 0.001, 4.0));
    CHECK(measure_criterion(c, 0.0, 0.5, 0.5, 4.0));

    // square wave, period 1: shifting by one sample misaligns one sample per
    // jump; with two jumps per unit window the violating fraction is 2h/l
    PeriodicTemplateSpec sq;
    sq.period = 1.0;
    sq.dim = 1;
    sq.samples.assign(10, 0.0);
    for (int i = 5; i < 10; ++i) sq.samples[i] = 1.0;
    const Signal f = generate(sq, grid);
    const double l = 2.0;
    const double jump_fraction = 4.0 * grid.h / l;  // 4 jumps in a 2s window
    CHECK(measure_criterion(f, grid.h, 2.0 * jump_fraction, 0.5, l));
    CHECK_FALSE(measure_criterion(f, grid.h, 0.5 * jump_fraction, 0.5, l));
}

TEST_CASE("returning sequences") {
    const Grid grid(0.0, 1.0 / 64.0, 8192);  // L = 128
    const double b = 4.0;
    const Signal f = testutil::sine_signal(grid, 1.0, 2.0 * kPi / b);
    const std::vector<EpsDeltaL> ladder{{0.05, 0.05, 16.0}, {0.02, 0.1, 32.0}};

    CHECK(returning_sequence_check(f, {0.0, 0.0, 0.0}, ladder));
    CHECK(returning_sequence_check(f, {b, 2.0 * b, 3.0 * b, 4.0 * b}, ladder));
    // odd multiples of the half period are far from returning
    CHECK_FALSE(returning_sequence_check(f, {b / 2.0, 3.0 * b / 2.0, 5.0 * b / 2.0}, ladder));
}

TEST_CASE("mod containment proxy") {
    const Grid grid(0.0, 1.0 / 64.0, 8192);
    const double b = 4.0;
    const Signal g = testutil::sine_signal(grid, 1.0, 2.0 * kPi / b);
    const auto gq = query(0.05, 16.0, -32.0, 32.0, 1.0);
    const auto grep = scan_almost_periods(g, gq);
    REQUIRE(!grep.accepted_taus.empty());

    // f = g: every accepted tau transfers
    const auto same = mod_containment_proxy(g, gq, grep.accepted_taus);
    CHECK(same.fraction == 1.0);
    CHECK(same.supported);

    // f = F(g) via a Lipschitz map: almost periods transfer (Mod F(f) inside Mod f)
    const Signal fg = compose(PointMap::affine(1, 1, {0.5}, {0.25}), g);
    const auto lip = mod_containment_proxy(fg, gq, grep.accepted_taus);
    CHECK(lip.supported);

    // incommensurate frequency: containment not supported at tight eps
    const Signal other = testutil::sine_signal(grid, 1.0, std::sqrt(2.0) * 2.0 * kPi / b);
    const auto cross = mod_containment_proxy(other, gq, grep.accepted_taus);
    CHECK(cross.fraction < 1.0);

    // constants are degenerate: proxy reports it and is skipped
    const Signal c = Signal::constant(grid, Metric::euclidean(1), {5.0});
    const auto deg = mod_containment_proxy(c, gq, grep.accepted_taus);
    CHECK(deg.degenerate);
}

TEST_CASE("accepted taus nearly fix every exponent phase of a trig polynomial") {
    const Grid grid(0.0, 1.0 / 32.0, 16384);  // L = 512
    const std::vector<std::pair<double, double>> terms{{1.0, 1.0}, {0.8, 2.5}};  // (|c|, lambda)
    ComplexTrigSpec spec;
    for (auto [mag, lambda] : terms) spec.terms.push_back({{mag, 0.0}, lambda});
    const Signal f = generate(spec, grid);

    const double eps = 0.15;
    const auto rep = scan_almost_periods(f, query(eps, 128.0, -128.0, 128.0, 0.5, 2.0));
    REQUIRE(!rep.accepted_taus.empty());
    for (double tau : rep.accepted_taus) {
        for (auto [mag, lambda] : terms) {
            const std::complex<double> w = std::exp(std::complex<double>(0.0, lambda * tau));
            CHECK(std::abs(w - 1.0) <= 2.0 * eps / mag);
        }
    }
}
