#include <doctest.h>
#include <map>


#include "apw/seminorms.hpp"
#include "helpers.hpp"

using namespace apw;

TEST_CASE("d_pl on constants") {
    const Grid grid(0.0, 0.5, 20);
    const Signal zero = Signal::zeros(grid, Metric::euclidean(1));
    const Signal c = Signal::constant(grid, Metric::euclidean(1), {-2.5});
    for (double p : {1.0, 2.0, 3.5}) {
        for (double l : {0.5, 2.0, 10.0}) {
            CHECK(d_pl(zero, zero, p, l) == 0.0);
            CHECK(d_pl(zero, c, p, l) == doctest::Approx(2.5).epsilon(1e-12));
        }
    }
}

TEST_CASE("d_pl single spike: sup window mean") {
    // one sample of height 1 in a 10-sample window, p=1, l=10h -> h/l = 0.1
    const Grid grid(0.0, 1.0, 30);
    std::vector<double> v(grid.n, 0.0);
    v[17] = 1.0;
    const Signal g(grid, Metric::euclidean(1), v);
    const Signal zero = Signal::zeros(grid, Metric::euclidean(1));
    CHECK(d_pl(zero, g, 1.0, 10.0) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("d_pl matches the brute-force oracle on random pairs") {
    auto r = testutil::rng(21);
    const Grid grid(0.0, 0.25, 128);
    for (int trial = 0; trial < 20; ++trial) {
        const Signal f = testutil::random_signal(r, grid, 2);
        const Signal g = testutil::random_signal(r, grid, 2);
        const auto rho = pointwise_distance(f, g, false);
        for (double p : {1.0, 2.0, 4.0}) {
            for (std::size_t m : {4u, 16u, 128u}) {
                const double lib = d_pl(f, g, p, static_cast<double>(m) * grid.h);
                const double oracle = testutil::naive_d_pl(rho, p, m);
                CHECK(lib == doctest::Approx(oracle).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("d_pl validation") {
    const Grid grid(0.0, 0.5, 8);
    const Signal f = Signal::zeros(grid, Metric::euclidean(1));
    CHECK_THROWS_AS(d_pl(f, f, 0.5, 1.0), std::invalid_argument);   // p < 1
    CHECK_THROWS_AS(d_pl(f, f, 9.0, 1.0), std::invalid_argument);   // p > 8
    CHECK_THROWS_AS(d_pl(f, f, 1.0, 0.3), std::invalid_argument);   // not multiple of h
    CHECK_THROWS_AS(d_pl(f, f, 1.0, 100.0), std::invalid_argument); // exceeds window
}

TEST_CASE("bounded flag clamps the metric and forces p to 1") {
    const Grid grid(0.0, 1.0, 10);
    const Signal zero = Signal::zeros(grid, Metric::euclidean(1));
    const Signal c = Signal::constant(grid, Metric::euclidean(1), {7.0});
    CHECK(d_pl(zero, c, 3.0, 5.0, true) == 1.0);
    const auto rep = weyl_seminorm(zero, c, 3.0, WindowLadder{{2.0, 5.0}}, true);
    CHECK(rep.p == 1.0);
    CHECK(rep.bounded);
    CHECK(rep.weyl_estimate == 1.0);
}

TEST_CASE("d_pl is a pseudometric for fixed (p,l)") {
    auto r = testutil::rng(22);
    const Grid grid(0.0, 0.25, 64);
    for (int trial = 0; trial < 30; ++trial) {
        const Signal f = testutil::random_signal(r, grid, 2);
        const Signal g = testutil::random_signal(r, grid, 2);
        const Signal h = testutil::random_signal(r, grid, 2);
        for (double p : {1.0, 2.0}) {
            const double l = 4.0;
            CHECK(d_pl(f, g, p, l) == d_pl(g, f, p, l));
            const double fg = d_pl(f, g, p, l), gh = d_pl(g, h, p, l), fh = d_pl(f, h, p, l);
            CHECK(fh <= fg + gh + 1e-9 * std::max(1.0, fh));
        }
    }
}

TEST_CASE("weyl report: spike dilution over a ladder") {
    // spike of width w = 4h in window L: value at window length l is
    // clamped mean w/l (p=1); the weyl estimate is the largest-l entry.
    const Grid grid(0.0, 1.0, 64);
    std::vector<double> v(grid.n, 0.0);
    for (std::size_t k = 30; k < 34; ++k) v[k] = 1.0;
    const Signal g(grid, Metric::euclidean(1), v);
    const Signal zero = Signal::zeros(grid, Metric::euclidean(1));
    const auto rep = weyl_seminorm(zero, g, 1.0, WindowLadder{{16.0, 32.0, 64.0}});
    CHECK(rep.entries[0].value == doctest::Approx(4.0 / 16.0).epsilon(1e-12));
    CHECK(rep.entries[1].value == doctest::Approx(4.0 / 32.0).epsilon(1e-12));
    CHECK(rep.entries[2].value == doctest::Approx(4.0 / 64.0).epsilon(1e-12));
    CHECK(rep.weyl_estimate == rep.entries[2].value);
    CHECK(rep.monotonicity_defect <= rep.slack);
}

TEST_CASE("sandwich inequality holds within declared slack on random pairs") {
    auto r = testutil::rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        const Grid grid(0.0, 0.5, 256);
        const Signal f = testutil::random_signal(r, grid, 3);
        const Signal g = testutil::random_signal(r, grid, 3);
        for (double p : {1.0, 2.0, 3.0}) {
            const auto rep = weyl_seminorm(f, g, p, WindowLadder{{4.0, 16.0, 64.0, 128.0}});
            CHECK(rep.monotonicity_defect <= rep.slack + 1e-12);
        }
    }
}

TEST_CASE("norms against the origin") {
    const Grid grid(0.0, 0.25, 32);  // L = 8
    CHECK(norm_pl(Signal::zeros(grid, Metric::euclidean(1)), 2.0, 4.0) == 0.0);
    CHECK(norm_pl(Signal::constant(grid, Metric::euclidean(1), {-3.0}), 2.0, 4.0) ==
          doctest::Approx(3.0).epsilon(1e-12));
    // mask indicator occupying a quarter of the window, p=1, l=L
    const Mask T = Mask::interval(grid, 0.0, 2.0);
    CHECK(norm_pl(T.indicator(), 1.0, 8.0) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("j_p handles trivial and spike cases") {
    const Grid grid(0.0, 1.0, 40);
    const Signal zero = Signal::zeros(grid, Metric::euclidean(1));
    const auto zrep = j_p(zero, zero, 1.0, {0.5, 0.25}, WindowLadder{{10.0, 20.0}});
    for (const auto& e : zrep.table) CHECK(e.value == 0.0);

    // single spike of height H: top-1 sample dominates every delta >= h/l
    std::vector<double> v(grid.n, 0.0);
    v[7] = 4.0;
    const Signal spike(grid, Metric::euclidean(1), v);
    const auto rep = j_p(spike, zero, 2.0, {0.5, 0.2}, WindowLadder{{10.0}});
    for (const auto& e : rep.table)
        CHECK(e.value == doctest::Approx(std::pow(16.0 / 10.0, 0.5)).epsilon(1e-12));
}

TEST_CASE("j_p of a bounded signal decays like B * delta^{1/p}") {
    const Grid grid(0.0, 0.25, 512);
    const Signal f = testutil::sine_signal(grid, 2.0, 1.3);  // sup norm B = 2
    const Signal zero = Signal::zeros(grid, Metric::euclidean(1));
    const std::vector<double> deltas{0.4, 0.1, 0.02};
    for (double p : {1.0, 2.0}) {
        const auto rep = j_p(f, zero, p, deltas, WindowLadder{{32.0, 64.0}});
        std::map<double, double> prev_at_l;  // delta decreases along the table at fixed l
        for (const auto& e : rep.table) {
            CHECK(e.value <= 2.0 * std::pow(e.delta, 1.0 / p) * (1.0 + 1e-12));
            if (auto it = prev_at_l.find(e.l); it != prev_at_l.end())
                CHECK(e.value <= it->second + 1e-15);
            prev_at_l[e.l] = e.value;
        }
    }
}

TEST_CASE("j_p equals the per-window sort oracle") {
    auto r = testutil::rng(24);
    const Grid grid(0.0, 0.5, 96);
    for (int trial = 0; trial < 15; ++trial) {
        const Signal f = testutil::random_signal(r, grid, 2);
        const Signal g = testutil::random_signal(r, grid, 2);
        const auto rho = pointwise_distance(f, g, false);
        for (double p : {1.0, 2.0}) {
            const auto rep = j_p(f, g, p, {0.4, 0.15, 0.05}, WindowLadder{{8.0, 24.0}});
            for (const auto& e : rep.table) {
                const std::size_t m = static_cast<std::size_t>(std::llround(e.l / grid.h));
                const std::size_t k = static_cast<std::size_t>(e.delta * m);
                CHECK(e.value == doctest::Approx(testutil::naive_jp(rho, p, m, k)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("j_p is dominated by the matching d_pl") {
    auto r = testutil::rng(25);
    const Grid grid(0.0, 0.5, 128);
    for (int trial = 0; trial < 20; ++trial) {
        const Signal f = testutil::random_signal(r, grid, 2);
        const Signal g = testutil::random_signal(r, grid, 2);
        const auto rep = j_p(f, g, 2.0, {0.3, 0.1}, WindowLadder{{8.0, 32.0}});
        for (const auto& e : rep.table)
            CHECK(e.value <= d_pl(f, g, 2.0, e.l) * (1.0 + 1e-12));
    }
}

TEST_CASE("bounded signals pass the M_p-sharp test; growing spikes fail it") {
    const Grid grid(0.0, 0.25, 1024);
    const Signal bounded = testutil::sine_signal(grid, 2.0, 1.3);
    const std::vector<double> deltas{0.2, 0.05, 0.01};
    const WindowLadder ladder{{32.0, 128.0, 256.0}};
    CHECK(mp_sharp_test(bounded, 1.0, deltas, ladder, 0.5));

    // spike family: heights 2^k, one sample each; the top-1 sample alone
    // keeps the finest-delta estimate above tolerance
    std::vector<double> v(grid.n, 0.0);
    for (int k = 0; k < 10; ++k) v[101 * k + 7] = std::pow(2.0, k);
    const Signal spikes(grid, Metric::euclidean(1), v);
    CHECK_FALSE(mp_sharp_test(spikes, 1.0, deltas, ladder, 0.5));
}

TEST_CASE("j_p validation") {
    const Grid grid(0.0, 1.0, 10);
    const Signal z = Signal::zeros(grid, Metric::euclidean(1));
    CHECK_THROWS_AS(j_p(z, z, 1.0, {1.5}, WindowLadder{{5.0}}), std::invalid_argument);
    CHECK_THROWS_AS(j_p(z, z, 1.0, {0.2, 0.4}, WindowLadder{{5.0}}), std::invalid_argument);
    CHECK_THROWS_AS(j_p(z, z, 1.0, {}, WindowLadder{{5.0}}), std::invalid_argument);
}
