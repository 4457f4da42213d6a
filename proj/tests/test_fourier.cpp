#include <doctest.h>

#include "apw/fourier.hpp"
#include "helpers.hpp"

using namespace apw;
using testutil::kPi;

TEST_CASE("bochner mean of constants") {
    const Grid grid(0.0, 0.25, 512);  // L = 128
    const Signal c = Signal::constant(grid, Metric::euclidean(1), {3.5});

    const auto at0 = bochner_mean(c, 0.0);
    CHECK(at0[0].real() == doctest::Approx(3.5).epsilon(1e-15));
    CHECK(at0[0].imag() == 0.0);

    // nonzero multiples of 2*pi/L are exact zeros (roots-of-unity sum)
    for (int m : {1, 2, 7}) {
        const auto v = bochner_mean(c, 2.0 * kPi / grid.length() * m);
        CHECK(std::abs(v[0]) < 1e-12 * 3.5);
    }
}

TEST_CASE("bochner mean of a pure complex exponential") {
    const Grid grid(0.0, 1.0 / 32.0, 8192);  // L = 256
    const double mu = 1.7;
    const Signal f = generate(ComplexTrigSpec{{{{1.0, 0.0}, mu}}}, grid);
    const auto m = bochner_mean_complex_scalar(f, mu);
    CHECK(std::abs(m - 1.0) < grid.h * grid.h + 2.0 / grid.length());
    // and the mean at a far-away lambda is near zero
    CHECK(std::abs(bochner_mean_complex_scalar(f, mu + 1.0)) < 0.02);
}

TEST_CASE("bochner mean is linear") {
    auto r = testutil::rng(41);
    const Grid grid(0.0, 0.125, 512);
    const Signal f = testutil::random_signal(r, grid, 2);
    const Signal g = testutil::random_signal(r, grid, 2);
    std::vector<double> combo(f.flat().size());
    for (std::size_t i = 0; i < combo.size(); ++i) combo[i] = 2.0 * f.flat()[i] - 0.5 * g.flat()[i];
    const Signal fg(grid, Metric::euclidean(2), combo);
    for (double lambda : {0.0, 0.9, 3.7}) {
        const auto mf = bochner_mean(f, lambda);
        const auto mg = bochner_mean(g, lambda);
        const auto mc = bochner_mean(fg, lambda);
        for (int c = 0; c < 2; ++c)
            CHECK(std::abs(mc[c] - (2.0 * mf[c] - 0.5 * mg[c])) < 1e-12);
    }
}

TEST_CASE("shift covariance within the boundary slack") {
    const Grid grid(0.0, 1.0 / 16.0, 4096);  // L = 256
    const Signal f = generate(RealTrigSpec{{{1.0, 2.0, 0.0}, {0.5, 5.0, 0.3}}}, grid);
    const double tau = 2.0;
    const auto sh = shift(f, tau);
    for (double lambda : {2.0, 5.0}) {
        const auto lhs = bochner_mean(sh.signal, lambda);
        const auto rhs = bochner_mean(f, lambda);
        const std::complex<double> phase = std::exp(std::complex<double>(0.0, lambda * tau));
        // boundary slack: the overlap drops tau/L of the window, sup|f| <= 1.5
        const double slack = 2.0 * tau / grid.length() * 1.5 + 1e-9;
        CHECK(std::abs(lhs[0] - phase * rhs[0]) <= slack);
    }
}

TEST_CASE("scan recovers the exponents of 3 sin(2t)") {
    const Grid grid(0.0, 1.0 / 16.0, 4096);  // L = 256
    const Signal f = testutil::sine_signal(grid, 3.0, 2.0);
    const auto table = scan_exponents(f, -4.0, 4.0, kPi / grid.length(), 8, 0.2);
    REQUIRE(table.entries.size() == 2);
    CHECK(std::abs(std::abs(table.entries[0].lambda) - 2.0) < table.resolution);
    CHECK(std::abs(std::abs(table.entries[1].lambda) - 2.0) < table.resolution);
    CHECK(table.entries[0].lambda * table.entries[1].lambda < 0.0);  // opposite signs
    for (const auto& e : table.entries)
        CHECK(e.magnitude == doctest::Approx(1.5).epsilon(0.02));
}

TEST_CASE("scan of the zero signal finds nothing") {
    const Grid grid(0.0, 0.125, 1024);
    const Signal z = Signal::zeros(grid, Metric::euclidean(1));
    const auto table = scan_exponents(z, -3.0, 3.0, 0.02, 8, 1e-6);
    CHECK(table.entries.empty());
}

TEST_CASE("scan separates incommensurate exponents") {
    const Grid grid(0.0, 1.0 / 16.0, 4096);
    const Signal f = generate(RealTrigSpec{{{1.0, 1.0, 0.0}, {1.0, std::sqrt(2.0), 0.0}}}, grid);
    const auto table = scan_exponents(f, -3.0, 3.0, kPi / grid.length(), 8, 0.1);
    REQUIRE(table.entries.size() == 4);
    std::vector<double> found;
    for (const auto& e : table.entries) found.push_back(e.lambda);
    std::sort(found.begin(), found.end());
    const std::vector<double> expected{-std::sqrt(2.0), -1.0, 1.0, std::sqrt(2.0)};
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(found[i] - expected[i]) < table.resolution);

    // table invariants: sorted by descending magnitude, lambdas separated
    for (std::size_t i = 1; i < table.entries.size(); ++i)
        CHECK(table.entries[i].magnitude <= table.entries[i - 1].magnitude);
    for (std::size_t i = 0; i < table.entries.size(); ++i)
        for (std::size_t j = i + 1; j < table.entries.size(); ++j)
            CHECK(std::abs(table.entries[i].lambda - table.entries[j].lambda) >=
                  table.resolution);
}

TEST_CASE("reconstruction from an exact table is near-perfect") {
    const Grid grid(0.0, 1.0 / 16.0, 4096);
    // f = 3 sin(2t) + cos(0.7t) as an exact exponent table
    ExponentTable table;
    table.resolution = 2.0 * kPi / grid.length();
    table.entries.push_back({2.0, {{0.0, -1.5}}, 1.5, false});
    table.entries.push_back({-2.0, {{0.0, 1.5}}, 1.5, false});
    table.entries.push_back({0.7, {{0.5, 0.0}}, 0.5, false});
    table.entries.push_back({-0.7, {{0.5, 0.0}}, 0.5, false});
    const Signal f = generate(
        RealTrigSpec{{{3.0, 2.0, 0.0}, {1.0, 0.7, kPi / 2.0}}}, grid);  // cos = sin(.+pi/2)
    const auto res = trig_approximate(f, table, 4, 2.0, WindowLadder{{64.0, 256.0}});
    CHECK(res.residual.weyl_estimate <= 1e-8);
}

TEST_CASE("k = 0 gives the zero approximant and the norm of f as residual") {
    const Grid grid(0.0, 0.25, 1024);
    const Signal f = testutil::sine_signal(grid, 2.0, 1.0);
    ExponentTable empty;
    empty.resolution = 2.0 * kPi / grid.length();
    const auto res = trig_approximate(f, empty, 0, 2.0, WindowLadder{{64.0}});
    for (double v : res.approx.flat()) CHECK(v == 0.0);
    CHECK(res.residual.weyl_estimate ==
          doctest::Approx(norm_pl(f, 2.0, 64.0)).epsilon(1e-12));
}

TEST_CASE("residual is non-increasing in k within the cross-talk slack") {
    auto r = testutil::rng(42);
    const Grid grid(0.0, 1.0 / 16.0, 4096);  // L = 256
    for (int trial = 0; trial < 3; ++trial) {
        std::uniform_real_distribution<double> amp(0.5, 2.0);
        std::uniform_real_distribution<double> freq(0.5, 8.0);
        RealTrigSpec spec;
        double sum_c = 0.0;
        for (int j = 0; j < 3; ++j) {
            double w;
            bool ok;
            do {
                w = freq(r);
                ok = true;
                for (const auto& t : spec.terms)
                    ok = ok && std::abs(t.omega - w) > 16.0 * kPi / grid.length();
            } while (!ok);
            const double a = amp(r);
            spec.terms.push_back({a, w, 0.0});
            sum_c += a;  // |c_{+w}| + |c_{-w}| = a
        }
        const Signal f = generate(spec, grid);
        const auto table = scan_exponents(f, -9.0, 9.0, kPi / grid.length(), 6, 0.05);
        REQUIRE(table.entries.size() == 6);
        const double slack = 4.0 * table.resolution * sum_c;
        double prev = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k <= table.entries.size(); ++k) {
            const auto res = trig_approximate(f, table, k, 2.0, WindowLadder{{128.0, 256.0}});
            CHECK(res.residual.weyl_estimate <= prev + slack);
            prev = res.residual.weyl_estimate;
        }
    }
}
