// Shared test utilities: seeded generators and brute-force oracles kept
// independent of the library implementations they check.

#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "apw/metric.hpp"
#include "apw/signal.hpp"

namespace testutil {

inline constexpr double kPi = 3.14159265358979323846;

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline apw::Point random_point(std::mt19937_64& r, int dim, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    apw::Point p(dim);
    for (auto& c : p) c = u(r);
    return p;
}

inline apw::Signal random_signal(std::mt19937_64& r, const apw::Grid& grid, int dim,
                                 double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    std::vector<double> flat(grid.n * dim);
    for (auto& v : flat) v = u(r);
    return apw::Signal(grid, apw::Metric::euclidean(dim), std::move(flat));
}

inline apw::Signal sine_signal(const apw::Grid& grid, double amplitude, double omega,
                               double phase = 0.0) {
    return apw::generate(apw::RealTrigSpec{{{amplitude, omega, phase}}}, grid);
}

// --- oracles -------------------------------------------------------------

// Triple-loop D_{p,l}: windows scanned start by start, plain sums.
inline double naive_d_pl(const std::vector<double>& rho, double p, std::size_t m) {
    double best = 0.0;
    for (std::size_t j = 0; j + m <= rho.size(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += std::pow(rho[j + i], p);
        best = std::max(best, s / static_cast<double>(m));
    }
    return std::pow(best, 1.0 / p);
}

// Per-window sort route for the J_p inner sup.
inline double naive_jp(const std::vector<double>& rho, double p, std::size_t m, std::size_t k) {
    if (k == 0) return 0.0;
    double best = 0.0;
    for (std::size_t j = 0; j + m <= rho.size(); ++j) {
        std::vector<double> w(rho.begin() + j, rho.begin() + j + m);
        std::sort(w.begin(), w.end(), std::greater<>());
        double s = 0.0;
        for (std::size_t i = 0; i < std::min(k, m); ++i) s += std::pow(w[i], p);
        best = std::max(best, s / static_cast<double>(m));
    }
    return std::pow(best, 1.0 / p);
}

inline double naive_hausdorff(const std::vector<apw::Point>& A, const std::vector<apw::Point>& B,
                              const apw::Metric& metric) {
    auto directed = [&](const std::vector<apw::Point>& X, const std::vector<apw::Point>& Y) {
        double worst = 0.0;
        for (const auto& x : X) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& y : Y) best = std::min(best, metric(x, y));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(A, B), directed(B, A));
}

}  // namespace testutil
