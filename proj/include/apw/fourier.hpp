// Bochner means, Fourier exponent estimation and trigonometric polynomial
// approximation for sampled signals.

#pragma once

#include <complex>

#include "apw/seminorms.hpp"

namespace apw {

using ComplexVec = std::vector<std::complex<double>>;

// Finite-window surrogate of the Bochner mean M{e^{-i lambda t} f}: the
// left Riemann sum (1/L) h sum_k e^{-i lambda t_k} f(t_k). The window plays
// the role of [-a, a] recentered at its midpoint.
inline ComplexVec bochner_mean(const Signal& f, double lambda) {
    const std::size_t d = static_cast<std::size_t>(f.dimension());
    ComplexVec acc(d, {0.0, 0.0});
    // incremental rotation, resynced every block to keep phase drift ~1e-15
    constexpr std::size_t block = 64;
    const std::complex<double> rot = std::exp(std::complex<double>(0.0, -lambda * f.grid().h));
    std::complex<double> w{1.0, 0.0};
    for (std::size_t k = 0; k < f.size(); ++k) {
        if (k % block == 0)
            w = std::exp(std::complex<double>(0.0, -lambda * f.grid().time(k)));
        const auto v = f.value(k);
        for (std::size_t c = 0; c < d; ++c) acc[c] += w * v[c];
        w *= rot;
    }
    for (auto& a : acc) a /= static_cast<double>(f.size());
    return acc;
}

// Complex-scalar view of a d=2 (Re, Im) signal: mean[0] + i*mean[1].
inline std::complex<double> bochner_mean_complex_scalar(const Signal& f, double lambda) {
    if (f.dimension() != 2)
        throw std::invalid_argument("bochner_mean_complex_scalar: needs a (Re, Im) signal");
    const ComplexVec m = bochner_mean(f, lambda);
    return m[0] + std::complex<double>(0.0, 1.0) * m[1];
}

inline double mean_magnitude(const ComplexVec& v) {
    double s = 0.0;
    for (const auto& c : v) s += std::norm(c);
    return std::sqrt(s);
}

struct ExponentEntry {
    double lambda;
    ComplexVec coeff;
    double magnitude;
    bool crosstalk_flag = false;  // a neighbor sits closer than 4*pi/L
};

struct ExponentTable {
    std::vector<ExponentEntry> entries;  // sorted by descending magnitude
    double resolution = 0.0;             // 2*pi/L
};

namespace detail {

// Golden-section maximization of |bochner_mean| on [lo, hi]; |mean| is
// smooth and unimodal near an isolated exponent at scale 2*pi/L.
inline double golden_refine(const Signal& f, double lo, double hi, int iters = 60) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = mean_magnitude(bochner_mean(f, x1));
    double f2 = mean_magnitude(bochner_mean(f, x2));
    for (int i = 0; i < iters && (b - a) > 1e-13 * std::max(1.0, std::abs(a)); ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = mean_magnitude(bochner_mean(f, x2));
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = mean_magnitude(bochner_mean(f, x1));
        }
    }
    return (a + b) / 2.0;
}

// Window transfer of a pure exponent: the mean of e^{i mu t} over the grid.
inline std::complex<double> window_transfer(const Grid& grid, double mu) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t k = 0; k < grid.n; ++k)
        acc += std::exp(std::complex<double>(0.0, mu * grid.time(k)));
    return acc / static_cast<double>(grid.n);
}

}  // namespace detail

// Estimate Lambda{f}: local maxima of |bochner_mean| over the lambda grid
// (a step of at most pi/L is recommended so no main lobe is skipped)
// above `floor`, each refined by golden section, deduplicated at the window
// resolution 2*pi/L, truncated to the top_k largest.
inline ExponentTable scan_exponents(const Signal& f, double lambda_min, double lambda_max,
                                    double step, std::size_t top_k, double floor) {
    if (!(step > 0.0) || !(lambda_max > lambda_min))
        throw std::invalid_argument("scan_exponents: empty lambda grid");
    const double L = f.grid().length();
    const double resolution = 2.0 * std::acos(-1.0) / L;

    const std::size_t count = static_cast<std::size_t>((lambda_max - lambda_min) / step) + 1;
    std::vector<double> mags(count);
    parallel_for(count, [&](std::size_t i) {
        mags[i] = mean_magnitude(bochner_mean(f, lambda_min + static_cast<double>(i) * step));
    });

    // local maxima above the floor (plateau-tolerant at the left edge)
    std::vector<double> peaks;
    for (std::size_t i = 0; i < count; ++i) {
        if (mags[i] <= floor) continue;
        if (i > 0 && mags[i] < mags[i - 1]) continue;
        if (i + 1 < count && mags[i] <= mags[i + 1]) continue;
        const double lo = lambda_min + (i > 0 ? static_cast<double>(i - 1) : 0.0) * step;
        const double hi = lambda_min + static_cast<double>(std::min(i + 1, count - 1)) * step;
        const double at_grid = lambda_min + static_cast<double>(i) * step;
        const double refined = detail::golden_refine(f, lo, hi);
        // keep the grid candidate unless refinement improves it beyond float
        // noise (plateaus around an exact peak would otherwise drift)
        const bool better = mean_magnitude(bochner_mean(f, refined)) > mags[i] * (1.0 + 1e-12);
        peaks.push_back(better ? refined : at_grid);
    }

    // Merge refined peaks closer than 4*pi/L, keeping the stronger one.
    // Exponents that close cannot be resolved by this window; a merge whose
    // weaker member looked like a genuine peak (not a sidelobe) is flagged.
    std::sort(peaks.begin(), peaks.end());
    std::vector<ExponentEntry> entries;
    for (double lambda : peaks) {
        const ComplexVec coeff = bochner_mean(f, lambda);
        const double mag = mean_magnitude(coeff);
        if (mag <= floor) continue;
        if (!entries.empty() && std::abs(lambda - entries.back().lambda) < 2.0 * resolution) {
            auto& prev = entries.back();
            const bool peer = std::min(mag, prev.magnitude) > 0.5 * std::max(mag, prev.magnitude);
            if (mag > prev.magnitude) prev = {lambda, coeff, mag, false};
            prev.crosstalk_flag = prev.crosstalk_flag || peer;
            continue;
        }
        entries.push_back({lambda, coeff, mag, false});
    }

    // Cross-talk cleanup: the raw means mix the true coefficients through
    // the window transfer, mean(lambda_i) = sum_j c_j E(lambda_j - lambda_i).
    // Solving this small system recovers the coefficients; spurious sidelobe
    // peaks collapse to ~0 and fall back under the floor.
    const std::size_t d = static_cast<std::size_t>(f.dimension());
    const std::size_t K = entries.size();
    if (K > 1) {
        std::vector<std::complex<double>> A(K * K);
        for (std::size_t i = 0; i < K; ++i)
            for (std::size_t j = 0; j < K; ++j)
                A[i * K + j] = i == j ? std::complex<double>(1.0, 0.0)
                                      : detail::window_transfer(
                                            f.grid(), entries[j].lambda - entries[i].lambda);
        // Gaussian elimination with partial pivoting, d right-hand sides
        std::vector<std::complex<double>> B(K * d);
        for (std::size_t i = 0; i < K; ++i)
            for (std::size_t q = 0; q < d; ++q) B[i * d + q] = entries[i].coeff[q];
        std::vector<std::size_t> perm(K);
        for (std::size_t i = 0; i < K; ++i) perm[i] = i;
        bool singular = false;
        for (std::size_t col = 0; col < K && !singular; ++col) {
            std::size_t piv = col;
            for (std::size_t r = col + 1; r < K; ++r)
                if (std::abs(A[perm[r] * K + col]) > std::abs(A[perm[piv] * K + col])) piv = r;
            std::swap(perm[col], perm[piv]);
            const auto diag = A[perm[col] * K + col];
            if (std::abs(diag) < 1e-12) {
                singular = true;
                break;
            }
            for (std::size_t r = col + 1; r < K; ++r) {
                const auto factor = A[perm[r] * K + col] / diag;
                if (factor == std::complex<double>(0.0, 0.0)) continue;
                for (std::size_t cc = col; cc < K; ++cc)
                    A[perm[r] * K + cc] -= factor * A[perm[col] * K + cc];
                for (std::size_t q = 0; q < d; ++q)
                    B[perm[r] * d + q] -= factor * B[perm[col] * d + q];
            }
        }
        if (!singular) {
            std::vector<std::complex<double>> X(K * d);
            for (std::size_t ri = K; ri-- > 0;) {
                for (std::size_t q = 0; q < d; ++q) {
                    auto acc = B[perm[ri] * d + q];
                    for (std::size_t cc = ri + 1; cc < K; ++cc)
                        acc -= A[perm[ri] * K + cc] * X[cc * d + q];
                    X[ri * d + q] = acc / A[perm[ri] * K + ri];
                }
            }
            for (std::size_t i = 0; i < K; ++i) {
                for (std::size_t q = 0; q < d; ++q) entries[i].coeff[q] = X[i * d + q];
                entries[i].magnitude = mean_magnitude(entries[i].coeff);
            }
        }
    }
    std::erase_if(entries, [&](const ExponentEntry& e) { return e.magnitude <= floor; });

    std::stable_sort(entries.begin(), entries.end(),
                     [](const ExponentEntry& a, const ExponentEntry& b) {
                         return a.magnitude > b.magnitude;
                     });
    if (entries.size() > top_k) entries.resize(top_k);

    ExponentTable table;
    table.entries = std::move(entries);
    table.resolution = resolution;
    return table;
}

struct TrigApproxResult {
    Signal approx;
    SeminormReport residual;  // norm_weyl of f - approx
    std::size_t terms_used = 0;
};

// Partial sum of the k strongest table terms, sampled on f's grid; the
// approximant's exponents are a subset of the table by construction. The
// real part is kept (conjugate-symmetric tables reconstruct real signals).
inline TrigApproxResult trig_approximate(const Signal& f, const ExponentTable& table,
                                         std::size_t k, double p, const WindowLadder& ladder) {
    if (k > table.entries.size())
        throw std::invalid_argument("trig_approximate: k exceeds the table");
    const std::size_t d = static_cast<std::size_t>(f.dimension());
    std::vector<double> flat(f.size() * d, 0.0);
    for (std::size_t s = 0; s < f.size(); ++s) {
        const double t = f.grid().time(s);
        for (std::size_t j = 0; j < k; ++j) {
            const auto w = std::exp(std::complex<double>(0.0, table.entries[j].lambda * t));
            for (std::size_t c = 0; c < d; ++c)
                flat[s * d + c] += (table.entries[j].coeff[c] * w).real();
        }
    }
    Signal approx(f.grid(), f.metric(), std::move(flat));

    std::vector<double> diff(f.size() * d);
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = f.flat()[i] - approx.flat()[i];
    const Signal residual_signal(f.grid(), f.metric(), std::move(diff));
    TrigApproxResult out{std::move(approx), norm_weyl(residual_signal, p, ladder), k};
    return out;
}

}  // namespace apw
