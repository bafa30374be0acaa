#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "crgeo/chart.hpp"
#include "crgeo/linalg.hpp"

namespace crgeo {

/// Deterministic random source. Doubles are extracted manually from the
/// mt19937_64 stream so results are identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    int below(int n) { return static_cast<int>(eng_() % static_cast<std::uint64_t>(n)); }

private:
    std::mt19937_64 eng_;
};

/// A point strictly inside the chart box: `margin` is the fraction of each
/// side length kept clear at both ends.
inline std::vector<double> sample_point(Rng& rng, const ChartManifold& chart,
                                        double margin = 0.08) {
    const int d = chart.dim();
    std::vector<double> p(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        const double lo = chart.lo[static_cast<std::size_t>(i)];
        const double hi = chart.hi[static_cast<std::size_t>(i)];
        const double pad = margin * (hi - lo);
        p[static_cast<std::size_t>(i)] = rng.uniform(lo + pad, hi - pad);
    }
    return p;
}

inline std::vector<std::vector<double>> sample_points(Rng& rng, const ChartManifold& chart,
                                                      int n, double margin = 0.08) {
    std::vector<std::vector<double>> pts;
    pts.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pts.push_back(sample_point(rng, chart, margin));
    return pts;
}

inline std::vector<double> sample_vector(Rng& rng, int d) {
    std::vector<double> v(static_cast<std::size_t>(d));
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
    return v;
}

/// d linearly independent probe vectors (columns), retried until the frame
/// is reasonably conditioned so restriction tests are not noise-dominated.
inline MatD sample_frame(Rng& rng, int d) {
    for (int attempt = 0; attempt < 256; ++attempt) {
        MatD f(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) f(i, j) = rng.uniform(-1.0, 1.0);
        if (std::abs(determinant(f)) > 1e-3) return f;
    }
    throw NumericsError("could not sample a well-conditioned frame");
}

} // namespace crgeo
