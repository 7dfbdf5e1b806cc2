#pragma once

#include <random>
#include <utility>
#include <vector>

#include "pontryagin/extraction.hpp"

namespace pt::testing {

inline double min_distance(const FramedCurve& a, const FramedCurve& b) {
    double best = 1e300;
    const std::size_t na = a.vertices.size(), nb = b.vertices.size();
    // Dense point sampling is enough to reject near-touching random pairs.
    for (std::size_t i = 0; i < na; ++i)
        for (int s = 0; s < 20; ++s) {
            const Vec3 x = a.vertices[i] + (a.vertices[(i + 1) % na] - a.vertices[i]) * (s / 20.0);
            for (std::size_t j = 0; j < nb; ++j)
                for (int t = 0; t < 20; ++t) {
                    const Vec3 y = b.vertices[j] + (b.vertices[(j + 1) % nb] - b.vertices[j]) * (t / 20.0);
                    best = std::min(best, distance(x, y));
                }
        }
    return best;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

inline FramedCurve random_polygon(std::mt19937_64& rng, const Vec3& center) {
    FramedCurve c;
    const int n = 4 + static_cast<int>(rng() % 9);
    for (int i = 0; i < n; ++i)
        c.vertices.push_back(center + Vec3{uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)});
    return c;
}

/// `count` seeded random closed polygon pairs (4 to 12 vertices each), skipping pairs closer than 0.02.
inline std::vector<std::pair<FramedCurve, FramedCurve>> random_pairs(std::uint64_t seed = 20240611,
                                                                      std::size_t count = 100) {
    std::mt19937_64 rng(seed);
    std::vector<std::pair<FramedCurve, FramedCurve>> out;
    while (out.size() < count) {
        FramedCurve a = random_polygon(rng, {0, 0, 0});
        FramedCurve b =
            random_polygon(rng, {uniform(rng, -0.5, 0.5), uniform(rng, -0.5, 0.5), uniform(rng, -0.5, 0.5)});
        if (min_distance(a, b) < 0.02) continue;
        out.emplace_back(std::move(a), std::move(b));
    }
    return out;
}

}  // namespace pt::testing
