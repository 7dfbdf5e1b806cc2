#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pontryagin/invariants.hpp"
#include "random_curves.hpp"

using namespace pt;
using pt::testing::min_distance;
using pt::testing::random_pairs;

namespace {

FramedCurve polyline(std::vector<Vec3> pts) {
    FramedCurve c;
    c.vertices = std::move(pts);
    return c;
}

FramedCurve circle(const Vec3& center, const Vec3& e1, const Vec3& e2, double r, int n) {
    std::vector<Vec3> pts;
    for (int i = 0; i < n; ++i) {
        const double t = 2 * std::numbers::pi * i / n;
        pts.push_back(center + e1 * (r * std::cos(t)) + e2 * (r * std::sin(t)));
    }
    return polyline(pts);
}

// Midpoint-rule Gauss integral with every segment split into m pieces: an independent, slow oracle.
double gauss_quadrature(const FramedCurve& a, const FramedCurve& b, int m) {
    auto samples = [m](const FramedCurve& c) {
        std::vector<std::pair<Vec3, Vec3>> out;  // (midpoint, step)
        const std::size_t n = c.vertices.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Vec3 p = c.vertices[i], q = c.vertices[(i + 1) % n];
            const Vec3 step = (q - p) / m;
            for (int s = 0; s < m; ++s) out.push_back({p + step * (s + 0.5), step});
        }
        return out;
    };
    const auto sa = samples(a), sb = samples(b);
    double total = 0;
    for (const auto& [x, dx] : sa)
        for (const auto& [y, dy] : sb) {
            const Vec3 r = x - y;
            const double d = norm(r);
            total += dot(r, cross(dx, dy)) / (d * d * d);
        }
    return total / (4 * std::numbers::pi);
}

}  // namespace

TEST_CASE("round hopf link has linking number -1 with this orientation") {
    const FramedCurve a = circle({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, 1.0, 200);
    const FramedCurve b = circle({1, 0, 0}, {1, 0, 0}, {0, 0, 1}, 1.0, 200);
    const double oracle = gauss_quadrature(a, b, 2);
    CHECK(oracle == doctest::Approx(-1.0).epsilon(0.02));
    const LinkingResult g = linking_gauss(a, b);
    CHECK(g.value == -1);
    CHECK(g.residual() < 1e-9);
    CHECK(linking_crossings(a, b) == -1);
    CHECK(linking_gauss(a, b.reversed()).value == 1);
    CHECK(linking_gauss(b, a).value == -1);
}

TEST_CASE("unlinked circles") {
    const FramedCurve a = circle({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, 1.0, 100);
    const FramedCurve b = circle({3, 0, 0}, {1, 0, 0}, {0, 0, 1}, 1.0, 100);
    CHECK(linking_gauss(a, b).value == 0);
    CHECK(std::abs(linking_gauss(a, b).raw) < 1e-9);
    CHECK(linking_crossings(a, b) == 0);
}

TEST_CASE("gauss and crossing counts agree on 100 seeded random polygon pairs") {
    int nonzero = 0;
    for (const auto& [a, b] : random_pairs()) {
        const LinkingResult g = linking_gauss(a, b);
        CHECK(g.residual() < 0.1);
        CHECK(g.value == linking_crossings(a, b));
        CHECK(g.value == linking_crossings(a, b, {-0.3, 0.8, 0.2}));
        if (g.value != 0) ++nonzero;
    }
    CHECK(nonzero >= 10);
}

TEST_CASE("exact segment solid angles match brute-force quadrature") {
    const auto pairs = random_pairs();
    for (std::size_t i = 0; i < 10; ++i) {
        const auto& [a, b] = pairs[i];
        if (min_distance(a, b) < 0.1) continue;
        CHECK(linking_gauss(a, b).raw == doctest::Approx(gauss_quadrature(a, b, 60)).epsilon(0.02));
    }
}

TEST_CASE("linking number symmetry and reversal antisymmetry") {
    for (const auto& [a, b] : random_pairs()) {
        const int ab = linking_gauss(a, b).value;
        CHECK(linking_gauss(b, a).value == ab);
        CHECK(linking_gauss(a.reversed(), b).value == -ab);
        CHECK(linking_gauss(a, b.reversed()).value == -ab);
    }
}

TEST_CASE("(2,4) torus link has linking number 2") {
    std::vector<Vec3> p, q;
    const int n = 400;
    for (int i = 0; i < n; ++i) {
        const double t = 2 * std::numbers::pi * i / n;
        // two parallel (1,2) curves on a torus, offset by half a period
        auto torus = [](double u, double v) {
            return Vec3{(2 + 0.7 * std::cos(v)) * std::cos(u), (2 + 0.7 * std::cos(v)) * std::sin(u), 0.7 * std::sin(v)};
        };
        p.push_back(torus(t, 2 * t));
        q.push_back(torus(t, 2 * t + std::numbers::pi));
    }
    const FramedCurve a = polyline(p), b = polyline(q);
    CHECK(std::abs(linking_gauss(a, b).value) == 2);
    CHECK(linking_gauss(a, b).value == linking_crossings(a, b));
}

TEST_CASE("linking rejects open and touching curves") {
    FramedCurve open = circle({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, 1.0, 20);
    open.closed = false;
    const FramedCurve c = circle({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, 1.0, 20);
    CHECK_THROWS_AS(linking_gauss(open, c), InvariantError);
    CHECK_THROWS_AS(linking_crossings(open, c), InvariantError);
    CHECK_THROWS_AS(linking_gauss(c, c), InvariantError);
}

TEST_CASE("self-linking sign under framing reflection") {
    for (int k : {-2, 1, 3}) {
        FramedCurve c = framed_unknot(k, 1.0, {}, 300);
        CHECK(self_linking(c) == k);
        // Reflect the whole framed curve through the xy-plane.
        FramedCurve m = c;
        for (Vec3& v : m.vertices) v.z = -v.z;
        for (Vec3& f : m.framing) f.z = -f.z;
        CHECK(self_linking(m) == -k);
    }
}

TEST_CASE("framed class adds self-linkings and twice the linking") {
    const FramedCurve a = framed_unknot(1, 1.0, {0, 0, 0}, 300);
    FramedCurve b = framed_unknot(2, 1.0, {4, 0, 0}, 300);
    CHECK(framed_class({a, b}) == 3);
    CHECK(total_linking({a}, {b}) == 0);
    // A Hopf-linked pair of zero-framed circles: 0 + 0 + 2 * lk.
    const FramedCurve c = framed_unknot(0, 1.0, {}, 300);
    FramedCurve d = c;
    for (std::size_t i = 0; i < d.vertices.size(); ++i) {
        const Vec3 v = d.vertices[i], f = d.framing[i];
        d.vertices[i] = Vec3{v.x + 1, v.z, v.y};
        d.framing[i] = Vec3{f.x, f.z, f.y};
    }
    const int lk = linking_gauss(c, d).value;
    CHECK(std::abs(lk) == 1);
    CHECK(framed_class({c, d}) == self_linking(c) + self_linking(d) + 2 * lk);
}

TEST_CASE("unknot certificate") {
    int best = -1;
    CHECK(certify_unknot(framed_unknot(3), &best));
    CHECK(best == 0);
    // Trefoil: every projection has at least three crossings.
    std::vector<Vec3> t;
    for (int i = 0; i < 300; ++i) {
        const double s = 2 * std::numbers::pi * i / 300;
        t.push_back({std::sin(s) + 2 * std::sin(2 * s), std::cos(s) - 2 * std::cos(2 * s), -std::sin(3 * s)});
    }
    CHECK_FALSE(certify_unknot(polyline(t), &best));
    CHECK(best >= 3);
    CHECK(projection_crossings(polyline(t), {0, 0, 1}) == 3);
}
