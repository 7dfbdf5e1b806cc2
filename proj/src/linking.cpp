#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "pontryagin/invariants.hpp"

namespace pt {

namespace {

double segment_distance(const Vec3& p1, const Vec3& p2, const Vec3& q1, const Vec3& q2) {
    const Vec3 d1 = p2 - p1, d2 = q2 - q1, r = p1 - q1;
    const double a = dot(d1, d1), e = dot(d2, d2), f = dot(d2, r);
    double s = 0, t = 0;
    const double c = dot(d1, r), b = dot(d1, d2), denom = a * e - b * b;
    s = denom > 1e-300 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
    t = e > 0 ? (b * s + f) / e : 0.0;
    if (t < 0) {
        t = 0;
        s = a > 0 ? std::clamp(-c / a, 0.0, 1.0) : 0.0;
    } else if (t > 1) {
        t = 1;
        s = a > 0 ? std::clamp((b - c) / a, 0.0, 1.0) : 0.0;
    }
    return distance(p1 + d1 * s, q1 + d2 * t);
}

Vec3 unit_or_zero(const Vec3& v) {
    const double n = norm(v);
    return n > 1e-300 ? v / n : Vec3{};
}

// Signed solid angle subtended by the pair of segments, over 4 pi (exact Gauss integral of the pair).
double segment_pair_linking(const Vec3& p1, const Vec3& p2, const Vec3& p3, const Vec3& p4) {
    const Vec3 r13 = p3 - p1, r14 = p4 - p1, r23 = p3 - p2, r24 = p4 - p2;
    const Vec3 n1 = unit_or_zero(cross(r13, r14));
    const Vec3 n2 = unit_or_zero(cross(r14, r24));
    const Vec3 n3 = unit_or_zero(cross(r24, r23));
    const Vec3 n4 = unit_or_zero(cross(r23, r13));
    auto as = [](double x) { return std::asin(std::clamp(x, -1.0, 1.0)); };
    const double omega = as(dot(n1, n2)) + as(dot(n2, n3)) + as(dot(n3, n4)) + as(dot(n4, n1));
    const double s = dot(cross(p4 - p3, p2 - p1), r13);
    if (s == 0.0) return 0.0;
    return (s > 0 ? omega : -omega) / (4.0 * std::numbers::pi);
}

enum class Hit { None, Cross, Degenerate };

// Intersection of projected segments ab and cd; t, u are the parameters along each.
Hit planar_hit(const std::array<double, 2>& pa, const std::array<double, 2>& pb, const std::array<double, 2>& pc,
               const std::array<double, 2>& pd, double& t, double& u) {
    const double rx = pb[0] - pa[0], ry = pb[1] - pa[1];
    const double sx = pd[0] - pc[0], sy = pd[1] - pc[1];
    const double den = rx * sy - ry * sx;
    const double qx = pc[0] - pa[0], qy = pc[1] - pa[1];
    const double scale = std::max({std::abs(rx), std::abs(ry), std::abs(sx), std::abs(sy), 1e-300});
    const double eps = 1e-12;
    if (std::abs(den) < 1e-14 * scale * scale) {
        if (std::abs(qx * ry - qy * rx) >= 1e-14 * scale * scale) return Hit::None;
        // Collinear: degenerate only if the parameter intervals overlap.
        const double rr = rx * rx + ry * ry;
        if (rr < 1e-300) return Hit::Degenerate;
        const double s0 = (qx * rx + qy * ry) / rr, s1 = s0 + (sx * rx + sy * ry) / rr;
        return std::max(s0, s1) < -eps || std::min(s0, s1) > 1 + eps ? Hit::None : Hit::Degenerate;
    }
    t = (qx * sy - qy * sx) / den;
    u = (qx * ry - qy * rx) / den;
    if (t < -eps || t > 1 + eps || u < -eps || u > 1 + eps) return Hit::None;
    if (t < eps || t > 1 - eps || u < eps || u > 1 - eps) return Hit::Degenerate;
    return Hit::Cross;
}

void require_closed(const FramedCurve& c, const char* who) {
    if (!c.closed) throw InvariantError(std::string(who) + ": linking numbers need closed curves");
    if (c.vertices.size() < 3) throw InvariantError(std::string(who) + ": curve has fewer than 3 vertices");
}

}  // namespace

LinkingResult linking_gauss(const FramedCurve& c1, const FramedCurve& c2, double min_separation) {
    require_closed(c1, "linking_gauss");
    require_closed(c2, "linking_gauss");
    const std::size_t n1 = c1.vertices.size(), n2 = c2.vertices.size();
    // Row sums, then a fixed pairwise reduction, keep the summation order deterministic.
    std::vector<double> rows(n1, 0.0);
    for (std::size_t i = 0; i < n1; ++i) {
        const Vec3& a = c1.vertices[i];
        const Vec3& b = c1.vertices[(i + 1) % n1];
        double acc = 0;
        for (std::size_t j = 0; j < n2; ++j) {
            const Vec3& c = c2.vertices[j];
            const Vec3& d = c2.vertices[(j + 1) % n2];
            if (segment_distance(a, b, c, d) < min_separation)
                throw InvariantError("linking_gauss: curves intersect or nearly intersect");
            acc += segment_pair_linking(a, b, c, d);
        }
        rows[i] = acc;
    }
    while (rows.size() > 1) {
        std::vector<double> next((rows.size() + 1) / 2);
        for (std::size_t i = 0; i < next.size(); ++i)
            next[i] = rows[2 * i] + (2 * i + 1 < rows.size() ? rows[2 * i + 1] : 0.0);
        rows.swap(next);
    }
    LinkingResult r;
    r.raw = rows.empty() ? 0.0 : rows[0];
    r.value = static_cast<int>(std::lround(r.raw));
    if (r.residual() > 0.1)
        throw InvariantError("linking_gauss: Gauss integral " + std::to_string(r.raw) +
                             " is not within 0.1 of an integer (under-resolved curves?)");
    return r;
}

int linking_crossings(const FramedCurve& c1, const FramedCurve& c2, const Vec3& direction, int jitter_budget) {
    require_closed(c1, "linking_crossings");
    require_closed(c2, "linking_crossings");
    struct Degenerate {};
    for (int attempt = 0; attempt <= jitter_budget; ++attempt) {
        Vec3 d = normalized(direction);
        if (attempt > 0) d = normalized(rotate(d, normalized({0.7, -0.2, 0.4}), 1e-3 * attempt));
        const Vec3 e1 = normalized(cross(std::abs(d.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0}, d));
        const Vec3 e2 = cross(d, e1);
        auto proj = [&](const Vec3& v) { return std::array<double, 2>{dot(v, e1), dot(v, e2)}; };
        try {
            int twice = 0;
            const std::size_t n1 = c1.vertices.size(), n2 = c2.vertices.size();
            for (std::size_t i = 0; i < n1; ++i) {
                const Vec3& a = c1.vertices[i];
                const Vec3& b = c1.vertices[(i + 1) % n1];
                const auto pa = proj(a), pb = proj(b);
                for (std::size_t j = 0; j < n2; ++j) {
                    const Vec3& c = c2.vertices[j];
                    const Vec3& dd = c2.vertices[(j + 1) % n2];
                    const auto pc = proj(c), pd = proj(dd);
                    double t = 0, u = 0;
                    const Hit hit = planar_hit(pa, pb, pc, pd, t, u);
                    if (hit == Hit::Degenerate) throw Degenerate{};
                    if (hit == Hit::None) continue;
                    const double h1 = dot(a + (b - a) * t, d), h2 = dot(c + (dd - c) * u, d);
                    if (std::abs(h1 - h2) < 1e-14) throw Degenerate{};
                    const Vec3 t1 = b - a, t2 = dd - c;
                    const double s = h1 > h2 ? dot(cross(t1, t2), d) : dot(cross(t2, t1), d);
                    twice += s > 0 ? 1 : -1;
                }
            }
            if (twice % 2 != 0) throw Degenerate{};
            return twice / 2;
        } catch (const Degenerate&) {
            continue;
        }
    }
    throw InvariantError("linking_crossings: projection stays degenerate after the jitter budget");
}

int projection_crossings(const FramedCurve& c, const Vec3& direction, int jitter_budget) {
    require_closed(c, "projection_crossings");
    struct Degenerate {};
    const std::size_t n = c.vertices.size();
    for (int attempt = 0; attempt <= jitter_budget; ++attempt) {
        Vec3 d = normalized(direction);
        if (attempt > 0) d = normalized(rotate(d, normalized({0.7, -0.2, 0.4}), 1e-3 * attempt));
        const Vec3 e1 = normalized(cross(std::abs(d.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0}, d));
        const Vec3 e2 = cross(d, e1);
        std::vector<std::array<double, 2>> q(n);
        for (std::size_t i = 0; i < n; ++i) q[i] = {dot(c.vertices[i], e1), dot(c.vertices[i], e2)};
        try {
            int count = 0;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 2; j < n; ++j) {
                    if (i == 0 && j == n - 1) continue;
                    double t = 0, u = 0;
                    const Hit hit = planar_hit(q[i], q[(i + 1) % n], q[j], q[(j + 1) % n], t, u);
                    if (hit == Hit::Degenerate) throw Degenerate{};
                    if (hit == Hit::None) continue;
                    ++count;
                }
            return count;
        } catch (const Degenerate&) {
            continue;
        }
    }
    throw InvariantError("projection_crossings: projection stays degenerate after the jitter budget");
}

bool certify_unknot(const FramedCurve& c, int* best_crossings) {
    static const Vec3 dirs[] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}, {1, -1, 1}, {1, 1, -1}, {-1, 1, 1}};
    int best = std::numeric_limits<int>::max();
    for (const Vec3& d : dirs) best = std::min(best, projection_crossings(c, d));
    if (best_crossings) *best_crossings = best;
    return best < 3;
}

double pushoff_distance(const FramedCurve& c) {
    const std::size_t n = c.vertices.size();
    double feature = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        if (!c.closed && (i == 0 || i + 1 == n)) continue;
        const Vec3 prev = c.vertices[(i + n - 1) % n], cur = c.vertices[i], next = c.vertices[(i + 1) % n];
        const double l1 = distance(prev, cur), l2 = distance(cur, next);
        const double cosang = std::clamp(dot(cur - prev, next - cur) / (l1 * l2), -1.0, 1.0);
        const double turn = std::acos(cosang);
        if (turn > 1e-12) feature = std::min(feature, 0.5 * (l1 + l2) / turn);
        feature = std::min(feature, std::max(l1, l2) * 4.0);
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 3; j < n; ++j) {
            const std::size_t gap = c.closed ? std::min(j - i, n - (j - i)) : j - i;
            if (gap < 3) continue;
            feature = std::min(feature, distance(c.vertices[i], c.vertices[j]));
        }
    if (!std::isfinite(feature)) throw InvariantError("pushoff_distance: degenerate curve");
    return 0.25 * feature;
}

int self_linking(const FramedCurve& c) {
    require_closed(c, "self_linking");
    if (c.framing.size() != c.vertices.size()) throw InvariantError("self_linking: missing framing vectors");
    const double h = pushoff_distance(c);
    try {
        return linking_gauss(c, c.pushoff(h), 1e-3 * h).value;
    } catch (const InvariantError& e) {
        throw InvariantError(std::string("self_linking: pushoff invalid: ") + e.what());
    }
}

int framed_class(const std::vector<FramedCurve>& comps) {
    int total = 0;
    for (std::size_t i = 0; i < comps.size(); ++i) {
        total += self_linking(comps[i]);
        for (std::size_t j = i + 1; j < comps.size(); ++j) total += 2 * linking_gauss(comps[i], comps[j]).value;
    }
    return total;
}

int total_linking(const std::vector<FramedCurve>& a, const std::vector<FramedCurve>& b) {
    int total = 0;
    for (const FramedCurve& x : a)
        for (const FramedCurve& y : b) total += linking_gauss(x, y).value;
    return total;
}

}  // namespace pt
