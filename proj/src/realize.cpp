#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pontryagin/extraction.hpp"

namespace pt {

double collapse_profile(double t) {
    // exp(-t / (1 - t)): equals 1 at 0, decreases monotonically, flat zero from t = 1.
    if (t >= 1.0) return 0.0;
    if (t <= 0.0) return 1.0;
    return std::exp(-t / (1.0 - t));
}

FramedCurve framed_unknot(int k, double radius, const Vec3& center, std::size_t n) {
    FramedCurve c;
    c.closed = true;
    for (std::size_t i = 0; i < n; ++i) {
        const double th = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
        const Vec3 radial{std::cos(th), std::sin(th), 0.0};
        c.vertices.push_back(center + radial * radius);
        c.framing.push_back(radial * std::cos(k * th) - Vec3{0, 0, 1} * std::sin(k * th));
    }
    return c;
}

namespace {

struct Nearest {
    double dist = std::numeric_limits<double>::infinity();
    Vec3 point, tangent, framing;
};

void validate_tubes(const std::vector<FramedCurve>& link, double r) {
    struct Sample {
        std::size_t comp;
        double arc;
        Vec3 x;
    };
    std::vector<Sample> samples;
    std::vector<double> lengths;
    for (std::size_t ci = 0; ci < link.size(); ++ci) {
        const FramedCurve& c = link[ci];
        if (!c.closed) throw std::invalid_argument("realize: only closed framed curves can be realized");
        if (c.vertices.size() < 3 || c.framing.size() != c.vertices.size())
            throw std::invalid_argument("realize: curve needs >= 3 vertices and one framing vector per vertex");
        double arc = 0;
        const std::size_t n = c.vertices.size();
        for (std::size_t i = 0; i < n; ++i) {
            samples.push_back({ci, arc, c.vertices[i]});
            const Vec3 prev = c.vertices[(i + n - 1) % n], cur = c.vertices[i], next = c.vertices[(i + 1) % n];
            const double l1 = distance(prev, cur), l2 = distance(cur, next);
            const double cosang = std::clamp(dot(cur - prev, next - cur) / (l1 * l2), -1.0, 1.0);
            const double turn = std::acos(cosang);
            if (turn > 0 && 0.5 * (l1 + l2) / turn < r)
                throw std::invalid_argument("realize: tube radius exceeds the local radius of curvature");
            arc += l2;
        }
        lengths.push_back(arc);
    }
    for (std::size_t i = 0; i < samples.size(); ++i)
        for (std::size_t j = i + 1; j < samples.size(); ++j) {
            const Sample& a = samples[i];
            const Sample& b = samples[j];
            if (a.comp == b.comp) {
                const double sep = std::abs(a.arc - b.arc);
                if (std::min(sep, lengths[a.comp] - sep) < 4 * r) continue;
            }
            if (distance(a.x, b.x) < 2 * r)
                throw std::invalid_argument("realize: tubular neighbourhoods overlap");
        }
}

}  // namespace

SampledField realize(const std::vector<FramedCurve>& link, const BoxDomain& domain, double tube_radius,
                     const RegularValue& rv) {
    if (!(tube_radius > 0)) throw std::invalid_argument("realize: tube radius must be positive");
    validate_tubes(link, tube_radius);
    const Vec3 base = -rv.p.vec();
    std::vector<Vec3> vals(domain.vertex_count(), base);
    std::vector<std::pair<Vec3, Vec3>> boxes;
    for (const FramedCurve& c : link) {
        Vec3 lo = c.vertices.front(), hi = lo;
        for (const Vec3& v : c.vertices)
            for (int a = 0; a < 3; ++a) {
                lo[a] = std::min(lo[a], v[a] - tube_radius);
                hi[a] = std::max(hi[a], v[a] + tube_radius);
            }
        boxes.emplace_back(lo, hi);
    }
    for (int k = 0; k <= domain.res[2]; ++k)
        for (int j = 0; j <= domain.res[1]; ++j)
            for (int i = 0; i <= domain.res[0]; ++i) {
                const Vec3 x = domain.vertex(i, j, k);
                Nearest best;
                for (std::size_t ci = 0; ci < link.size(); ++ci) {
                    const FramedCurve& c = link[ci];
                    const auto& [lo, hi] = boxes[ci];
                    if (x.x < lo.x || x.y < lo.y || x.z < lo.z || x.x > hi.x || x.y > hi.y || x.z > hi.z) continue;
                    const std::size_t n = c.vertices.size();
                    for (std::size_t s = 0; s < n; ++s) {
                        const Vec3& a = c.vertices[s];
                        const Vec3& b = c.vertices[(s + 1) % n];
                        const Vec3 ab = b - a;
                        const double t = std::clamp(dot(x - a, ab) / dot(ab, ab), 0.0, 1.0);
                        const Vec3 q = a + ab * t;
                        const double d = distance(q, x);
                        if (d < best.dist) {
                            best.dist = d;
                            best.point = q;
                            best.tangent = normalized(ab);
                            best.framing = c.framing[s] * (1 - t) + c.framing[(s + 1) % n] * t;
                        }
                    }
                }
                if (best.dist >= tube_radius) continue;
                Vec3 f = best.framing - best.tangent * dot(best.framing, best.tangent);
                f = normalized(f);
                const Vec3 g = cross(best.tangent, f);
                const Vec3 off = x - best.point;
                const double s1 = dot(off, f) / tube_radius, s2 = dot(off, g) / tube_radius;
                const double r2 = s1 * s1 + s2 * s2;
                const double lam = collapse_profile(r2);
                if (lam <= 0.0) continue;
                // Inverse stereographic projection from -p of (s1, s2) / lambda.
                const double z1 = s1 / lam, z2 = s2 / lam, zz = z1 * z1 + z2 * z2;
                if (!std::isfinite(zz)) continue;
                const Vec3 val = (rv.p.vec() * (1 - zz) + rv.u.vec() * (2 * z1) + rv.v.vec() * (2 * z2)) / (1 + zz);
                vals[domain.index(i, j, k)] = normalized(val);
            }
    return SampledField(domain, std::move(vals));
}

}  // namespace pt
