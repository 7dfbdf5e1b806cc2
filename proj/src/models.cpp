#include "pontryagin/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pt {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Radial bump with value 1 at s = 0, 1/2 at s = 1/2 and zero from s = 1 on.
double bump(double s) {
    if (s >= 1.0) return 0.0;
    return 1.0 - 3.0 * s * s + 2.0 * s * s * s;
}

// Heights (relative to each slab's bottom) of the amplitude profile A(z) of the bypass bump.
double amplitude(int stage, double zeta, double blend) {
    switch (stage) {
        case 0: return 2.0 * smooth_ramp(zeta, 1.0 - 3.0 * blend, 1.0 - blend);
        case 1: return 2.0 - 1.5 * smooth_ramp(zeta, 0.7, 0.95);
        case 2: return 0.5 - 0.5 * smooth_ramp(zeta, 0.2, 0.8);
        default: throw std::invalid_argument("triangle stage must be 0, 1 or 2");
    }
}

constexpr double kPoleHeight = 0.35;

}  // namespace

double smooth_ramp(double t, double lo, double hi) {
    if (t <= lo) return 0.0;
    if (t >= hi) return 1.0;
    const double s = (t - lo) / (hi - lo);
    return s * s * (3.0 - 2.0 * s);
}

Vec3 gauss_from_slice(double x, std::complex<double> num, std::complex<double> den) {
    const std::complex<double> ws = std::polar(1.0, -kTwoPi * x);
    const std::complex<double> wn = ws * num * std::conj(den);
    const double nn = std::norm(num), dd = std::norm(den);
    const Vec3 g{dd - nn, 2.0 * wn.real(), 2.0 * wn.imag()};
    return normalized(g);
}

void BypassModelParams::validate(const BoxDomain& slab) const {
    auto fail = [](const std::string& m) { throw std::invalid_argument("bypass params: " + m); };
    if (!(radius > 0 && epsilon > 0 && blend > 0 && pole_radius > 0)) fail("radius, epsilon, blend and pole radius must be positive");
    if (std::abs(arc_start.z - slab.max.z) > 1e-9 || std::abs(arc_end.z - slab.max.z) > 1e-9)
        fail("attachment arc must lie on the top face");
    if (std::abs(arc_start.y - arc_end.y) > 1e-9) fail("attachment arc must run along the x-axis");
    const double lo = std::min(arc_start.x, arc_end.x), hi = std::max(arc_start.x, arc_end.x);
    // Dividing traces of the standard slab sit at half-integer x.
    int crossings = 0;
    for (int k = static_cast<int>(std::ceil(2 * lo - 1e-9)); k <= static_cast<int>(std::floor(2 * hi + 1e-9)); ++k)
        ++crossings;
    auto on_trace = [](double x) { return std::abs(2 * x - std::round(2 * x)) < 1e-9; };
    if (crossings != 3 || !on_trace(lo) || !on_trace(hi))
        fail("attachment arc must cross the dividing set in exactly 3 points with endpoints on it (found " +
             std::to_string(crossings) + ")");
    if (blend >= 1.0 / 3.0) fail("blend must be below 1/3");
    if (epsilon > 0.5) fail("epsilon must not exceed 1/2");
    if (pole_radius > 0.3 || pole_radius >= 2 * radius) fail("pole radius must be <= 0.3 and below twice the radius");
    const Vec3 c = center();
    if (c.x - epsilon < slab.min.x || c.x + epsilon > slab.max.x || c.y - 2 * radius < slab.min.y ||
        c.y + 2 * radius > slab.max.y)
        fail("bypass region leaves the slab");
}

void SlabStack::validate() const {
    for (std::size_t s = 0; s + 1 < slabs.size(); ++s) {
        const BoxDomain& a = slabs[s].domain();
        const BoxDomain& b = slabs[s + 1].domain();
        if (a.res[0] != b.res[0] || a.res[1] != b.res[1] || std::abs(a.max.z - b.min.z) > 1e-12)
            throw std::invalid_argument("SlabStack: slabs are not vertically adjacent on a common lattice");
        for (int j = 0; j <= a.res[1]; ++j)
            for (int i = 0; i <= a.res[0]; ++i)
                if (distance(slabs[s].at(i, j, a.res[2]), slabs[s + 1].at(i, j, 0)) > 1e-9)
                    throw std::invalid_argument("SlabStack: adjacent slabs disagree on their shared face");
    }
}

SampledField SlabStack::merged() const {
    if (slabs.empty()) throw std::invalid_argument("SlabStack: empty stack");
    validate();
    if (slabs.size() == 1) return slabs.front();
    const BoxDomain& first = slabs.front().domain();
    int nz = 0;
    for (const auto& s : slabs) nz += s.domain().res[2];
    BoxDomain dom(first.min, {first.max.x, first.max.y, slabs.back().domain().max.z}, {first.res[0], first.res[1], nz});
    std::vector<Vec3> vals;
    vals.reserve(dom.vertex_count());
    for (std::size_t s = 0; s < slabs.size(); ++s) {
        const auto& v = slabs[s].values();
        const std::size_t layer = static_cast<std::size_t>(first.res[0] + 1) * (first.res[1] + 1);
        vals.insert(vals.end(), v.begin() + (s == 0 ? 0 : static_cast<std::ptrdiff_t>(layer)), v.end());
    }
    return SampledField(dom, std::move(vals));
}

SampledField standard_slab(const BoxDomain& domain) { return sample(standard_field(), domain); }

SampledField invariant_extension(const std::vector<Vec3>& trace, const BoxDomain& domain) {
    const std::size_t layer = static_cast<std::size_t>(domain.res[0] + 1) * (domain.res[1] + 1);
    if (trace.size() != layer) throw std::invalid_argument("invariant_extension: trace size does not match the lattice");
    std::vector<Vec3> vals;
    vals.reserve(domain.vertex_count());
    for (int k = 0; k <= domain.res[2]; ++k) vals.insert(vals.end(), trace.begin(), trace.end());
    return SampledField(domain, std::move(vals));
}

std::vector<Vec3> horizontal_trace(const SampledField& field, int k) {
    const BoxDomain& d = field.domain();
    if (k < 0 || k > d.res[2]) throw std::out_of_range("horizontal_trace: slice index out of range");
    const std::size_t layer = static_cast<std::size_t>(d.res[0] + 1) * (d.res[1] + 1);
    auto begin = field.values().begin() + static_cast<std::ptrdiff_t>(layer * k);
    return {begin, begin + static_cast<std::ptrdiff_t>(layer)};
}

AnalyticField triangle_stage_field(const BypassModelParams& params, int stage, double z0) {
    if (stage < 0 || stage > 2) throw std::invalid_argument("triangle stage must be 0, 1 or 2");
    const Vec3 c = params.center();
    const double base = z0 + stage;
    AnalyticField f;
    f.name = "triangle-stage-" + std::to_string(stage);
    f.gauss = [params, c, base, stage](const Vec3& x) {
        const double zeta = x.z - base;
        const double sx = (x.x - c.x) / params.epsilon, sy = (x.y - c.y) / (2.0 * params.radius);
        const double amp = amplitude(stage, zeta, params.blend) * bump(std::sqrt(sx * sx + sy * sy));
        const std::complex<double> num = 1.0 - amp * std::polar(1.0, kTwoPi * (x.x - c.x));
        std::complex<double> den = 1.0;
        if (stage == 1) {
            // Rotated region: -p is attained on a small ring around the strand at y = c.y + radius.
            const Vec3 rel{x.x - c.x, x.y - (c.y + params.radius), zeta - kPoleHeight};
            const double m = 2.0 * bump(norm(rel) / params.pole_radius);
            const double kappa = params.rotation_sign * 0.8 * std::numbers::pi / params.pole_radius;
            den = 1.0 - m * std::polar(1.0, kappa * rel.z);
        }
        return gauss_from_slice(x.x, num, den);
    };
    return f;
}

SampledField bypass_slab(const BypassModelParams& params, const BoxDomain& domain) {
    params.validate(domain);
    return sample(triangle_stage_field(params, 0, domain.max.z - 1.0), domain);
}

SampledField bypass_slab(const BypassModelParams& params, std::array<int, 3> res) {
    return bypass_slab(params, slab_domain(res, params.arc_start.z - 1.0, params.arc_start.z));
}

SlabStack triangle_slab(const BypassModelParams& params, std::array<int, 3> res, double z0) {
    BypassModelParams shifted = params;
    shifted.arc_start.z = z0 + 1.0;
    shifted.arc_end.z = z0 + 1.0;
    shifted.validate(slab_domain(res, z0, z0 + 1.0));
    SlabStack stack;
    for (int stage = 0; stage < 3; ++stage)
        stack.slabs.push_back(
            sample(triangle_stage_field(shifted, stage, z0), slab_domain(res, z0 + stage, z0 + stage + 1.0)));
    stack.validate();
    return stack;
}

SlabStack stack_triangles(int n, const BypassModelParams& params, std::array<int, 3> res) {
    if (n < 1) throw std::invalid_argument("stack_triangles: n must be at least 1");
    SlabStack all;
    for (int t = 0; t < n; ++t) {
        SlabStack one = triangle_slab(params, res, 3.0 * t);
        for (auto& s : one.slabs) all.slabs.push_back(std::move(s));
    }
    all.validate();
    return all;
}

AnalyticField hopf_analytic() {
    AnalyticField f;
    f.name = "hopf";
    f.gauss = [](const Vec3& x) {
        const double s = dot(x, x);
        const std::complex<double> z1(2 * x.x, 2 * x.y), z2(2 * x.z, s - 1);
        const std::complex<double> w = 2.0 * z1 * std::conj(z2);
        // Both coordinates carry the common factor 1/(1+s)^2, which normalization removes.
        return normalized(Vec3{std::norm(z1) - std::norm(z2), w.real(), w.imag()});
    };
    return f;
}

Vec3 hopf_far_value() { return {-1.0, 0.0, 0.0}; }

SampledField hopf_field(const BoxDomain& box) { return sample(hopf_analytic(), box); }

void check_hopf_regular_value(const RegularValue& rv, double exclusion_angle) {
    const double ang = std::acos(std::clamp(dot(rv.p.vec(), hopf_far_value()), -1.0, 1.0));
    if (ang < exclusion_angle)
        throw std::invalid_argument("hopf regular value lies within the exclusion angle of the far value");
}

std::vector<double> dividing_trace_crossings(const SampledField& field, int j, int k) {
    const BoxDomain& d = field.domain();
    std::vector<double> xs;
    for (int i = 0; i < d.res[0]; ++i) {
        const double a = field.at(i, j, k).z, b = field.at(i + 1, j, k).z;
        const double xa = d.vertex(i, j, k).x, xb = d.vertex(i + 1, j, k).x;
        if (a == 0.0) xs.push_back(xa);
        else if (a * b < 0) xs.push_back(xa + (xb - xa) * a / (a - b));
    }
    if (field.at(d.res[0], j, k).z == 0.0) xs.push_back(d.max.x);
    return xs;
}

}  // namespace pt
