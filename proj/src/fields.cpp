#include "pontryagin/fields.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace pt {

BoxDomain::BoxDomain(const Vec3& lo, const Vec3& hi, std::array<int, 3> r) : min(lo), max(hi), res(r) {
    for (int a = 0; a < 3; ++a) {
        if (!(hi[a] > lo[a])) throw std::invalid_argument("BoxDomain: max must exceed min on every axis");
        if (r[a] < 2) throw std::invalid_argument("BoxDomain: resolution must be at least 2 on every axis");
    }
}

std::size_t BoxDomain::vertex_count() const {
    return static_cast<std::size_t>(res[0] + 1) * (res[1] + 1) * (res[2] + 1);
}

Vec3 BoxDomain::spacing() const {
    return {(max.x - min.x) / res[0], (max.y - min.y) / res[1], (max.z - min.z) / res[2]};
}

Vec3 BoxDomain::vertex(int i, int j, int k) const {
    // Endpoints are hit exactly so adjacent slabs share bit-identical face coordinates.
    auto coord = [](double lo, double hi, int n, int idx) {
        if (idx == n) return hi;
        return lo + (hi - lo) * (static_cast<double>(idx) / n);
    };
    return {coord(min.x, max.x, res[0], i), coord(min.y, max.y, res[1], j), coord(min.z, max.z, res[2], k)};
}

bool BoxDomain::contains(const Vec3& p, double slack) const {
    for (int a = 0; a < 3; ++a)
        if (p[a] < min[a] - slack || p[a] > max[a] + slack) return false;
    return true;
}

BoxDomain slab_domain(std::array<int, 3> res, double z0, double z1) {
    return BoxDomain({-0.75, -1.0, z0}, {0.75, 1.0, z1}, res);
}

SampledField::SampledField(BoxDomain domain, std::vector<Vec3> values)
    : domain_(std::move(domain)), values_(std::move(values)) {
    if (values_.size() != domain_.vertex_count())
        throw std::invalid_argument("SampledField: value count does not match the lattice");
    for (std::size_t n = 0; n < values_.size(); ++n) {
        if (!is_finite(values_[n]) || std::abs(norm(values_[n]) - 1.0) > UnitVec3::kTolerance)
            throw std::invalid_argument("SampledField: non-unit value at flat index " + std::to_string(n));
    }
}

Vec3 SampledField::interpolate(const Vec3& p) const {
    const Vec3 h = domain_.spacing();
    int idx[3];
    double frac[3];
    for (int a = 0; a < 3; ++a) {
        double t = (p[a] - domain_.min[a]) / h[a];
        t = std::clamp(t, 0.0, static_cast<double>(domain_.res[a]));
        int c = std::min(static_cast<int>(std::floor(t)), domain_.res[a] - 1);
        idx[a] = c;
        frac[a] = t - c;
    }
    Vec3 acc;
    for (int dz = 0; dz < 2; ++dz)
        for (int dy = 0; dy < 2; ++dy)
            for (int dx = 0; dx < 2; ++dx) {
                const double w = (dx ? frac[0] : 1 - frac[0]) * (dy ? frac[1] : 1 - frac[1]) *
                                 (dz ? frac[2] : 1 - frac[2]);
                acc += at(idx[0] + dx, idx[1] + dy, idx[2] + dz) * w;
            }
    const double n = norm(acc);
    return n > 0.0 ? acc / n : at(idx[0], idx[1], idx[2]);
}

SampledField SampledField::restrict(std::array<int, 3> lo, std::array<int, 3> hi) const {
    std::array<int, 3> res{};
    for (int a = 0; a < 3; ++a) {
        if (lo[a] < 0 || hi[a] > domain_.res[a] || hi[a] - lo[a] < 2)
            throw std::invalid_argument("SampledField::restrict: sub-box out of range or too small");
        res[a] = hi[a] - lo[a];
    }
    BoxDomain sub(domain_.vertex(lo[0], lo[1], lo[2]), domain_.vertex(hi[0], hi[1], hi[2]), res);
    std::vector<Vec3> vals;
    vals.reserve(sub.vertex_count());
    for (int k = lo[2]; k <= hi[2]; ++k)
        for (int j = lo[1]; j <= hi[1]; ++j)
            for (int i = lo[0]; i <= hi[0]; ++i) vals.push_back(at(i, j, k));
    return SampledField(sub, std::move(vals));
}

SampledField SampledField::mirrored_x() const {
    std::vector<Vec3> vals(values_.size());
    const int nx = domain_.res[0];
    for (int k = 0; k <= domain_.res[2]; ++k)
        for (int j = 0; j <= domain_.res[1]; ++j)
            for (int i = 0; i <= nx; ++i) {
                // Reflecting the domain and the plane field together keeps G a Gauss map: x-component flips.
                Vec3 g = at(nx - i, j, k);
                g.x = -g.x;
                vals[domain_.index(i, j, k)] = g;
            }
    return SampledField(domain_, std::move(vals));
}

namespace {

void fnv_mix(std::uint64_t& h, const void* data, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= b[i];
        h *= 0x100000001b3ULL;
    }
}

void fnv_mix_double(std::uint64_t& h, double d) {
    auto bits = std::bit_cast<std::uint64_t>(d);
    unsigned char le[8];
    for (int i = 0; i < 8; ++i) le[i] = static_cast<unsigned char>(bits >> (8 * i));
    fnv_mix(h, le, 8);
}

}  // namespace

std::string SampledField::digest() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (int a = 0; a < 3; ++a) {
        fnv_mix_double(h, domain_.min[a]);
        fnv_mix_double(h, domain_.max[a]);
        fnv_mix_double(h, domain_.res[a]);
    }
    for (const Vec3& v : values_) {
        fnv_mix_double(h, v.x);
        fnv_mix_double(h, v.y);
        fnv_mix_double(h, v.z);
    }
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << h;
    return os.str();
}

RegularValue RegularValue::from_point(const Vec3& point, double delta) {
    const Vec3 p = normalized(point);
    const Vec3 helper = std::abs(p.z) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
    const Vec3 u = normalized(cross(helper, p));
    const Vec3 v = cross(p, u);
    return RegularValue{UnitVec3::normalize(p), UnitVec3::normalize(u), UnitVec3::normalize(v), delta};
}

RegularValue RegularValue::pushoff() const {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("RegularValue: pushoff delta must be in (0, 1)");
    const double c = 1.0 - delta;
    const double s = std::sqrt(2.0 * delta - delta * delta);
    const Vec3 p2 = p.vec() * c + u.vec() * s;
    const Vec3 u2 = u.vec() * c - p.vec() * s;
    return RegularValue{UnitVec3::normalize(p2), UnitVec3::normalize(u2), v, delta};
}

RegularValue RegularValue::rotated_frame() const {
    return RegularValue{p, v, UnitVec3::normalize(-u.vec()), delta};
}

RegularValue RegularValue::jittered(double angle) const {
    const Vec3 axis = normalized({0.267, 0.534, 0.802});
    return RegularValue{UnitVec3::normalize(rotate(p, axis, angle)), UnitVec3::normalize(rotate(u, axis, angle)),
                        UnitVec3::normalize(rotate(v, axis, angle)), delta};
}

RegularValue RegularValue::antipode() const {
    return RegularValue{UnitVec3::normalize(-p.vec()), u, UnitVec3::normalize(-v.vec()), delta};
}

UnitVec3 standard_gauss(const Vec3& x) {
    const double t = 2.0 * std::numbers::pi * x.x;
    return UnitVec3(Vec3{0.0, std::cos(t), -std::sin(t)});
}

AnalyticField standard_field() {
    AnalyticField f;
    f.name = "standard";
    f.gauss = [](const Vec3& x) { return standard_gauss(x).vec(); };
    OneForm form;
    form.coefficients = [](const Vec3& x) {
        const double t = 2.0 * std::numbers::pi * x.x;
        return Vec3{0.0, std::cos(t), -std::sin(t)};
    };
    form.curl = [](const Vec3& x) {
        const double t = 2.0 * std::numbers::pi * x.x;
        const double w = 2.0 * std::numbers::pi;
        // curl(0, cos t, -sin t) = (0, w cos t, -w sin t)
        return Vec3{0.0, w * std::cos(t), -w * std::sin(t)};
    };
    f.form = form;
    return f;
}

AnalyticField constant_field(const Vec3& value) {
    const Vec3 v = normalized(value);
    AnalyticField f;
    f.name = "constant";
    f.gauss = [v](const Vec3&) { return v; };
    return f;
}

SampledField sample(const AnalyticField& field, const BoxDomain& domain) {
    std::vector<Vec3> vals(domain.vertex_count());
    for (int k = 0; k <= domain.res[2]; ++k)
        for (int j = 0; j <= domain.res[1]; ++j)
            for (int i = 0; i <= domain.res[0]; ++i) {
                const Vec3 x = domain.vertex(i, j, k);
                const Vec3 g = field.gauss(x);
                if (!is_finite(g) || !(norm(g) > 0.0))
                    throw std::runtime_error("sample: non-finite field value at vertex (" + std::to_string(i) + "," +
                                             std::to_string(j) + "," + std::to_string(k) + ") position " +
                                             to_string(x));
                vals[domain.index(i, j, k)] = normalized(g);
            }
    return SampledField(domain, std::move(vals));
}

ContactReport check_contact_condition(const AnalyticField& field, const BoxDomain& domain, int n_samples) {
    if (!field.form) throw std::invalid_argument("check_contact_condition: field carries no 1-form data");
    if (n_samples < 2) throw std::invalid_argument("check_contact_condition: need at least 2 samples per axis");
    const OneForm& form = *field.form;
    const bool exact = static_cast<bool>(form.curl);
    auto curl_fd = [&](const Vec3& x) {
        const double h = 1e-5;
        auto d = [&](int axis, int comp) {
            Vec3 e;
            e[axis] = h;
            return (form.coefficients(x + e)[comp] - form.coefficients(x - e)[comp]) / (2 * h);
        };
        return Vec3{d(1, 2) - d(2, 1), d(2, 0) - d(0, 2), d(0, 1) - d(1, 0)};
    };
    ContactReport rep;
    rep.method = exact ? "exact" : "finite-difference";
    rep.min_value = std::numeric_limits<double>::infinity();
    rep.max_value = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < n_samples; ++k)
        for (int j = 0; j < n_samples; ++j)
            for (int i = 0; i < n_samples; ++i) {
                const Vec3 t{static_cast<double>(i) / (n_samples - 1), static_cast<double>(j) / (n_samples - 1),
                             static_cast<double>(k) / (n_samples - 1)};
                const Vec3 x{domain.min.x + t.x * (domain.max.x - domain.min.x),
                             domain.min.y + t.y * (domain.max.y - domain.min.y),
                             domain.min.z + t.z * (domain.max.z - domain.min.z)};
                const Vec3 c = exact ? form.curl(x) : curl_fd(x);
                const double val = dot(form.coefficients(x), c);
                if (val < rep.min_value) {
                    rep.min_value = val;
                    rep.argmin = x;
                }
                rep.max_value = std::max(rep.max_value, val);
            }
    return rep;
}

RegularityReport certify_regular_value(const SampledField& field, const RegularValue& rv, double tol,
                                       double cos_gate) {
    const BoxDomain& d = field.domain();
    const Vec3 h = d.spacing();
    RegularityReport rep;
    rep.worst_sigma = std::numeric_limits<double>::infinity();
    for (int k = 0; k < d.res[2]; ++k)
        for (int j = 0; j < d.res[1]; ++j)
            for (int i = 0; i < d.res[0]; ++i) {
                double a[8], b[8];
                bool gated = false;
                for (int c = 0; c < 8; ++c) {
                    const Vec3& f = field.at(i + (c & 1), j + ((c >> 1) & 1), k + ((c >> 2) & 1));
                    a[c] = dot(f, rv.u);
                    b[c] = dot(f, rv.v);
                    gated = gated || dot(f, rv.p) >= cos_gate;
                }
                if (!gated) continue;
                ++rep.cells_tested;
                // Cell-averaged forward differences along each axis.
                Vec3 ga, gb;
                for (int axis = 0; axis < 3; ++axis) {
                    const int bit = 1 << axis;
                    double sa = 0, sb = 0;
                    for (int c = 0; c < 8; ++c)
                        if (!(c & bit)) {
                            sa += a[c | bit] - a[c];
                            sb += b[c | bit] - b[c];
                        }
                    ga[axis] = sa / (4 * h[axis]);
                    gb[axis] = sb / (4 * h[axis]);
                }
                // Smallest singular value of the 2x3 Jacobian with rows ga, gb.
                const double p = dot(ga, ga), q = dot(gb, gb), r = dot(ga, gb);
                const double tr = p + q, det = p * q - r * r;
                const double disc = std::sqrt(std::max(0.0, tr * tr / 4 - det));
                const double sigma = std::sqrt(std::max(0.0, tr / 2 - disc));
                if (sigma < rep.worst_sigma) {
                    rep.worst_sigma = sigma;
                    rep.worst_location = d.vertex(i, j, k) + h * 0.5;
                }
                if (sigma < tol) rep.regular = false;
            }
    return rep;
}

}  // namespace pt
