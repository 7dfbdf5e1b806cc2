#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pontryagin/vec3.hpp"

namespace pt {

/// Axis-aligned box with a vertex lattice of (res + 1) points per axis.
struct BoxDomain {
    Vec3 min;
    Vec3 max;
    std::array<int, 3> res{2, 2, 2};

    BoxDomain() = default;
    BoxDomain(const Vec3& lo, const Vec3& hi, std::array<int, 3> r);

    std::array<int, 3> vertex_counts() const { return {res[0] + 1, res[1] + 1, res[2] + 1}; }
    std::size_t vertex_count() const;
    Vec3 spacing() const;
    Vec3 vertex(int i, int j, int k) const;
    std::size_t index(int i, int j, int k) const {
        return (static_cast<std::size_t>(k) * (res[1] + 1) + j) * (res[0] + 1) + i;
    }
    bool contains(const Vec3& p, double slack = 0.0) const;
    double cell_diameter() const { return norm(spacing()); }
    bool operator==(const BoxDomain&) const = default;
};

/// The slab V = [-3/4,3/4] x [-1,1] x [0,1] at the given resolution.
BoxDomain slab_domain(std::array<int, 3> res, double z0 = 0.0, double z1 = 1.0);

/// A 1-form a dx + b dy + c dz, with optional exact curl.
struct OneForm {
    std::function<Vec3(const Vec3&)> coefficients;
    std::function<Vec3(const Vec3&)> curl;  // may be empty; finite differences are used then
};

/// Closed-form Gauss map of a co-oriented plane field.
struct AnalyticField {
    std::string name;
    std::function<Vec3(const Vec3&)> gauss;
    std::optional<OneForm> form;
};

/// Vertex-sampled unit vector field on a box.
class SampledField {
public:
    SampledField() = default;
    SampledField(BoxDomain domain, std::vector<Vec3> values);

    const BoxDomain& domain() const { return domain_; }
    const std::vector<Vec3>& values() const { return values_; }
    const Vec3& at(int i, int j, int k) const { return values_[domain_.index(i, j, k)]; }

    /// Multilinear interpolation of the vertex values followed by renormalization.
    Vec3 interpolate(const Vec3& p) const;

    /// Sub-lattice [lo, hi] (vertex indices, inclusive) as its own field.
    SampledField restrict(std::array<int, 3> lo, std::array<int, 3> hi) const;

    /// Mirror image under x -> (xmin + xmax) - x.
    SampledField mirrored_x() const;

    /// 64-bit FNV-1a digest of the domain and the little-endian value bytes, as hex.
    std::string digest() const;

private:
    BoxDomain domain_;
    std::vector<Vec3> values_;
};

/// A regular value p with tangent frame (u, v), (u, v, p) right-handed, and pushoff parameter.
struct RegularValue {
    UnitVec3 p;
    UnitVec3 u;
    UnitVec3 v;
    double delta = 0.02;

    /// Frame chosen deterministically from p; p = (1,0,0) gives u = (0,1,0), v = (0,0,1).
    static RegularValue from_point(const Vec3& p, double delta = 0.02);
    static RegularValue standard(double delta = 0.02) { return from_point({1.0, 0.0, 0.0}, delta); }

    /// p' = (1 - delta) p + sqrt(2 delta - delta^2) u, framed by parallel transport along the u-great circle.
    RegularValue pushoff() const;
    /// Same point, frame rotated (u, v) -> (v, -u).
    RegularValue rotated_frame() const;
    /// The frame (u, v, p) rotated by `angle` radians about a fixed generic axis.
    RegularValue jittered(double angle) const;
    RegularValue antipode() const;
};

/// Unit normal of ker(cos(2 pi x) dy - sin(2 pi x) dz): (0, cos 2 pi x, -sin 2 pi x).
UnitVec3 standard_gauss(const Vec3& x);
AnalyticField standard_field();
AnalyticField constant_field(const Vec3& value);

/// Vertex-wise evaluation; throws std::runtime_error naming the vertex on a non-finite value.
SampledField sample(const AnalyticField& field, const BoxDomain& domain);

struct ContactReport {
    double min_value = 0.0;
    double max_value = 0.0;
    Vec3 argmin;
    std::string method;  // "exact" or "finite-difference"
};

/// Minimum of lambda ^ d lambda / (dx dy dz) = lambda . curl(lambda) over an n^3 sample of the domain.
ContactReport check_contact_condition(const AnalyticField& field, const BoxDomain& domain, int n_samples);

struct RegularityReport {
    bool regular = true;
    double worst_sigma = 0.0;  // smallest singular value seen among gated cells (infinity if none)
    Vec3 worst_location;
    std::size_t cells_tested = 0;
};

/// Checks that the (u, v)-components of the field have a rank-2 Jacobian in every cell whose
/// values come within the gate angle of p.
RegularityReport certify_regular_value(const SampledField& field, const RegularValue& rv, double tol = 1e-2,
                                       double cos_gate = 0.9);

}  // namespace pt
