#pragma once

#include <array>
#include <complex>
#include <vector>

#include "pontryagin/fields.hpp"

namespace pt {

/// Geometry of a bypass attached along a horizontal arc on the top face of a slab.
///
/// The attached field is encoded by a complex slice function g: the Gauss map is the inverse
/// stereographic projection (from -p, p = (1,0,0)) of e^{-2 pi i x} g, so g == 1 is the standard
/// field, g == 0 is the regular value p and g == infinity is -p.
struct BypassModelParams {
    Vec3 arc_start{-0.5, 0.0, 1.0};
    Vec3 arc_end{0.5, 0.0, 1.0};
    double radius = 0.25;      // the preimage arc meets the top face at distance `radius` from the arc
    double epsilon = 0.3;      // half-width (along the arc) of the region the bypass touches
    double blend = 0.2;        // vertical extent of the smoothstep ramps
    double pole_radius = 0.3;  // support radius of the rotated region in the second slab
    int rotation_sign = -1;    // direction of the second-slab rotation profile

    /// Throws std::invalid_argument unless the arc lies on the top face of `slab`, runs along x,
    /// and crosses exactly three dividing traces with its endpoints on traces.
    void validate(const BoxDomain& slab) const;

    Vec3 center() const { return (arc_start + arc_end) * 0.5; }
};

/// Vertically stacked slab fields sharing their interface faces.
struct SlabStack {
    std::vector<SampledField> slabs;

    /// Throws unless adjacent slabs agree on their shared face within 1e-9.
    void validate() const;
    /// One field over the union of the slabs.
    SampledField merged() const;
};

/// Gauss map from a slice function value: inverse stereographic image of e^{-2 pi i x} num / den.
Vec3 gauss_from_slice(double x, std::complex<double> num, std::complex<double> den = 1.0);

/// Smooth monotone ramp: 0 below lo, 1 above hi.
double smooth_ramp(double t, double lo, double hi);

/// Standard contact structure sampled on `domain`.
SampledField standard_slab(const BoxDomain& domain);

/// Extends a horizontal slice (values on an (nx+1) x (ny+1) lattice, x fastest) constantly in z.
SampledField invariant_extension(const std::vector<Vec3>& trace, const BoxDomain& domain);
/// Values of `field` on the horizontal lattice slice k.
std::vector<Vec3> horizontal_trace(const SampledField& field, int k);

/// Analytic Gauss maps of the three triangle slabs; `stage` 0, 1, 2 for the slabs over [z0, z0+1],
/// [z0+1, z0+2], [z0+2, z0+3]. Stage 0 is the single bypass.
AnalyticField triangle_stage_field(const BypassModelParams& params, int stage, double z0);

/// Single bypass attached to the standard slab; `domain` is the slab (default V at the given resolution).
SampledField bypass_slab(const BypassModelParams& params, const BoxDomain& domain);
SampledField bypass_slab(const BypassModelParams& params = {}, std::array<int, 3> res = {96, 128, 64});

/// Bypass triangle over T = [-3/4,3/4] x [-1,1] x [z0, z0+3] as three slabs.
SlabStack triangle_slab(const BypassModelParams& params = {}, std::array<int, 3> res = {96, 128, 64},
                        double z0 = 0.0);

/// n bypass triangles stacked vertically over [0, 3n].
SlabStack stack_triangles(int n, const BypassModelParams& params = {}, std::array<int, 3> res = {96, 128, 64});

/// The Hopf map S^3 -> S^2 pulled back to R^3 by stereographic projection; tends to
/// hopf_far_value() at infinity.
AnalyticField hopf_analytic();
Vec3 hopf_far_value();
SampledField hopf_field(const BoxDomain& box);
/// Throws std::invalid_argument if p lies within `exclusion_angle` radians of the far value. The
/// default keeps the fibers inside [-2,2]^3.
void check_hopf_regular_value(const RegularValue& rv, double exclusion_angle = 2.2);

/// x-coordinates along lattice row (j, k) where the z-component of the field changes sign.
std::vector<double> dividing_trace_crossings(const SampledField& field, int j, int k);

}  // namespace pt
