#pragma once

#include <string>
#include <vector>

#include "pontryagin/extraction.hpp"
#include "pontryagin/fields.hpp"

namespace pt {

class InvariantError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LinkingResult {
    int value = 0;
    double raw = 0.0;  // pre-rounding Gauss integral
    double residual() const { return std::abs(raw - value); }
};

/// Gauss double integral over segment pairs, evaluated exactly per pair as a signed solid angle.
/// Throws if either curve is open, the curves (nearly) touch, or the residual exceeds 0.1.
LinkingResult linking_gauss(const FramedCurve& c1, const FramedCurve& c2, double min_separation = 1e-9);

/// Half the signed crossing count of the projections along `direction` (jittered if degenerate).
int linking_crossings(const FramedCurve& c1, const FramedCurve& c2, const Vec3& direction = {0.123, 0.456, 0.881},
                      int jitter_budget = 16);

/// Crossings in the projection of a closed curve along `direction` (jittered if degenerate).
int projection_crossings(const FramedCurve& c, const Vec3& direction, int jitter_budget = 16);

/// True when some projection along the axes or the given extra directions has fewer than three
/// crossings, which certifies the curve is unknotted. False means "not certified", not "knotted".
bool certify_unknot(const FramedCurve& c, int* best_crossings = nullptr);

/// Distance used to push a curve off itself: 0.25 x the smaller of local radius of curvature and
/// self-distance between vertices more than two steps apart.
double pushoff_distance(const FramedCurve& c);

/// lk(L, L~) with L~ the pushoff of L along its framing.
int self_linking(const FramedCurve& c);

/// Sum of self-linkings plus twice the pairwise linkings.
int framed_class(const std::vector<FramedCurve>& components);

/// Sum of lk over all pairs (a_i, b_j).
int total_linking(const std::vector<FramedCurve>& a, const std::vector<FramedCurve>& b);

struct HopfReport {
    int value = 0;
    int via_self_linking = 0;
    int via_two_fibers = 0;
    std::size_t components = 0;
    RegularValue regular_value;
};

/// Hopf invariant of a field whose Pontryagin sets are closed (constant-at-infinity or charted S^3).
HopfReport hopf_invariant(const SampledField& field, const RegularValue& rv = RegularValue::standard(),
                          const ExtractOptions& opts = {});

struct ObstructionReport {
    int o3 = 0;
    int d = 0;  // 0 encodes trivial Euler class: o3 is a plain integer
    std::string method;
    int doubled_field = 0;
    bool compensating_applicable = false;
    int compensating_loop = 0;
    std::string diagnostics;
};

/// Vertex-index sub-box of `field` whose corners coincide with `ball`'s corners.
SampledField restrict_to_box(const SampledField& field, const BoxDomain& ball);

/// Field on box + mirrored box: `upper` on the reflected copy above the top face of `lower`.
SampledField doubled_field(const SampledField& lower, const SampledField& upper);

/// o3(f1, f2): framed-class difference [L(f2)] - [L(f1)] inside `ball`.
ObstructionReport obstruction_o3(const SampledField& f1, const SampledField& f2, const BoxDomain& ball,
                                 const RegularValue& rv = RegularValue::standard(), int d = 0,
                                 const ExtractOptions& opts = {});

}  // namespace pt
