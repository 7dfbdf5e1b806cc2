#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "pontryagin/fields.hpp"

namespace pt {

/// Box faces: 0 x-, 1 x+, 2 y-, 3 y+, 4 z-, 5 z+.
enum class BoxFace : int { None = -1, XMin = 0, XMax = 1, YMin = 2, YMax = 3, ZMin = 4, ZMax = 5 };

std::string face_name(BoxFace f);

/// One component of a Pontryagin submanifold. Closed curves do not repeat their first vertex.
struct FramedCurve {
    std::vector<Vec3> vertices;
    std::vector<Vec3> framing;
    bool closed = true;
    std::array<BoxFace, 2> endpoint_faces{BoxFace::None, BoxFace::None};

    std::size_t segment_count() const { return closed ? vertices.size() : vertices.size() - 1; }
    Vec3 tangent(std::size_t i) const;
    double length() const;
    FramedCurve reversed() const;
    /// Copy displaced by `distance` along the framing.
    FramedCurve pushoff(double distance) const;
};

struct PontryaginSet {
    std::vector<FramedCurve> components;
    RegularValue regular_value;
    std::string field_digest;

    std::size_t closed_count() const;
    std::size_t arc_count() const;
};

/// Thrown when an extraction cannot be completed; carries the offending cell when known.
class ExtractionError : public std::runtime_error {
public:
    ExtractionError(const std::string& what, std::array<int, 3> cell = {-1, -1, -1})
        : std::runtime_error(what), cell_(cell) {}
    std::array<int, 3> cell() const { return cell_; }

private:
    std::array<int, 3> cell_;
};

struct ExtractOptions {
    bool certify = true;
    double certify_tol = 1e-2;
    int jitter_budget = 8;
    double jitter_angle = 1e-7;
};

/// Preimage of rv.p on the Freudenthal (6-tet, (+1,+1,+1)-diagonal) split of the lattice,
/// oriented so that (grad a, grad b, tangent) is right-handed, framed by the Jacobian.
PontryaginSet extract(const SampledField& field, const RegularValue& rv, const ExtractOptions& opts = {});

/// Recomputes the framing at every vertex as the pull-back of u under dF (central differences).
PontryaginSet frame_by_jacobian(const PontryaginSet& set, const SampledField& field);

struct PushoffFraming {
    PontryaginSet set;                // framing points toward the paired copy
    std::vector<FramedCurve> copies;  // copies[i] is the p'-component paired with set.components[i]
};

/// Frames the preimage of p by the preimage of the nearby value p'.
PushoffFraming frame_by_pushoff(const SampledField& field, const RegularValue& rv, const ExtractOptions& opts = {});

/// Collapse-map construction: -p outside radius-`tube_radius` tubes, p exactly on the curves.
SampledField realize(const std::vector<FramedCurve>& link, const BoxDomain& domain, double tube_radius,
                     const RegularValue& rv = RegularValue::standard());

/// Profile of the collapse map: smooth, positive on [0,1), zero from 1 on.
double collapse_profile(double t);

/// Planar circle of radius r about `center` in the xy-plane framed with self-linking `k`.
FramedCurve framed_unknot(int k, double radius = 1.0, const Vec3& center = {}, std::size_t n = 400);

}  // namespace pt
