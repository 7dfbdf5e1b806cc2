#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pontryagin/extraction.hpp"
#include "pontryagin/invariants.hpp"
#include "pontryagin/models.hpp"

using namespace pt;

namespace {

const SampledField& hopf48() {
    static const SampledField f = hopf_field(BoxDomain({-2, -2, -2}, {2, 2, 2}, {48, 48, 48}));
    return f;
}

const SampledField& bypass_coarse() {
    static const SampledField f = bypass_slab(BypassModelParams{}, std::array<int, 3>{48, 64, 32});
    return f;
}

void check_framing(const FramedCurve& c) {
    REQUIRE(c.framing.size() == c.vertices.size());
    for (std::size_t i = 0; i < c.vertices.size(); ++i) {
        CHECK(std::abs(norm(c.framing[i]) - 1.0) < 1e-9);
        if (i < c.segment_count()) CHECK(std::abs(dot(c.framing[i], c.tangent(i))) < 1e-6);
    }
}

}  // namespace

TEST_CASE("hopf fiber over p is the unit circle in the xy-plane") {
    const PontryaginSet s = extract(hopf48(), RegularValue::standard());
    REQUIRE(s.components.size() == 1);
    const FramedCurve& c = s.components[0];
    CHECK(c.closed);
    for (const Vec3& v : c.vertices) {
        CHECK(std::abs(v.z) < 0.02);
        CHECK(std::abs(std::hypot(v.x, v.y) - 1.0) < 0.02);
    }
    CHECK(c.length() == doctest::Approx(2 * std::numbers::pi).epsilon(0.01));
    check_framing(c);
    CHECK(s.field_digest == hopf48().digest());
}

TEST_CASE("bypass preimage is one arc ending on the top face") {
    const PontryaginSet s = extract(bypass_coarse(), RegularValue::standard());
    REQUIRE(s.components.size() == 1);
    const FramedCurve& c = s.components[0];
    CHECK_FALSE(c.closed);
    CHECK(c.endpoint_faces[0] == BoxFace::ZMax);
    CHECK(c.endpoint_faces[1] == BoxFace::ZMax);
    const double h = bypass_coarse().domain().cell_diameter();
    const Vec3 a = c.vertices.front(), b = c.vertices.back();
    CHECK(std::abs(std::abs(a.y) - 0.25) < 2 * h);
    CHECK(std::abs(std::abs(b.y) - 0.25) < 2 * h);
    CHECK(a.y * b.y < 0);
    check_framing(c);
    CHECK(s.arc_count() == 1);
    CHECK(s.closed_count() == 0);
}

TEST_CASE("antipodal value has empty preimage in the bypass slab") {
    const PontryaginSet s = extract(bypass_coarse(), RegularValue::from_point({-1, 0, 0}));
    CHECK(s.components.empty());
}

TEST_CASE("jacobian and pushoff framings agree") {
    const RegularValue rv = RegularValue::standard();
    const PushoffFraming po = frame_by_pushoff(bypass_coarse(), rv);
    const PontryaginSet jac = extract(bypass_coarse(), rv);
    REQUIRE(po.set.components.size() == 1);
    REQUIRE(po.copies.size() == 1);
    const FramedCurve& a = jac.components[0];
    const FramedCurve& b = po.set.components[0];
    REQUIRE(a.vertices.size() == b.vertices.size());
    for (std::size_t i = 0; i < a.vertices.size(); ++i) CHECK(dot(a.framing[i], b.framing[i]) > std::cos(0.2));
    check_framing(b);
}

TEST_CASE("recomputed jacobian framing is idempotent") {
    const PontryaginSet s = extract(hopf48(), RegularValue::standard());
    const PontryaginSet t = frame_by_jacobian(s, hopf48());
    REQUIRE(t.components.size() == 1);
    for (std::size_t i = 0; i < s.components[0].framing.size(); ++i)
        CHECK(distance(s.components[0].framing[i], t.components[0].framing[i]) < 1e-9);
}

TEST_CASE("non-regular values are rejected") {
    const SampledField f = standard_slab(slab_domain({24, 8, 8}));
    CHECK_THROWS_AS(extract(f, RegularValue::from_point({0, 1, 0})), ExtractionError);
    const SampledField c = sample(constant_field({1, 0, 0}), slab_domain({4, 4, 4}));
    CHECK_THROWS_AS(extract(c, RegularValue::standard()), ExtractionError);
}

TEST_CASE("extraction is deterministic") {
    const PontryaginSet a = extract(hopf48(), RegularValue::from_point({0.9, 0.3, 0.2}));
    const PontryaginSet b = extract(hopf48(), RegularValue::from_point({0.9, 0.3, 0.2}));
    REQUIRE(a.components.size() == b.components.size());
    for (std::size_t i = 0; i < a.components.size(); ++i) CHECK(a.components[i].vertices == b.components[i].vertices);
}

TEST_CASE("collapse profile") {
    CHECK(collapse_profile(0.0) == 1.0);
    CHECK(collapse_profile(1.0) == 0.0);
    CHECK(collapse_profile(2.0) == 0.0);
    CHECK(collapse_profile(0.5) == doctest::Approx(std::exp(-1.0)));
    double prev = 1.0;
    for (double t = 0.05; t < 1.0; t += 0.05) {
        const double v = collapse_profile(t);
        CHECK(v > 0.0);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("framed unknot has the requested self-linking") {
    for (int k = -3; k <= 3; ++k) {
        const FramedCurve c = framed_unknot(k, 1.0, {0.5, -0.2, 0.1}, 200);
        CHECK(c.closed);
        CHECK(self_linking(c) == k);
        check_framing(c);
    }
}

TEST_CASE("realize then extract recovers a framed unknot") {
    const BoxDomain box({-2, -2, -2}, {2, 2, 2}, {48, 48, 48});
    for (int k : {-1, 2}) {
        const SampledField f = realize({framed_unknot(k)}, box, 0.35);
        const PontryaginSet s = extract(f, RegularValue::standard());
        REQUIRE(s.components.size() == 1);
        CHECK(s.components[0].closed);
        CHECK(self_linking(s.components[0]) == k);
        double worst = 0;
        for (const Vec3& v : s.components[0].vertices)
            worst = std::max(worst, std::abs(std::hypot(v.x, v.y) - 1.0) + std::abs(v.z));
        CHECK(worst < 0.05);
    }
}

TEST_CASE("curve helpers") {
    FramedCurve c;
    c.closed = false;
    c.vertices = {{0, 0, 0}, {1, 0, 0}, {1, 2, 0}};
    c.framing = {{0, 0, 1}, {0, 0, 1}, {0, 0, 1}};
    CHECK(c.segment_count() == 2);
    CHECK(c.length() == doctest::Approx(3.0));
    const FramedCurve r = c.reversed();
    CHECK(r.vertices.front() == Vec3{1, 2, 0});
    const FramedCurve p = c.pushoff(0.1);
    CHECK(p.vertices[1].z == doctest::Approx(0.1));
    CHECK(face_name(BoxFace::ZMax) == "z+");
}
