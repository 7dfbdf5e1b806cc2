#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pontryagin/invariants.hpp"
#include "pontryagin/models.hpp"

using namespace pt;

namespace {

const std::array<int, 3> kCoarse{48, 64, 32};

const SampledField& hopf48() {
    static const SampledField f = hopf_field(BoxDomain({-2, -2, -2}, {2, 2, 2}, {48, 48, 48}));
    return f;
}

const SampledField& triangle() {
    static const SampledField f = triangle_slab(BypassModelParams{}, kCoarse).merged();
    return f;
}

FramedCurve moved(FramedCurve c, const Vec3& by) {
    for (Vec3& v : c.vertices) v += by;
    return c;
}

}  // namespace

TEST_CASE("hopf field has invariant +1 by both methods") {
    const HopfReport r = hopf_invariant(hopf48());
    CHECK(r.value == 1);
    CHECK(r.via_self_linking == 1);
    CHECK(r.via_two_fibers == 1);
    CHECK(r.components == 1);
}

TEST_CASE("reflecting the domain negates the hopf invariant") {
    // Pull-back by the reflection alone.
    const AnalyticField h = hopf_analytic();
    const AnalyticField pulled{"hopf_reflected", [h](const Vec3& x) { return h.gauss({-x.x, x.y, x.z}); }, {}};
    const HopfReport r = hopf_invariant(sample(pulled, hopf48().domain()));
    CHECK(r.via_self_linking == -1);
    CHECK(r.via_two_fibers == -1);
    // The reflected plane field also flips the x-component of G, so its far value is +p.
    const HopfReport m = hopf_invariant(hopf48().mirrored_x(), RegularValue::from_point({-1, 0, 0}));
    CHECK(m.via_self_linking == -1);
    CHECK(m.via_two_fibers == -1);
}

TEST_CASE("hopf invariant is stable under resolution doubling") {
    const SampledField fine = hopf_field(BoxDomain({-2, -2, -2}, {2, 2, 2}, {96, 96, 96}));
    CHECK(hopf_invariant(fine).value == hopf_invariant(hopf48()).value);
}

TEST_CASE("hopf invariant is additive over disjoint framed links") {
    const BoxDomain box({-3, -2, -2}, {3, 2, 2}, {72, 48, 48});
    struct Case {
        int k1, k2;
    };
    for (const Case& c : {Case{1, 1}, Case{1, -1}, Case{2, -1}}) {
        const SampledField f =
            realize({framed_unknot(c.k1, 1.0, {-1.5, 0, 0}), framed_unknot(c.k2, 1.0, {1.5, 0, 0})}, box, 0.35);
        const HopfReport r = hopf_invariant(f);
        CHECK(r.components == 2);
        CHECK(r.value == c.k1 + c.k2);
        CHECK(r.via_two_fibers == r.via_self_linking);
    }
}

TEST_CASE("linked components contribute twice their linking number") {
    const FramedCurve a = framed_unknot(0);
    FramedCurve b = a;
    for (std::size_t i = 0; i < b.vertices.size(); ++i) {
        const Vec3 v = b.vertices[i], f = b.framing[i];
        b.vertices[i] = Vec3{v.x + 1, v.z, v.y};
        b.framing[i] = Vec3{f.x, f.z, f.y};
    }
    const int lk = linking_gauss(a, b).value;
    const SampledField f = realize({a, b}, BoxDomain({-2, -2, -2}, {3, 2, 2}, {80, 64, 64}), 0.35);
    CHECK(hopf_invariant(f).value == 2 * lk);
}

TEST_CASE("regular-value independence on the hopf field") {
    for (const Vec3& p : {Vec3{0.9, 0.3, 0.1}, Vec3{0.8, -0.2, 0.5}, Vec3{0.7, 0.1, -0.6}}) {
        const RegularValue rv = RegularValue::from_point(p);
        CHECK(hopf_invariant(hopf48(), rv).value == 1);
    }
}

TEST_CASE("o3 of a triangle relative to the standard slab is -1") {
    const SampledField std_slab = standard_slab(triangle().domain());
    const ObstructionReport r = obstruction_o3(std_slab, triangle(), triangle().domain());
    CHECK(r.o3 == -1);
    CHECK(r.doubled_field == -1);
    CHECK(r.compensating_applicable);
    CHECK(r.compensating_loop == -1);
    CHECK(r.d == 0);
    // Swapping the arguments reverses the sign; a field against itself gives zero.
    CHECK(obstruction_o3(triangle(), std_slab, triangle().domain()).o3 == 1);
    CHECK(obstruction_o3(triangle(), triangle(), triangle().domain()).o3 == 0);
}

TEST_CASE("o3 does not depend on enlarging the ball") {
    // Standard slab below the triangle: the fields agree on the added layer.
    SlabStack big;
    big.slabs.push_back(standard_slab(slab_domain(kCoarse, -1.0, 0.0)));
    for (const SampledField& s : triangle_slab(BypassModelParams{}, kCoarse).slabs) big.slabs.push_back(s);
    const SampledField f2 = big.merged();
    const SampledField f1 = standard_slab(f2.domain());
    const int whole = obstruction_o3(f1, f2, f2.domain()).o3;
    const int inner = obstruction_o3(f1, f2, triangle().domain()).o3;
    CHECK(whole == -1);
    CHECK(inner == -1);
}

TEST_CASE("o3 requires the fields to agree outside the ball") {
    const SampledField std_slab = standard_slab(triangle().domain());
    const BoxDomain& d = triangle().domain();
    const BoxDomain lower(d.min, {d.max.x, d.max.y, 1.0}, {d.res[0], d.res[1], d.res[2] / 3});
    CHECK_THROWS_AS(obstruction_o3(std_slab, triangle(), lower), InvariantError);
    const BoxDomain off(d.min, {d.max.x, d.max.y, 1.01}, {d.res[0], d.res[1], 10});
    CHECK_THROWS_AS(restrict_to_box(triangle(), off), InvariantError);
}

TEST_CASE("doubled field") {
    const SampledField s = standard_slab(slab_domain({8, 8, 4}));
    const SampledField d = doubled_field(s, s);
    CHECK(d.domain().res[2] == 8);
    CHECK(d.domain().max.z == doctest::Approx(2.0));
    CHECK(distance(d.at(3, 2, 8), s.at(3, 2, 0)) == 0.0);
    CHECK_THROWS_AS(doubled_field(s, standard_slab(slab_domain({8, 8, 5}))), InvariantError);
}

TEST_CASE("hopf invariant needs closed preimages") {
    const SampledField b = bypass_slab(BypassModelParams{}, kCoarse);
    CHECK_THROWS_AS(hopf_invariant(b), InvariantError);
}

TEST_CASE("disjoint translated unknots are unlinked") {
    const FramedCurve a = framed_unknot(1);
    CHECK(total_linking({a}, {moved(a, {3, 0, 0}), moved(a, {0, 0, 3})}) == 0);
}
