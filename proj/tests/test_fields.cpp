#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pontryagin/fields.hpp"

using namespace pt;

TEST_CASE("standard gauss map values") {
    const Vec3 a = standard_gauss({0.0, 0.3, -0.2});
    CHECK(a.x == doctest::Approx(0.0));
    CHECK(a.y == doctest::Approx(1.0));
    CHECK(a.z == doctest::Approx(0.0));
    const Vec3 b = standard_gauss({0.25, 0.0, 0.0});
    CHECK(b.y == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(b.z == doctest::Approx(-1.0));
    const Vec3 c = standard_gauss({0.5, 0.0, 0.0});
    CHECK(c.y == doctest::Approx(-1.0));
}

TEST_CASE("standard form is contact with lambda ^ dlambda = 2 pi") {
    const ContactReport r = check_contact_condition(standard_field(), slab_domain({8, 8, 8}), 9);
    CHECK(r.min_value == doctest::Approx(2 * std::numbers::pi).epsilon(1e-9));
    CHECK(r.max_value == doctest::Approx(2 * std::numbers::pi).epsilon(1e-9));
}

TEST_CASE("slab domain and lattice indexing") {
    const BoxDomain d = slab_domain({6, 8, 4});
    CHECK(d.min.x == -0.75);
    CHECK(d.max.y == 1.0);
    CHECK(d.vertex_count() == 7u * 9u * 5u);
    const Vec3 v = d.vertex(6, 8, 4);
    CHECK(v.x == doctest::Approx(0.75));
    CHECK(v.z == doctest::Approx(1.0));
    CHECK(d.index(1, 0, 0) == 1u);
    CHECK(d.index(0, 1, 0) == 7u);
    CHECK(d.index(0, 0, 1) == 63u);
}

TEST_CASE("sampling rejects non-finite values") {
    AnalyticField bad{"bad", [](const Vec3& x) { return x.x > 0.5 ? Vec3{NAN, 0, 0} : Vec3{1, 0, 0}; }, {}};
    CHECK_THROWS_AS(sample(bad, slab_domain({4, 4, 4})), std::runtime_error);
}

TEST_CASE("interpolation reproduces vertex values and stays unit") {
    const SampledField f = sample(standard_field(), slab_domain({12, 4, 4}));
    const Vec3 at = f.interpolate(f.domain().vertex(3, 2, 1));
    CHECK(distance(at, f.at(3, 2, 1)) < 1e-12);
    const Vec3 mid = f.interpolate({0.11, 0.2, 0.3});
    CHECK(norm(mid) == doctest::Approx(1.0));
}

TEST_CASE("regular value frame and pushoff") {
    const RegularValue rv = RegularValue::standard(0.02);
    CHECK(distance(rv.u.vec(), {0, 1, 0}) < 1e-15);
    CHECK(distance(rv.v.vec(), {0, 0, 1}) < 1e-15);
    const RegularValue q = rv.pushoff();
    const double d = 0.02;
    CHECK(q.p.x() == doctest::Approx(1 - d));
    CHECK(q.p.y() == doctest::Approx(std::sqrt(2 * d - d * d)));
    CHECK(dot(cross(q.u.vec(), q.v.vec()), q.p.vec()) == doctest::Approx(1.0));
    const RegularValue r = RegularValue::from_point({0.3, -0.4, 0.8}, 0.02);
    CHECK(dot(r.u.vec(), r.p.vec()) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(dot(cross(r.u.vec(), r.v.vec()), r.p.vec()) == doctest::Approx(1.0));
}

TEST_CASE("certify regular value") {
    const SampledField f = sample(standard_field(), slab_domain({24, 8, 8}));
    // G = (0, cos, -sin) never comes near p = (1,0,0): nothing to test, regular.
    CHECK(certify_regular_value(f, RegularValue::standard()).regular);
    // p = (0,1,0) is hit along x = 0, where the (u, v) Jacobian has rank 1.
    const RegularityReport r = certify_regular_value(f, RegularValue::from_point({0, 1, 0}));
    CHECK_FALSE(r.regular);
}

TEST_CASE("digest is deterministic and sensitive") {
    const SampledField a = sample(standard_field(), slab_domain({8, 8, 8}));
    const SampledField b = sample(standard_field(), slab_domain({8, 8, 8}));
    const SampledField c = sample(standard_field(), slab_domain({8, 8, 9}));
    CHECK(a.digest() == b.digest());
    CHECK(a.digest() != c.digest());
    CHECK(a.digest().size() == 16);
}

TEST_CASE("restrict and mirror") {
    const SampledField f = sample(standard_field(), slab_domain({12, 8, 4}));
    const SampledField r = f.restrict({2, 1, 0}, {8, 5, 4});
    CHECK(r.domain().res == std::array<int, 3>{6, 4, 4});
    CHECK(distance(r.at(0, 0, 0), f.at(2, 1, 0)) == 0.0);
    const SampledField m = f.mirrored_x();
    CHECK(distance(m.at(0, 3, 2), f.at(12, 3, 2)) < 1e-15);
}
