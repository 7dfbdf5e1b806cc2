#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "pontryagin/io.hpp"
#include "pontryagin/models.hpp"
#include "pontryagin/pipelines.hpp"

using namespace pt;
using nlohmann::json;

TEST_CASE("field file round trip is bit-exact") {
    const SampledField f = hopf_field(BoxDomain({-2, -2, -2}, {2, 2, 2}, {6, 7, 8}));
    std::stringstream ss;
    write_field(ss, f);
    const SampledField g = read_field(ss);
    CHECK(g.domain() == f.domain());
    CHECK(g.values() == f.values());
    CHECK(g.digest() == f.digest());
}

TEST_CASE("field file header") {
    const SampledField f = standard_slab(slab_domain({2, 2, 2}));
    std::stringstream ss;
    write_field(ss, f);
    std::string line;
    std::getline(ss, line);
    CHECK(line == "PTFIELD 1");
    std::getline(ss, line);
    CHECK(line == "min -0.75 -1 0");
    const std::string bytes = ss.str();
    const std::size_t body = bytes.find("END\n") + 4;
    CHECK(bytes.size() - body == 27u * 3u * 8u);
}

TEST_CASE("malformed field files") {
    std::stringstream bad_magic("PTXX 1\n");
    CHECK_THROWS_AS(read_field(bad_magic), FormatError);
    std::stringstream bad_version("PTFIELD 9\n");
    CHECK_THROWS_AS(read_field(bad_version), FormatError);
    const SampledField f = standard_slab(slab_domain({2, 2, 2}));
    std::stringstream ss;
    write_field(ss, f);
    std::string s = ss.str();
    s.resize(s.size() - 5);
    std::stringstream truncated(s);
    CHECK_THROWS_AS(read_field(truncated), FormatError);
    CHECK_THROWS_AS(read_field(std::string("/nonexistent/field.ptf")), IoError);
}

TEST_CASE("curve JSON round trip") {
    PontryaginSet set;
    set.regular_value = RegularValue::from_point({0.6, 0.8, 0}, 0.03);
    set.field_digest = "0123456789abcdef";
    set.components.push_back(framed_unknot(1, 1.0, {}, 16));
    FramedCurve arc;
    arc.closed = false;
    arc.vertices = {{0, 0, 1}, {0, 0.5, 0.5}, {0, 1, 1}};
    arc.framing = {{1, 0, 0}, {1, 0, 0}, {1, 0, 0}};
    arc.endpoint_faces = {BoxFace::ZMax, BoxFace::ZMax};
    set.components.push_back(arc);
    const json j = to_json(set);
    CHECK(j["components"][1]["endpoint_faces"] == json::array({"z+", "z+"}));
    const PontryaginSet back = curves_from_json(json::parse(j.dump()));
    REQUIRE(back.components.size() == 2);
    CHECK(back.components[0].vertices == set.components[0].vertices);
    CHECK(back.components[0].framing == set.components[0].framing);
    CHECK_FALSE(back.components[1].closed);
    CHECK(back.field_digest == set.field_digest);
    CHECK(back.regular_value.delta == 0.03);
    CHECK(distance(back.regular_value.p.vec(), set.regular_value.p.vec()) < 1e-15);
    CHECK_THROWS_AS(curves_from_json(json{{"version", 2}}), FormatError);
    CHECK_THROWS_AS(curves_from_json(json::object()), FormatError);
}

TEST_CASE("obj and csv export") {
    PontryaginSet set;
    set.components.push_back(framed_unknot(0, 1.0, {}, 4));
    std::ostringstream obj, csv;
    write_obj(obj, set);
    write_csv(csv, set);
    CHECK(obj.str().find("l 1 2 3 4 1\n") != std::string::npos);
    std::istringstream lines(csv.str());
    std::string line;
    int n = 0;
    while (std::getline(lines, line)) ++n;
    CHECK(n == 5);
    CHECK(csv.str().rfind("component,index,closed,x,y,z,fx,fy,fz\n", 0) == 0);
}

TEST_CASE("model configuration") {
    std::istringstream is("# bypass\narc_start = -0.5, 0, 1\narc_end=0.5,0,1\nradius = 0.2  # smaller\n");
    const auto cfg = parse_config(is);
    const BypassModelParams p = params_from_config(cfg);
    CHECK(p.radius == 0.2);
    CHECK(p.arc_start.x == -0.5);
    std::istringstream dup("radius = 1\nradius = 2\n");
    CHECK_THROWS_AS(parse_config(dup), FormatError);
    std::istringstream noeq("radius 1\n");
    CHECK_THROWS_AS(parse_config(noeq), FormatError);
    CHECK_THROWS_AS(params_from_config({{"colour", "red"}}), FormatError);
    CHECK_THROWS_AS(params_from_config({{"radius", "abc"}}), FormatError);
    CHECK_THROWS_AS(params_from_config({{"rotation_sign", "2"}}), FormatError);
    const BypassModelParams q = params_from_json(to_json(p));
    CHECK(q.radius == p.radius);
    CHECK(q.arc_end == p.arc_end);
    CHECK(q.rotation_sign == p.rotation_sign);
    CHECK(parse_resolution("96,128,64") == std::array<int, 3>{96, 128, 64});
    CHECK_THROWS_AS(parse_resolution("96,128"), FormatError);
    CHECK_THROWS_AS(parse_resolution("96,0,64"), FormatError);
}

TEST_CASE("pipeline config JSON round trip") {
    PipelineConfig c;
    c.pipeline = "thm2";
    c.params.epsilon = 0.25;
    c.resolution = std::array<int, 3>{32, 48, 32};
    c.seed = 77;
    c.samples = 3;
    c.formats = {"json", "obj"};
    const PipelineConfig d = pipeline_config_from_json(json::parse(to_json(c).dump()));
    CHECK(d.pipeline == "thm2");
    CHECK(d.params.epsilon == 0.25);
    CHECK(d.resolution == c.resolution);
    CHECK_FALSE(d.fine_resolution.has_value());
    CHECK(d.seed == 77u);
    CHECK(d.samples == 3);
    CHECK(d.formats == c.formats);
    CHECK_THROWS_AS(pipeline_config_from_json(json{{"samples", -1}}), FormatError);
    CHECK_THROWS_AS(pipeline_config_from_json(json{{"seed", "x"}}), FormatError);
}

TEST_CASE("seeded regular values are reproducible and certified-range") {
    const auto a = sample_regular_values(5, 10);
    const auto b = sample_regular_values(5, 10);
    const auto c = sample_regular_values(6, 10);
    REQUIRE(a.size() == 10);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].p.vec() == b[i].p.vec());
        const double angle = std::acos(std::clamp(a[i].p.x(), -1.0, 1.0));
        CHECK(angle >= 0.05 - 1e-12);
        CHECK(angle <= 0.8 + 1e-12);
    }
    CHECK_FALSE(a[0].p.vec() == c[0].p.vec());
}

TEST_CASE("unknown pipeline") {
    PipelineConfig c;
    c.pipeline = "thm7";
    CHECK_THROWS_AS(run_pipeline(c), std::invalid_argument);
    CHECK(pipeline_names().size() == 5);
}
