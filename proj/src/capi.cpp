#include "pontryagin.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include <json.hpp>

#include "pontryagin/dividing.hpp"
#include "pontryagin/extraction.hpp"
#include "pontryagin/invariants.hpp"
#include "pontryagin/io.hpp"
#include "pontryagin/models.hpp"
#include "pontryagin/pipelines.hpp"
#include "pontryagin/version.hpp"

using nlohmann::json;

struct pt_field {
    pt::SampledField field;
};

struct pt_curves {
    pt::PontryaginSet set;
};

namespace {

thread_local std::string g_last_error;

pt_status fail(pt_status s, const std::string& msg) {
    g_last_error = msg;
    return s;
}

template <class F>
pt_status guarded(F&& body) {
    g_last_error.clear();
    try {
        body();
        return PT_OK;
    } catch (const pt::DividingSetError& e) {
        return fail(PT_ERR_DIVIDING, e.what());
    } catch (const pt::FormatError& e) {
        return fail(PT_ERR_FORMAT, e.what());
    } catch (const json::exception& e) {
        return fail(PT_ERR_FORMAT, e.what());
    } catch (const pt::IoError& e) {
        return fail(PT_ERR_IO, e.what());
    } catch (const pt::ExtractionError& e) {
        return fail(PT_ERR_EXTRACTION, e.what());
    } catch (const pt::InvariantError& e) {
        return fail(PT_ERR_INVARIANT, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(PT_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::out_of_range& e) {
        return fail(PT_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(PT_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(PT_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(PT_ERR_INTERNAL, "unknown error");
    }
}

char* dup(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void require(const void* ptr, const char* name) {
    if (!ptr) throw std::invalid_argument(std::string(name) + " must not be NULL");
}

json parse_json(const char* text, const char* what) {
    if (!text || !*text) return json::object();
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw pt::FormatError(std::string(what) + ": " + e.what());
    }
}

std::array<int, 3> resolution_of(const json& opts, std::array<int, 3> fallback) {
    if (!opts.contains("resolution")) return fallback;
    const json& r = opts["resolution"];
    if (!r.is_array() || r.size() != 3) throw std::invalid_argument("resolution must be [nx, ny, nz]");
    std::array<int, 3> out{};
    for (int a = 0; a < 3; ++a) {
        out[a] = r[a].get<int>();
        if (out[a] < 1) throw std::invalid_argument("resolution entries must be positive");
    }
    return out;
}

pt::BypassModelParams params_of(const json& opts) {
    pt::BypassModelParams p;
    if (opts.contains("config")) p = pt::params_from_config(pt::read_config(opts["config"].get<std::string>()), p);
    if (opts.contains("params")) p = pt::params_from_json(opts["params"], p);
    return p;
}

pt::RegularValue regular_value(const double p[3], double delta) {
    require(p, "p");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
    return pt::RegularValue::from_point({p[0], p[1], p[2]}, delta);
}

const pt::FramedCurve& component(const pt_curves* c, std::size_t i) {
    require(c, "curves");
    if (i >= c->set.components.size())
        throw std::out_of_range("component index " + std::to_string(i) + " out of range");
    return c->set.components[i];
}

pt::BypassSide side_of(const json& j) {
    const std::string s = j.value("side", "front");
    if (s == "front") return pt::BypassSide::Front;
    if (s == "back") return pt::BypassSide::Back;
    throw std::invalid_argument("side must be front or back, got '" + s + "'");
}

pt::AttachingArc arc_of(const json& j) {
    if (j.contains("level") && j.contains("box")) throw std::invalid_argument("arc has both level and box");
    if (j.contains("level"))
        return pt::AttachingArc::at_level(j["level"].get<std::size_t>(), j.value("first", 0), side_of(j));
    if (j.contains("box")) return pt::AttachingArc::in_box(j["box"].get<std::size_t>(), j.value("click", 0), side_of(j));
    throw std::invalid_argument("arc needs a level or a box");
}

json arc_json(const pt::AttachingArc& a) {
    json j{{"side", a.side == pt::BypassSide::Front ? "front" : "back"}, {"text", a.to_string()}};
    if (a.kind == pt::AttachingArc::Kind::Level) {
        j["level"] = a.level;
        j["first"] = static_cast<int>(a.left);
    } else {
        j["box"] = a.box;
        j["click"] = a.click;
    }
    return j;
}

json diagram_json(const pt::DividingSet& ds) {
    json chords = json::array();
    for (const auto& [a, b] : ds.chords()) chords.push_back({a, b});
    return {{"normal_form", ds.normal_form()}, {"bottom", ds.bottom_count()}, {"top", ds.top_count()},
            {"chords", chords},                {"loops", ds.loop_count()},    {"segment_signs", ds.segment_signs()}};
}

}  // namespace

extern "C" {

const char* pt_version(void) { return pt::kVersion; }

const char* pt_last_error(void) { return g_last_error.c_str(); }

const char* pt_status_name(pt_status status) {
    switch (status) {
        case PT_OK: return "ok";
        case PT_ERR_INVALID_ARGUMENT: return "invalid argument";
        case PT_ERR_IO: return "i/o error";
        case PT_ERR_FORMAT: return "format error";
        case PT_ERR_EXTRACTION: return "extraction error";
        case PT_ERR_INVARIANT: return "invariant error";
        case PT_ERR_DIVIDING: return "dividing-set error";
        case PT_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

void pt_free_string(char* s) { std::free(s); }

pt_status pt_field_build(const char* kind, const char* options_json, pt_field** out) {
    return guarded([&] {
        require(kind, "kind");
        require(out, "out");
        *out = nullptr;
        const json opts = parse_json(options_json, "field options");
        if (!opts.is_object()) throw std::invalid_argument("field options must be a JSON object");
        const std::string k = kind;
        const pt::BypassModelParams params = params_of(opts);
        pt::SampledField f = [&]() -> pt::SampledField {
            if (k == "standard") {
                double z0 = 0.0, z1 = 1.0;
                if (opts.contains("z_range")) {
                    const json& z = opts["z_range"];
                    if (!z.is_array() || z.size() != 2) throw std::invalid_argument("z_range must be [z0, z1]");
                    z0 = z[0].get<double>();
                    z1 = z[1].get<double>();
                    if (!(z1 > z0)) throw std::invalid_argument("z_range must be increasing");
                }
                return pt::standard_slab(pt::slab_domain(resolution_of(opts, {96, 128, 64}), z0, z1));
            }
            if (k == "bypass") return pt::bypass_slab(params, resolution_of(opts, {96, 128, 64}));
            if (k == "triangle") return pt::triangle_slab(params, resolution_of(opts, {64, 96, 64})).merged();
            if (k == "stack") {
                const int n = opts.value("n", 2);
                if (n < 1) throw std::invalid_argument("stack height n must be at least 1");
                return pt::stack_triangles(n, params, resolution_of(opts, {64, 96, 64})).merged();
            }
            if (k == "hopf")
                return pt::hopf_field(pt::BoxDomain({-2, -2, -2}, {2, 2, 2}, resolution_of(opts, {64, 64, 64})));
            throw std::invalid_argument("unknown field kind '" + k + "'");
        }();
        *out = new pt_field{std::move(f)};
    });
}

pt_status pt_field_load(const char* path, pt_field** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = nullptr;
        *out = new pt_field{pt::read_field(std::string(path))};
    });
}

pt_status pt_field_save(const pt_field* field, const char* path) {
    return guarded([&] {
        require(field, "field");
        require(path, "path");
        pt::write_field(std::string(path), field->field);
    });
}

pt_status pt_field_info(const pt_field* field, char** json_out) {
    return guarded([&] {
        require(field, "field");
        require(json_out, "json_out");
        const pt::BoxDomain& d = field->field.domain();
        const json j{{"domain", {{"min", pt::to_json(d.min)}, {"max", pt::to_json(d.max)}, {"res", d.res}}},
                     {"digest", field->field.digest()}};
        *json_out = dup(j.dump(2));
    });
}

void pt_field_free(pt_field* field) { delete field; }

pt_status pt_extract(const pt_field* field, const double p[3], double delta, const char* framing, pt_curves** out) {
    return guarded([&] {
        require(field, "field");
        require(out, "out");
        *out = nullptr;
        const pt::RegularValue rv = regular_value(p, delta);
        const std::string fr = framing ? framing : "jacobian";
        if (fr == "jacobian") {
            *out = new pt_curves{pt::extract(field->field, rv)};
        } else if (fr == "pushoff") {
            *out = new pt_curves{pt::frame_by_pushoff(field->field, rv).set};
        } else {
            throw std::invalid_argument("framing must be jacobian or pushoff, got '" + fr + "'");
        }
    });
}

pt_status pt_curves_from_json(const char* text, pt_curves** out) {
    return guarded([&] {
        require(text, "text");
        require(out, "out");
        *out = nullptr;
        *out = new pt_curves{pt::curves_from_json(parse_json(text, "curve JSON"))};
    });
}

pt_status pt_curves_export(const pt_curves* curves, const char* format, char** text_out) {
    return guarded([&] {
        require(curves, "curves");
        require(text_out, "text_out");
        const std::string fmt = format ? format : "json";
        std::ostringstream os;
        if (fmt == "json") os << pt::to_json(curves->set).dump(2) << "\n";
        else if (fmt == "obj") pt::write_obj(os, curves->set);
        else if (fmt == "csv") pt::write_csv(os, curves->set);
        else throw std::invalid_argument("format must be json, obj or csv, got '" + fmt + "'");
        *text_out = dup(os.str());
    });
}

size_t pt_curves_count(const pt_curves* curves) { return curves ? curves->set.components.size() : 0; }

void pt_curves_free(pt_curves* curves) { delete curves; }

pt_status pt_hopf_invariant(const pt_field* field, const double p[3], double delta, char** json_out) {
    return guarded([&] {
        require(field, "field");
        require(json_out, "json_out");
        const pt::ExtractOptions opts;
        const pt::HopfReport r = pt::hopf_invariant(field->field, regular_value(p, delta), opts);
        const json j{{"name", "hopf_invariant"},
                     {"value", r.value},
                     {"methods", {{"self_linking", r.via_self_linking}, {"two_fiber_linking", r.via_two_fibers}}},
                     {"components", r.components},
                     {"regular_value", pt::to_json(r.regular_value)},
                     {"tolerances", {{"gauss_residual_max", 0.1}, {"certify_tol", opts.certify_tol}}},
                     {"resolution", field->field.domain().res},
                     {"field_digest", field->field.digest()}};
        *json_out = dup(j.dump(2));
    });
}

pt_status pt_linking_number(const pt_curves* a, size_t ia, const pt_curves* b, size_t ib, char** json_out) {
    return guarded([&] {
        require(json_out, "json_out");
        const pt::FramedCurve& c1 = component(a, ia);
        const pt::FramedCurve& c2 = component(b, ib);
        const pt::LinkingResult g = pt::linking_gauss(c1, c2);
        const int cr = pt::linking_crossings(c1, c2);
        const json j{{"name", "linking_number"},
                     {"value", g.value},
                     {"raw", g.raw},
                     {"residual", g.residual()},
                     {"methods", {{"gauss", g.value}, {"crossings", cr}}},
                     {"agree", g.value == cr},
                     {"tolerances", {{"residual_max", 0.1}}}};
        if (g.value != cr)
            throw pt::InvariantError("linking methods disagree: gauss " + std::to_string(g.value) + ", crossings " +
                                     std::to_string(cr));
        *json_out = dup(j.dump(2));
    });
}

pt_status pt_self_linking(const pt_curves* curves, size_t index, char** json_out) {
    return guarded([&] {
        require(json_out, "json_out");
        const pt::FramedCurve& c = component(curves, index);
        const json j{{"name", "self_linking"},
                     {"value", pt::self_linking(c)},
                     {"pushoff_distance", pt::pushoff_distance(c)},
                     {"closed", c.closed}};
        *json_out = dup(j.dump(2));
    });
}

pt_status pt_obstruction_o3(const pt_field* f1, const pt_field* f2, const double* ball, const double p[3], int d,
                            char** json_out) {
    return guarded([&] {
        require(f1, "f1");
        require(f2, "f2");
        require(json_out, "json_out");
        if (d < 0) throw std::invalid_argument("d must be non-negative");
        pt::BoxDomain box = f1->field.domain();
        if (ball) {
            const pt::Vec3 lo{ball[0], ball[1], ball[2]}, hi{ball[3], ball[4], ball[5]};
            // the sub-box keeps the lattice spacing; res is recomputed by restrict_to_box
            const pt::Vec3 h = box.spacing();
            std::array<int, 3> res{};
            for (int a = 0; a < 3; ++a) res[a] = static_cast<int>(std::lround((hi[a] - lo[a]) / h[a]));
            box = pt::BoxDomain(lo, hi, res);
        }
        const pt::ObstructionReport r = pt::obstruction_o3(f1->field, f2->field, box, regular_value(p, 0.02), d);
        const json j{{"name", "o3"},
                     {"value", r.o3},
                     {"d", r.d},
                     {"method", r.method},
                     {"methods",
                      {{"doubled_field", r.doubled_field},
                       {"compensating_loop", r.compensating_applicable ? json(r.compensating_loop) : json(nullptr)}}},
                     {"diagnostics", r.diagnostics}};
        *json_out = dup(j.dump(2));
    });
}

pt_status pt_dividing(const char* op, const char* diagram, const char* arc_json_text, char** json_out) {
    return guarded([&] {
        require(op, "op");
        require(diagram, "diagram");
        require(json_out, "json_out");
        const std::string o = op;
        const pt::DividingSet ds = pt::DividingSet::parse(diagram);
        json j;
        if (o == "normalize") {
            j = diagram_json(ds);
        } else if (o == "render") {
            j = {{"normal_form", ds.normal_form()}, {"render", ds.render()}};
        } else if (o == "attach" || o == "triangle") {
            require(arc_json_text, "arc_json");
            const pt::AttachingArc arc = arc_of(parse_json(arc_json_text, "arc JSON"));
            j["input"] = ds.normal_form();
            j["arc"] = arc_json(arc);
            if (o == "attach") {
                const pt::DividingSet out = pt::attach_bypass(ds, arc);
                const auto [second, third] = pt::induced_arcs(ds, arc);
                j["result"] = diagram_json(out);
                j["render"] = out.render();
                j["induced_arcs"] = {arc_json(second), arc_json(third)};
                j["isotopic_to_input"] = out.isotopic(ds);
            } else {
                const pt::TriangleResult t = pt::attach_triangle(ds, arc);
                j["result"] = diagram_json(t.result);
                j["render"] = t.result.render();
                j["induced_arcs"] = {arc_json(t.second), arc_json(t.third)};
                j["grading_delta"] = t.grading_delta;
                j["isotopic_to_input"] = t.result.isotopic(ds);
            }
        } else {
            throw std::invalid_argument("dividing op must be normalize, render, attach or triangle");
        }
        *json_out = dup(j.dump(2));
    });
}

pt_status pt_verify(const char* pipeline, const char* config_json, char** report_out, int* passed) {
    return guarded([&] {
        require(pipeline, "pipeline");
        require(report_out, "report_out");
        const json cj = parse_json(config_json, "verify config");
        if (!cj.is_object()) throw std::invalid_argument("verify config must be a JSON object");
        pt::PipelineConfig cfg = pt::pipeline_config_from_json(cj);
        cfg.params = params_of(cj);
        cfg.pipeline = pipeline;
        const json report = pt::run_pipeline(cfg);
        if (passed) *passed = report.value("pass", false) ? 1 : 0;
        *report_out = dup(report.dump(2));
    });
}

}  // extern "C"
