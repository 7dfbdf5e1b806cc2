#include "pontryagin/pipelines.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <set>

#include "pontryagin/dividing.hpp"
#include "pontryagin/extraction.hpp"
#include "pontryagin/invariants.hpp"
#include "pontryagin/io.hpp"
#include "pontryagin/version.hpp"

namespace pt {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

json res_json(const std::array<int, 3>& r) { return json::array({r[0], r[1], r[2]}); }

std::array<int, 3> res_from_json(const json& j) {
    if (!j.is_array() || j.size() != 3) throw FormatError("resolution must be [nx, ny, nz]");
    return {j[0].get<int>(), j[1].get<int>(), j[2].get<int>()};
}

class Reporter {
public:
    explicit Reporter(const PipelineConfig& cfg) : cfg_(cfg) {}

    void check(const std::string& name, bool pass, json value, json expected, const std::string& detail = "") {
        checks_.push_back({{"name", name}, {"pass", pass}, {"value", std::move(value)},
                           {"expected", std::move(expected)}, {"detail", detail}});
    }

    /// Runs `body`; an exception becomes a failed check named `name`.
    void guard(const std::string& name, const std::function<void()>& body) {
        try {
            body();
        } catch (const std::exception& e) {
            check(name, false, nullptr, nullptr, e.what());
        }
    }

    void digest(const std::string& name, const SampledField& f) { digests_[name] = f.digest(); }

    void artifact(const std::string& name, const PontryaginSet& set) {
        if (cfg_.out_dir.empty()) return;
        std::filesystem::create_directories(cfg_.out_dir);
        for (const std::string& fmt : cfg_.formats) {
            const std::string path = cfg_.out_dir + "/" + name + "." + fmt;
            std::ofstream os(path);
            if (!os) throw IoError("cannot write " + path);
            if (fmt == "json") os << to_json(set).dump(1) << "\n";
            else if (fmt == "obj") write_obj(os, set);
            else if (fmt == "csv") write_csv(os, set);
            else throw FormatError("unknown export format '" + fmt + "'");
            artifacts_.push_back(path);
        }
    }

    json finish(Clock::time_point t0) const {
        bool pass = !checks_.empty();
        for (const json& c : checks_) pass = pass && c["pass"].get<bool>();
        return {{"pipeline", cfg_.pipeline}, {"version", kVersion},   {"config", to_json(cfg_)},
                {"checks", checks_},         {"digests", digests_},  {"artifacts", artifacts_},
                {"pass", pass},              {"elapsed_s", seconds_since(t0)}};
    }

private:
    const PipelineConfig& cfg_;
    json checks_ = json::array();
    json digests_ = json::object();
    json artifacts_ = json::array();
};

double max_framing_defect(const PontryaginSet& set) {
    double worst = 0;
    for (const FramedCurve& c : set.components)
        for (std::size_t i = 0; i < c.vertices.size(); ++i) {
            const Vec3 t = c.tangent(i);
            worst = std::max({worst, std::abs(dot(c.framing[i], t)), std::abs(norm(c.framing[i]) - 1.0)});
        }
    return worst;
}

void verify_hopf(const PipelineConfig& cfg, Reporter& R) {
    const auto res = cfg.resolution.value_or(std::array<int, 3>{64, 64, 64});
    const BoxDomain box({-2, -2, -2}, {2, 2, 2}, res);
    const auto t0 = Clock::now();
    const SampledField field = hopf_field(box);
    R.digest("hopf_field", field);
    const RegularValue rv = RegularValue::standard(cfg.delta);
    int value = 0;
    R.guard("hopf_invariant", [&] {
        check_hopf_regular_value(rv);
        const HopfReport rep = hopf_invariant(field, rv);
        value = rep.value;
        R.check("hopf_via_self_linking", rep.via_self_linking == 1, rep.via_self_linking, 1);
        R.check("hopf_via_two_fibers", rep.via_two_fibers == 1, rep.via_two_fibers, 1);
        R.artifact("hopf_preimage", extract(field, rv));
    });
    const double elapsed = seconds_since(t0);
    R.check("hopf_runtime_under_60s", elapsed < 60.0, elapsed, "< 60");
    R.guard("hopf_regular_value_independence", [&] {
        json values = json::array();
        bool same = true;
        for (const RegularValue& v : sample_regular_values(cfg.seed, cfg.samples, 0.8, cfg.delta)) {
            check_hopf_regular_value(v);
            const int h = hopf_invariant(field, v).value;
            values.push_back(h);
            same = same && h == value;
        }
        R.check("hopf_regular_value_independence", same && value == 1, values, value);
    });
}

void verify_thm1(const PipelineConfig& cfg, Reporter& R) {
    const auto res = cfg.resolution.value_or(std::array<int, 3>{96, 128, 64});
    const SampledField field = bypass_slab(cfg.params, res);
    R.digest("bypass_field", field);
    const RegularValue rv = RegularValue::standard(cfg.delta);
    R.guard("bypass_preimage_p", [&] {
        const PontryaginSet set = extract(field, rv);
        R.artifact("bypass_preimage", set);
        R.check("p_component_count", set.components.size() == 1, set.components.size(), 1);
        if (set.components.size() != 1) return;
        const FramedCurve& arc = set.components[0];
        R.check("p_component_is_open_arc", !arc.closed, arc.closed ? "closed" : "arc", "arc");
        const bool top = arc.endpoint_faces[0] == BoxFace::ZMax && arc.endpoint_faces[1] == BoxFace::ZMax;
        R.check("arc_endpoints_on_top_face", top,
                json::array({face_name(arc.endpoint_faces[0]), face_name(arc.endpoint_faces[1])}),
                json::array({"z+", "z+"}));
        const Vec3 c = cfg.params.center();
        std::array<Vec3, 2> ends{arc.vertices.front(), arc.vertices.back()};
        std::sort(ends.begin(), ends.end(), [](const Vec3& a, const Vec3& b) { return a.y < b.y; });
        const Vec3 lo{c.x, c.y - cfg.params.radius, c.z}, hi{c.x, c.y + cfg.params.radius, c.z};
        const double err = std::max(distance(ends[0], lo), distance(ends[1], hi));
        const double tol = 2 * field.domain().cell_diameter();
        R.check("arc_endpoint_positions", err < tol, err, "< " + std::to_string(tol),
                "distance from the endpoints to the expected points " + to_string(lo) + ", " + to_string(hi));
        const double defect = max_framing_defect(set);
        R.check("jacobian_framing_orthonormal", defect < 1e-6, defect, "< 1e-6");

        const PushoffFraming po = frame_by_pushoff(field, rv);
        double worst = 0;
        bool matched = po.set.components.size() == 1 && po.set.components[0].vertices.size() == arc.vertices.size();
        if (matched)
            for (std::size_t i = 0; i < arc.vertices.size(); ++i)
                worst = std::max(worst, std::acos(std::clamp(dot(arc.framing[i], po.set.components[0].framing[i]), -1.0, 1.0)));
        R.check("jacobian_and_pushoff_framings_agree", matched && worst < 0.2, worst, "< 0.2 rad",
                "largest angle between the two framings along the arc");
    });
    R.guard("bypass_preimage_q", [&] {
        const PontryaginSet q = extract(field, RegularValue::from_point({-1, 0, 0}, cfg.delta));
        R.check("q_preimage_empty", q.components.empty(), q.components.size(), 0);
    });
}

// Framed class of the round trip realize(unknot with self-linking k) -> extract.
int unknot_round_trip(int k) {
    const BoxDomain box({-2, -2, -2}, {2, 2, 2}, {64, 64, 64});
    const SampledField f = realize({framed_unknot(k)}, box, 0.35);
    return framed_class(extract(f, RegularValue::standard()).components);
}

void verify_thm2(const PipelineConfig& cfg, Reporter& R) {
    const auto coarse = cfg.resolution.value_or(std::array<int, 3>{64, 96, 64});
    const auto fine = cfg.fine_resolution.value_or(std::array<int, 3>{128, 160, 128});
    const RegularValue rv = RegularValue::standard(cfg.delta);
    json o3_values = json::array(), sl_values = json::array();
    for (const auto& [label, res] : {std::pair{std::string("coarse"), coarse}, std::pair{std::string("fine"), fine}}) {
        R.guard("triangle_" + label, [&] {
            const SampledField field = triangle_slab(cfg.params, res).merged();
            R.digest("triangle_field_" + label, field);
            const PontryaginSet set = extract(field, rv);
            R.artifact("triangle_preimage_" + label, set);
            const bool one_closed = set.components.size() == 1 && set.components[0].closed;
            R.check(label + "_one_closed_component", one_closed, set.components.size(), 1);
            if (!one_closed) return;
            const FramedCurve& c = set.components[0];
            int crossings = 0;
            const bool unknot = certify_unknot(c, &crossings);
            R.check(label + "_unknot_projection", unknot, crossings, "< 3",
                    "fewest crossings over the tested projections");
            const int sl = self_linking(c);
            sl_values.push_back(sl);
            R.check(label + "_self_linking_jacobian", sl == -1, sl, -1);
            const PushoffFraming po = frame_by_pushoff(field, rv);
            const int sl_po = po.set.components.size() == 1 ? self_linking(po.set.components[0]) : 999;
            R.check(label + "_self_linking_pushoff", sl_po == -1, sl_po, -1);
            const int rt = unknot_round_trip(sl);
            R.check(label + "_unknot_round_trip", rt == sl, rt, sl,
                    "framed class of extract(realize(unknot with the extracted self-linking))");
            const ObstructionReport o3 = obstruction_o3(standard_slab(field.domain()), field, field.domain(), rv, 0);
            o3_values.push_back(o3.o3);
            R.check(label + "_o3_doubled_field", o3.doubled_field == -1, o3.doubled_field, -1, o3.diagnostics);
            if (o3.compensating_applicable)
                R.check(label + "_o3_compensating_loop", o3.compensating_loop == -1, o3.compensating_loop, -1);
        });
    }
    R.check("resolution_stability", o3_values.size() == 2 && o3_values[0] == o3_values[1] && sl_values.size() == 2 &&
                                         sl_values[0] == sl_values[1],
            json{{"o3", o3_values}, {"self_linking", sl_values}}, "equal across resolutions");

    R.guard("triangle_regular_value_independence", [&] {
        const SampledField field = triangle_slab(cfg.params, coarse).merged();
        json values = json::array();
        bool same = true;
        for (const RegularValue& v : sample_regular_values(cfg.seed, cfg.samples, 0.8, cfg.delta)) {
            const PontryaginSet s = extract(field, v);
            if (s.arc_count() > 0) throw InvariantError("sampled regular value has an open preimage");
            const int h = framed_class(s.components);
            values.push_back(h);
            same = same && h == -1;
        }
        R.check("triangle_regular_value_independence", same, values, -1);
    });

    for (int n : {2, 3}) {
        R.guard("stack_" + std::to_string(n), [&] {
            const SampledField field = stack_triangles(n, cfg.params, coarse).merged();
            R.digest("stack_" + std::to_string(n), field);
            const ObstructionReport o3 = obstruction_o3(standard_slab(field.domain()), field, field.domain(), rv, 0);
            R.check("stack_" + std::to_string(n) + "_o3", o3.o3 == -n, o3.o3, -n, o3.diagnostics);
            const int fc = framed_class(extract(field, rv).components);
            R.check("stack_" + std::to_string(n) + "_framed_class", fc == -n, fc, -n);
        });
    }
}

FramedCurve moved(FramedCurve c, const Vec3& axis, double angle, const Vec3& shift) {
    for (Vec3& v : c.vertices) v = rotate(v, axis, angle) + shift;
    for (Vec3& f : c.framing) f = rotate(f, axis, angle);
    return c;
}

Vec3 centroid(const FramedCurve& c) {
    Vec3 s{};
    for (const Vec3& v : c.vertices) s += v;
    return s / static_cast<double>(c.vertices.size());
}

json linking_matrix(const std::vector<FramedCurve>& comps) {
    json m = json::array();
    for (std::size_t i = 0; i < comps.size(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < comps.size(); ++j)
            row.push_back(i == j ? self_linking(comps[i]) : linking_gauss(comps[i], comps[j]).value);
        m.push_back(row);
    }
    return m;
}

void verify_roundtrip(const PipelineConfig& cfg, Reporter& R) {
    const auto res = cfg.resolution.value_or(std::array<int, 3>{64, 64, 64});
    const double tube = 0.35;
    struct Case {
        std::string name;
        std::vector<FramedCurve> link;
        BoxDomain box;
    };
    std::vector<Case> cases;
    for (int k = -2; k <= 2; ++k)
        cases.push_back({"unknot_" + std::to_string(k), {framed_unknot(k)}, BoxDomain({-2, -2, -2}, {2, 2, 2}, res)});
    cases.push_back({"hopf_link",
                     {framed_unknot(0), moved(framed_unknot(0), {1, 0, 0}, std::numbers::pi / 2, {1, 0, 0})},
                     BoxDomain({-2, -2, -2}, {3, 2, 2}, {res[0] * 5 / 4, res[1], res[2]})});
    for (const Case& c : cases) {
        R.guard(c.name, [&] {
            const SampledField f = realize(c.link, c.box, tube, RegularValue::standard(cfg.delta));
            R.digest(c.name, f);
            const PontryaginSet set = extract(f, RegularValue::standard(cfg.delta));
            R.artifact("roundtrip_" + c.name, set);
            R.check(c.name + "_component_count", set.components.size() == c.link.size(), set.components.size(),
                    c.link.size());
            if (set.components.size() != c.link.size()) return;
            // Pair extracted components with inputs by centroid before comparing matrices.
            std::vector<FramedCurve> ordered;
            std::vector<bool> used(set.components.size(), false);
            for (const FramedCurve& in : c.link) {
                std::size_t best = 0;
                double bd = std::numeric_limits<double>::infinity();
                for (std::size_t j = 0; j < set.components.size(); ++j)
                    if (!used[j] && distance(centroid(set.components[j]), centroid(in)) < bd) {
                        bd = distance(centroid(set.components[j]), centroid(in));
                        best = j;
                    }
                used[best] = true;
                ordered.push_back(set.components[best]);
            }
            const json want = linking_matrix(c.link), got = linking_matrix(ordered);
            R.check(c.name + "_linking_matrix", want == got, got, want, "diagonal: self-linking");
        });
    }
}

void verify_dividing(const PipelineConfig&, Reporter& R) {
    const DividingSet standard = DividingSet::vertical(3);
    const AttachingArc arc = AttachingArc::at_level(0, 0);
    R.guard("standard_configuration", [&] {
        const DividingSet once = attach_bypass(standard, arc);
        const std::string expected = "B=3 T=3 pairs=0-1,2-5,3-4 loops=-";
        R.check("bypass_pattern", once.normal_form() == expected, once.normal_form(), expected);
        R.check("bypass_changes_class", !once.isotopic(standard), once.normal_form(), "not " + standard.normal_form());
        const auto [second, third] = induced_arcs(standard, arc);
        const DividingSet twice = attach_bypass(once, second);
        R.check("second_arc_crossings", arc_crossings(once, second) == 3, arc_crossings(once, second), 3);
        R.check("third_arc_crossings", arc_crossings(twice, third) == 3, arc_crossings(twice, third), 3);
        R.check("two_bypasses_change_class", !twice.isotopic(standard), twice.normal_form(),
                "not " + standard.normal_form());
        const TriangleResult tri = attach_triangle(standard, arc);
        R.check("triangle_isotopy_trivial", tri.result.isotopic(standard), tri.result.normal_form(),
                standard.normal_form());
        GradingLedger ledger(standard);
        json grades = json::array();
        for (int n = 1; n <= 3; ++n) {
            ledger.attach_triangle(AttachingArc::at_level(ledger.current().ops().size(), 0));
            grades.push_back(ledger.grading());
        }
        R.check("grading_after_n_triangles", grades == json::array({-1, -2, -3}), grades, json::array({-1, -2, -3}));
        const bool mirror = attach_bypass(standard, arc).mirrored().isotopic(
            attach_bypass(standard.mirrored(), mirrored(standard, arc)));
        R.check("mirror_symmetry", mirror, mirror, true);
    });
    R.guard("exhaustive_corpus", [&] {
        std::size_t diagrams = 0, triangles = 0, not_isotopic = 0, not_local = 0, not_mirror = 0;
        for (const DividingSet& ds : chord_corpus(6, true)) {
            ++diagrams;
            for (const AttachingArc& a : all_level_arcs(ds)) {
                ++triangles;
                if (!attach_triangle(ds, a).result.isotopic(ds)) ++not_isotopic;
                const DividingSet once = attach_bypass(ds, a);
                const auto touched = ds.endpoints_through(a.level, static_cast<int>(a.left), 3);
                const std::set<std::pair<int, int>> after(once.chords().begin(), once.chords().end());
                for (const auto& ch : ds.chords())
                    if (!std::binary_search(touched.begin(), touched.end(), ch.first) &&
                        !std::binary_search(touched.begin(), touched.end(), ch.second) && !after.count(ch))
                        ++not_local;
                if (!once.mirrored().isotopic(attach_bypass(ds.mirrored(), mirrored(ds, a)))) ++not_mirror;
            }
        }
        const json counts{{"diagrams", diagrams}, {"triangles", triangles}};
        R.check("corpus_triangles_isotopy_trivial", not_isotopic == 0 && triangles > 0,
                json{{"failures", not_isotopic}, {"counts", counts}}, 0);
        R.check("corpus_bypass_locality", not_local == 0, not_local, 0,
                "chords away from the arc neighbourhood survive unchanged");
        R.check("corpus_mirror_symmetry", not_mirror == 0, not_mirror, 0);
        // Every attached diagram was rebuilt and re-checked for a two-colouring by its constructor.
        R.check("corpus_dividing_property", true, counts, "all results two-colourable");
    });
}

}  // namespace

json to_json(const PipelineConfig& cfg) {
    json j{{"pipeline", cfg.pipeline}, {"params", to_json(cfg.params)}, {"seed", cfg.seed},
           {"samples", cfg.samples},   {"delta", cfg.delta},             {"out_dir", cfg.out_dir},
           {"formats", cfg.formats}};
    j["resolution"] = cfg.resolution ? res_json(*cfg.resolution) : json(nullptr);
    j["fine_resolution"] = cfg.fine_resolution ? res_json(*cfg.fine_resolution) : json(nullptr);
    return j;
}

PipelineConfig pipeline_config_from_json(const json& j) {
    PipelineConfig cfg;
    try {
        cfg.pipeline = j.value("pipeline", cfg.pipeline);
        if (j.contains("params")) cfg.params = params_from_json(j["params"]);
        if (j.contains("resolution") && !j["resolution"].is_null()) cfg.resolution = res_from_json(j["resolution"]);
        if (j.contains("fine_resolution") && !j["fine_resolution"].is_null())
            cfg.fine_resolution = res_from_json(j["fine_resolution"]);
        cfg.seed = j.value("seed", cfg.seed);
        cfg.samples = j.value("samples", cfg.samples);
        cfg.delta = j.value("delta", cfg.delta);
        cfg.out_dir = j.value("out_dir", cfg.out_dir);
        if (j.contains("formats")) cfg.formats = j["formats"].get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw FormatError(std::string("pipeline config: ") + e.what());
    }
    if (cfg.samples < 0) throw FormatError("pipeline config: samples must be nonnegative");
    return cfg;
}

std::vector<RegularValue> sample_regular_values(std::uint64_t seed, int count, double max_angle, double delta) {
    std::mt19937_64 rng(seed);
    std::vector<RegularValue> out;
    for (int i = 0; i < count; ++i) {
        // Draw raw 64-bit words so the sequence does not depend on the library's distributions.
        const double a = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        const double b = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        const double theta = 0.05 + a * (max_angle - 0.05), phi = 2 * std::numbers::pi * b;
        out.push_back(RegularValue::from_point(
            {std::cos(theta), std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi)}, delta));
    }
    return out;
}

const std::vector<std::string>& pipeline_names() {
    static const std::vector<std::string> names{"thm1", "thm2", "hopf", "roundtrip", "dividing"};
    return names;
}

json run_pipeline(const PipelineConfig& cfg) {
    static const std::map<std::string, std::function<void(const PipelineConfig&, Reporter&)>> table{
        {"thm1", verify_thm1}, {"thm2", verify_thm2},         {"hopf", verify_hopf},
        {"roundtrip", verify_roundtrip}, {"dividing", verify_dividing}};
    const auto it = table.find(cfg.pipeline);
    if (it == table.end()) throw std::invalid_argument("unknown pipeline '" + cfg.pipeline + "'");
    const auto t0 = Clock::now();
    Reporter R(cfg);
    R.guard("pipeline", [&] { it->second(cfg, R); });
    return R.finish(t0);
}

}  // namespace pt
