// Acceptance criteria 1-9: one PASS/FAIL line each, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <string>

#include <json.hpp>

#include "pontryagin.h"
#include "pontryagin/invariants.hpp"
#include "pontryagin/models.hpp"
#include "random_curves.hpp"

using nlohmann::json;
using namespace pt;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = false;
    std::string detail;
};

int g_failures = 0;

void report(int n, const std::string& title, const std::function<Outcome()>& body) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(Clock::now() - t0).count();
    if (!o.pass) ++g_failures;
    std::printf("%s criterion %d: %s (%s; %.1f s)\n", o.pass ? "PASS" : "FAIL", n, title.c_str(), o.detail.c_str(), s);
    std::fflush(stdout);
}

json verify(const char* name, const json& cfg = json::object()) {
    char* out = nullptr;
    int passed = 0;
    if (pt_verify(name, cfg.dump().c_str(), &out, &passed) != PT_OK)
        throw std::runtime_error(std::string("pt_verify ") + name + ": " + pt_last_error());
    json r = json::parse(out);
    pt_free_string(out);
    r["passed_flag"] = passed;
    return r;
}

// Checks by name; a missing check counts as failed.
struct Checks {
    std::map<std::string, json> by_name;
    explicit Checks(const json& report) {
        for (const json& c : report.at("checks")) by_name[c.at("name").get<std::string>()] = c;
    }
    bool pass(const std::string& n) const { return by_name.count(n) && by_name.at(n).at("pass").get<bool>(); }
    json value(const std::string& n) const { return by_name.count(n) ? by_name.at(n).at("value") : json(nullptr); }
    bool all(std::initializer_list<std::string> names, std::string& detail) const {
        bool ok = true;
        for (const auto& n : names)
            if (!pass(n)) {
                ok = false;
                detail += " failed:" + n;
            }
        return ok;
    }
};

bool all_equal(const json& arr, int expected, std::size_t count) {
    if (!arr.is_array() || arr.size() != count) return false;
    for (const json& v : arr)
        if (v != expected) return false;
    return true;
}

}  // namespace

int main() {
    std::printf("pontryagin %s acceptance\n", pt_version());
    json hopf_report, thm2_report;

    report(1, "verify hopf: +1 by self-linking and two-fiber linking at 64^3 in under 60 s", [&] {
        const auto t0 = Clock::now();
        hopf_report = verify("hopf");
        const double wall = std::chrono::duration<double>(Clock::now() - t0).count();
        const Checks c(hopf_report);
        std::string d = "self-linking " + c.value("hopf_via_self_linking").dump() + ", two-fiber " +
                        c.value("hopf_via_two_fibers").dump() + ", resolution " +
                        hopf_report["config"]["resolution"].dump() + " (default 64^3)";
        const bool ok = c.value("hopf_via_self_linking") == 1 && c.value("hopf_via_two_fibers") == 1 &&
                        c.pass("hopf_runtime_under_60s") && wall < 60.0 && hopf_report["passed_flag"] == 1;
        return Outcome{ok, d};
    });

    report(2, "verify thm1: one open arc ending on the top face at p, empty at q, framings agree", [&] {
        const json r = verify("thm1");
        const Checks c(r);
        std::string d = "components " + c.value("p_component_count").dump() + ", faces " +
                        c.value("arc_endpoints_on_top_face").dump() + ", q components " +
                        c.value("q_preimage_empty").dump() + ", framing gap " +
                        c.value("jacobian_and_pushoff_framings_agree").dump() + " rad";
        const bool ok = c.all({"p_component_count", "p_component_is_open_arc", "arc_endpoints_on_top_face",
                               "arc_endpoint_positions", "jacobian_and_pushoff_framings_agree", "q_preimage_empty"},
                              d) &&
                        c.value("p_component_count") == 1 && c.value("q_preimage_empty") == 0 &&
                        r["passed_flag"] == 1;
        return Outcome{ok, d};
    });

    report(3, "verify thm2: one closed unknot, self-linking -1, o3 = -1, stable across resolution classes", [&] {
        thm2_report = verify("thm2");
        const Checks c(thm2_report);
        std::string d;
        bool ok = true;
        for (const std::string cls : {"coarse", "fine"}) {
            ok = c.all({cls + "_one_closed_component", cls + "_unknot_projection", cls + "_unknot_round_trip",
                        cls + "_self_linking_jacobian", cls + "_self_linking_pushoff", cls + "_o3_doubled_field"},
                       d) &&
                 ok;
            ok = ok && c.value(cls + "_self_linking_jacobian") == -1 && c.value(cls + "_o3_doubled_field") == -1;
            d += " " + cls + ": sl " + c.value(cls + "_self_linking_jacobian").dump() + ", o3 " +
                 c.value(cls + "_o3_doubled_field").dump() + ";";
        }
        ok = ok && c.pass("resolution_stability");
        d += " classes " + thm2_report["config"].value("resolution", json(nullptr)).dump() + "/default";
        return Outcome{ok, d};
    });

    report(4, "stacked triangles: o3 = -n for n = 2, 3", [&] {
        const Checks c(thm2_report);
        std::string d = "n=2: " + c.value("stack_2_o3").dump() + ", n=3: " + c.value("stack_3_o3").dump();
        const bool ok = c.value("stack_2_o3") == -2 && c.value("stack_3_o3") == -3 &&
                        c.all({"stack_2_o3", "stack_3_o3", "stack_2_framed_class", "stack_3_framed_class"}, d);
        return Outcome{ok, d};
    });

    report(5, "round trip: unknots with self-linking -2..2 and the Hopf link reproduce exactly", [&] {
        const json r = verify("roundtrip");
        const Checks c(r);
        std::string d;
        bool ok = r["passed_flag"] == 1;
        for (int k = -2; k <= 2; ++k) {
            const std::string n = "unknot_" + std::to_string(k);
            ok = c.all({n + "_component_count", n + "_linking_matrix"}, d) && ok;
            ok = ok && c.value(n + "_linking_matrix") == json::array({json::array({k})});
        }
        ok = c.all({"hopf_link_component_count", "hopf_link_linking_matrix"}, d) && ok;
        d += "hopf link matrix " + c.value("hopf_link_linking_matrix").dump();
        return Outcome{ok, d};
    });

    report(6, "linking by Gauss integral equals crossing count on 100 seeded random pairs, residual < 0.1", [&] {
        int agree = 0, linked = 0;
        double worst = 0;
        const auto pairs = testing::random_pairs(20240611, 100);
        for (const auto& [a, b] : pairs) {
            const LinkingResult g = linking_gauss(a, b);
            worst = std::max(worst, g.residual());
            if (g.value == linking_crossings(a, b)) ++agree;
            if (g.value != 0) ++linked;
        }
        const bool ok = pairs.size() == 100 && agree == 100 && worst < 0.1;
        return Outcome{ok, std::to_string(agree) + "/100 agree, " + std::to_string(linked) +
                               " linked, worst residual " + std::to_string(worst)};
    });

    report(7, "10 seeded certified regular values give identical integers on the hopf field and triangle", [&] {
        const Checks h(hopf_report), t(thm2_report);
        const json hv = h.value("hopf_regular_value_independence"), tv = t.value("triangle_regular_value_independence");
        const bool ok = h.pass("hopf_regular_value_independence") && t.pass("triangle_regular_value_independence") &&
                        all_equal(hv, 1, 10) && all_equal(tv, -1, 10);
        return Outcome{ok, "hopf " + hv.dump() + ", triangle " + tv.dump() + ", seed " +
                               hopf_report["config"]["seed"].dump()};
    });

    report(8, "dividing sets: X pattern, triangle isotopy-trivial (standard and exhaustive), grading -n", [&] {
        const json r = verify("dividing");
        const Checks c(r);
        std::string d = "pattern " + c.value("bypass_pattern").dump() + ", grading " +
                        c.value("grading_after_n_triangles").dump() + ", corpus " +
                        c.value("corpus_triangles_isotopy_trivial").dump();
        const bool ok = c.all({"bypass_pattern", "triangle_isotopy_trivial", "grading_after_n_triangles",
                               "corpus_triangles_isotopy_trivial"},
                              d) &&
                        c.value("bypass_pattern") == "B=3 T=3 pairs=0-1,2-5,3-4 loops=-" && r["passed_flag"] == 1;
        return Outcome{ok, d};
    });

    report(9, "properties: framing orthonormal, lk symmetric and reversal-odd, additivity, reflection, doubling", [&] {
        std::string d;
        bool ok = true;
        auto need = [&](bool cond, const std::string& what) {
            if (!cond) {
                ok = false;
                d += " failed:" + what;
            }
        };
        const SampledField h48 = hopf_field(BoxDomain({-2, -2, -2}, {2, 2, 2}, {48, 48, 48}));
        const SampledField h96 = hopf_field(BoxDomain({-2, -2, -2}, {2, 2, 2}, {96, 96, 96}));
        const PontryaginSet fib = extract(h48, RegularValue::from_point({0.9, 0.3, 0.2}));
        double orth = 0, unit = 0;
        for (const FramedCurve& c : fib.components)
            for (std::size_t i = 0; i < c.vertices.size(); ++i) {
                orth = std::max(orth, std::abs(dot(c.framing[i], c.tangent(i))));
                unit = std::max(unit, std::abs(norm(c.framing[i]) - 1.0));
            }
        need(!fib.components.empty() && orth < 1e-6, "framing_orthogonality");
        need(unit < 1e-9, "framing_unit_norm");
        int sym = 0;
        for (const auto& [a, b] : testing::random_pairs(7, 100)) {
            const int ab = linking_gauss(a, b).value;
            if (linking_gauss(b, a).value == ab && linking_gauss(a.reversed(), b).value == -ab) ++sym;
        }
        need(sym == 100, "lk_symmetry_and_reversal");
        const BoxDomain wide({-3, -2, -2}, {3, 2, 2}, {72, 48, 48});
        const int add11 = hopf_invariant(realize({framed_unknot(1, 1.0, {-1.5, 0, 0}), framed_unknot(1, 1.0, {1.5, 0, 0})},
                                                 wide, 0.35))
                              .value;
        const int add1m1 = hopf_invariant(realize({framed_unknot(1, 1.0, {-1.5, 0, 0}),
                                                   framed_unknot(-1, 1.0, {1.5, 0, 0})},
                                                  wide, 0.35))
                               .value;
        need(add11 == 2 && add1m1 == 0, "hopf_additivity");
        // The reflected plane field has far value +p, so it is measured at -p.
        const int mirrored = hopf_invariant(h48.mirrored_x(), RegularValue::from_point({-1, 0, 0})).value;
        need(mirrored == -1, "reflection_negates");
        const int coarse = hopf_invariant(h48).value, fine = hopf_invariant(h96).value;
        need(coarse == 1 && fine == 1, "resolution_doubling_hopf");
        const std::size_t arcs_c = extract(bypass_slab(BypassModelParams{}, std::array<int, 3>{48, 64, 32}),
                                           RegularValue::standard())
                                       .arc_count();
        const std::size_t arcs_f = extract(bypass_slab(BypassModelParams{}, std::array<int, 3>{96, 128, 64}),
                                           RegularValue::standard())
                                       .arc_count();
        need(arcs_c == 1 && arcs_f == 1, "resolution_doubling_bypass");
        d = "orth " + std::to_string(orth) + ", additivity 1+1=" + std::to_string(add11) + " 1-1=" +
            std::to_string(add1m1) + ", mirror " + std::to_string(mirrored) + ", 48^3/96^3 " + std::to_string(coarse) +
            "/" + std::to_string(fine) + d;
        return Outcome{ok, d};
    });

    std::printf("%s: %d criteria failed\n", g_failures ? "FAIL" : "PASS", g_failures);
    return g_failures ? 1 : 0;
}
