// ptc: command-line front end over the pontryagin C API.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pontryagin.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Exit codes: 0 success, 1 a verification check failed, 2 usage, 3 + pt_status for library errors.
constexpr int kExitCheckFailed = 1;

struct CliFailure {
    int code;
    std::string message;
};

void check(pt_status s, const std::string& what) {
    if (s != PT_OK) throw CliFailure{3 + static_cast<int>(s), what + ": " + pt_status_name(s) + ": " + pt_last_error()};
}

std::string take(char* s) {
    std::string out = s ? s : "";
    pt_free_string(s);
    return out;
}

using FieldPtr = std::unique_ptr<pt_field, decltype(&pt_field_free)>;
using CurvesPtr = std::unique_ptr<pt_curves, decltype(&pt_curves_free)>;

FieldPtr load_field(const std::string& path) {
    pt_field* f = nullptr;
    check(pt_field_load(path.c_str(), &f), "loading " + path);
    return {f, &pt_field_free};
}

std::string slurp(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw CliFailure{3 + PT_ERR_IO, "cannot open " + path};
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

CurvesPtr load_curves(const std::string& path) {
    pt_curves* c = nullptr;
    check(pt_curves_from_json(slurp(path).c_str(), &c), "loading " + path);
    return {c, &pt_curves_free};
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream os(path);
    if (!os || !(os << text)) throw CliFailure{3 + PT_ERR_IO, "cannot write " + path.string()};
}

// Comma-separated numbers, exactly `expect` of them.
std::vector<double> split_numbers(const std::string& text, std::size_t expect, const std::string& flag) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(part, &used));
            if (part.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(part);
        } catch (const std::exception&) {
            throw CliFailure{2, flag + ": '" + part + "' is not a number"};
        }
    }
    if (out.size() != expect)
        throw CliFailure{2, flag + " expects " + std::to_string(expect) + " comma-separated numbers"};
    return out;
}

json resolution_json(const std::string& text) {
    json r = json::array();
    for (double v : split_numbers(text, 3, "--resolution")) {
        if (v < 1 || v != static_cast<int>(v)) throw CliFailure{2, "--resolution entries must be positive integers"};
        r.push_back(static_cast<int>(v));
    }
    return r;
}

struct ModelFlags {
    std::string config;
    std::string arc_start, arc_end;
    std::optional<double> radius, epsilon, blend, pole_radius;
    std::optional<int> rotation_sign;

    void add(CLI::App* app) {
        app->add_option("--config", config, "model file with key = value lines")->check(CLI::ExistingFile);
        app->add_option("--arc-start", arc_start, "attaching arc start x,y,z");
        app->add_option("--arc-end", arc_end, "attaching arc end x,y,z");
        app->add_option("--radius", radius, "distance of the preimage endpoints from the arc");
        app->add_option("--epsilon", epsilon, "half-width of the bypass region along the arc");
        app->add_option("--blend", blend, "vertical ramp width");
        app->add_option("--pole-radius", pole_radius, "support radius of the second-slab rotation");
        app->add_option("--rotation-sign", rotation_sign, "direction of the second-slab rotation (1 or -1)");
    }

    // Adds "config" and "params" to an options object.
    void apply(json& j) const {
        if (!config.empty()) j["config"] = config;
        json p = json::object();
        if (!arc_start.empty()) p["arc_start"] = split_numbers(arc_start, 3, "--arc-start");
        if (!arc_end.empty()) p["arc_end"] = split_numbers(arc_end, 3, "--arc-end");
        if (radius) p["radius"] = *radius;
        if (epsilon) p["epsilon"] = *epsilon;
        if (blend) p["blend"] = *blend;
        if (pole_radius) p["pole_radius"] = *pole_radius;
        if (rotation_sign) p["rotation_sign"] = *rotation_sign;
        if (!p.empty()) j["params"] = p;
    }
};

std::array<double, 3> point(const std::string& text) {
    const auto v = split_numbers(text, 3, "--p");
    return {v[0], v[1], v[2]};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pontryagin-Thom invariants of plane fields, bypass models and dividing sets"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(pt_version()));

    // model
    auto* model = app.add_subcommand("model", "build a model field and write it as a field file");
    std::string model_action, model_kind = "triangle", model_res, model_out;
    int model_n = 2;
    ModelFlags model_flags;
    model->add_option("action", model_action, "build or export")->required()->check(CLI::IsMember({"build", "export"}));
    model->add_option("--kind", model_kind, "standard, bypass, triangle, stack or hopf")
        ->check(CLI::IsMember({"standard", "bypass", "triangle", "stack", "hopf"}));
    model->add_option("--resolution", model_res, "cells per axis a,b,c");
    model->add_option("--n", model_n, "number of stacked triangles (kind stack)");
    model->add_option("--out", model_out, "output file, or directory for <kind>.ptf");
    model_flags.add(model);

    // extract
    auto* extract = app.add_subcommand("extract", "extract the framed preimage of a regular value");
    std::string ex_field, ex_p = "1,0,0", ex_framing = "jacobian", ex_out;
    double ex_delta = 0.02;
    std::vector<std::string> ex_formats{"json"};
    extract->add_option("field", ex_field, "field file")->required()->check(CLI::ExistingFile);
    extract->add_option("--p", ex_p, "regular value x,y,z");
    extract->add_option("--delta", ex_delta, "pushoff parameter");
    extract->add_option("--framing", ex_framing, "jacobian or pushoff")->check(CLI::IsMember({"jacobian", "pushoff"}));
    extract->add_option("--format", ex_formats, "json, obj, csv (repeatable)")
        ->delimiter(',')
        ->check(CLI::IsMember({"json", "obj", "csv"}));
    extract->add_option("--out", ex_out, "output directory (default: JSON to stdout)");

    // invariant
    auto* inv = app.add_subcommand("invariant", "compute one invariant");
    inv->require_subcommand(1);
    std::string inv_out;
    inv->add_option("--out", inv_out, "directory for invariant.json");

    auto* inv_hopf = inv->add_subcommand("hopf", "Hopf invariant of a field");
    std::string hopf_field, hopf_p = "1,0,0";
    double hopf_delta = 0.02;
    inv_hopf->add_option("field", hopf_field, "field file")->required()->check(CLI::ExistingFile);
    inv_hopf->add_option("--p", hopf_p, "regular value x,y,z");
    inv_hopf->add_option("--delta", hopf_delta, "pushoff parameter");

    auto* inv_link = inv->add_subcommand("link", "linking number of two closed components");
    std::string link_a, link_b;
    std::size_t link_i = 0, link_j = 1;
    inv_link->add_option("curves", link_a, "curve JSON")->required()->check(CLI::ExistingFile);
    inv_link->add_option("--with", link_b, "second curve JSON (default: the same file)")->check(CLI::ExistingFile);
    inv_link->add_option("--i", link_i, "component index in the first file");
    inv_link->add_option("--j", link_j, "component index in the second file");

    auto* inv_self = inv->add_subcommand("selflink", "self-linking number of a framed component");
    std::string self_curves;
    std::size_t self_index = 0;
    inv_self->add_option("curves", self_curves, "curve JSON")->required()->check(CLI::ExistingFile);
    inv_self->add_option("--index", self_index, "component index");

    auto* inv_o3 = inv->add_subcommand("o3", "obstruction class o3 between two fields");
    std::string o3_f1, o3_f2, o3_ball, o3_p = "1,0,0";
    int o3_d = 0;
    inv_o3->add_option("field1", o3_f1, "first field file")->required()->check(CLI::ExistingFile);
    inv_o3->add_option("field2", o3_f2, "second field file")->required()->check(CLI::ExistingFile);
    inv_o3->add_option("--ball", o3_ball, "xmin,ymin,zmin,xmax,ymax,zmax (default: whole domain)");
    inv_o3->add_option("--p", o3_p, "regular value x,y,z");
    inv_o3->add_option("--d", o3_d, "divisibility of the Euler class (0: trivial)");

    // dividing
    auto* div = app.add_subcommand("dividing", "dividing-set rewriting");
    std::string div_op, div_diagram, div_side = "front";
    std::optional<std::size_t> div_level, div_box;
    int div_first = 0, div_click = 0;
    div->add_option("op", div_op, "normalize, render, attach or triangle")
        ->required()
        ->check(CLI::IsMember({"normalize", "render", "attach", "triangle"}));
    div->add_option("diagram", div_diagram, "normal form, e.g. \"B=3 T=3 pairs=0-5,1-4,2-3 loops=-\"")->required();
    auto* lvl = div->add_option("--level", div_level, "level arc: op index it runs below");
    div->add_option("--first", div_first, "level arc: first strand it meets");
    auto* box = div->add_option("--box", div_box, "box arc: op index of the box");
    div->add_option("--click", div_click, "box arc: first boundary point of the box it cuts off");
    div->add_option("--side", div_side, "front or back")->check(CLI::IsMember({"front", "back"}));
    lvl->excludes(box);

    // verify
    auto* ver = app.add_subcommand("verify", "run a verification pipeline; exit 0 iff every check passes");
    std::string ver_name, ver_out = ".", ver_res, ver_fine;
    std::uint64_t ver_seed = 1;
    int ver_samples = 10;
    double ver_delta = 0.02;
    std::vector<std::string> ver_formats{"json"};
    ModelFlags ver_flags;
    ver->add_option("pipeline", ver_name, "thm1, thm2, hopf, roundtrip or dividing")
        ->required()
        ->check(CLI::IsMember({"thm1", "thm2", "hopf", "roundtrip", "dividing"}));
    ver->add_option("--out", ver_out, "directory for report.json and artifacts");
    ver->add_option("--seed", ver_seed, "regular-value sampling seed");
    ver->add_option("--samples", ver_samples, "regular values per independence check");
    ver->add_option("--delta", ver_delta, "pushoff parameter");
    ver->add_option("--resolution", ver_res, "override the pipeline resolution a,b,c");
    ver->add_option("--fine-resolution", ver_fine, "thm2: second resolution class a,b,c");
    ver->add_option("--format", ver_formats, "artifact formats json, obj, csv")
        ->delimiter(',')
        ->check(CLI::IsMember({"json", "obj", "csv"}));
    ver_flags.add(ver);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (model->parsed()) {
            json opts = json::object();
            if (!model_res.empty()) opts["resolution"] = resolution_json(model_res);
            if (model_kind == "stack") opts["n"] = model_n;
            model_flags.apply(opts);
            pt_field* raw = nullptr;
            check(pt_field_build(model_kind.c_str(), opts.dump().c_str(), &raw), "building " + model_kind);
            FieldPtr f(raw, &pt_field_free);
            fs::path out = model_out.empty() ? fs::path(model_kind + ".ptf") : fs::path(model_out);
            if (fs::is_directory(out) || model_out.ends_with('/')) out /= model_kind + ".ptf";
            if (out.has_parent_path()) fs::create_directories(out.parent_path());
            check(pt_field_save(f.get(), out.string().c_str()), "saving " + out.string());
            char* info = nullptr;
            check(pt_field_info(f.get(), &info), "field info");
            json j = json::parse(take(info));
            j["kind"] = model_kind;
            j["file"] = out.string();
            std::cout << j.dump(2) << "\n";
            return 0;
        }

        if (extract->parsed()) {
            FieldPtr f = load_field(ex_field);
            const auto p = point(ex_p);
            pt_curves* raw = nullptr;
            check(pt_extract(f.get(), p.data(), ex_delta, ex_framing.c_str(), &raw), "extracting");
            CurvesPtr c(raw, &pt_curves_free);
            if (ex_out.empty()) {
                char* text = nullptr;
                check(pt_curves_export(c.get(), "json", &text), "export");
                std::cout << take(text);
                return 0;
            }
            for (const std::string& fmt : ex_formats) {
                char* text = nullptr;
                check(pt_curves_export(c.get(), fmt.c_str(), &text), "export " + fmt);
                const fs::path path = fs::path(ex_out) / ("curves." + fmt);
                write_text(path, take(text));
                std::cerr << "wrote " << path.string() << "\n";
            }
            std::cout << pt_curves_count(c.get()) << " component(s)\n";
            return 0;
        }

        if (inv->parsed()) {
            char* out = nullptr;
            if (inv_hopf->parsed()) {
                FieldPtr f = load_field(hopf_field);
                const auto p = point(hopf_p);
                check(pt_hopf_invariant(f.get(), p.data(), hopf_delta, &out), "hopf invariant");
            } else if (inv_link->parsed()) {
                CurvesPtr a = load_curves(link_a);
                CurvesPtr b = link_b.empty() ? load_curves(link_a) : load_curves(link_b);
                check(pt_linking_number(a.get(), link_i, b.get(), link_j, &out), "linking number");
            } else if (inv_self->parsed()) {
                CurvesPtr c = load_curves(self_curves);
                check(pt_self_linking(c.get(), self_index, &out), "self-linking");
            } else {
                FieldPtr f1 = load_field(o3_f1), f2 = load_field(o3_f2);
                const auto p = point(o3_p);
                std::vector<double> ball;
                if (!o3_ball.empty()) ball = split_numbers(o3_ball, 6, "--ball");
                check(pt_obstruction_o3(f1.get(), f2.get(), ball.empty() ? nullptr : ball.data(), p.data(), o3_d, &out),
                      "o3");
            }
            const std::string text = take(out);
            if (!inv_out.empty()) write_text(fs::path(inv_out) / "invariant.json", text + "\n");
            std::cout << text << "\n";
            return 0;
        }

        if (div->parsed()) {
            std::string arc;
            if (div_op == "attach" || div_op == "triangle") {
                json a{{"side", div_side}};
                if (div_level) {
                    a["level"] = *div_level;
                    a["first"] = div_first;
                } else if (div_box) {
                    a["box"] = *div_box;
                    a["click"] = div_click;
                } else {
                    throw CliFailure{2, div_op + " needs --level or --box"};
                }
                arc = a.dump();
            }
            char* out = nullptr;
            check(pt_dividing(div_op.c_str(), div_diagram.c_str(), arc.empty() ? nullptr : arc.c_str(), &out),
                  "dividing " + div_op);
            const json j = json::parse(take(out));
            if (div_op == "render") {
                std::cout << j["render"].get<std::string>();
            } else {
                std::cout << j.dump(2) << "\n";
                if (j.contains("render")) std::cout << j["render"].get<std::string>();
            }
            return 0;
        }

        if (ver->parsed()) {
            json cfg{{"seed", ver_seed},  {"samples", ver_samples}, {"delta", ver_delta},
                     {"out_dir", ver_out}, {"formats", ver_formats}};
            if (!ver_res.empty()) cfg["resolution"] = resolution_json(ver_res);
            if (!ver_fine.empty()) cfg["fine_resolution"] = resolution_json(ver_fine);
            ver_flags.apply(cfg);
            fs::create_directories(ver_out);
            char* out = nullptr;
            int passed = 0;
            check(pt_verify(ver_name.c_str(), cfg.dump().c_str(), &out, &passed), "verify " + ver_name);
            const std::string text = take(out);
            const fs::path report = fs::path(ver_out) / "report.json";
            write_text(report, text + "\n");
            const json j = json::parse(text);
            for (const json& c : j["checks"]) {
                std::cout << (c["pass"].get<bool>() ? "PASS " : "FAIL ") << c["name"].get<std::string>() << ": "
                          << c["value"].dump() << " (expected " << c["expected"].dump() << ")";
                if (c.contains("detail") && c["detail"].is_string() && !c["detail"].get<std::string>().empty())
                    std::cout << "  " << c["detail"].get<std::string>();
                std::cout << "\n";
            }
            std::cout << ver_name << ": " << (passed ? "PASS" : "FAIL") << " in " << j.value("elapsed_s", 0.0)
                      << " s; report " << report.string() << "\n";
            return passed ? 0 : kExitCheckFailed;
        }
    } catch (const CliFailure& f) {
        std::cerr << "ptc: " << f.message << "\n";
        return f.code;
    } catch (const std::exception& e) {
        std::cerr << "ptc: " << e.what() << "\n";
        return 3 + PT_ERR_INTERNAL;
    }
    return 2;
}
