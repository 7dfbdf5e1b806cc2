#include "pontryagin/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace pt {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

void put_le(std::ostream& os, double v) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
    os.write(buf, 8);
}

double get_le(std::istream& is) {
    unsigned char buf[8];
    if (!is.read(reinterpret_cast<char*>(buf), 8)) throw FormatError("field file: truncated data");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    return std::bit_cast<double>(bits);
}

double parse_double(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    double d = 0;
    try {
        d = std::stod(v, &used);
    } catch (const std::logic_error&) {
        throw FormatError("config: '" + key + "' is not a number: " + v);
    }
    if (trim(v.substr(used)).size()) throw FormatError("config: '" + key + "' is not a number: " + v);
    return d;
}

}  // namespace

void write_field(std::ostream& os, const SampledField& field) {
    const BoxDomain& d = field.domain();
    os << std::setprecision(17);
    os << "PTFIELD " << kFieldFormatVersion << "\n";
    os << "min " << d.min.x << ' ' << d.min.y << ' ' << d.min.z << "\n";
    os << "max " << d.max.x << ' ' << d.max.y << ' ' << d.max.z << "\n";
    os << "res " << d.res[0] << ' ' << d.res[1] << ' ' << d.res[2] << "\n";
    os << "END\n";
    for (const Vec3& v : field.values()) {
        put_le(os, v.x);
        put_le(os, v.y);
        put_le(os, v.z);
    }
    if (!os) throw FormatError("field file: write failed");
}

void write_field(const std::string& path, const SampledField& field) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path + " for writing");
    write_field(os, field);
}

SampledField read_field(std::istream& is) {
    std::string line;
    auto next = [&](const char* what) {
        if (!std::getline(is, line)) throw FormatError(std::string("field file: missing ") + what);
        return std::istringstream(line);
    };
    std::string tag;
    int version = 0;
    next("magic") >> tag >> version;
    if (tag != "PTFIELD") throw FormatError("field file: bad magic");
    if (version != kFieldFormatVersion) throw FormatError("field file: unsupported version " + std::to_string(version));
    Vec3 lo, hi;
    std::array<int, 3> res{};
    auto ls = next("min");
    ls >> tag >> lo.x >> lo.y >> lo.z;
    if (!ls || tag != "min") throw FormatError("field file: bad min line");
    auto hs = next("max");
    hs >> tag >> hi.x >> hi.y >> hi.z;
    if (!hs || tag != "max") throw FormatError("field file: bad max line");
    auto rs = next("res");
    rs >> tag >> res[0] >> res[1] >> res[2];
    if (!rs || tag != "res") throw FormatError("field file: bad res line");
    next("END") >> tag;
    if (tag != "END") throw FormatError("field file: header not terminated by END");
    BoxDomain dom(lo, hi, res);
    std::vector<Vec3> vals(dom.vertex_count());
    for (Vec3& v : vals) {
        v.x = get_le(is);
        v.y = get_le(is);
        v.z = get_le(is);
    }
    return SampledField(dom, std::move(vals));
}

SampledField read_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path);
    return read_field(is);
}

json to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec3_from_json(const json& j) {
    if (!j.is_array() || j.size() != 3) throw FormatError("expected [x, y, z]");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json to_json(const RegularValue& rv) {
    return {{"p", to_json(rv.p.vec())}, {"u", to_json(rv.u.vec())}, {"v", to_json(rv.v.vec())}, {"delta", rv.delta}};
}

json to_json(const FramedCurve& c) {
    json verts = json::array(), fr = json::array();
    for (const Vec3& v : c.vertices) verts.push_back(to_json(v));
    for (const Vec3& f : c.framing) fr.push_back(to_json(f));
    json j{{"closed", c.closed}, {"vertices", verts}, {"framing", fr}};
    if (!c.closed) j["endpoint_faces"] = {face_name(c.endpoint_faces[0]), face_name(c.endpoint_faces[1])};
    return j;
}

json to_json(const PontryaginSet& set) {
    json comps = json::array();
    for (const auto& c : set.components) comps.push_back(to_json(c));
    return {{"version", kCurveFormatVersion},
            {"components", comps},
            {"regular_value", to_json(set.regular_value)},
            {"field_digest", set.field_digest}};
}

PontryaginSet curves_from_json(const json& j) {
    try {
        if (j.at("version").get<int>() != kCurveFormatVersion) throw FormatError("curve JSON: unsupported version");
        PontryaginSet set;
        const json& rv = j.at("regular_value");
        set.regular_value = RegularValue::from_point(vec3_from_json(rv.at("p")), rv.at("delta").get<double>());
        set.field_digest = j.value("field_digest", "");
        for (const json& c : j.at("components")) {
            FramedCurve fc;
            fc.closed = c.at("closed").get<bool>();
            for (const json& v : c.at("vertices")) fc.vertices.push_back(vec3_from_json(v));
            for (const json& f : c.at("framing")) fc.framing.push_back(vec3_from_json(f));
            if (!fc.framing.empty() && fc.framing.size() != fc.vertices.size())
                throw FormatError("curve JSON: framing and vertex counts differ");
            set.components.push_back(std::move(fc));
        }
        return set;
    } catch (const json::exception& e) {
        throw FormatError(std::string("curve JSON: ") + e.what());
    }
}

void write_obj(std::ostream& os, const PontryaginSet& set) {
    os << std::setprecision(12);
    os << "# regular value " << set.regular_value.p.x() << ' ' << set.regular_value.p.y() << ' '
       << set.regular_value.p.z() << "\n";
    std::size_t base = 1;
    for (std::size_t c = 0; c < set.components.size(); ++c) {
        const FramedCurve& fc = set.components[c];
        os << "o component_" << c << (fc.closed ? "_closed" : "_arc") << "\n";
        for (const Vec3& v : fc.vertices) os << "v " << v.x << ' ' << v.y << ' ' << v.z << "\n";
        os << 'l';
        for (std::size_t i = 0; i < fc.vertices.size(); ++i) os << ' ' << base + i;
        if (fc.closed && !fc.vertices.empty()) os << ' ' << base;
        os << "\n";
        base += fc.vertices.size();
    }
}

void write_csv(std::ostream& os, const PontryaginSet& set) {
    os << std::setprecision(12);
    os << "component,index,closed,x,y,z,fx,fy,fz\n";
    for (std::size_t c = 0; c < set.components.size(); ++c) {
        const FramedCurve& fc = set.components[c];
        for (std::size_t i = 0; i < fc.vertices.size(); ++i) {
            const Vec3& v = fc.vertices[i];
            const Vec3 f = i < fc.framing.size() ? fc.framing[i] : Vec3{};
            os << c << ',' << i << ',' << (fc.closed ? 1 : 0) << ',' << v.x << ',' << v.y << ',' << v.z << ','
               << f.x << ',' << f.y << ',' << f.z << "\n";
        }
    }
}

std::map<std::string, std::string> parse_config(std::istream& is) {
    std::map<std::string, std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw FormatError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (key.empty()) throw FormatError("config line " + std::to_string(lineno) + ": empty key");
        if (!out.emplace(key, value).second) throw FormatError("config: repeated key '" + key + "'");
    }
    return out;
}

std::map<std::string, std::string> read_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open " + path);
    return parse_config(is);
}

Vec3 parse_vec3(const std::string& text) {
    std::istringstream is(text);
    std::string part;
    std::vector<double> xs;
    while (std::getline(is, part, ',')) xs.push_back(parse_double("vector", trim(part)));
    if (xs.size() != 3) throw FormatError("expected three comma-separated numbers, got '" + text + "'");
    return {xs[0], xs[1], xs[2]};
}

std::array<int, 3> parse_resolution(const std::string& text) {
    const Vec3 v = parse_vec3(text);
    std::array<int, 3> r{};
    for (int a = 0; a < 3; ++a) {
        if (v[a] != std::floor(v[a]) || v[a] < 1) throw FormatError("resolution entries must be positive integers");
        r[a] = static_cast<int>(v[a]);
    }
    return r;
}

BypassModelParams params_from_config(const std::map<std::string, std::string>& cfg, BypassModelParams p) {
    for (const auto& [key, value] : cfg) {
        if (key == "arc_start") p.arc_start = parse_vec3(value);
        else if (key == "arc_end") p.arc_end = parse_vec3(value);
        else if (key == "radius") p.radius = parse_double(key, value);
        else if (key == "epsilon") p.epsilon = parse_double(key, value);
        else if (key == "blend") p.blend = parse_double(key, value);
        else if (key == "pole_radius") p.pole_radius = parse_double(key, value);
        else if (key == "rotation_sign") {
            const double s = parse_double(key, value);
            if (s != 1.0 && s != -1.0) throw FormatError("config: rotation_sign must be 1 or -1");
            p.rotation_sign = static_cast<int>(s);
        } else {
            throw FormatError("config: unknown model key '" + key + "'");
        }
    }
    return p;
}

BypassModelParams params_from_json(const json& j, BypassModelParams base) {
    if (!j.is_object()) throw FormatError("model params must be a JSON object");
    std::map<std::string, std::string> kv;
    for (const auto& [k, v] : j.items()) {
        if (v.is_array()) {
            const Vec3 x = vec3_from_json(v);
            std::ostringstream os;
            os << std::setprecision(17) << x.x << ',' << x.y << ',' << x.z;
            kv[k] = os.str();
        } else if (v.is_number()) {
            kv[k] = v.dump();
        } else {
            throw FormatError("model param '" + k + "' must be a number or [x, y, z]");
        }
    }
    return params_from_config(kv, base);
}

json to_json(const BypassModelParams& p) {
    return {{"arc_start", to_json(p.arc_start)}, {"arc_end", to_json(p.arc_end)}, {"radius", p.radius},
            {"epsilon", p.epsilon},           {"blend", p.blend},             {"pole_radius", p.pole_radius},
            {"rotation_sign", p.rotation_sign}};
}

}  // namespace pt
