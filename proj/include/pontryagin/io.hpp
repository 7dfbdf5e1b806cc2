#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "pontryagin/extraction.hpp"
#include "pontryagin/fields.hpp"
#include "pontryagin/models.hpp"

namespace pt {

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kFieldFormatVersion = 1;
inline constexpr int kCurveFormatVersion = 1;

/// Field file: text header
///   PTFIELD <version>
///   min <x> <y> <z>
///   max <x> <y> <z>
///   res <nx> <ny> <nz>
///   END
/// followed by little-endian float64 triples, x fastest.
void write_field(std::ostream& os, const SampledField& field);
void write_field(const std::string& path, const SampledField& field);
SampledField read_field(std::istream& is);
SampledField read_field(const std::string& path);

nlohmann::json to_json(const Vec3& v);
Vec3 vec3_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RegularValue& rv);
nlohmann::json to_json(const FramedCurve& c);
nlohmann::json to_json(const PontryaginSet& set);
PontryaginSet curves_from_json(const nlohmann::json& j);

/// Wavefront line geometry: one `l` record per component, closed curves repeat their first vertex.
void write_obj(std::ostream& os, const PontryaginSet& set);
/// component,index,closed,x,y,z,fx,fy,fz
void write_csv(std::ostream& os, const PontryaginSet& set);

/// `key = value` lines; '#' starts a comment. Throws on malformed lines or repeated keys.
std::map<std::string, std::string> parse_config(std::istream& is);
std::map<std::string, std::string> read_config(const std::string& path);

/// Overrides the defaults with keys arc_start, arc_end (x,y,z), radius, epsilon, blend,
/// pole_radius, rotation_sign. Unknown keys are rejected.
BypassModelParams params_from_config(const std::map<std::string, std::string>& cfg,
                                     BypassModelParams base = {});
/// Same keys as params_from_config, as a JSON object (vectors as [x, y, z]).
BypassModelParams params_from_json(const nlohmann::json& j, BypassModelParams base = {});
nlohmann::json to_json(const BypassModelParams& p);

/// "a,b,c" -> {a, b, c}
std::array<int, 3> parse_resolution(const std::string& text);
Vec3 parse_vec3(const std::string& text);

}  // namespace pt
