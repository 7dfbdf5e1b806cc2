#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pontryagin/fields.hpp"
#include "pontryagin/models.hpp"

namespace pt {

/// Everything a verification run depends on; embedded verbatim in its report.
struct PipelineConfig {
    std::string pipeline;                           // thm1 | thm2 | hopf | roundtrip | dividing
    BypassModelParams params;
    std::optional<std::array<int, 3>> resolution;   // overrides the pipeline default
    std::optional<std::array<int, 3>> fine_resolution;  // thm2: second resolution class
    std::uint64_t seed = 1;
    int samples = 10;                               // seeded regular values per independence check
    double delta = 0.02;
    std::string out_dir;                            // empty: write nothing
    std::vector<std::string> formats{"json"};       // artifact formats: json, obj, csv
};

nlohmann::json to_json(const PipelineConfig& cfg);
/// Reads the keys written by to_json; missing keys keep their defaults.
PipelineConfig pipeline_config_from_json(const nlohmann::json& j);

/// Regular values drawn from a seeded mt19937_64, at polar angle in [0.05, max_angle] from (1,0,0).
std::vector<RegularValue> sample_regular_values(std::uint64_t seed, int count, double max_angle = 0.8,
                                                double delta = 0.02);

/// Runs one pipeline. The report holds {pipeline, version, config, checks[], digests, pass, elapsed_s};
/// every check has {name, pass, value, expected, detail}. Throws only on unknown pipeline names;
/// failures inside a pipeline become failed checks.
nlohmann::json run_pipeline(const PipelineConfig& cfg);

const std::vector<std::string>& pipeline_names();

}  // namespace pt
