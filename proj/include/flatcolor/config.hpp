#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <vector>

#include "json.hpp"

#include "flatcolor/augment.hpp"
#include "flatcolor/dataset.hpp"
#include "flatcolor/rules.hpp"

namespace flatcolor {

using Json = nlohmann::ordered_json;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reads and parses a JSON file. Throws ConfigError.
Json load_json(const std::filesystem::path& path);

// Rule settings live at the top level of a config object:
//   eye_distance_threshold, min_component_area, connectivity (4|8),
//   binarize_threshold, colors.{body,appendage,eye,line,background}.
RuleParams rule_params_from_json(const Json& j);
ColorScheme color_scheme_from_json(const Json& j);
Json rules_to_json(const RuleParams& params, const ColorScheme& scheme);

Transform transform_from_json(const Json& j);
Json to_json(const Transform& t);

PipelineSpec pipeline_from_json(const Json& j);
Json to_json(const PipelineSpec& p);

/// Accepts either an array of pipelines or {"pipelines": [...]}.
std::vector<PipelineSpec> catalog_from_json(const Json& j);
Json catalog_to_json(const std::vector<PipelineSpec>& catalog);

/// Where a plan's seed drawings come from before they are loaded.
struct PlanSources {
    struct Dir {
        std::filesystem::path dir;
        ClassTag class_tag = ClassTag::Flower;
    };
    struct Generate {
        int flowers = 0;
        int creatures = 0;
        std::uint64_t seed = 1;
    };
    struct Manual {
        std::filesystem::path a_dir;
        std::filesystem::path b_dir;
        ClassTag class_tag = ClassTag::Creature;
        std::int64_t line_slack = 200;
    };
    std::vector<Dir> dirs;
    std::optional<Generate> generate;
    std::optional<Manual> manual;
};

/// A parsed dataset plan. `plan.originals` is left empty; resolve it with
/// load_originals. Relative paths are resolved against `base_dir`. Catalog
/// entries may be "default", a path to a catalog file, or an inline list;
/// missing entries fall back to the built-in catalogs.
struct PlanConfig {
    DatasetPlan plan;
    PlanSources sources;
};

PlanConfig plan_from_json(const Json& j, const std::filesystem::path& base_dir = {});
/// Fully resolved plan, suitable for re-running.
Json to_json(const PlanConfig& cfg);

/// Generated and on-disk drawings named by the plan sources.
std::vector<Drawing> load_originals(const PlanSources& sources, int canvas);

/// PNG files in a directory, sorted by name.
std::vector<std::filesystem::path> list_pngs(const std::filesystem::path& dir);

}  // namespace flatcolor
