#include "flatcolor/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "flatcolor/rng.hpp"
#include "flatcolor/synthbench.hpp"

namespace flatcolor {

namespace {

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
    if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) {
        return fallback;
    }
    try {
        return j.at(key).get<T>();
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
}

Rgb color_or(const Json& j, const char* key, Rgb fallback) {
    if (!j.is_object() || !j.contains(key)) {
        return fallback;
    }
    try {
        return parse_hex_color(j.at(key).get<std::string>());
    } catch (const std::exception& e) {
        throw ConfigError(std::string("colour '") + key + "': " + e.what());
    }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() || base.empty() ? path : base / path;
}

}  // namespace

Json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config " + path.string());
    }
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

RuleParams rule_params_from_json(const Json& j) {
    RuleParams p;
    p.eye_distance_threshold = get_or(j, "eye_distance_threshold", p.eye_distance_threshold);
    p.min_component_area = get_or(j, "min_component_area", p.min_component_area);
    p.binarize_threshold = get_or(j, "binarize_threshold", p.binarize_threshold);
    const int conn = get_or(j, "connectivity", 4);
    if (conn != 4 && conn != 8) {
        throw ConfigError("connectivity must be 4 or 8");
    }
    p.connectivity = conn == 4 ? Connectivity::Four : Connectivity::Eight;
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return p;
}

ColorScheme color_scheme_from_json(const Json& j) {
    ColorScheme s;
    if (j.is_object() && j.contains("colors")) {
        const Json& c = j.at("colors");
        s.body = color_or(c, "body", s.body);
        s.appendage = color_or(c, "appendage", s.appendage);
        s.eye = color_or(c, "eye", s.eye);
        s.line = color_or(c, "line", s.line);
        s.background = color_or(c, "background", s.background);
    }
    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return s;
}

Json rules_to_json(const RuleParams& params, const ColorScheme& scheme) {
    Json j;
    j["eye_distance_threshold"] = params.eye_distance_threshold;
    j["min_component_area"] = params.min_component_area;
    j["connectivity"] = params.connectivity == Connectivity::Four ? 4 : 8;
    j["binarize_threshold"] = params.binarize_threshold;
    j["colors"] = {{"body", to_hex_color(scheme.body)},
                   {"appendage", to_hex_color(scheme.appendage)},
                   {"eye", to_hex_color(scheme.eye)},
                   {"line", to_hex_color(scheme.line)},
                   {"background", to_hex_color(scheme.background)}};
    return j;
}

Transform transform_from_json(const Json& j) {
    const auto kind = get_or<std::string>(j, "kind", "");
    Transform t;
    if (kind == "affine") {
        AffineSpec s;
        s.tx = get_or(j, "tx", s.tx);
        s.ty = get_or(j, "ty", s.ty);
        s.rotate_deg = get_or(j, "rotate", s.rotate_deg);
        s.sx = get_or(j, "sx", s.sx);
        s.sy = get_or(j, "sy", s.sy);
        s.skew_deg = get_or(j, "skew", s.skew_deg);
        s.mirror_x = get_or(j, "mirror_x", s.mirror_x);
        s.mirror_y = get_or(j, "mirror_y", s.mirror_y);
        s.fill = color_or(j, "fill", s.fill);
        t = s;
    } else if (kind == "radial_warp") {
        t = RadialWarpSpec{get_or(j, "exponent", 3.0)};
    } else if (kind == "elastic") {
        ElasticSpec s;
        t = ElasticSpec{get_or(j, "alpha", s.alpha), get_or(j, "sigma", s.sigma),
                        get_or<std::uint64_t>(j, "seed", 0)};
    } else if (kind == "gaps") {
        GapSpec s;
        t = GapSpec{get_or(j, "stroke_count", s.stroke_count), get_or(j, "stroke_width", s.stroke_width),
                    get_or(j, "stroke_length", s.stroke_length), get_or<std::uint64_t>(j, "seed", 0)};
    } else if (kind == "crop") {
        t = CropSpec{Rect{get_or(j, "x", 0), get_or(j, "y", 0), get_or(j, "w", 0), get_or(j, "h", 0)},
                     get_or(j, "resize_back", true)};
    } else {
        throw ConfigError("unknown transform kind '" + kind + "'");
    }
    try {
        validate_transform(t);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return t;
}

Json to_json(const Transform& t) {
    Json j;
    j["kind"] = std::string(to_string(kind_of(t)));
    if (const auto* s = std::get_if<AffineSpec>(&t)) {
        j["tx"] = s->tx;
        j["ty"] = s->ty;
        j["rotate"] = s->rotate_deg;
        j["sx"] = s->sx;
        j["sy"] = s->sy;
        j["skew"] = s->skew_deg;
        j["mirror_x"] = s->mirror_x;
        j["mirror_y"] = s->mirror_y;
        j["fill"] = to_hex_color(s->fill);
    } else if (const auto* r = std::get_if<RadialWarpSpec>(&t)) {
        j["exponent"] = r->exponent;
    } else if (const auto* e = std::get_if<ElasticSpec>(&t)) {
        j["alpha"] = e->alpha;
        j["sigma"] = e->sigma;
        j["seed"] = e->seed;
    } else if (const auto* g = std::get_if<GapSpec>(&t)) {
        j["stroke_count"] = g->stroke_count;
        j["stroke_width"] = g->stroke_width;
        j["stroke_length"] = g->stroke_length;
        j["seed"] = g->seed;
    } else if (const auto* c = std::get_if<CropSpec>(&t)) {
        j["x"] = c->rect.x;
        j["y"] = c->rect.y;
        j["w"] = c->rect.w;
        j["h"] = c->rect.h;
        j["resize_back"] = c->resize_back;
    }
    return j;
}

PipelineSpec pipeline_from_json(const Json& j) {
    PipelineSpec p;
    p.name = get_or<std::string>(j, "name", "");
    try {
        p.class_tag = class_tag_from_string(get_or<std::string>(j, "class_tag", "flower"));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    p.seed = get_or<std::uint64_t>(j, "seed", 0);
    if (!j.contains("steps") || !j.at("steps").is_array()) {
        throw ConfigError("pipeline '" + p.name + "' needs a steps array");
    }
    for (const auto& step : j.at("steps")) {
        p.steps.push_back(transform_from_json(step));
    }
    return p;
}

Json to_json(const PipelineSpec& p) {
    Json j;
    j["name"] = p.name;
    j["class_tag"] = std::string(to_string(p.class_tag));
    j["seed"] = p.seed;
    j["steps"] = Json::array();
    for (const auto& s : p.steps) {
        j["steps"].push_back(to_json(s));
    }
    return j;
}

std::vector<PipelineSpec> catalog_from_json(const Json& j) {
    const Json& list = j.is_object() && j.contains("pipelines") ? j.at("pipelines") : j;
    if (!list.is_array()) {
        throw ConfigError("catalog must be an array of pipelines");
    }
    std::vector<PipelineSpec> out;
    for (const auto& p : list) {
        out.push_back(pipeline_from_json(p));
    }
    return out;
}

Json catalog_to_json(const std::vector<PipelineSpec>& catalog) {
    Json j;
    j["pipelines"] = Json::array();
    for (const auto& p : catalog) {
        j["pipelines"].push_back(to_json(p));
    }
    return j;
}

PlanConfig plan_from_json(const Json& j, const std::filesystem::path& base_dir) {
    if (!j.is_object()) {
        throw ConfigError("plan must be a JSON object");
    }
    PlanConfig cfg;
    DatasetPlan& plan = cfg.plan;
    const Json rules = j.contains("rules") ? j.at("rules") : Json::object();
    plan.rule_params = rule_params_from_json(rules);
    plan.scheme = color_scheme_from_json(rules);
    plan.target_count = get_or(j, "target_count", plan.target_count);
    plan.split = get_or(j, "split", plan.split);
    plan.export_size = get_or(j, "export_size", plan.export_size);
    plan.master_seed = get_or(j, "master_seed", plan.master_seed);
    plan.allow_out_of_range = get_or(j, "allow_out_of_range", plan.allow_out_of_range);
    plan.canvas = get_or(j, "canvas", plan.canvas);
    plan.jobs = get_or(j, "jobs", plan.jobs);
    if (!(plan.split >= 0.0 && plan.split <= 1.0)) {
        throw ConfigError("split must be in [0, 1]");
    }
    if (plan.export_size < 1 || plan.canvas < 16 || plan.target_count < 1) {
        throw ConfigError("export_size, canvas and target_count must be positive");
    }

    try {
        if (j.contains("originals")) {
            for (const auto& o : j.at("originals")) {
                cfg.sources.dirs.push_back({resolve(base_dir, o.at("dir").get<std::string>()),
                                            class_tag_from_string(get_or<std::string>(o, "class_tag", "flower"))});
            }
        }
        if (j.contains("generate")) {
            const Json& g = j.at("generate");
            cfg.sources.generate = PlanSources::Generate{get_or(g, "flowers", 0), get_or(g, "creatures", 0),
                                                         get_or<std::uint64_t>(g, "seed", 1)};
        }
        if (j.contains("manual_pairs")) {
            const Json& m = j.at("manual_pairs");
            cfg.sources.manual = PlanSources::Manual{
                resolve(base_dir, m.at("a_dir").get<std::string>()), resolve(base_dir, m.at("b_dir").get<std::string>()),
                class_tag_from_string(get_or<std::string>(m, "class_tag", "creature")),
                get_or<std::int64_t>(m, "line_slack", 200)};
        }
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("plan sources: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    for (ClassTag tag : {ClassTag::Flower, ClassTag::Creature}) {
        const std::string key(to_string(tag));
        const Json cats = j.contains("catalogs") ? j.at("catalogs") : Json::object();
        if (!cats.contains(key) || (cats.at(key).is_string() && cats.at(key).get<std::string>() == "default")) {
            plan.catalogs[tag] = default_catalog(tag, plan.canvas);
        } else if (cats.at(key).is_string()) {
            plan.catalogs[tag] = catalog_from_json(load_json(resolve(base_dir, cats.at(key).get<std::string>())));
        } else {
            plan.catalogs[tag] = catalog_from_json(cats.at(key));
        }
        for (auto& p : plan.catalogs[tag]) {
            p.class_tag = tag;
        }
    }
    return cfg;
}

Json to_json(const PlanConfig& cfg) {
    const DatasetPlan& plan = cfg.plan;
    Json j;
    j["target_count"] = plan.target_count;
    j["split"] = plan.split;
    j["export_size"] = plan.export_size;
    j["master_seed"] = plan.master_seed;
    j["allow_out_of_range"] = plan.allow_out_of_range;
    j["canvas"] = plan.canvas;
    j["jobs"] = plan.jobs;
    j["rules"] = rules_to_json(plan.rule_params, plan.scheme);
    if (!cfg.sources.dirs.empty()) {
        j["originals"] = Json::array();
        for (const auto& d : cfg.sources.dirs) {
            j["originals"].push_back({{"dir", std::filesystem::absolute(d.dir).string()},
                                      {"class_tag", std::string(to_string(d.class_tag))}});
        }
    }
    if (cfg.sources.generate) {
        j["generate"] = {{"flowers", cfg.sources.generate->flowers},
                         {"creatures", cfg.sources.generate->creatures},
                         {"seed", cfg.sources.generate->seed}};
    }
    if (cfg.sources.manual) {
        const auto& m = *cfg.sources.manual;
        j["manual_pairs"] = {{"a_dir", std::filesystem::absolute(m.a_dir).string()},
                             {"b_dir", std::filesystem::absolute(m.b_dir).string()},
                             {"class_tag", std::string(to_string(m.class_tag))},
                             {"line_slack", m.line_slack}};
    }
    j["catalogs"] = Json::object();
    for (const auto& [tag, catalog] : plan.catalogs) {
        j["catalogs"][std::string(to_string(tag))] = catalog_to_json(catalog)["pipelines"];
    }
    return j;
}

std::vector<std::filesystem::path> list_pngs(const std::filesystem::path& dir) {
    std::error_code ec;
    std::vector<std::filesystem::path> out;
    for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
        if (entry.is_regular_file() && entry.path().extension() == ".png") {
            out.push_back(entry.path());
        }
    }
    if (ec) {
        throw ConfigError("cannot list " + dir.string() + ": " + ec.message());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Drawing> load_originals(const PlanSources& sources, int canvas) {
    std::vector<Drawing> out;
    if (sources.generate) {
        const auto& g = *sources.generate;
        char name[32];
        for (int i = 0; i < g.flowers; ++i) {
            std::snprintf(name, sizeof name, "flower_%03d", i);
            out.push_back({name, ClassTag::Flower,
                           gen_random_flower(derive_seed(g.seed, {0, static_cast<std::uint64_t>(i)}), canvas).art,
                           {}});
        }
        for (int i = 0; i < g.creatures; ++i) {
            std::snprintf(name, sizeof name, "creature_%03d", i);
            out.push_back({name, ClassTag::Creature,
                           gen_random_creature(derive_seed(g.seed, {1, static_cast<std::uint64_t>(i)}), canvas).art,
                           {}});
        }
    }
    for (const auto& d : sources.dirs) {
        for (const auto& path : list_pngs(d.dir)) {
            out.push_back({path.stem().string(), d.class_tag, std::nullopt, path});
        }
    }
    return out;
}

}  // namespace flatcolor
