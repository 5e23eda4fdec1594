#include "flatcolor/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <ostream>

#include "CLI11.hpp"

#include "flatcolor/config.hpp"
#include "flatcolor/dataset.hpp"
#include "flatcolor/parallel.hpp"
#include "flatcolor/png_io.hpp"
#include "flatcolor/synthbench.hpp"

namespace flatcolor {

namespace {

namespace fs = std::filesystem;

// Shared flags. A flag given on the command line overrides the config file.
struct CommonFlags {
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    int jobs = 1;
    int size = 0;
    CLI::Option* out_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* jobs_opt = nullptr;
    CLI::Option* size_opt = nullptr;
};

void add_common(CLI::App* cmd, CommonFlags& f, const char* size_help) {
    cmd->add_option("--config", f.config, "JSON config file")->check(CLI::ExistingFile);
    f.out_opt = cmd->add_option("--out", f.out, "output directory");
    f.seed_opt = cmd->add_option("--seed", f.seed, "master seed");
    f.jobs_opt = cmd->add_option("--jobs", f.jobs, "worker threads")->check(CLI::PositiveNumber);
    f.size_opt = cmd->add_option("--size", f.size, size_help)->check(CLI::PositiveNumber);
}

Json base_config(const CommonFlags& f) {
    return f.config.empty() ? Json::object() : load_json(f.config);
}

fs::path config_dir(const CommonFlags& f) {
    return f.config.empty() ? fs::path{} : fs::path(f.config).parent_path();
}

void echo(std::ostream& out, const Json& cfg) { out << "config " << cfg.dump() << '\n'; }

std::string item_name(const char* pattern, int i) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, i);
    return buf;
}

Raster truth_to_raster(const GroundTruth& truth) {
    Raster img(truth.width(), truth.height());
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const auto v = static_cast<std::uint8_t>(static_cast<int>(truth.cells()[i]) * 50);
        img.cells()[i] = Rgb{v, v, v};
    }
    return img;
}

GroundTruth raster_to_truth(const Raster& img) {
    GroundTruth truth(img.width(), img.height(), TruthLabel::Background);
    for (std::size_t i = 0; i < img.size(); ++i) {
        const int v = (img.cells()[i].r + 25) / 50;
        if (v > static_cast<int>(TruthLabel::Line)) {
            throw IoError("truth image has an unknown label value");
        }
        truth.cells()[i] = static_cast<TruthLabel>(v);
    }
    return truth;
}

// color: rule-colour each input file.
int cmd_color(const std::vector<std::string>& inputs, const CommonFlags& f, std::ostream& out,
              std::ostream& err) {
    Json cfg = base_config(f);
    if (!inputs.empty()) {
        cfg["inputs"] = inputs;
    }
    if (*f.out_opt || !cfg.contains("out")) {
        cfg["out"] = f.out.empty() ? std::string("colored") : f.out;
    }
    if (*f.jobs_opt || !cfg.contains("jobs")) {
        cfg["jobs"] = f.jobs;
    }
    const Json rules = cfg.contains("rules") ? cfg.at("rules") : Json::object();
    const RuleParams params = rule_params_from_json(rules);
    const ColorScheme scheme = color_scheme_from_json(rules);
    cfg["rules"] = rules_to_json(params, scheme);
    if (!cfg.contains("inputs") || cfg.at("inputs").empty()) {
        throw ConfigError("color needs at least one input file");
    }
    echo(out, cfg);

    const auto files = cfg.at("inputs").get<std::vector<std::string>>();
    const fs::path out_dir = cfg.at("out").get<std::string>();
    fs::create_directories(out_dir);
    std::vector<std::string> lines(files.size());
    std::vector<int> codes(files.size(), kExitOk);
    parallel_for(files.size(), cfg.at("jobs").get<int>(), [&](std::size_t i) {
        const fs::path in(files[i]);
        try {
            const auto result = rule_color(read_png(in), params, scheme);
            write_png(out_dir / (in.stem().string() + "_colored.png"), result.colored);
            if (result.report.conforms()) {
                lines[i] = in.string() + ": conforms";
            } else {
                lines[i] = in.string() + ": warning: " + result.report.summary();
                codes[i] = kExitRejected;
            }
        } catch (const IoError& e) {
            lines[i] = in.string() + ": error: " + e.what();
            codes[i] = kExitIoError;
        }
    });
    int code = kExitOk;
    for (std::size_t i = 0; i < files.size(); ++i) {
        (codes[i] == kExitIoError ? err : out) << lines[i] << '\n';
        if (codes[i] == kExitIoError) {
            code = kExitIoError;
        } else if (codes[i] == kExitRejected && code == kExitOk) {
            code = kExitRejected;
        }
    }
    return code;
}

struct BuildFlags {
    int target = 0;
    int flowers = 0;
    int creatures = 0;
    CLI::Option* target_opt = nullptr;
    CLI::Option* flowers_opt = nullptr;
    CLI::Option* creatures_opt = nullptr;
};

// build: originals -> seed pairs -> expansion -> export.
int cmd_build(const BuildFlags& b, const CommonFlags& f, std::ostream& out, std::ostream& err) {
    Json j = base_config(f);
    if (*f.seed_opt) {
        j["master_seed"] = f.seed;
    }
    if (*f.jobs_opt) {
        j["jobs"] = f.jobs;
    }
    if (*f.size_opt) {
        j["export_size"] = f.size;
    }
    if (*b.target_opt) {
        j["target_count"] = b.target;
    }
    if (*b.flowers_opt || *b.creatures_opt) {
        Json g = j.contains("generate") ? j.at("generate") : Json::object();
        if (*b.flowers_opt) {
            g["flowers"] = b.flowers;
        }
        if (*b.creatures_opt) {
            g["creatures"] = b.creatures;
        }
        j["generate"] = g;
    }
    if (f.out.empty()) {
        throw ConfigError("build needs --out");
    }
    PlanConfig cfg = plan_from_json(j, config_dir(f));
    const Json resolved = to_json(cfg);
    echo(out, resolved);
    for (const auto& w : plan_warnings(cfg.plan)) {
        err << "warning: " << w << '\n';
    }

    DatasetPlan& plan = cfg.plan;
    plan.originals = load_originals(cfg.sources, plan.canvas);
    SeedResult seeds;
    if (!plan.originals.empty()) {
        seeds = rule_color_originals(plan.originals, plan.rule_params, plan.scheme, plan.canvas);
    }
    if (cfg.sources.manual) {
        const auto& m = *cfg.sources.manual;
        auto manual = ingest_manual_pairs(list_pngs(m.a_dir), list_pngs(m.b_dir), plan.scheme, m.line_slack,
                                          m.class_tag);
        seeds.pairs.insert(seeds.pairs.end(), manual.pairs.begin(), manual.pairs.end());
        seeds.rejects.insert(seeds.rejects.end(), manual.rejects.begin(), manual.rejects.end());
    }
    for (const auto& r : seeds.rejects) {
        err << "reject " << r.id << ": " << r.reason << '\n';
    }
    if (seeds.pairs.empty()) {
        err << "error: no usable seed drawings\n";
        return kExitRejected;
    }

    std::vector<ABPair> pairs;
    try {
        pairs = dedup(build_dataset(plan, seeds.pairs));
    } catch (const PlanError& e) {
        err << "error: " << e.what() << '\n';
        return kExitRejected;
    }
    const fs::path out_dir(f.out);
    const auto manifest = export_dataset(pairs, out_dir, plan.export_size, plan.split, plan.master_seed, plan.jobs);
    std::ofstream(out_dir / "config.json") << resolved.dump(2) << '\n';
    out << "seeds " << seeds.pairs.size() << '\n'
        << "rejects " << seeds.rejects.size() << '\n'
        << "generated " << pairs.size() - seeds.pairs.size() << '\n'
        << "exported " << manifest.records.size() << '\n';
    return kExitOk;
}

struct GenFlags {
    int n = 100;
    double fraction = 0.8;
    CLI::Option* n_opt = nullptr;
    CLI::Option* fraction_opt = nullptr;
};

// gen: synthetic corpus with truth maps and a flags sidecar.
int cmd_gen(const GenFlags& g, const CommonFlags& f, std::ostream& out) {
    Json cfg = base_config(f);
    auto set = [&](const char* key, auto value, bool given) {
        if (given || !cfg.contains(key)) {
            cfg[key] = value;
        }
    };
    set("n", g.n, bool(*g.n_opt));
    set("fraction", g.fraction, bool(*g.fraction_opt));
    set("seed", f.seed, bool(*f.seed_opt));
    set("canvas", f.size == 0 ? 400 : f.size, bool(*f.size_opt));
    set("out", f.out.empty() ? std::string("corpus") : f.out, bool(*f.out_opt));
    set("jobs", f.jobs, bool(*f.jobs_opt));
    const int n = cfg.at("n").get<int>();
    const double frac = cfg.at("fraction").get<double>();
    if (n < 1) {
        throw ConfigError("n must be positive");
    }
    if (!(frac >= 0.0 && frac <= 1.0)) {
        throw ConfigError("fraction must be in [0, 1]");
    }
    echo(out, cfg);

    const auto corpus = gen_corpus(n, frac, cfg.at("seed").get<std::uint64_t>(), cfg.at("canvas").get<int>());
    const fs::path dir = cfg.at("out").get<std::string>();
    fs::create_directories(dir);
    parallel_for(corpus.size(), cfg.at("jobs").get<int>(), [&](std::size_t i) {
        write_png(dir / item_name("item_%04d.png", static_cast<int>(i)), corpus[i].drawing.art);
        write_png(dir / item_name("item_%04d_truth.png", static_cast<int>(i)), truth_to_raster(corpus[i].drawing.truth));
    });
    std::ofstream sidecar(dir / "corpus.jsonl");
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        Json rec;
        rec["file"] = item_name("item_%04d.png", static_cast<int>(i));
        rec["truth"] = item_name("item_%04d_truth.png", static_cast<int>(i));
        rec["id"] = corpus[i].id;
        rec["intended_conforming"] = corpus[i].intended_conforming;
        rec["family"] = std::string(to_string(corpus[i].family));
        sidecar << rec.dump() << '\n';
    }
    if (!sidecar) {
        throw IoError("cannot write " + (dir / "corpus.jsonl").string());
    }
    out << "items " << corpus.size() << '\n';
    return kExitOk;
}

ViolationFamily family_from_string(const std::string& s) {
    for (auto fam : {ViolationFamily::None, ViolationFamily::Gaps, ViolationFamily::CropSplit, ViolationFamily::Daisy}) {
        if (to_string(fam) == s) {
            return fam;
        }
    }
    throw ConfigError("unknown violation family '" + s + "'");
}

Json report_to_json(const EvalReport& r) {
    Json j;
    j["items"] = r.items;
    j["intended_conforming"] = r.intended_conforming;
    j["conformance_rate"] = r.conformance_rate;
    j["mean_accuracy"] = r.mean_accuracy;
    j["families"] = Json::object();
    for (const auto& [fam, s] : r.families) {
        j["families"][std::string(to_string(fam))] = {
            {"count", s.count}, {"passed_check", s.passed_check}, {"mean_accuracy", s.mean_accuracy}};
    }
    return j;
}

// eval: conformance and accuracy over a generated corpus directory.
int cmd_eval(const std::string& dir_arg, const CommonFlags& f, std::ostream& out) {
    Json cfg = base_config(f);
    if (!dir_arg.empty()) {
        cfg["dir"] = dir_arg;
    }
    if (*f.out_opt) {
        cfg["out"] = f.out;
    }
    const Json rules = cfg.contains("rules") ? cfg.at("rules") : Json::object();
    const RuleParams params = rule_params_from_json(rules);
    const ColorScheme scheme = color_scheme_from_json(rules);
    cfg["rules"] = rules_to_json(params, scheme);
    if (!cfg.contains("dir")) {
        throw ConfigError("eval needs a corpus directory");
    }
    echo(out, cfg);

    const fs::path dir = cfg.at("dir").get<std::string>();
    std::ifstream sidecar(dir / "corpus.jsonl");
    if (!sidecar) {
        throw IoError("no corpus.jsonl in " + dir.string());
    }
    std::vector<CorpusItem> corpus;
    std::string line;
    while (std::getline(sidecar, line)) {
        if (line.empty()) {
            continue;
        }
        const Json rec = Json::parse(line);
        CorpusItem item;
        item.id = rec.value("id", rec.at("file").get<std::string>());
        item.drawing.art = read_png(dir / rec.at("file").get<std::string>());
        item.drawing.truth = raster_to_truth(read_png(dir / rec.at("truth").get<std::string>()));
        item.intended_conforming = rec.at("intended_conforming").get<bool>();
        item.family = family_from_string(rec.at("family").get<std::string>());
        corpus.push_back(std::move(item));
    }
    if (corpus.empty()) {
        throw IoError("corpus in " + dir.string() + " is empty");
    }
    const Json report = report_to_json(evaluate_corpus(corpus, params, scheme));
    out << report.dump(2) << '\n';
    if (cfg.contains("out")) {
        const fs::path o = cfg.at("out").get<std::string>();
        fs::create_directories(o);
        std::ofstream(o / "report.json") << report.dump(2) << '\n';
    }
    return kExitOk;
}

// check: static validation of pipeline catalogs.
int cmd_check(const std::vector<std::string>& catalogs, const std::string& tag, const CommonFlags& f,
              std::ostream& out) {
    std::vector<std::pair<std::string, std::vector<PipelineSpec>>> todo;
    if (!catalogs.empty()) {
        for (const auto& path : catalogs) {
            auto cat = catalog_from_json(load_json(path));
            for (auto& p : cat) {
                p.class_tag = class_tag_from_string(tag);
            }
            todo.emplace_back(path, std::move(cat));
        }
    } else {
        const PlanConfig cfg = plan_from_json(base_config(f), config_dir(f));
        for (const auto& [t, cat] : cfg.plan.catalogs) {
            todo.emplace_back(std::string(to_string(t)), cat);
        }
    }
    Json echoed = Json::object();
    for (const auto& [name, cat] : todo) {
        echoed[name] = catalog_to_json(cat)["pipelines"];
    }
    echo(out, Json{{"catalogs", echoed}});

    int issues = 0;
    for (const auto& [name, cat] : todo) {
        for (const auto& issue : validate_catalog(cat)) {
            const auto& p = cat.at(static_cast<std::size_t>(issue.pipeline));
            out << name << ": " << (p.name.empty() ? "#" + std::to_string(issue.pipeline) : p.name) << ": "
                << to_string(issue.kind) << ": " << issue.message << '\n';
            ++issues;
        }
        out << name << ": " << cat.size() << " pipelines checked\n";
    }
    return issues == 0 ? kExitOk : kExitRejected;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Rule-based line-art colouring and AB-pair dataset tool", "flatcolor"};
    app.require_subcommand(1);

    CommonFlags color_f, build_f, gen_f, eval_f, check_f;
    std::vector<std::string> inputs;
    auto* color = app.add_subcommand("color", "rule-colour line-art PNGs");
    add_common(color, color_f, "unused");
    color->add_option("inputs", inputs, "input PNG files");

    BuildFlags bflags;
    auto* build = app.add_subcommand("build", "build an AB-pair dataset");
    add_common(build, build_f, "exported half-image size");
    bflags.target_opt = build->add_option("--target", bflags.target, "number of pairs");
    bflags.flowers_opt = build->add_option("--flowers", bflags.flowers, "generated flower originals");
    bflags.creatures_opt = build->add_option("--creatures", bflags.creatures, "generated creature originals");

    GenFlags gflags;
    auto* gen = app.add_subcommand("gen", "generate a synthetic corpus");
    add_common(gen, gen_f, "canvas size");
    gflags.n_opt = gen->add_option("--n", gflags.n, "number of drawings");
    gflags.fraction_opt = gen->add_option("--fraction", gflags.fraction, "conforming fraction");

    std::string eval_dir;
    auto* eval = app.add_subcommand("eval", "evaluate a generated corpus");
    add_common(eval, eval_f, "unused");
    eval->add_option("dir", eval_dir, "corpus directory");

    std::vector<std::string> catalogs;
    std::string tag = "flower";
    auto* check = app.add_subcommand("check", "validate pipeline catalogs");
    add_common(check, check_f, "unused");
    check->add_option("--catalog", catalogs, "catalog JSON file(s)");
    check->add_option("--class", tag, "class tag for catalog files")->check(CLI::IsMember({"flower", "creature"}));

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitIoError;
    }

    try {
        if (*color) {
            return cmd_color(inputs, color_f, out, err);
        }
        if (*build) {
            return cmd_build(bflags, build_f, out, err);
        }
        if (*gen) {
            return cmd_gen(gflags, gen_f, out);
        }
        if (*eval) {
            return cmd_eval(eval_dir, eval_f, out);
        }
        return cmd_check(catalogs, tag, check_f, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
    } catch (const IoError& e) {
        err << "io error: " << e.what() << '\n';
    } catch (const Json::exception& e) {
        err << "config error: " << e.what() << '\n';
    } catch (const std::filesystem::filesystem_error& e) {
        err << "io error: " << e.what() << '\n';
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
    }
    return kExitIoError;
}

}  // namespace flatcolor
