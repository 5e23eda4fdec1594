#include "flatcolor/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <unordered_set>

#include "json.hpp"

#include "flatcolor/hash.hpp"
#include "flatcolor/parallel.hpp"
#include "flatcolor/png_io.hpp"
#include "flatcolor/rng.hpp"

namespace flatcolor {

std::vector<std::string> pair_violations(const ABPair& pair, const ColorScheme& scheme, std::int64_t line_slack) {
    std::vector<std::string> out;
    if (!pair.a.same_shape(pair.b)) {
        out.push_back("dimension mismatch");
        return out;
    }
    const auto palette = scheme.palette();
    for (const Rgb& c : pair.b.cells()) {
        if (std::find(palette.begin(), palette.end(), c) == palette.end()) {
            out.push_back("B contains off-palette colour " + to_hex_color(c));
            break;
        }
    }
    const bool gapped = std::any_of(pair.provenance.begin(), pair.provenance.end(), [](const TransformRecord& r) {
        return kind_of(r.transform) == TransformKind::Gaps;
    });
    const auto mask = binarize(pair.a);
    std::int64_t mismatches = 0;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        const bool a_line = mask.cells()[i] == Ink::Line;
        const bool b_line = pair.b.cells()[i] == scheme.line;
        if (a_line != b_line && !(gapped && !a_line)) {
            ++mismatches;
        }
    }
    if (mismatches > line_slack) {
        out.push_back("line mask of A disagrees with B's line pixels at " + std::to_string(mismatches) + " pixels");
    }
    return out;
}

std::uint64_t content_hash(const ABPair& pair) {
    return fnv1a(pair.b, fnv1a(pair.a));
}

SeedResult rule_color_originals(const std::vector<Drawing>& drawings, const RuleParams& params,
                                const ColorScheme& scheme, int canvas) {
    if (drawings.empty()) {
        throw std::invalid_argument("rule_color_originals: no drawings");
    }
    SeedResult result;
    for (const auto& d : drawings) {
        Raster img(1, 1);
        try {
            img = d.image ? *d.image : read_png(d.path);
        } catch (const IoError& e) {
            result.rejects.push_back({d.id, std::nullopt, e.what()});
            continue;
        }
        if (canvas > 0 && (img.width() != canvas || img.height() != canvas)) {
            img = resize_nearest(img, canvas, canvas);
        }
        img = rebinarize(img, params.binarize_threshold);
        auto colored = rule_color(img, params, scheme);
        if (!colored.report.conforms()) {
            result.rejects.push_back({d.id, colored.report, colored.report.summary()});
            continue;
        }
        result.pairs.push_back(ABPair{std::move(img), std::move(colored.colored), d.id, {}, d.class_tag});
    }
    return result;
}

SeedResult ingest_manual_pairs(const std::vector<std::filesystem::path>& a_files,
                               const std::vector<std::filesystem::path>& b_files, const ColorScheme& scheme,
                               std::int64_t line_slack, ClassTag class_tag) {
    if (a_files.size() != b_files.size()) {
        throw std::invalid_argument("manual pairs: " + std::to_string(a_files.size()) + " A files but " +
                                    std::to_string(b_files.size()) + " B files");
    }
    std::map<std::string, std::filesystem::path> b_by_stem;
    for (const auto& b : b_files) {
        b_by_stem[b.stem().string()] = b;
    }
    std::vector<std::filesystem::path> sorted_a = a_files;
    std::sort(sorted_a.begin(), sorted_a.end());

    SeedResult result;
    for (const auto& a_path : sorted_a) {
        const std::string id = a_path.stem().string();
        const auto hit = b_by_stem.find(id);
        if (hit == b_by_stem.end()) {
            result.rejects.push_back({id, std::nullopt, "no B file named " + id});
            continue;
        }
        try {
            ABPair pair{read_png(a_path), read_png(hit->second), "manual:" + id, {}, class_tag};
            const auto problems = pair_violations(pair, scheme, line_slack);
            if (!problems.empty()) {
                result.rejects.push_back({id, std::nullopt, problems.front()});
                continue;
            }
            pair.a = rebinarize(pair.a);
            result.pairs.push_back(std::move(pair));
        } catch (const IoError& e) {
            result.rejects.push_back({id, std::nullopt, e.what()});
        }
    }
    return result;
}

namespace {

PipelineSpec pipeline(std::string name, ClassTag tag, std::vector<Transform> steps) {
    return PipelineSpec{std::move(steps), tag, 0, std::move(name)};
}

AffineSpec rotate(double deg, double scale = 1.0) {
    AffineSpec s;
    s.rotate_deg = deg;
    s.sx = s.sy = scale;
    return s;
}

AffineSpec mirror_x() {
    AffineSpec s;
    s.mirror_x = true;
    return s;
}

AffineSpec mirror_y() {
    AffineSpec s;
    s.mirror_y = true;
    return s;
}

AffineSpec skew(double deg, double tx = 0.0, double ty = 0.0) {
    AffineSpec s;
    s.skew_deg = deg;
    s.tx = tx;
    s.ty = ty;
    return s;
}

}  // namespace

std::vector<PipelineSpec> default_catalog(ClassTag tag, int canvas) {
    if (canvas < 16) {
        throw std::invalid_argument("default_catalog: canvas too small");
    }
    // Parameters are tuned at 400x400 and scaled to the canvas.
    const double k = canvas / 400.0;
    const auto px = [k](int v) { return std::max(1, static_cast<int>(std::lround(v * k))); };
    const auto crop = [&](int x, int y, int w, int h) {
        const int x0 = static_cast<int>(std::lround(x * k));
        const int y0 = static_cast<int>(std::lround(y * k));
        const int x1 = x + w == 400 ? canvas : static_cast<int>(std::lround((x + w) * k));
        const int y1 = y + h == 400 ? canvas : static_cast<int>(std::lround((y + h) * k));
        return CropSpec{Rect{x0, y0, x1 - x0, y1 - y0}, true};
    };
    const auto gap = [&](int count, int width, int length) { return GapSpec{count, px(width), px(length), 0}; };
    const auto elastic = [&](double alpha, double sigma) { return ElasticSpec{alpha * k, sigma * k, 0}; };
    const GapSpec gaps = gap(2, 5, 30);
    const ElasticSpec soft = elastic(34.0, 4.0);
    if (tag == ClassTag::Flower) {
        const auto f = ClassTag::Flower;
        return {
            pipeline("mirror", f, {mirror_x()}),
            pipeline("daisy", f, {RadialWarpSpec{3.0}}),
            pipeline("gaps", f, {gaps}),
            pipeline("split_band", f, {crop(0, 130, 400, 140)}),
            pipeline("elastic", f, {soft}),
            pipeline("rotate_shrink", f, {rotate(30.0, 0.9)}),
            pipeline("daisy_gaps", f, {RadialWarpSpec{3.0}, gaps}),
            pipeline("corner_crop", f, {crop(0, 0, 260, 260)}),
            pipeline("skew_shift", f, {skew(15.0, 20.0 * k, -10.0 * k)}),
            pipeline("soft_daisy", f, {RadialWarpSpec{2.0}, mirror_y()}),
            pipeline("elastic_mirror", f, {soft, mirror_y()}),
            pipeline("rotate_90", f, {rotate(90.0)}),
            pipeline("side_crop_mirror", f, {crop(100, 0, 300, 400), mirror_x()}),
            pipeline("gaps_elastic", f, {gap(3, 4, 40), soft}),
            pipeline("zoom", f, {rotate(-45.0, 1.3)}),
            pipeline("shrink_gaps", f, {rotate(0.0, 0.75), gaps}),
        };
    }
    const auto c = ClassTag::Creature;
    return {
        pipeline("mirror", c, {mirror_x()}),
        pipeline("elastic", c, {soft}),
        pipeline("gaps", c, {gaps}),
        pipeline("split_band", c, {crop(0, 160, 400, 80)}),
        pipeline("tilt", c, {rotate(15.0)}),
        pipeline("tilt_shrink", c, {rotate(-20.0, 0.9)}),
        pipeline("skew", c, {skew(12.0)}),
        pipeline("strong_elastic", c, {elastic(60.0, 6.0)}),
        pipeline("zoom_crop", c, {crop(50, 50, 300, 300)}),
        pipeline("mirror_elastic", c, {mirror_x(), soft}),
        pipeline("tilt_gaps", c, {rotate(10.0), gaps}),
        pipeline("elastic_gaps", c, {soft, gap(3, 4, 40)}),
        pipeline("tilt_zoom", c, {rotate(8.0), rotate(0.0, 1.2)}),
        pipeline("shift_shrink", c, {AffineSpec{30.0 * k, 20.0 * k, 0.0, 0.85, 0.85, 0.0, false, false, kWhite}}),
        pipeline("skew_elastic", c, {skew(-10.0), soft}),
        pipeline("mirror_tilt", c, {mirror_x(), rotate(-12.0)}),
    };
}

std::vector<std::string> plan_warnings(const DatasetPlan& plan) {
    std::vector<std::string> out;
    if (!plan.allow_out_of_range && (plan.target_count < kMinTargetPairs || plan.target_count > kMaxTargetPairs)) {
        out.push_back("target_count " + std::to_string(plan.target_count) + " is outside the usual " +
                      std::to_string(kMinTargetPairs) + "-" + std::to_string(kMaxTargetPairs) + " range");
    }
    return out;
}

std::vector<ABPair> dedup(std::vector<ABPair> pairs) {
    std::unordered_set<std::uint64_t> seen;
    std::vector<ABPair> out;
    out.reserve(pairs.size());
    for (auto& p : pairs) {
        if (seen.insert(content_hash(p)).second) {
            out.push_back(std::move(p));
        }
    }
    return out;
}

std::vector<ABPair> build_dataset(const DatasetPlan& plan, const std::vector<ABPair>& seeds) {
    if (seeds.empty()) {
        throw PlanError("build_dataset: no seed pairs");
    }
    for (const auto& [tag, catalog] : plan.catalogs) {
        const auto issues = validate_catalog(catalog, plan.canvas);
        if (!issues.empty()) {
            throw std::invalid_argument(std::string(to_string(tag)) + " catalog: " + issues.front().message);
        }
    }

    std::vector<ABPair> out = dedup(seeds);
    if (plan.target_count < static_cast<int>(out.size())) {
        throw PlanError("target_count " + std::to_string(plan.target_count) + " is below the " +
                        std::to_string(out.size()) + " seed pairs");
    }
    std::unordered_set<std::uint64_t> seen;
    for (const auto& p : out) {
        seen.insert(content_hash(p));
    }

    const auto catalog_for = [&](const ABPair& p) -> const std::vector<PipelineSpec>* {
        const auto it = plan.catalogs.find(p.class_tag);
        return it == plan.catalogs.end() || it->second.empty() ? nullptr : &it->second;
    };
    std::size_t round_len = 0;
    for (const auto& p : out) {
        if (const auto* cat = catalog_for(p)) {
            round_len = std::max(round_len, cat->size());
        }
    }
    const auto target = static_cast<std::size_t>(plan.target_count);
    if (out.size() < target && round_len == 0) {
        throw PlanError("no augmentation catalog applies to the seed pairs; short by " +
                        std::to_string(target - out.size()) + " pairs");
    }

    const std::size_t origins = out.size();
    const std::vector<ABPair> seed_pairs(out.begin(), out.end());
    constexpr std::size_t kMaxCycles = 256;
    std::size_t added_this_cycle = 0;
    for (std::size_t k = 0; out.size() < target; ++k) {
        if (k > 0 && k % round_len == 0) {
            if (added_this_cycle == 0 || k / round_len >= kMaxCycles) {
                throw PlanError("augmentation catalog exhausted at " + std::to_string(out.size()) +
                                " unique pairs; short by " + std::to_string(target - out.size()));
            }
            added_this_cycle = 0;
        }
        std::vector<std::optional<ABPair>> batch(origins);
        parallel_for(origins, plan.jobs, [&](std::size_t i) {
            const auto* cat = catalog_for(seed_pairs[i]);
            if (cat == nullptr) {
                return;
            }
            const auto& spec = (*cat)[k % cat->size()];
            auto pair = run_pipeline(spec, seed_pairs[i], derive_seed(plan.master_seed, {i, k}));
            if (pair_violations(pair, plan.scheme).empty()) {
                batch[i] = std::move(pair);
            }
        });
        for (auto& candidate : batch) {
            if (!candidate || out.size() >= target) {
                continue;
            }
            if (seen.insert(content_hash(*candidate)).second) {
                out.push_back(std::move(*candidate));
                ++added_this_cycle;
            }
        }
    }
    return out;
}

Raster compose_pair(const ABPair& pair, int size) {
    if (size < 1) {
        throw std::invalid_argument("export size must be >= 1");
    }
    const Raster a = rebinarize(resize_nearest(pair.a, size, size));
    const Raster b = resize_nearest(pair.b, size, size);
    Raster out(2 * size, size);
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            out.at(x, y) = a.at(x, y);
            out.at(size + x, y) = b.at(x, y);
        }
    }
    return out;
}

std::pair<Raster, Raster> split_composite(const Raster& composite) {
    if (composite.width() % 2 != 0) {
        throw std::invalid_argument("composite width must be even");
    }
    const int half = composite.width() / 2;
    return {crop_grid(composite, {0, 0, half, composite.height()}),
            crop_grid(composite, {half, 0, half, composite.height()})};
}

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string provenance_summary(const ABPair& pair) {
    if (pair.provenance.empty()) {
        return "seed";
    }
    std::string out;
    for (const auto& r : pair.provenance) {
        if (!out.empty()) {
            out += '>';
        }
        out += to_string(kind_of(r.transform));
    }
    return out;
}

Manifest export_dataset(const std::vector<ABPair>& pairs, const std::filesystem::path& out_dir, int size,
                        double train_fraction, std::uint64_t seed, int jobs) {
    if (!(train_fraction >= 0.0 && train_fraction <= 1.0)) {
        throw std::invalid_argument("split fraction must be in [0, 1]");
    }
    std::error_code ec;
    std::filesystem::create_directories(out_dir / "train", ec);
    if (!ec) {
        std::filesystem::create_directories(out_dir / "val", ec);
    }
    if (ec) {
        throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
    }

    std::vector<std::size_t> order(pairs.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    Rng rng(derive_seed(seed, {0x5711}));
    for (std::size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[rng.below(i)]);
    }
    const auto train_count = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(pairs.size())));
    std::vector<bool> is_train(pairs.size(), false);
    for (std::size_t i = 0; i < train_count; ++i) {
        is_train[order[i]] = true;
    }

    Manifest manifest;
    manifest.records.resize(pairs.size());
    parallel_for(pairs.size(), jobs, [&](std::size_t i) {
        char name[16];
        std::snprintf(name, sizeof name, "%05zu.png", i);
        const std::string split = is_train[i] ? "train" : "val";
        write_png(out_dir / split / name, compose_pair(pairs[i], size));
        manifest.records[i] = ManifestRecord{split + "/" + name,
                                             split,
                                             pairs[i].origin_id,
                                             provenance_summary(pairs[i]),
                                             std::string(to_string(pairs[i].class_tag)),
                                             content_hash(pairs[i])};
    });

    std::ofstream file(out_dir / "manifest.jsonl", std::ios::binary);
    if (!file) {
        throw IoError("cannot write manifest in " + out_dir.string());
    }
    for (const auto& r : manifest.records) {
        nlohmann::ordered_json j;
        j["file"] = r.file;
        j["split"] = r.split;
        j["origin_id"] = r.origin_id;
        j["provenance"] = r.provenance;
        j["class_tag"] = r.class_tag;
        j["hash"] = hash_hex(r.hash);
        file << j.dump() << '\n';
    }
    if (!file) {
        throw IoError("manifest write failed in " + out_dir.string());
    }
    return manifest;
}

}  // namespace flatcolor
