#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <set>

#include "flatcolor/dataset.hpp"
#include "flatcolor/png_io.hpp"
#include "flatcolor/synthbench.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace flatcolor;

namespace {

ABPair seed_pair(std::uint64_t seed, ClassTag tag = ClassTag::Flower, int canvas = 200) {
    const auto g = tag == ClassTag::Flower ? gen_random_flower(seed, canvas) : gen_random_creature(seed, canvas);
    return ABPair{g.art, rule_color(g.art).colored, "o" + std::to_string(seed), {}, tag};
}

std::vector<ABPair> seeds(int n, ClassTag tag = ClassTag::Flower) {
    std::vector<ABPair> out;
    for (int i = 0; i < n; ++i) {
        out.push_back(seed_pair(static_cast<std::uint64_t>(i), tag));
    }
    return out;
}

DatasetPlan small_plan(int target) {
    DatasetPlan plan;
    plan.catalogs[ClassTag::Flower] = default_catalog(ClassTag::Flower, 200);
    plan.catalogs[ClassTag::Creature] = default_catalog(ClassTag::Creature, 200);
    plan.target_count = target;
    plan.canvas = 200;
    plan.jobs = 4;
    return plan;
}

}  // namespace

TEST_CASE("pair invariants") {
    const auto p = seed_pair(1);
    CHECK(pair_violations(p, {}).empty());

    ABPair wrong_size = p;
    wrong_size.b = Raster(5, 5);
    CHECK(pair_violations(wrong_size, {}).size() == 1);

    ABPair off_palette = p;
    off_palette.b.at(0, 0) = Rgb{1, 2, 3};
    CHECK_FALSE(pair_violations(off_palette, {}).empty());

    ABPair misaligned = p;
    misaligned.a.at(0, 0) = kBlack;
    CHECK_FALSE(pair_violations(misaligned, {}).empty());
    CHECK(pair_violations(misaligned, {}, 1).empty());

    // erased ink is fine after a gap step, added ink never is
    const auto gapped = apply_to_pair(GapSpec{3, 5, 30, 0}, p, 9);
    CHECK(pair_violations(gapped, {}).empty());
    ABPair gapped_extra = gapped;
    gapped_extra.a.at(0, 0) = kBlack;
    CHECK_FALSE(pair_violations(gapped_extra, {}).empty());
    ABPair erased_no_gap = gapped;
    erased_no_gap.provenance.clear();
    CHECK_FALSE(pair_violations(erased_no_gap, {}).empty());
}

TEST_CASE("content hash covers both halves in order") {
    const auto p = seed_pair(2);
    ABPair swapped = p;
    std::swap(swapped.a, swapped.b);
    CHECK(content_hash(p) == content_hash(seed_pair(2)));
    CHECK(content_hash(p) != content_hash(swapped));
    ABPair renamed = p;
    renamed.origin_id = "other";
    CHECK(content_hash(renamed) == content_hash(p));
    CHECK(hash_hex(0xabcULL) == "0000000000000abc");
}

TEST_CASE("rule colouring originals accounts for every input") {
    testing::TempDir dir("orig");
    Raster split(100, 100, kWhite);
    for (int y = 0; y < 100; ++y) {
        split.at(50, y) = kBlack;
    }
    std::vector<Drawing> drawings{
        {"good", ClassTag::Flower, gen_random_flower(1, 200).art, {}},
        {"split", ClassTag::Flower, split, {}},
        {"missing", ClassTag::Flower, std::nullopt, dir.path / "missing.png"},
        {"ondisk", ClassTag::Creature, std::nullopt, dir.path / "c.png"},
    };
    write_png(dir.path / "c.png", gen_random_creature(2, 300).art);
    const auto r = rule_color_originals(drawings, {}, {}, 200);
    CHECK(r.pairs.size() + r.rejects.size() == drawings.size());
    REQUIRE(r.pairs.size() == 2);
    CHECK(r.pairs[1].origin_id == "ondisk");
    CHECK(r.pairs[1].a.width() == 200);
    CHECK(r.pairs[1].class_tag == ClassTag::Creature);
    for (const auto& p : r.pairs) {
        CHECK(pair_violations(p, {}).empty());
    }
    REQUIRE(r.rejects.size() == 2);
    CHECK(r.rejects[0].id == "split");
    REQUIRE(r.rejects[0].report);
    CHECK(r.rejects[0].report->has(Violation::BackgroundDisconnected));
    CHECK(r.rejects[1].id == "missing");
    CHECK_FALSE(r.rejects[1].report);
    CHECK_THROWS_AS(rule_color_originals({}, {}, {}), std::invalid_argument);
}

TEST_CASE("manual pairs are matched by stem") {
    testing::TempDir dir("manual");
    std::filesystem::create_directories(dir.path / "a");
    std::filesystem::create_directories(dir.path / "b");
    const auto p1 = seed_pair(1, ClassTag::Creature), p2 = seed_pair(2, ClassTag::Creature);
    write_png(dir.path / "a" / "one.png", p1.a);
    write_png(dir.path / "b" / "one.png", p1.b);
    write_png(dir.path / "a" / "two.png", p2.a);
    write_png(dir.path / "b" / "two.png", p1.b);  // wrong colouring
    const auto r = ingest_manual_pairs({dir.path / "a" / "two.png", dir.path / "a" / "one.png"},
                                       {dir.path / "b" / "one.png", dir.path / "b" / "two.png"}, {}, 0);
    REQUIRE(r.pairs.size() == 1);
    CHECK(r.pairs[0].origin_id == "manual:one");
    CHECK(r.pairs[0].a == p1.a);
    REQUIRE(r.rejects.size() == 1);
    CHECK(r.rejects[0].id == "two");
    CHECK(ingest_manual_pairs({dir.path / "a" / "two.png"}, {dir.path / "b" / "two.png"}, {}, 1'000'000).pairs.size() == 1);
    CHECK_THROWS_AS(ingest_manual_pairs({dir.path / "a" / "one.png"}, {}, {}, 0), std::invalid_argument);
}

TEST_CASE("default catalogs validate") {
    for (auto tag : {ClassTag::Flower, ClassTag::Creature}) {
        const auto cat = default_catalog(tag);
        CHECK(cat.size() >= 10);
        CHECK(validate_catalog(cat).empty());
        for (int canvas : {128, 200, 256, 512}) {
            CHECK(validate_catalog(default_catalog(tag, canvas), canvas).empty());
        }
        for (const auto& p : cat) {
            CHECK(p.class_tag == tag);
            CHECK_FALSE(p.name.empty());
        }
    }
    for (const auto& p : default_catalog(ClassTag::Creature)) {
        for (const auto& s : p.steps) {
            CHECK(kind_of(s) != TransformKind::RadialWarp);
        }
    }
}

TEST_CASE("build expands round robin to exactly the target") {
    const auto s = seeds(4);
    auto plan = small_plan(30);
    const auto pairs = build_dataset(plan, s);
    REQUIRE(pairs.size() == 30);
    std::set<std::uint64_t> hashes;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        hashes.insert(content_hash(pairs[i]));
        CHECK(pair_violations(pairs[i], plan.scheme).empty());
        if (i < 4) {
            CHECK(pairs[i].provenance.empty());
        }
    }
    CHECK(hashes.size() == 30);
    // first augmentation round visits every original in order
    for (std::size_t i = 4; i < 8; ++i) {
        CHECK(pairs[i].origin_id == s[i - 4].origin_id);
    }
    const auto again = build_dataset(plan, s);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        CHECK(content_hash(again[i]) == content_hash(pairs[i]));
    }
    plan.jobs = 1;
    CHECK(content_hash(build_dataset(plan, s).back()) == content_hash(pairs.back()));
    plan.master_seed = 2;
    CHECK(content_hash(build_dataset(plan, s).back()) != content_hash(pairs.back()));
}

TEST_CASE("mixed classes use their own catalogs") {
    auto s = seeds(2);
    const auto c = seeds(2, ClassTag::Creature);
    s.insert(s.end(), c.begin(), c.end());
    const auto pairs = build_dataset(small_plan(40), s);
    CHECK(pairs.size() == 40);
    for (const auto& p : pairs) {
        if (p.class_tag == ClassTag::Creature) {
            for (const auto& r : p.provenance) {
                CHECK(kind_of(r.transform) != TransformKind::RadialWarp);
            }
        }
    }
}

TEST_CASE("infeasible plans") {
    const auto s = seeds(3);
    CHECK_THROWS_AS(build_dataset(small_plan(2), s), PlanError);
    CHECK_THROWS_AS(build_dataset(small_plan(10), {}), PlanError);

    auto plan = small_plan(20);
    AffineSpec mx;
    mx.mirror_x = true;
    plan.catalogs[ClassTag::Flower] = {PipelineSpec{{mx}, ClassTag::Flower, 0, "mirror"}};
    try {
        build_dataset(plan, s);
        FAIL("expected PlanError");
    } catch (const PlanError& e) {
        CHECK(std::string(e.what()).find("short by 14") != std::string::npos);
    }

    plan.catalogs[ClassTag::Flower] = {PipelineSpec{{mx, mx}, ClassTag::Flower, 0, "twice"}};
    CHECK_THROWS_AS(build_dataset(plan, s), std::invalid_argument);

    plan.catalogs.erase(ClassTag::Flower);
    CHECK_THROWS_AS(build_dataset(plan, s), PlanError);
}

TEST_CASE("plan warnings") {
    DatasetPlan plan;
    CHECK(plan_warnings(plan).empty());
    plan.target_count = 50;
    CHECK(plan_warnings(plan).size() == 1);
    plan.target_count = 2000;
    CHECK(plan_warnings(plan).size() == 1);
}

TEST_CASE("dedup keeps first occurrences") {
    const auto a = seed_pair(1), b = seed_pair(2);
    ABPair a2 = a;
    a2.origin_id = "copy";
    const auto out = dedup({a, b, a2, b});
    REQUIRE(out.size() == 2);
    CHECK(out[0].origin_id == a.origin_id);
    CHECK(out[1].origin_id == b.origin_id);
}

TEST_CASE("composite layout round trips") {
    const auto p = seed_pair(3);
    const auto comp = compose_pair(p, 64);
    CHECK(comp.width() == 128);
    CHECK(comp.height() == 64);
    const auto [a, b] = split_composite(comp);
    CHECK(a == rebinarize(resize_nearest(p.a, 64, 64)));
    CHECK(b == resize_nearest(p.b, 64, 64));
    CHECK_THROWS_AS(split_composite(Raster(5, 3)), std::invalid_argument);
    CHECK_THROWS_AS(compose_pair(p, 0), std::invalid_argument);
}

TEST_CASE("export writes composites and a manifest") {
    testing::TempDir dir("export");
    const auto pairs = build_dataset(small_plan(20), seeds(3));
    const auto manifest = export_dataset(pairs, dir.path, 32, 0.75, 5, 4);
    REQUIRE(manifest.records.size() == 20);
    int train = 0;
    std::ifstream in(dir.path / "manifest.jsonl");
    std::string line;
    std::size_t i = 0;
    while (std::getline(in, line)) {
        const auto j = nlohmann::json::parse(line);
        const auto& r = manifest.records.at(i);
        CHECK(j.at("file") == r.file);
        CHECK(j.at("hash") == hash_hex(content_hash(pairs[i])));
        CHECK(j.at("origin_id") == pairs[i].origin_id);
        char name[16];
        std::snprintf(name, sizeof name, "%05zu.png", i);
        CHECK(r.file == r.split + "/" + name);
        const auto img = read_png(dir.path / r.file);
        CHECK(img == compose_pair(pairs[i], 32));
        train += r.split == "train" ? 1 : 0;
        ++i;
    }
    CHECK(i == 20);
    CHECK(train == 15);
    CHECK(manifest.records[0].provenance == "seed");
    CHECK(manifest.records[5].provenance == provenance_summary(pairs[5]));
    CHECK(manifest.records[5].provenance != "seed");

    const auto blocker = dir.path / "file";
    std::ofstream(blocker) << "x";
    CHECK_THROWS_AS(export_dataset(pairs, blocker / "sub", 32, 0.9, 1), IoError);
    CHECK_THROWS_AS(export_dataset(pairs, dir.path / "x", 32, 1.5, 1), std::invalid_argument);
}
