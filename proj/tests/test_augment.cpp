#include "doctest.h"

#include <cmath>

#include "flatcolor/augment.hpp"
#include "flatcolor/hash.hpp"
#include "flatcolor/rules.hpp"
#include "flatcolor/synthbench.hpp"
#include "support.hpp"

using namespace flatcolor;

namespace {

Raster noise_image(std::uint64_t seed, int w, int h) {
    Rng rng(seed);
    Raster img(w, h);
    for (auto& c : img.cells()) {
        c = Rgb{static_cast<std::uint8_t>(rng.below(256)), static_cast<std::uint8_t>(rng.below(256)),
                static_cast<std::uint8_t>(rng.below(256))};
    }
    return img;
}

double agreement(const Raster& a, const Raster& b) {
    return 1.0 - static_cast<double>(testing::differing(a, b)) / static_cast<double>(a.size());
}

ABPair flower_pair(std::uint64_t seed, int canvas = 200) {
    const auto g = gen_random_flower(seed, canvas);
    return ABPair{g.art, rule_color(g.art).colored, "f", {}, ClassTag::Flower};
}

PipelineSpec pipeline(std::vector<Transform> steps, ClassTag tag = ClassTag::Flower) {
    return PipelineSpec{std::move(steps), tag, 0, ""};
}

bool has_issue(const std::vector<PipelineIssue>& issues, PipelineIssueKind k) {
    return std::any_of(issues.begin(), issues.end(), [&](const PipelineIssue& i) { return i.kind == k; });
}

}  // namespace

TEST_CASE("affine identities") {
    const auto img = noise_image(1, 37, 37);
    CHECK(apply_affine(img, AffineSpec{}) == img);

    AffineSpec mx;
    mx.mirror_x = true;
    CHECK(apply_affine(apply_affine(img, mx), mx) == img);
    CHECK(apply_affine(img, mx).at(0, 5) == img.at(36, 5));

    AffineSpec my;
    my.mirror_y = true;
    CHECK(apply_affine(apply_affine(img, my), my) == img);

    AffineSpec r90;
    r90.rotate_deg = 90.0;
    Raster cur = img;
    for (int i = 0; i < 4; ++i) {
        cur = apply_affine(cur, r90);
        if (i < 3) {
            CHECK(cur != img);
        }
    }
    CHECK(cur == img);

    // even-sized canvases rotate about the centre between pixels
    const auto even = noise_image(2, 40, 40);
    cur = even;
    for (int i = 0; i < 4; ++i) {
        cur = apply_affine(cur, r90);
    }
    CHECK(cur == even);
}

TEST_CASE("affine translation fills exposed pixels") {
    const auto img = noise_image(3, 20, 10);
    AffineSpec t;
    t.tx = 5;
    t.fill = Rgb{9, 9, 9};
    const auto out = apply_affine(img, t);
    for (int y = 0; y < 10; ++y) {
        for (int x = 0; x < 5; ++x) {
            CHECK(out.at(x, y) == Rgb{9, 9, 9});
        }
        for (int x = 5; x < 20; ++x) {
            CHECK(out.at(x, y) == img.at(x - 5, y));
        }
    }
}

TEST_CASE("transform validation") {
    AffineSpec bad;
    bad.sx = 0.0;
    CHECK_THROWS_AS(validate_transform(bad), std::invalid_argument);
    CHECK_THROWS_AS(validate_transform(RadialWarpSpec{0.0}), std::invalid_argument);
    CHECK_THROWS_AS(validate_transform(ElasticSpec{-1.0, 4.0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(validate_transform(ElasticSpec{1.0, 0.0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(validate_transform(GapSpec{1, 0, 5, 0}), std::invalid_argument);
    CHECK_THROWS_AS(validate_transform(CropSpec{Rect{0, 0, 0, 5}, true}), std::invalid_argument);
    CHECK_THROWS_AS(apply_crop(Raster(10, 10), CropSpec{Rect{5, 5, 6, 2}, true}), std::invalid_argument);
    CHECK_NOTHROW(validate_transform(GapSpec{0, 1, 1, 0}));
    CHECK(class_tag_from_string("creature") == ClassTag::Creature);
    CHECK_THROWS_AS(class_tag_from_string("dragon"), std::invalid_argument);
}

TEST_CASE("radial warp") {
    SUBCASE("p = 1 is the identity") {
        const auto img = noise_image(4, 64, 48);
        CHECK(apply_radial_warp(img, RadialWarpSpec{1.0}) == img);
    }
    SUBCASE("circle at radius 0.5 lands at 0.125") {
        const int n = 400;
        const double c = (n - 1) / 2.0, half_diag = std::hypot(n, n) / 2.0;
        Raster ring(n, n, kWhite);
        for (int y = 0; y < n; ++y) {
            for (int x = 0; x < n; ++x) {
                if (std::abs(std::hypot(x - c, y - c) - 0.5 * half_diag) < 1.0) {
                    ring.at(x, y) = kBlack;
                }
            }
        }
        const auto out = apply_radial_warp(ring, RadialWarpSpec{3.0});
        double lo = 1e9, hi = 0, sum = 0;
        int count = 0;
        for (int y = 0; y < n; ++y) {
            for (int x = 0; x < n; ++x) {
                if (out.at(x, y) == kBlack) {
                    const double r = std::hypot(x - c, y - c);
                    lo = std::min(lo, r);
                    hi = std::max(hi, r);
                    sum += r;
                    ++count;
                }
            }
        }
        REQUIRE(count > 0);
        CHECK(std::abs(sum / count - 0.125 * half_diag) <= 1.0);
        CHECK(lo >= 0.125 * half_diag - 1.5);
        CHECK(hi <= 0.125 * half_diag + 1.5);
    }
    SUBCASE("centre and corners are fixed") {
        const auto img = noise_image(5, 41, 41);
        const auto out = apply_radial_warp(img, RadialWarpSpec{3.0});
        CHECK(out.at(20, 20) == img.at(20, 20));
        CHECK(out.at(0, 0) == img.at(0, 0));
        CHECK(out.at(40, 40) == img.at(40, 40));
    }
    SUBCASE("round trip stays close to identity") {
        // Regression bounds from measurement on the default sunflower; the
        // 99% target is checked and reported by the acceptance suite.
        const auto art = gen_flower(FlowerSpec{}).art;
        for (double p : {2.0, 3.0}) {
            const auto inv_first = apply_radial_warp(apply_radial_warp(art, {1.0 / p}), {p});
            const auto p_first = apply_radial_warp(apply_radial_warp(art, {p}), {1.0 / p});
            CHECK(agreement(inv_first, art) >= (p == 2.0 ? 0.99 : 0.98));
            CHECK(agreement(p_first, art) >= (p == 2.0 ? 0.975 : 0.95));
        }
    }
}

TEST_CASE("elastic deformation") {
    const auto art = gen_flower(FlowerSpec{}).art;
    CHECK(apply_elastic(art, ElasticSpec{0.0, 4.0, 99}) == art);
    const ElasticSpec spec{8.0, 4.0, 1234};
    const auto a = apply_elastic(art, spec);
    CHECK(a == apply_elastic(art, spec));
    CHECK(a != art);
    CHECK(apply_elastic(art, ElasticSpec{8.0, 4.0, 1235}) != a);

    SUBCASE("field is smooth and bounded by alpha") {
        const auto [dx, dy] = elastic_field(64, 64, ElasticSpec{8.0, 4.0, 7});
        double max_step = 0.0;
        for (int y = 0; y < 64; ++y) {
            for (int x = 0; x < 64; ++x) {
                CHECK(std::abs(dx.at(x, y)) <= 8.0);
                CHECK(std::abs(dy.at(x, y)) <= 8.0);
                if (x > 0) {
                    max_step = std::max(max_step, std::abs(dx.at(x, y) - dx.at(x - 1, y)));
                }
            }
        }
        CHECK(max_step < 2.0);
    }

    SUBCASE("blob centroid moves less than alpha") {
        Raster blob(200, 200, kWhite);
        for (int y = 80; y < 120; ++y) {
            for (int x = 70; x < 130; ++x) {
                blob.at(x, y) = kBlack;
            }
        }
        const auto centroid = [](const Raster& img) {
            double sx = 0, sy = 0, n = 0;
            for (int y = 0; y < img.height(); ++y) {
                for (int x = 0; x < img.width(); ++x) {
                    if (img.at(x, y) == kBlack) {
                        sx += x;
                        sy += y;
                        n += 1;
                    }
                }
            }
            return std::pair{sx / n, sy / n};
        };
        const auto [x0, y0] = centroid(blob);
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const auto [x1, y1] = centroid(apply_elastic(blob, ElasticSpec{8.0, 4.0, seed}));
            CHECK(std::hypot(x1 - x0, y1 - y0) < 8.0);
        }
    }
}

TEST_CASE("gaps erase ink only") {
    const auto art = gen_flower(FlowerSpec{}).art;
    CHECK(apply_gaps(art, GapSpec{0, 5, 30, 1}) == art);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto out = apply_gaps(art, GapSpec{3, 5, 40, seed});
        const auto before = binarize(art), after = binarize(out);
        CHECK(count_ink(after) < count_ink(before));
        for (std::size_t i = 0; i < art.size(); ++i) {
            if (after.cells()[i] == Ink::Line) {
                CHECK(before.cells()[i] == Ink::Line);
            }
        }
    }
}

TEST_CASE("a gap across a petal outline merges the petal into the background") {
    const auto art = gen_flower(FlowerSpec{}).art;
    const auto before = label_components(binarize(art)).component_count();
    int merged = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto after = label_components(binarize(apply_gaps(art, GapSpec{1, 6, 30, seed})));
        if (after.component_count() < before) {
            ++merged;
            CHECK(check_conformance(after).conforms());
        }
    }
    CHECK(merged > 0);
}

TEST_CASE("crop") {
    const auto img = noise_image(6, 30, 20);
    const auto small = apply_crop(img, CropSpec{Rect{5, 2, 10, 8}, false});
    CHECK(small.width() == 10);
    CHECK(small.height() == 8);
    CHECK(small.at(0, 0) == img.at(5, 2));
    const auto back = apply_crop(img, CropSpec{Rect{5, 2, 10, 8}, true});
    CHECK(back.width() == 30);
    CHECK(back.height() == 20);
    CHECK(apply_crop(img, CropSpec{Rect{0, 0, 30, 20}, true}) == img);
}

TEST_CASE("pair transforms") {
    const auto pair = flower_pair(1);
    SUBCASE("identity grows provenance only") {
        const auto out = apply_to_pair(AffineSpec{}, pair);
        CHECK(out.a == pair.a);
        CHECK(out.b == pair.b);
        CHECK(out.provenance.size() == 1);
    }
    SUBCASE("gaps leave B untouched") {
        const auto out = apply_to_pair(GapSpec{3, 5, 30, 0}, pair, 77);
        CHECK(out.b == pair.b);
        CHECK(count_ink(binarize(out.a)) < count_ink(binarize(pair.a)));
        CHECK(std::get<GapSpec>(out.provenance.back().transform).seed == 77);
        CHECK(out.provenance.back().seed == 77);
    }
    SUBCASE("spec seed is kept without an override") {
        const auto out = apply_to_pair(ElasticSpec{8.0, 4.0, 5}, pair);
        CHECK(out.provenance.back().seed == 5);
        CHECK(out.a == rebinarize(apply_elastic(pair.a, ElasticSpec{8.0, 4.0, 5})));
    }
    SUBCASE("replay reproduces every step") {
        PipelineSpec p = pipeline({ElasticSpec{20.0, 4.0, 0}, GapSpec{2, 5, 30, 0}, AffineSpec{3, -2, 10, 1.1, 1.1}});
        const auto out = run_pipeline(p, pair, 42);
        Raster a = pair.a, b = pair.b;
        for (const auto& rec : out.provenance) {
            const bool gap = kind_of(rec.transform) == TransformKind::Gaps;
            a = gap ? replay(rec, a) : rebinarize(replay(rec, a));
            b = gap ? b : replay(rec, b);
        }
        CHECK(a == out.a);
        CHECK(b == out.b);
        CHECK(run_pipeline(p, pair, 42).a == out.a);
        CHECK(run_pipeline(p, pair, 43).a != out.a);
    }
    SUBCASE("mismatched pair is rejected") {
        ABPair bad = pair;
        bad.b = Raster(10, 10);
        CHECK_THROWS_AS(apply_to_pair(AffineSpec{}, bad), std::invalid_argument);
    }
}

TEST_CASE("non-gap transforms keep A aligned with B's lines") {
    Rng rng(2024);
    const auto base = flower_pair(3, 160);
    for (int iter = 0; iter < 120; ++iter) {
        Transform t;
        switch (rng.below(4)) {
            case 0: {
                AffineSpec s;
                s.tx = rng.uniform(-30, 30);
                s.ty = rng.uniform(-30, 30);
                s.rotate_deg = rng.uniform(-180, 180);
                s.sx = rng.uniform(0.6, 1.5);
                s.sy = rng.uniform(0.6, 1.5);
                s.skew_deg = rng.uniform(-20, 20);
                s.mirror_x = rng.chance(0.5);
                s.mirror_y = rng.chance(0.5);
                t = s;
                break;
            }
            case 1:
                t = RadialWarpSpec{rng.uniform(0.3, 3.0)};
                break;
            case 2:
                t = ElasticSpec{rng.uniform(0, 40), rng.uniform(1, 8), rng.next()};
                break;
            default: {
                const int w = rng.range(20, 160), h = rng.range(20, 160);
                t = CropSpec{Rect{rng.range(0, 160 - w), rng.range(0, 160 - h), w, h}, rng.chance(0.7)};
            }
        }
        const auto out = apply_to_pair(t, base, rng.next());
        CHECK(binarize(out.a) == binarize(out.b));
    }
}

TEST_CASE("pipeline validation") {
    SUBCASE("crop then translating the cut edge inward is a half dragon") {
        AffineSpec shift;
        shift.tx = 50;
        const auto issues =
            validate_pipeline(pipeline({CropSpec{Rect{200, 0, 200, 400}, true}, shift}, ClassTag::Creature));
        CHECK(has_issue(issues, PipelineIssueKind::CutEdgeMovedInward));
    }
    SUBCASE("translating away from the cut edge is fine") {
        AffineSpec shift;
        shift.tx = -50;
        CHECK(validate_pipeline(pipeline({CropSpec{Rect{200, 0, 200, 400}, true}, shift})).empty());
    }
    SUBCASE("double mirror duplicates the identity") {
        AffineSpec mx;
        mx.mirror_x = true;
        CHECK(has_issue(validate_pipeline(pipeline({mx, mx})), PipelineIssueKind::DuplicateOfIdentity));
        CHECK(validate_pipeline(pipeline({mx})).empty());
    }
    SUBCASE("radial warp is for flowers only") {
        CHECK(has_issue(validate_pipeline(pipeline({RadialWarpSpec{3.0}}, ClassTag::Creature)),
                        PipelineIssueKind::RadialWarpOnCreature));
        CHECK(validate_pipeline(pipeline({RadialWarpSpec{3.0}})).empty());
    }
    SUBCASE("invalid steps are reported") {
        CHECK(has_issue(validate_pipeline(pipeline({RadialWarpSpec{-1.0}})), PipelineIssueKind::InvalidStep));
    }
    SUBCASE("commuted steps are flagged as duplicates") {
        AffineSpec mx, my, r90;
        mx.mirror_x = true;
        my.mirror_y = true;
        r90.rotate_deg = 90;
        const std::vector<PipelineSpec> cat{pipeline({mx, r90}), pipeline({r90, my}), pipeline({r90})};
        CHECK(probe_hash(cat[0]) == probe_hash(cat[1]));
        const auto issues = validate_catalog(cat);
        REQUIRE(issues.size() == 1);
        CHECK(issues[0].kind == PipelineIssueKind::DuplicateOfPipeline);
        CHECK(issues[0].pipeline == 1);
        CHECK(issues[0].other == 0);
    }
}

TEST_CASE("probe image is asymmetric") {
    const auto& probe = probe_image();
    AffineSpec mx;
    mx.mirror_x = true;
    CHECK(apply_affine(probe, mx) != probe);
    CHECK(fnv1a(probe) != fnv1a(apply_affine(probe, mx)));
}
