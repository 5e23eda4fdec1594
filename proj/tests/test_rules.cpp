#include "doctest.h"

#include <algorithm>
#include <set>

#include "flatcolor/rules.hpp"
#include "flatcolor/synthbench.hpp"
#include "support.hpp"

using namespace flatcolor;

namespace {

// One-pixel outline around an iw x ih interior whose top-left is (x0, y0).
void draw_box(Raster& img, int x0, int y0, int iw, int ih) {
    for (int x = x0 - 1; x <= x0 + iw; ++x) {
        img.at(x, y0 - 1) = kBlack;
        img.at(x, y0 + ih) = kBlack;
    }
    for (int y = y0 - 1; y <= y0 + ih; ++y) {
        img.at(x0 - 1, y) = kBlack;
        img.at(x0 + iw, y) = kBlack;
    }
}

std::size_t count_label(const Labeling& l, PartLabel p) {
    return static_cast<std::size_t>(std::count(l.begin(), l.end(), p));
}

}  // namespace

TEST_CASE("areas rank into background, body and appendages") {
    Raster img(120, 60, kWhite);
    draw_box(img, 5, 5, 40, 20);   // 800
    draw_box(img, 60, 5, 20, 10);  // 200
    draw_box(img, 60, 30, 20, 10);
    draw_box(img, 90, 30, 20, 10);
    const auto map = label_components(binarize(img));
    REQUIRE(map.component_count() == 5);
    const auto oracle = testing::bfs_label(binarize(img));
    std::vector<std::int64_t> areas = oracle.areas;
    std::sort(areas.rbegin(), areas.rend());
    CHECK(areas == std::vector<std::int64_t>{7200 - 800 - 600 - 124 - 3 * 64, 800, 200, 200, 200});

    const auto labels = classify_parts(map);
    CHECK(labels[static_cast<std::size_t>(map.label_at(0, 0))] == PartLabel::Background);
    CHECK(labels[static_cast<std::size_t>(map.label_at(10, 10))] == PartLabel::Body);
    CHECK(count_label(labels, PartLabel::Appendage) == 3);
    CHECK(check_conformance(map).conforms());
}

TEST_CASE("single component is background only") {
    const auto map = label_components(LineMask(10, 10, Ink::Paper));
    CHECK(classify_parts(map) == Labeling{PartLabel::Background});
    const auto report = check_conformance(map);
    CHECK(report.has(Violation::TooFewComponents));
    CHECK(report.violations.size() == 1);
    CHECK(report.summary() == "TooFewComponents");
}

TEST_CASE("equal areas break ties by scan order") {
    Raster img(23, 9, kWhite);
    draw_box(img, 2, 2, 5, 5);
    draw_box(img, 16, 2, 5, 5);
    const auto map = label_components(binarize(img));
    REQUIRE(map.component_count() == 3);
    const auto labels = classify_parts(map);
    CHECK(labels[1] == PartLabel::Body);
    CHECK(labels[2] == PartLabel::Appendage);
}

TEST_CASE("deep interior component becomes an eye") {
    Raster img(120, 120, kWhite);
    draw_box(img, 5, 5, 50, 50);  // body
    draw_box(img, 25, 25, 8, 8);  // eye, 20 px inside the body
    draw_box(img, 5, 58, 1, 1);   // tiny spike just below the body
    const auto map = label_components(binarize(img));
    const int bg = map.label_at(0, 0), eye = map.label_at(28, 28);
    const double d = testing::brute_distance(map, bg, eye);
    CHECK(d > 4.0);
    CHECK(component_distance(map, bg, eye) == doctest::Approx(d));
    const auto labels = classify_parts(map);
    CHECK(labels[static_cast<std::size_t>(eye)] == PartLabel::Eye);
    CHECK(labels[static_cast<std::size_t>(map.label_at(5, 58))] == PartLabel::Appendage);

    RuleParams far;
    far.eye_distance_threshold = d + 1.0;
    CHECK(classify_parts(map, far)[static_cast<std::size_t>(eye)] == PartLabel::Appendage);
}

TEST_CASE("eye at distance 6 with threshold 4") {
    Raster img(100, 100, kWhite);
    draw_box(img, 3, 3, 34, 34);
    draw_box(img, 7, 7, 4, 4);
    const auto map = label_components(binarize(img));
    const int eye = map.label_at(8, 8);
    CHECK(testing::brute_distance(map, map.label_at(0, 0), eye) == doctest::Approx(6.0));
    CHECK(classify_parts(map)[static_cast<std::size_t>(eye)] == PartLabel::Eye);
}

TEST_CASE("generated creature eye is labeled eye") {
    const auto g = gen_creature(CreatureSpec{});
    const auto map = label_components(binarize(g.art));
    const auto labels = classify_parts(map);
    const auto spec = CreatureSpec{};
    const int ex = spec.canvas / 2 + static_cast<int>(spec.eye_dx), ey = spec.canvas / 2 + static_cast<int>(spec.eye_dy);
    REQUIRE(g.truth.at(ex, ey) == TruthLabel::Eye);
    const int eye = map.label_at(ex, ey);
    CHECK(testing::brute_distance(map, map.ranked_by_area()[0], eye) > RuleParams{}.eye_distance_threshold);
    CHECK(labels[static_cast<std::size_t>(eye)] == PartLabel::Eye);
}

TEST_CASE("min_component_area keeps specks out of body and eye") {
    Raster img(100, 100, kWhite);
    draw_box(img, 3, 3, 34, 34);
    draw_box(img, 19, 19, 1, 1);
    const auto map = label_components(binarize(img));
    RuleParams p;
    p.min_component_area = 4;
    CHECK(classify_parts(map, p)[static_cast<std::size_t>(map.label_at(19, 19))] == PartLabel::Appendage);
    CHECK(classify_parts(map)[static_cast<std::size_t>(map.label_at(19, 19))] == PartLabel::Eye);
}

TEST_CASE("conformance violations") {
    SUBCASE("vertical line splits the background") {
        Raster img(20, 10, kWhite);
        for (int y = 0; y < 10; ++y) {
            img.at(10, y) = kBlack;
        }
        const auto r = check_conformance(label_components(binarize(img)));
        CHECK(r.has(Violation::BackgroundDisconnected));
        CHECK_FALSE(r.has(Violation::BackgroundNotLargest));
        CHECK_FALSE(r.conforms());
    }
    SUBCASE("interior region larger than the background") {
        Raster img(30, 30, kWhite);
        draw_box(img, 2, 2, 26, 26);
        const auto r = check_conformance(label_components(binarize(img)));
        CHECK(r.has(Violation::BackgroundNotLargest));
        CHECK_FALSE(r.has(Violation::BackgroundDisconnected));
        CHECK(r.summary() == "BackgroundNotLargest");
    }
    SUBCASE("blank canvas") {
        CHECK(check_conformance(label_components(LineMask(8, 8))).has(Violation::TooFewComponents));
    }
    SUBCASE("default sunflower conforms") {
        CHECK(check_conformance(label_components(binarize(gen_flower(FlowerSpec{}).art))).conforms());
    }
}

TEST_CASE("rule params and scheme validation") {
    RuleParams p;
    p.eye_distance_threshold = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = RuleParams{};
    p.min_component_area = -1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    ColorScheme s;
    s.body = s.line;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    CHECK_NOTHROW(ColorScheme{}.validate());
    CHECK(ColorScheme{}.body == Rgb{230, 120, 30});
    CHECK(ColorScheme{}.appendage == Rgb{250, 220, 60});
}

TEST_CASE("colorize rejects a short labeling") {
    Raster img(20, 20, kWhite);
    draw_box(img, 5, 5, 5, 5);
    const auto map = label_components(binarize(img));
    CHECK_THROWS_AS(colorize(img, map, Labeling{PartLabel::Background}, ColorScheme{}), std::invalid_argument);
}

TEST_CASE("blank canvas colours to background") {
    const auto r = rule_color(Raster(16, 16, kWhite));
    CHECK(r.colored == Raster(16, 16, ColorScheme{}.background));
}

TEST_CASE("colorize properties on random drawings") {
    Rng rng(11);
    ColorScheme scheme;
    scheme.eye = Rgb{0, 120, 255};
    const auto palette = scheme.palette();
    for (int iter = 0; iter < 150; ++iter) {
        const auto mask = testing::random_mask(rng, rng.range(2, 48), rng.range(2, 48), rng.uniform(0.2, 0.6));
        const auto img = render_mask(mask);
        const auto map = label_components(mask);
        const auto labels = classify_parts(map);
        if (map.component_count() > 0) {
            CHECK(count_label(labels, PartLabel::Background) == 1);
            CHECK(count_label(labels, PartLabel::Body) == (map.component_count() >= 2 ? 1u : 0u));
        }
        const auto out = rule_color(img, {}, scheme).colored;
        // line mask preserved, palette closed, flat fill per component
        std::vector<std::optional<Rgb>> fill(map.component_count());
        for (int y = 0; y < img.height(); ++y) {
            for (int x = 0; x < img.width(); ++x) {
                const Rgb c = out.at(x, y);
                CHECK(std::find(palette.begin(), palette.end(), c) != palette.end());
                if (map.is_line(x, y)) {
                    CHECK(c == scheme.line);
                    continue;
                }
                CHECK(c != scheme.line);
                auto& f = fill[static_cast<std::size_t>(map.label_at(x, y))];
                if (!f) {
                    f = c;
                }
                CHECK(*f == c);
            }
        }
    }
}

TEST_CASE("integer upscaling preserves area-ranked labels") {
    // The eye rule is a fixed pixel distance and so is not scale invariant;
    // background and body come from the area ranking, which is.
    const auto ranked_only = [](Labeling l) {
        for (auto& p : l) {
            p = p == PartLabel::Eye ? PartLabel::Appendage : p;
        }
        return l;
    };
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const auto g = seed % 2 ? gen_random_creature(seed, 120) : gen_random_flower(seed, 120);
        const auto small = label_components(binarize(g.art));
        const auto big = label_components(binarize(resize_nearest(g.art, 360, 360)));
        REQUIRE(small.component_count() == big.component_count());
        const auto ls = ranked_only(classify_parts(small));
        const auto lb = ranked_only(classify_parts(big));
        for (int y = 0; y < 120; ++y) {
            for (int x = 0; x < 120; ++x) {
                if (!small.is_line(x, y)) {
                    CHECK(ls[static_cast<std::size_t>(small.label_at(x, y))] ==
                          lb[static_cast<std::size_t>(big.label_at(3 * x + 1, 3 * y + 1))]);
                }
            }
        }
    }
}
