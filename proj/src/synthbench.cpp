#include "flatcolor/synthbench.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "flatcolor/rng.hpp"

namespace flatcolor {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

// One drawn part. Regions later in the list sit on top of earlier ones and
// own the outline along their shared boundary.
struct Region {
    TruthLabel label;
    Rect bbox;
    std::function<bool(double, double)> contains;
};

Rect bbox_around(double cx, double cy, double rx, double ry) {
    const int x0 = static_cast<int>(std::floor(cx - rx)) - 1;
    const int y0 = static_cast<int>(std::floor(cy - ry)) - 1;
    const int x1 = static_cast<int>(std::ceil(cx + rx)) + 1;
    const int y1 = static_cast<int>(std::ceil(cy + ry)) + 1;
    return Rect{x0, y0, x1 - x0 + 1, y1 - y0 + 1};
}

struct Ellipse {
    double cx, cy, a, b, theta;  // a along direction theta

    bool contains(double x, double y, double grow = 0.0) const {
        const double dx = x - cx;
        const double dy = y - cy;
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        const double u = dx * c + dy * s;
        const double v = -dx * s + dy * c;
        const double aa = a + grow;
        const double bb = b + grow;
        return (u * u) / (aa * aa) + (v * v) / (bb * bb) <= 1.0;
    }
    Rect bbox(double grow = 0.0) const {
        const double r = std::max(a, b) + grow;
        return bbox_around(cx, cy, r, r);
    }
};

struct Triangle {
    std::array<double, 6> p;  // x0 y0 x1 y1 x2 y2

    bool contains(double x, double y) const {
        const auto edge = [&](int i, int j) {
            return (p[2 * j] - p[2 * i]) * (y - p[2 * i + 1]) - (p[2 * j + 1] - p[2 * i + 1]) * (x - p[2 * i]);
        };
        const double d0 = edge(0, 1);
        const double d1 = edge(1, 2);
        const double d2 = edge(2, 0);
        const bool neg = d0 < 0 || d1 < 0 || d2 < 0;
        const bool pos = d0 > 0 || d1 > 0 || d2 > 0;
        return !(neg && pos);
    }
    Rect bbox() const {
        const double x0 = std::min({p[0], p[2], p[4]});
        const double x1 = std::max({p[0], p[2], p[4]});
        const double y0 = std::min({p[1], p[3], p[5]});
        const double y1 = std::max({p[1], p[3], p[5]});
        return bbox_around((x0 + x1) / 2, (y0 + y1) / 2, (x1 - x0) / 2, (y1 - y0) / 2);
    }
};

// Rasterizes regions, draws outlines of `line_width` on the upper side of
// every boundary, and checks that each part survives as one component.
Generated render_parts(int canvas, const std::vector<Region>& regions, int line_width) {
    if (line_width < 1) {
        throw std::invalid_argument("line_width must be >= 1");
    }
    // key 0 = background, key i + 1 = regions[i]
    Grid<int> key(canvas, canvas, 0);
    for (std::size_t i = 0; i < regions.size(); ++i) {
        const Rect b = regions[i].bbox;
        for (int y = std::max(0, b.y); y < std::min(canvas, b.y + b.h); ++y) {
            for (int x = std::max(0, b.x); x < std::min(canvas, b.x + b.w); ++x) {
                if (regions[i].contains(x, y)) {
                    key.at(x, y) = static_cast<int>(i) + 1;
                }
            }
        }
    }

    // Chebyshev min filter of radius line_width, separable.
    Grid<int> row_min(canvas, canvas, 0);
    for (int y = 0; y < canvas; ++y) {
        for (int x = 0; x < canvas; ++x) {
            int m = key.at(x, y);
            for (int k = std::max(0, x - line_width); k <= std::min(canvas - 1, x + line_width); ++k) {
                m = std::min(m, key.at(k, y));
            }
            row_min.at(x, y) = m;
        }
    }
    Generated out{Raster(canvas, canvas, kWhite), GroundTruth(canvas, canvas, TruthLabel::Background)};
    LineMask mask(canvas, canvas, Ink::Paper);
    for (int y = 0; y < canvas; ++y) {
        for (int x = 0; x < canvas; ++x) {
            int m = row_min.at(x, y);
            for (int k = std::max(0, y - line_width); k <= std::min(canvas - 1, y + line_width); ++k) {
                m = std::min(m, row_min.at(x, k));
            }
            const int own = key.at(x, y);
            if (m < own) {
                mask.at(x, y) = Ink::Line;
                out.art.at(x, y) = kBlack;
                out.truth.at(x, y) = TruthLabel::Line;
            } else {
                out.truth.at(x, y) = own == 0 ? TruthLabel::Background
                                              : regions[static_cast<std::size_t>(own) - 1].label;
            }
        }
    }

    const auto map = label_components(mask, Connectivity::Four);
    std::vector<int> region_of_component(map.component_count(), -1);
    std::vector<int> components_in_region(regions.size() + 1, 0);
    for (std::size_t i = 0; i < key.size(); ++i) {
        const auto id = map.labels().cells()[i];
        if (id < 0) {
            continue;
        }
        auto& r = region_of_component[static_cast<std::size_t>(id)];
        if (r < 0) {
            r = key.cells()[i];
            ++components_in_region[static_cast<std::size_t>(r)];
        }
    }
    for (std::size_t r = 0; r < components_in_region.size(); ++r) {
        if (components_in_region[r] != 1) {
            throw std::invalid_argument(
                "part " + std::to_string(r) +
                (components_in_region[r] == 0 ? " is swallowed by outlines" : " is split into pieces"));
        }
    }
    for (std::size_t i = 0; i < key.size(); ++i) {
        const int x = static_cast<int>(i % static_cast<std::size_t>(canvas));
        const int y = static_cast<int>(i / static_cast<std::size_t>(canvas));
        if ((x == 0 || y == 0 || x == canvas - 1 || y == canvas - 1) && out.truth.cells()[i] != TruthLabel::Background) {
            throw std::invalid_argument("drawing exceeds the canvas");
        }
    }
    return out;
}

void check_no_overlap(int canvas, const std::vector<std::function<bool(double, double)>>& grown,
                      const std::vector<Rect>& boxes, const std::function<bool(double, double)>& core,
                      const char* what) {
    Grid<std::uint8_t> hits(canvas, canvas, 0);
    for (std::size_t i = 0; i < grown.size(); ++i) {
        const Rect b = boxes[i];
        for (int y = std::max(0, b.y); y < std::min(canvas, b.y + b.h); ++y) {
            for (int x = std::max(0, b.x); x < std::min(canvas, b.x + b.w); ++x) {
                if (!core(x, y) && grown[i](x, y) && ++hits.at(x, y) > 1) {
                    throw std::invalid_argument(std::string(what) + " overlap");
                }
            }
        }
    }
}

template <class T>
Grid<T> crop_like(const Grid<T>& g, const CropSpec& c) {
    auto cropped = crop_grid(g, c.rect);
    return c.resize_back ? resize_nearest(cropped, g.width(), g.height()) : cropped;
}

}  // namespace

Generated gen_flower(const FlowerSpec& spec) {
    if (spec.petal_count < 3) {
        throw std::invalid_argument("petal_count must be >= 3");
    }
    if (spec.line_width < 1) {
        throw std::invalid_argument("line_width must be >= 1");
    }
    if (!(spec.petal_a > 0) || !(spec.petal_b > 0) || spec.canvas < 16) {
        throw std::invalid_argument("invalid flower dimensions");
    }
    const double radius = spec.daisy_ratio > 0.0 ? std::sqrt(spec.daisy_ratio * spec.petal_a * spec.petal_b)
                                                 : spec.center_radius;
    if (!(radius > 0)) {
        throw std::invalid_argument("center radius must be > 0");
    }
    const double c = (spec.canvas - 1) / 2.0;
    Rng rng(spec.seed);

    std::vector<Ellipse> petals;
    for (int k = 0; k < spec.petal_count; ++k) {
        const double scale_a = 1.0 + spec.jitter * rng.uniform(-1.0, 1.0);
        const double scale_b = 1.0 + spec.jitter * rng.uniform(-1.0, 1.0);
        const double a = spec.petal_a * scale_a;
        const double b = spec.petal_b * scale_b;
        const double theta = spec.rotation_deg * kDegToRad + 2.0 * std::numbers::pi * k / spec.petal_count;
        const double dist = radius + 0.8 * a;
        petals.push_back({c + dist * std::cos(theta), c + dist * std::sin(theta), a, b, theta});
    }
    const auto in_center = [=](double x, double y) { return std::hypot(x - c, y - c) <= radius; };

    for (const auto& p : petals) {
        if (std::hypot(p.cx - c, p.cy - c) + p.a <= radius + spec.line_width + 2) {
            throw std::invalid_argument("petal lies inside the center");
        }
    }
    std::vector<std::function<bool(double, double)>> grown;
    std::vector<Rect> boxes;
    const double margin = spec.line_width + 1.5;
    for (const auto& p : petals) {
        grown.emplace_back([p, margin](double x, double y) { return p.contains(x, y, margin); });
        boxes.push_back(p.bbox(margin));
    }
    check_no_overlap(spec.canvas, grown, boxes, in_center, "petals");

    std::vector<Region> regions;
    for (const auto& p : petals) {
        regions.push_back({TruthLabel::Appendage, p.bbox(), [p](double x, double y) { return p.contains(x, y); }});
    }
    regions.push_back({TruthLabel::Body, bbox_around(c, c, radius, radius), in_center});

    Generated out = render_parts(spec.canvas, regions, spec.line_width);
    if (spec.crop) {
        out.art = crop_like(out.art, *spec.crop);
        out.truth = crop_like(out.truth, *spec.crop);
    }
    if (spec.gap) {
        out.art = apply_gaps(out.art, *spec.gap);
    }
    return out;
}

Generated gen_creature(const CreatureSpec& spec) {
    if (spec.line_width < 1 || !(spec.body_a > 0) || !(spec.body_b > 0) || !(spec.eye_radius > 0) ||
        spec.spike_count < 0 || spec.canvas < 16) {
        throw std::invalid_argument("invalid creature dimensions");
    }
    const double c = (spec.canvas - 1) / 2.0;
    const Ellipse body{c, c, spec.body_a, spec.body_b, 0.0};
    const double ex = c + spec.eye_dx;
    const double ey = c + spec.eye_dy;

    // The eye and its outline need clearance inside the body outline.
    const double clearance = spec.eye_radius + 2.0 * spec.line_width + 2.0;
    for (int i = 0; i < 72; ++i) {
        const double t = 2.0 * std::numbers::pi * i / 72;
        if (!body.contains(ex + clearance * std::cos(t), ey + clearance * std::sin(t), -static_cast<double>(spec.line_width))) {
            throw std::invalid_argument("eye is not interior to the body");
        }
    }

    Rng rng(spec.seed);
    std::vector<Triangle> spikes;
    // Spikes spread along the upper arc (y grows downward).
    for (int k = 0; k < spec.spike_count; ++k) {
        const double frac = (k + 0.5) / spec.spike_count;
        const double t = std::numbers::pi * (1.0 + frac);
        const double size = spec.spike_size * (1.0 + spec.jitter * rng.uniform(-1.0, 1.0));
        const double px = c + spec.body_a * std::cos(t);
        const double py = c + spec.body_b * std::sin(t);
        double nx = std::cos(t) / spec.body_a;
        double ny = std::sin(t) / spec.body_b;
        const double nl = std::hypot(nx, ny);
        nx /= nl;
        ny /= nl;
        const double tx = -ny;
        const double ty = nx;
        const double half = 0.5 * size;
        // Base sinks a little into the body so the spike attaches cleanly.
        const double bx = px - nx * 0.25 * size;
        const double by = py - ny * 0.25 * size;
        spikes.push_back({{bx + tx * half, by + ty * half, bx - tx * half, by - ty * half, px + nx * size, py + ny * size}});
    }
    std::vector<std::function<bool(double, double)>> grown;
    std::vector<Rect> boxes;
    const double margin = spec.line_width + 1.5;
    for (const auto& s : spikes) {
        const Rect b = s.bbox();
        grown.emplace_back([s, margin](double x, double y) {
            for (int i = 0; i < 8; ++i) {
                const double t = 2.0 * std::numbers::pi * i / 8;
                if (s.contains(x + margin * std::cos(t), y + margin * std::sin(t))) {
                    return true;
                }
            }
            return s.contains(x, y);
        });
        boxes.push_back({b.x - 4, b.y - 4, b.w + 8, b.h + 8});
    }
    check_no_overlap(spec.canvas, grown, boxes, [body](double x, double y) { return body.contains(x, y); },
                     "spikes");

    std::vector<Region> regions;
    for (const auto& s : spikes) {
        regions.push_back({TruthLabel::Appendage, s.bbox(), [s](double x, double y) { return s.contains(x, y); }});
    }
    regions.push_back({TruthLabel::Body, body.bbox(), [body](double x, double y) { return body.contains(x, y); }});
    const double er = spec.eye_radius;
    regions.push_back({TruthLabel::Eye, bbox_around(ex, ey, er, er),
                       [ex, ey, er](double x, double y) { return std::hypot(x - ex, y - ey) <= er; }});
    return render_parts(spec.canvas, regions, spec.line_width);
}

Raster oracle_coloring(const GroundTruth& truth, const ColorScheme& scheme) {
    Raster out(truth.width(), truth.height());
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const TruthLabel t = truth.cells()[i];
        out.cells()[i] = t == TruthLabel::Line ? scheme.line : scheme.color_of(static_cast<PartLabel>(t));
    }
    return out;
}

std::string_view to_string(ViolationFamily f) noexcept {
    switch (f) {
        case ViolationFamily::None: return "none";
        case ViolationFamily::Gaps: return "gaps";
        case ViolationFamily::CropSplit: return "crop_split";
        case ViolationFamily::Daisy: return "daisy";
    }
    return "?";
}

FlowerSpec random_sunflower_spec(std::uint64_t seed, int canvas) {
    Rng rng(seed);
    const double s = canvas / 400.0;
    FlowerSpec f;
    f.canvas = canvas;
    f.center_radius = rng.uniform(58.0, 78.0) * s;
    f.petal_a = rng.uniform(36.0, 54.0) * s;
    f.petal_b = rng.uniform(13.0, 19.0) * s;
    f.jitter = 0.06;
    f.rotation_deg = rng.uniform(0.0, 360.0);
    // Leave at least ~10 px between neighbouring petals at their widest.
    const double dist = f.center_radius + 0.8 * f.petal_a;
    const double half_angle = std::asin(std::min(1.0, (f.petal_b * 1.1 + 5.0 + f.line_width) / dist));
    const int max_petals = std::max(5, static_cast<int>(std::floor(std::numbers::pi / half_angle)));
    f.petal_count = rng.range(5, std::min(max_petals, 14));
    f.seed = rng.next();
    return f;
}

FlowerSpec random_daisy_spec(std::uint64_t seed, int canvas) {
    Rng rng(seed);
    const double s = canvas / 400.0;
    FlowerSpec f;
    f.canvas = canvas;
    f.petal_a = rng.uniform(62.0, 78.0) * s;
    f.petal_b = rng.uniform(16.0, 22.0) * s;
    f.daisy_ratio = rng.uniform(0.35, 0.75);
    f.petal_count = rng.range(5, 7);
    f.rotation_deg = rng.uniform(0.0, 360.0);
    f.jitter = 0.04;
    f.seed = rng.next();
    return f;
}

CreatureSpec random_creature_spec(std::uint64_t seed, int canvas) {
    Rng rng(seed);
    const double s = canvas / 400.0;
    CreatureSpec c;
    c.canvas = canvas;
    c.body_a = rng.uniform(95.0, 125.0) * s;
    c.body_b = rng.uniform(60.0, 80.0) * s;
    c.spike_count = rng.range(3, 7);
    c.spike_size = rng.uniform(22.0, 34.0) * s;
    c.eye_radius = rng.uniform(9.0, 15.0) * s;
    c.eye_dx = rng.uniform(0.25, 0.5) * c.body_a * (rng.chance(0.5) ? 1.0 : -1.0);
    c.eye_dy = -rng.uniform(0.0, 0.3) * c.body_b;
    c.jitter = 0.1;
    c.seed = rng.next();
    return c;
}

namespace {

template <class SpecFn, class GenFn>
auto generate_with_retries(std::uint64_t seed, SpecFn make_spec, GenFn gen) {
    for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
        try {
            return gen(make_spec(derive_seed(seed, {attempt})));
        } catch (const std::invalid_argument&) {
        }
    }
    throw std::runtime_error("generator could not find valid geometry for seed " + std::to_string(seed));
}

ComponentMap components_of(const Raster& art) { return label_components(binarize(art)); }

}  // namespace

Generated gen_random_flower(std::uint64_t seed, int canvas) {
    return generate_with_retries(
        seed, [&](std::uint64_t s) { return random_sunflower_spec(s, canvas); },
        [](const FlowerSpec& f) { return gen_flower(f); });
}

Generated gen_random_creature(std::uint64_t seed, int canvas) {
    return generate_with_retries(
        seed, [&](std::uint64_t s) { return random_creature_spec(s, canvas); },
        [](const CreatureSpec& c) { return gen_creature(c); });
}

std::vector<CorpusItem> gen_corpus(int n, double conforming_fraction, std::uint64_t seed, int canvas) {
    if (n <= 0) {
        throw std::invalid_argument("corpus size must be > 0");
    }
    if (!(conforming_fraction >= 0.0 && conforming_fraction <= 1.0)) {
        throw std::invalid_argument("conforming fraction must be in [0, 1]");
    }
    const int conforming = static_cast<int>(std::lround(n * conforming_fraction));

    // Seeded choice of which slots conform.
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        order[static_cast<std::size_t>(i)] = i;
    }
    Rng rng(derive_seed(seed, {0}));
    for (int i = n - 1; i > 0; --i) {
        std::swap(order[static_cast<std::size_t>(i)], order[rng.below(static_cast<std::uint64_t>(i) + 1)]);
    }
    std::vector<bool> is_conforming(static_cast<std::size_t>(n), false);
    for (int i = 0; i < conforming; ++i) {
        is_conforming[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = true;
    }

    std::vector<CorpusItem> corpus;
    corpus.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const std::uint64_t item_seed = derive_seed(seed, {1, static_cast<std::uint64_t>(i)});
        CorpusItem item;
        item.id = "item_" + std::to_string(i);
        if (is_conforming[static_cast<std::size_t>(i)]) {
            item.drawing = gen_random_flower(item_seed, canvas);
            corpus.push_back(std::move(item));
            continue;
        }
        Rng pick(derive_seed(item_seed, {99}));
        item.intended_conforming = false;
        item.family = kViolationFamilies[pick.below(kViolationFamilies.size())];
        bool made = false;
        for (std::uint64_t attempt = 0; attempt < 64 && !made; ++attempt) {
            const std::uint64_t s = derive_seed(item_seed, {attempt});
            Rng r(derive_seed(s, {7}));
            try {
                switch (item.family) {
                    case ViolationFamily::Gaps: {
                        FlowerSpec f = random_sunflower_spec(s, canvas);
                        const auto intact = gen_flower(f);
                        f.gap = GapSpec{r.range(1, 3), r.range(4, 7), r.range(20, 40), r.next()};
                        auto damaged = gen_flower(f);
                        // Only keep gaps that actually merge two parts.
                        if (components_of(damaged.art).component_count() <
                            components_of(intact.art).component_count()) {
                            item.drawing = std::move(damaged);
                            made = true;
                        }
                        break;
                    }
                    case ViolationFamily::CropSplit: {
                        FlowerSpec f = random_sunflower_spec(s, canvas);
                        const double radius = f.center_radius;
                        const int band = static_cast<int>(r.uniform(0.6, 1.2) * radius);
                        const int offset = static_cast<int>(r.uniform(-0.25, 0.25) * radius);
                        const int start = std::clamp(canvas / 2 - band / 2 + offset, 0, canvas - band);
                        f.crop = CropSpec{r.chance(0.5) ? Rect{0, start, canvas, band} : Rect{start, 0, band, canvas},
                                          true};
                        item.drawing = gen_flower(f);
                        made = true;
                        break;
                    }
                    case ViolationFamily::Daisy: {
                        auto d = gen_flower(random_daisy_spec(s, canvas));
                        // Require the centre to really be smaller than some petal.
                        const auto map = components_of(d.art);
                        const auto center_id = map.label_at(canvas / 2, canvas / 2);
                        std::int64_t biggest_petal = 0;
                        for (std::size_t px = 0; px < d.truth.size(); ++px) {
                            const auto id = map.labels().cells()[px];
                            if (id >= 0 && d.truth.cells()[px] == TruthLabel::Appendage) {
                                biggest_petal = std::max(biggest_petal, map.component(id).area);
                            }
                        }
                        if (center_id >= 0 && map.component(center_id).area < biggest_petal) {
                            item.drawing = std::move(d);
                            made = true;
                        }
                        break;
                    }
                    case ViolationFamily::None: break;
                }
            } catch (const std::invalid_argument&) {
            }
        }
        if (!made) {
            throw std::runtime_error("could not construct violation item " + item.id);
        }
        corpus.push_back(std::move(item));
    }
    return corpus;
}

double pixel_accuracy(const Raster& predicted, const Raster& oracle) {
    require_same_shape(predicted, oracle, "pixel_accuracy");
    std::size_t equal = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        equal += predicted.cells()[i] == oracle.cells()[i] ? 1 : 0;
    }
    return static_cast<double>(equal) / static_cast<double>(predicted.size());
}

double conformance_rate(const std::vector<CorpusItem>& corpus, const RuleParams& params) {
    if (corpus.empty()) {
        throw std::invalid_argument("conformance_rate: empty corpus");
    }
    int passed = 0;
    for (const auto& item : corpus) {
        const auto map = label_components(binarize(item.drawing.art, params.binarize_threshold), params.connectivity);
        passed += check_conformance(map, params).conforms() ? 1 : 0;
    }
    return static_cast<double>(passed) / static_cast<double>(corpus.size());
}

EvalReport evaluate_corpus(const std::vector<CorpusItem>& corpus, const RuleParams& params,
                           const ColorScheme& scheme) {
    if (corpus.empty()) {
        throw std::invalid_argument("evaluate_corpus: empty corpus");
    }
    EvalReport report;
    report.items = static_cast<int>(corpus.size());
    int passed = 0;
    double acc_sum = 0.0;
    for (const auto& item : corpus) {
        const auto result = rule_color(item.drawing.art, params, scheme);
        const double acc = pixel_accuracy(result.colored, oracle_coloring(item.drawing.truth, scheme));
        acc_sum += acc;
        const bool ok = result.report.conforms();
        passed += ok ? 1 : 0;
        report.intended_conforming += item.intended_conforming ? 1 : 0;
        auto& fam = report.families[item.family];
        ++fam.count;
        fam.passed_check += ok ? 1 : 0;
        fam.mean_accuracy += acc;
    }
    for (auto& [family, stats] : report.families) {
        stats.mean_accuracy /= stats.count;
    }
    report.conformance_rate = static_cast<double>(passed) / report.items;
    report.mean_accuracy = acc_sum / report.items;
    return report;
}

CoverageReport coverage_report(const std::vector<ABPair>& pairs, const RuleParams& params) {
    CoverageReport report;
    report.pairs = static_cast<int>(pairs.size());
    for (const auto& pair : pairs) {
        std::vector<TransformKind> kinds;
        for (const auto& rec : pair.provenance) {
            const auto k = kind_of(rec.transform);
            if (std::find(kinds.begin(), kinds.end(), k) == kinds.end()) {
                kinds.push_back(k);
            }
        }
        for (auto k : kinds) {
            ++report.transform_counts[k];
        }
        report.seed_pairs += pair.provenance.empty() ? 1 : 0;
        const auto map = label_components(binarize(pair.a, params.binarize_threshold), params.connectivity);
        const auto conf = check_conformance(map, params);
        report.a_conforming += conf.conforms() ? 1 : 0;
        for (auto v : conf.violations) {
            ++report.violation_counts[v];
        }
    }
    return report;
}

}  // namespace flatcolor
