#include "flatcolor/augment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "flatcolor/hash.hpp"
#include "flatcolor/rng.hpp"

namespace flatcolor {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

struct Mat2 {
    double a = 1, b = 0, c = 0, d = 1;  // [[a b] [c d]]

    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    std::optional<Mat2> inverse() const {
        const double det = a * d - b * c;
        if (det == 0.0 || !std::isfinite(det)) {
            return std::nullopt;
        }
        return Mat2{d / det, -b / det, -c / det, a / det};
    }
};

// cos/sin with exact values on multiples of 90 degrees.
std::pair<double, double> exact_cos_sin(double deg) {
    const double turns = deg / 90.0;
    if (turns == std::round(turns)) {
        const auto q = static_cast<long long>(std::round(turns));
        switch (((q % 4) + 4) % 4) {
            case 0: return {1.0, 0.0};
            case 1: return {0.0, 1.0};
            case 2: return {-1.0, 0.0};
            default: return {0.0, -1.0};
        }
    }
    const double rad = deg * std::numbers::pi / 180.0;
    return {std::cos(rad), std::sin(rad)};
}

Mat2 affine_linear(const AffineSpec& s) {
    const auto [cr, sr] = exact_cos_sin(s.rotate_deg);
    const Mat2 rot{cr, -sr, sr, cr};
    const double shear = s.skew_deg == 0.0 ? 0.0 : std::tan(s.skew_deg * std::numbers::pi / 180.0);
    const Mat2 skew{1.0, shear, 0.0, 1.0};
    const Mat2 scale{s.sx, 0.0, 0.0, s.sy};
    const Mat2 mirror{s.mirror_x ? -1.0 : 1.0, 0.0, 0.0, s.mirror_y ? -1.0 : 1.0};
    return rot * skew * scale * mirror;
}

int nearest(double v) { return static_cast<int>(std::floor(v + 0.5)); }

// Output pixel (x, y) takes src at round(source(x, y)); outside -> fill.
template <class Fn>
Raster inverse_map(const Raster& src, Rgb fill, Fn&& source) {
    Raster out(src.width(), src.height(), fill);
    for (int y = 0; y < src.height(); ++y) {
        for (int x = 0; x < src.width(); ++x) {
            const auto [fx, fy] = source(x, y);
            if (!std::isfinite(fx) || !std::isfinite(fy)) {
                continue;
            }
            const int sx = nearest(fx);
            const int sy = nearest(fy);
            if (src.contains(sx, sy)) {
                out.at(x, y) = src.at(sx, sy);
            }
        }
    }
    return out;
}

std::vector<double> gaussian_kernel(double sigma) {
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double v = std::exp(-(static_cast<double>(i) * i) / (2.0 * sigma * sigma));
        k[static_cast<std::size_t>(i + radius)] = v;
        sum += v;
    }
    for (double& v : k) {
        v /= sum;
    }
    return k;
}

// Separable convolution with clamp-to-edge borders.
Grid<double> blur(const Grid<double>& in, const std::vector<double>& kernel) {
    const int radius = static_cast<int>(kernel.size() / 2);
    const int w = in.width();
    const int h = in.height();
    Grid<double> tmp(w, h, 0.0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                acc += kernel[static_cast<std::size_t>(k + radius)] * in.at(std::clamp(x + k, 0, w - 1), y);
            }
            tmp.at(x, y) = acc;
        }
    }
    Grid<double> out(w, h, 0.0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                acc += kernel[static_cast<std::size_t>(k + radius)] * tmp.at(x, std::clamp(y + k, 0, h - 1));
            }
            out.at(x, y) = acc;
        }
    }
    return out;
}

}  // namespace

TransformKind kind_of(const Transform& t) noexcept {
    return static_cast<TransformKind>(t.index());
}

std::string_view to_string(TransformKind k) noexcept {
    switch (k) {
        case TransformKind::Affine: return "affine";
        case TransformKind::RadialWarp: return "radial_warp";
        case TransformKind::Elastic: return "elastic";
        case TransformKind::Gaps: return "gaps";
        case TransformKind::Crop: return "crop";
    }
    return "?";
}

std::string_view to_string(ClassTag c) noexcept {
    return c == ClassTag::Flower ? "flower" : "creature";
}

ClassTag class_tag_from_string(std::string_view s) {
    if (s == "flower") {
        return ClassTag::Flower;
    }
    if (s == "creature") {
        return ClassTag::Creature;
    }
    throw std::invalid_argument("unknown class tag '" + std::string(s) + "'");
}

void validate_transform(const Transform& t) {
    std::visit(Overloaded{
                   [](const AffineSpec& s) {
                       if (!(s.sx > 0.0) || !(s.sy > 0.0)) {
                           throw std::invalid_argument("affine: scale factors must be > 0");
                       }
                       if (!affine_linear(s).inverse()) {
                           throw std::invalid_argument("affine: map is singular");
                       }
                   },
                   [](const RadialWarpSpec& s) {
                       if (!(s.exponent > 0.0) || !std::isfinite(s.exponent)) {
                           throw std::invalid_argument("radial_warp: exponent must be > 0");
                       }
                   },
                   [](const ElasticSpec& s) {
                       if (!(s.alpha >= 0.0) || !(s.sigma > 0.0)) {
                           throw std::invalid_argument("elastic: need alpha >= 0 and sigma > 0");
                       }
                   },
                   [](const GapSpec& s) {
                       if (s.stroke_count < 0 || s.stroke_width < 1 || s.stroke_length < 1) {
                           throw std::invalid_argument("gaps: stroke parameters must be positive");
                       }
                   },
                   [](const CropSpec& s) {
                       if (s.rect.w < 1 || s.rect.h < 1 || s.rect.x < 0 || s.rect.y < 0) {
                           throw std::invalid_argument("crop: rect must have positive size and origin >= 0");
                       }
                   },
               },
               t);
}

std::uint64_t seed_of(const Transform& t) noexcept {
    if (const auto* e = std::get_if<ElasticSpec>(&t)) {
        return e->seed;
    }
    if (const auto* g = std::get_if<GapSpec>(&t)) {
        return g->seed;
    }
    return 0;
}

Transform with_seed(Transform t, std::uint64_t seed) {
    if (auto* e = std::get_if<ElasticSpec>(&t)) {
        e->seed = seed;
    } else if (auto* g = std::get_if<GapSpec>(&t)) {
        g->seed = seed;
    }
    return t;
}

Raster apply_affine(const Raster& img, const AffineSpec& spec) {
    validate_transform(spec);
    const auto inv = *affine_linear(spec).inverse();
    const double cx = (img.width() - 1) / 2.0;
    const double cy = (img.height() - 1) / 2.0;
    return inverse_map(img, spec.fill, [&](int x, int y) {
        const double qx = x - cx - spec.tx;
        const double qy = y - cy - spec.ty;
        return std::pair{cx + inv.a * qx + inv.b * qy, cy + inv.c * qx + inv.d * qy};
    });
}

Raster apply_radial_warp(const Raster& img, const RadialWarpSpec& spec) {
    validate_transform(spec);
    const double cx = (img.width() - 1) / 2.0;
    const double cy = (img.height() - 1) / 2.0;
    const double radius = std::hypot(img.width(), img.height()) / 2.0;
    const double inv_p = 1.0 / spec.exponent;
    return inverse_map(img, kWhite, [&](int x, int y) {
        const double u = (x - cx) / radius;
        const double v = (y - cy) / radius;
        const double r = std::hypot(u, v);
        if (r == 0.0 || spec.exponent == 1.0) {
            return std::pair{static_cast<double>(x), static_cast<double>(y)};
        }
        const double scale = std::pow(r, inv_p) / r;
        return std::pair{cx + u * scale * radius, cy + v * scale * radius};
    });
}

std::pair<Grid<double>, Grid<double>> elastic_field(int width, int height, const ElasticSpec& spec) {
    validate_transform(spec);
    Rng rng(spec.seed);
    Grid<double> dx(width, height, 0.0);
    Grid<double> dy(width, height, 0.0);
    for (double& v : dx.cells()) {
        v = rng.uniform(-1.0, 1.0);
    }
    for (double& v : dy.cells()) {
        v = rng.uniform(-1.0, 1.0);
    }
    const auto kernel = gaussian_kernel(spec.sigma);
    dx = blur(dx, kernel);
    dy = blur(dy, kernel);
    for (double& v : dx.cells()) {
        v *= spec.alpha;
    }
    for (double& v : dy.cells()) {
        v *= spec.alpha;
    }
    return {std::move(dx), std::move(dy)};
}

Raster apply_elastic(const Raster& img, const ElasticSpec& spec) {
    validate_transform(spec);
    if (spec.alpha == 0.0) {
        return img;
    }
    const auto [dx, dy] = elastic_field(img.width(), img.height(), spec);
    return inverse_map(img, kWhite, [&](int x, int y) {
        return std::pair{x + dx.at(x, y), y + dy.at(x, y)};
    });
}

Raster apply_gaps(const Raster& img, const GapSpec& spec) {
    validate_transform(spec);
    Raster out = img;
    if (spec.stroke_count == 0) {
        return out;
    }
    const auto mask = binarize(img);
    std::vector<std::pair<int, int>> ink;
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            if (mask.at(x, y) == Ink::Line) {
                ink.emplace_back(x, y);
            }
        }
    }
    static constexpr std::array<int, 4> kDx{1, 0, -1, 0};
    static constexpr std::array<int, 4> kDy{0, 1, 0, -1};
    Rng rng(spec.seed);
    const int lo = (spec.stroke_width - 1) / 2;
    const int hi = spec.stroke_width / 2;
    for (int s = 0; s < spec.stroke_count; ++s) {
        int x = 0;
        int y = 0;
        if (!ink.empty()) {
            std::tie(x, y) = ink[rng.below(ink.size())];
        } else {
            x = static_cast<int>(rng.below(static_cast<std::uint64_t>(img.width())));
            y = static_cast<int>(rng.below(static_cast<std::uint64_t>(img.height())));
        }
        auto dir = static_cast<int>(rng.below(4));
        for (int step = 0; step < spec.stroke_length; ++step) {
            for (int by = y - lo; by <= y + hi; ++by) {
                for (int bx = x - lo; bx <= x + hi; ++bx) {
                    if (out.contains(bx, by)) {
                        out.at(bx, by) = kWhite;
                    }
                }
            }
            if (!rng.chance(0.8)) {
                dir = (dir + 1 + static_cast<int>(rng.below(3))) % 4;
            }
            if (!out.contains(x + kDx[static_cast<std::size_t>(dir)], y + kDy[static_cast<std::size_t>(dir)])) {
                dir = (dir + 2) % 4;
            }
            x = std::clamp(x + kDx[static_cast<std::size_t>(dir)], 0, img.width() - 1);
            y = std::clamp(y + kDy[static_cast<std::size_t>(dir)], 0, img.height() - 1);
        }
    }
    return out;
}

Raster apply_crop(const Raster& img, const CropSpec& spec) {
    validate_transform(spec);
    auto cropped = crop_grid(img, spec.rect);
    if (spec.resize_back) {
        return resize_nearest(cropped, img.width(), img.height());
    }
    return cropped;
}

Raster apply_transform(const Raster& img, const Transform& t) {
    return std::visit(Overloaded{
                          [&](const AffineSpec& s) { return apply_affine(img, s); },
                          [&](const RadialWarpSpec& s) { return apply_radial_warp(img, s); },
                          [&](const ElasticSpec& s) { return apply_elastic(img, s); },
                          [&](const GapSpec& s) { return apply_gaps(img, s); },
                          [&](const CropSpec& s) { return apply_crop(img, s); },
                      },
                      t);
}

Raster replay(const TransformRecord& record, const Raster& img) {
    return apply_transform(img, with_seed(record.transform, record.seed));
}

ABPair apply_to_pair(const Transform& t, const ABPair& pair, std::optional<std::uint64_t> seed) {
    require_same_shape(pair.a, pair.b, "apply_to_pair");
    const Transform seeded = seed ? with_seed(t, *seed) : t;
    ABPair out;
    out.origin_id = pair.origin_id;
    out.class_tag = pair.class_tag;
    out.provenance = pair.provenance;
    out.provenance.push_back(TransformRecord{seeded, seed_of(seeded)});
    if (kind_of(seeded) == TransformKind::Gaps) {
        out.a = apply_transform(pair.a, seeded);
        out.b = pair.b;
    } else {
        out.a = rebinarize(apply_transform(pair.a, seeded));
        out.b = apply_transform(pair.b, seeded);
    }
    return out;
}

ABPair run_pipeline(const PipelineSpec& spec, const ABPair& pair, std::uint64_t base_seed) {
    ABPair cur = pair;
    for (std::size_t i = 0; i < spec.steps.size(); ++i) {
        cur = apply_to_pair(spec.steps[i], cur, derive_seed(base_seed, {i}));
    }
    return cur;
}

Raster run_pipeline(const PipelineSpec& spec, const Raster& img, std::uint64_t base_seed) {
    Raster cur = img;
    for (std::size_t i = 0; i < spec.steps.size(); ++i) {
        cur = apply_transform(cur, with_seed(spec.steps[i], derive_seed(base_seed, {i})));
    }
    return cur;
}

std::string_view to_string(PipelineIssueKind k) noexcept {
    switch (k) {
        case PipelineIssueKind::InvalidStep: return "InvalidStep";
        case PipelineIssueKind::CutEdgeMovedInward: return "CutEdgeMovedInward";
        case PipelineIssueKind::RadialWarpOnCreature: return "RadialWarpOnCreature";
        case PipelineIssueKind::DuplicateOfIdentity: return "DuplicateOfIdentity";
        case PipelineIssueKind::DuplicateOfPipeline: return "DuplicateOfPipeline";
    }
    return "?";
}

const Raster& probe_image() {
    static const Raster probe = [] {
        Raster img(400, 400, kWhite);
        Rng rng(0x5eed'9a0b'e111'0001ULL);
        for (int by = 0; by < 50; ++by) {
            for (int bx = 0; bx < 50; ++bx) {
                if (!rng.chance(0.3)) {
                    continue;
                }
                const Rgb c{static_cast<std::uint8_t>(rng.below(200)), static_cast<std::uint8_t>(rng.below(256)),
                            static_cast<std::uint8_t>(rng.below(256))};
                for (int y = 0; y < 8; ++y) {
                    for (int x = 0; x < 8; ++x) {
                        img.at(bx * 8 + x, by * 8 + y) = c;
                    }
                }
            }
        }
        return img;
    }();
    return probe;
}

std::uint64_t probe_hash(const PipelineSpec& spec, int canvas) {
    const Raster& probe = probe_image();
    const Raster out = run_pipeline(
        spec, canvas == probe.width() ? probe : resize_nearest(probe, canvas, canvas), spec.seed);
    std::uint64_t h = kFnvOffset;
    for (int v : {out.width(), out.height()}) {
        h ^= static_cast<std::uint64_t>(v);
        h *= kFnvPrime;
    }
    return fnv1a(out, h);
}

namespace {

enum Side { kLeft = 0, kRight, kTop, kBottom };

struct Point {
    double x;
    double y;
};

// Tracks which canvas sides are cut edges (content truncated there).
struct EdgeState {
    int width;
    int height;
    std::array<bool, 4> cut{};
};

constexpr int kEdgeSamples = 65;
constexpr double kInteriorMargin = 1.0;

std::vector<Point> side_samples(const EdgeState& st, int side) {
    const double x0 = -0.5;
    const double y0 = -0.5;
    const double x1 = st.width - 0.5;
    const double y1 = st.height - 0.5;
    std::vector<Point> pts;
    for (int i = 0; i < kEdgeSamples; ++i) {
        const double t = static_cast<double>(i) / (kEdgeSamples - 1);
        switch (side) {
            case kLeft: pts.push_back({x0, y0 + t * (y1 - y0)}); break;
            case kRight: pts.push_back({x1, y0 + t * (y1 - y0)}); break;
            case kTop: pts.push_back({x0 + t * (x1 - x0), y0}); break;
            default: pts.push_back({x0 + t * (x1 - x0), y1}); break;
        }
    }
    return pts;
}

bool strictly_interior(const EdgeState& st, Point p) {
    return p.x > -0.5 + kInteriorMargin && p.x < st.width - 0.5 - kInteriorMargin &&
           p.y > -0.5 + kInteriorMargin && p.y < st.height - 0.5 - kInteriorMargin;
}

// Marks sides that a mapped cut-edge point lies on (or beyond).
void mark_sides(std::array<bool, 4>& cut, const EdgeState& st, Point p) {
    const double tol = kInteriorMargin;
    if (p.x <= -0.5 + tol) cut[kLeft] = true;
    if (p.x >= st.width - 0.5 - tol) cut[kRight] = true;
    if (p.y <= -0.5 + tol) cut[kTop] = true;
    if (p.y >= st.height - 0.5 - tol) cut[kBottom] = true;
}

// Maps every cut side through `forward`; returns false if a cut edge lands inside.
template <class Fn>
bool push_cut_edges(EdgeState& st, Fn&& forward) {
    std::array<bool, 4> next{};
    bool ok = true;
    for (int side = 0; side < 4; ++side) {
        if (!st.cut[static_cast<std::size_t>(side)]) {
            continue;
        }
        for (Point p : side_samples(st, side)) {
            const Point q = forward(p);
            if (strictly_interior(st, q)) {
                ok = false;
            } else {
                mark_sides(next, st, q);
            }
        }
    }
    st.cut = next;
    return ok;
}

}  // namespace

std::vector<PipelineIssue> validate_pipeline(const PipelineSpec& spec, int canvas) {
    if (canvas < 1) {
        throw std::invalid_argument("validate_pipeline: canvas must be positive");
    }
    std::vector<PipelineIssue> issues;
    EdgeState st{canvas, canvas, {}};
    for (std::size_t i = 0; i < spec.steps.size(); ++i) {
        const auto step = static_cast<int>(i);
        const Transform& t = spec.steps[i];
        try {
            validate_transform(t);
        } catch (const std::invalid_argument& e) {
            issues.push_back({PipelineIssueKind::InvalidStep, step, -1, -1, e.what()});
            continue;
        }
        if (const auto* crop = std::get_if<CropSpec>(&t)) {
            const Rect r = crop->rect;
            if (r.x + r.w > st.width || r.y + r.h > st.height) {
                issues.push_back({PipelineIssueKind::InvalidStep, step, -1, -1, "crop rect outside canvas"});
                continue;
            }
            std::array<bool, 4> next{};
            next[kLeft] = r.x > 0 || (st.cut[kLeft] && r.x == 0);
            next[kRight] = r.x + r.w < st.width || (st.cut[kRight] && r.x + r.w == st.width);
            next[kTop] = r.y > 0 || (st.cut[kTop] && r.y == 0);
            next[kBottom] = r.y + r.h < st.height || (st.cut[kBottom] && r.y + r.h == st.height);
            st.cut = next;
            if (!crop->resize_back) {
                st.width = r.w;
                st.height = r.h;
            }
        } else if (const auto* aff = std::get_if<AffineSpec>(&t)) {
            const Mat2 m = affine_linear(*aff);
            const double cx = (st.width - 1) / 2.0;
            const double cy = (st.height - 1) / 2.0;
            const bool ok = push_cut_edges(st, [&](Point p) {
                const double dx = p.x - cx;
                const double dy = p.y - cy;
                return Point{cx + aff->tx + m.a * dx + m.b * dy, cy + aff->ty + m.c * dx + m.d * dy};
            });
            if (!ok) {
                issues.push_back({PipelineIssueKind::CutEdgeMovedInward, step, -1, -1,
                                  "step " + std::to_string(step) + " moves a cut edge into the canvas"});
            }
            if (aff->tx > 0.5) st.cut[kRight] = true;
            if (aff->tx < -0.5) st.cut[kLeft] = true;
            if (aff->ty > 0.5) st.cut[kBottom] = true;
            if (aff->ty < -0.5) st.cut[kTop] = true;
            if (aff->sx > 1.0 + 1e-9 || aff->sy > 1.0 + 1e-9) {
                st.cut = {true, true, true, true};
            }
        } else if (const auto* warp = std::get_if<RadialWarpSpec>(&t)) {
            if (spec.class_tag == ClassTag::Creature) {
                issues.push_back({PipelineIssueKind::RadialWarpOnCreature, step, -1, -1,
                                  "radial warp is reserved for flower pipelines"});
            }
            const double cx = (st.width - 1) / 2.0;
            const double cy = (st.height - 1) / 2.0;
            const double radius = std::hypot(st.width, st.height) / 2.0;
            const bool ok = push_cut_edges(st, [&](Point p) {
                const double u = (p.x - cx) / radius;
                const double v = (p.y - cy) / radius;
                const double r = std::hypot(u, v);
                if (r == 0.0) {
                    return p;
                }
                const double s = std::pow(r, warp->exponent) / r;
                return Point{cx + u * s * radius, cy + v * s * radius};
            });
            if (!ok) {
                issues.push_back({PipelineIssueKind::CutEdgeMovedInward, step, -1, -1,
                                  "step " + std::to_string(step) + " warps a cut edge into the canvas"});
            }
        }
    }

    const bool has_invalid = std::any_of(issues.begin(), issues.end(), [](const PipelineIssue& i) {
        return i.kind == PipelineIssueKind::InvalidStep;
    });
    if (!has_invalid &&
        probe_hash(spec, canvas) == probe_hash(PipelineSpec{{}, spec.class_tag, spec.seed, {}}, canvas)) {
        issues.push_back({PipelineIssueKind::DuplicateOfIdentity, -1, -1, -1,
                          "pipeline output equals its input on the probe image"});
    }
    return issues;
}

std::vector<PipelineIssue> validate_catalog(const std::vector<PipelineSpec>& catalog, int canvas) {
    std::vector<PipelineIssue> issues;
    std::vector<std::pair<std::uint64_t, int>> seen;
    for (std::size_t i = 0; i < catalog.size(); ++i) {
        const auto idx = static_cast<int>(i);
        auto own = validate_pipeline(catalog[i], canvas);
        const bool invalid = std::any_of(own.begin(), own.end(), [](const PipelineIssue& p) {
            return p.kind == PipelineIssueKind::InvalidStep;
        });
        for (auto& issue : own) {
            issue.pipeline = idx;
            issues.push_back(std::move(issue));
        }
        if (invalid) {
            continue;
        }
        const std::uint64_t h = probe_hash(catalog[i], canvas);
        const auto hit = std::find_if(seen.begin(), seen.end(), [&](const auto& s) { return s.first == h; });
        if (hit != seen.end()) {
            issues.push_back({PipelineIssueKind::DuplicateOfPipeline, -1, idx, hit->second,
                              "pipeline " + std::to_string(idx) + " duplicates pipeline " +
                                  std::to_string(hit->second) + " on the probe image"});
        } else {
            seen.emplace_back(h, idx);
        }
    }
    return issues;
}

}  // namespace flatcolor
