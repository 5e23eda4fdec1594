#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "flatcolor/raster.hpp"

namespace flatcolor {

/// Affine map about the canvas centre: q = c + t + R(rotate) K(skew) S(scale) M(mirror) (p - c).
struct AffineSpec {
    double tx = 0.0;
    double ty = 0.0;
    double rotate_deg = 0.0;
    double sx = 1.0;
    double sy = 1.0;
    double skew_deg = 0.0;
    bool mirror_x = false;
    bool mirror_y = false;
    Rgb fill = kWhite;
};

/// Forward map r -> r^exponent on the disk circumscribing the canvas.
struct RadialWarpSpec {
    double exponent = 3.0;
};

/// Smoothed random displacement field (uniform noise, Gaussian blur, scale).
struct ElasticSpec {
    double alpha = 8.0;
    double sigma = 4.0;
    std::uint64_t seed = 0;
};

/// Random-walk eraser strokes painted in the paper colour.
struct GapSpec {
    int stroke_count = 2;
    int stroke_width = 5;
    int stroke_length = 30;
    std::uint64_t seed = 0;
};

struct CropSpec {
    Rect rect;
    bool resize_back = true;
};

using Transform = std::variant<AffineSpec, RadialWarpSpec, ElasticSpec, GapSpec, CropSpec>;

enum class TransformKind { Affine, RadialWarp, Elastic, Gaps, Crop };

TransformKind kind_of(const Transform& t) noexcept;
std::string_view to_string(TransformKind k) noexcept;
/// Throws std::invalid_argument when a spec breaks its invariants.
void validate_transform(const Transform& t);
/// Seed carried by the spec; 0 for unseeded kinds.
std::uint64_t seed_of(const Transform& t) noexcept;
/// Returns t with its seed replaced (no-op for unseeded kinds).
Transform with_seed(Transform t, std::uint64_t seed);

Raster apply_affine(const Raster& img, const AffineSpec& spec);
Raster apply_radial_warp(const Raster& img, const RadialWarpSpec& spec);
Raster apply_elastic(const Raster& img, const ElasticSpec& spec);
Raster apply_gaps(const Raster& img, const GapSpec& spec);
Raster apply_crop(const Raster& img, const CropSpec& spec);
Raster apply_transform(const Raster& img, const Transform& t);

/// The elastic displacement field, exposed for tests. Returns {dx, dy}.
std::pair<Grid<double>, Grid<double>> elastic_field(int width, int height, const ElasticSpec& spec);

enum class ClassTag { Flower, Creature };

std::string_view to_string(ClassTag c) noexcept;
ClassTag class_tag_from_string(std::string_view s);

/// A transform as it was actually applied, including its realised seed.
struct TransformRecord {
    Transform transform;
    std::uint64_t seed = 0;
};

/// Aligned (line art, coloured) training pair.
struct ABPair {
    Raster a;
    Raster b;
    std::string origin_id;
    std::vector<TransformRecord> provenance;
    ClassTag class_tag = ClassTag::Flower;
};

/// Same transform on A and B, except gaps which touch A only. A is re-binarized.
/// A given seed replaces the spec's own seed.
ABPair apply_to_pair(const Transform& t, const ABPair& pair, std::optional<std::uint64_t> seed = std::nullopt);

/// Re-applies a recorded transform.
Raster replay(const TransformRecord& record, const Raster& img);

struct PipelineSpec {
    std::vector<Transform> steps;
    ClassTag class_tag = ClassTag::Flower;
    std::uint64_t seed = 0;
    std::string name;
};

/// Runs every step with seed derive_seed(base_seed, {step}).
ABPair run_pipeline(const PipelineSpec& spec, const ABPair& pair, std::uint64_t base_seed);
Raster run_pipeline(const PipelineSpec& spec, const Raster& img, std::uint64_t base_seed);

enum class PipelineIssueKind {
    InvalidStep,
    CutEdgeMovedInward,
    RadialWarpOnCreature,
    DuplicateOfIdentity,
    DuplicateOfPipeline,
};

std::string_view to_string(PipelineIssueKind k) noexcept;

struct PipelineIssue {
    PipelineIssueKind kind;
    int step = -1;      ///< offending step, when applicable
    int pipeline = -1;  ///< index within a catalog, when applicable
    int other = -1;     ///< earlier duplicate pipeline index
    std::string message;
};

/// Fixed asymmetric probe canvas used for output-hash duplicate detection.
const Raster& probe_image();
/// Hash of the pipeline output on the probe image resampled to canvas x canvas.
std::uint64_t probe_hash(const PipelineSpec& spec, int canvas = 400);

/// Static checks for one pipeline on a square canvas. Empty result means ok.
std::vector<PipelineIssue> validate_pipeline(const PipelineSpec& spec, int canvas = 400);

/// validate_pipeline on every entry plus probe-hash duplicate detection across
/// the catalog (first occurrence wins).
std::vector<PipelineIssue> validate_catalog(const std::vector<PipelineSpec>& catalog, int canvas = 400);

}  // namespace flatcolor
