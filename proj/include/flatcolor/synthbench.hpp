#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flatcolor/augment.hpp"
#include "flatcolor/rules.hpp"

namespace flatcolor {

enum class TruthLabel : std::uint8_t { Background = 0, Body = 1, Appendage = 2, Eye = 3, Line = 4 };

/// Per-pixel intended part map aligned with a generated drawing.
using GroundTruth = Grid<TruthLabel>;

struct FlowerSpec {
    int canvas = 400;
    double center_radius = 70.0;
    int petal_count = 12;
    double petal_a = 50.0;  ///< radial semi-axis
    double petal_b = 20.0;  ///< tangential semi-axis
    int line_width = 2;
    /// When > 0, the centre radius is derived so that centre area equals
    /// daisy_ratio times the nominal petal area. Below 1 gives a daisy.
    double daisy_ratio = 0.0;
    double rotation_deg = 0.0;
    /// Relative per-petal size jitter drawn from `seed`.
    double jitter = 0.0;
    std::optional<GapSpec> gap;
    std::optional<CropSpec> crop;
    std::uint64_t seed = 0;
};

struct CreatureSpec {
    int canvas = 400;
    double body_a = 110.0;
    double body_b = 75.0;
    int spike_count = 6;
    double spike_size = 30.0;
    double eye_radius = 12.0;
    double eye_dx = 45.0;
    double eye_dy = -20.0;
    int line_width = 2;
    double jitter = 0.0;
    std::uint64_t seed = 0;
};

struct Generated {
    Raster art;
    GroundTruth truth;
};

/// Throws std::invalid_argument for invalid or unrepairable geometry
/// (overlapping petals, parts swallowed or split by outlines, art off-canvas).
Generated gen_flower(const FlowerSpec& spec);
Generated gen_creature(const CreatureSpec& spec);

/// Expected rule colouring derived from the truth map.
Raster oracle_coloring(const GroundTruth& truth, const ColorScheme& scheme = {});

enum class ViolationFamily { None, Gaps, CropSplit, Daisy };

std::string_view to_string(ViolationFamily f) noexcept;
inline constexpr std::array<ViolationFamily, 3> kViolationFamilies{
    ViolationFamily::Gaps, ViolationFamily::CropSplit, ViolationFamily::Daisy};

struct CorpusItem {
    std::string id;
    Generated drawing;
    bool intended_conforming = true;
    ViolationFamily family = ViolationFamily::None;
};

/// Exactly round(n * f) items conform by construction; the rest are drawn
/// uniformly from the violation families. Throws for n == 0 or f outside [0, 1].
std::vector<CorpusItem> gen_corpus(int n, double conforming_fraction, std::uint64_t seed,
                                   int canvas = 400);

/// Random valid sunflower / creature specs, used for corpora and originals.
FlowerSpec random_sunflower_spec(std::uint64_t seed, int canvas = 400);
FlowerSpec random_daisy_spec(std::uint64_t seed, int canvas = 400);
CreatureSpec random_creature_spec(std::uint64_t seed, int canvas = 400);

/// Generates with retries on derived seeds until the geometry is valid.
Generated gen_random_flower(std::uint64_t seed, int canvas = 400);
Generated gen_random_creature(std::uint64_t seed, int canvas = 400);

/// Fraction of pixels with exactly equal RGB.
double pixel_accuracy(const Raster& predicted, const Raster& oracle);

double conformance_rate(const std::vector<CorpusItem>& corpus, const RuleParams& params = {});

struct FamilyStats {
    int count = 0;
    int passed_check = 0;
    double mean_accuracy = 0.0;
};

struct EvalReport {
    int items = 0;
    int intended_conforming = 0;
    double conformance_rate = 0.0;
    double mean_accuracy = 0.0;
    std::map<ViolationFamily, FamilyStats> families;
};

/// conformance_rate plus per-family detectability and rule-colouring accuracy.
EvalReport evaluate_corpus(const std::vector<CorpusItem>& corpus, const RuleParams& params = {},
                           const ColorScheme& scheme = {});

struct CoverageReport {
    int pairs = 0;
    std::map<TransformKind, int> transform_counts;
    int seed_pairs = 0;
    int a_conforming = 0;
    std::map<Violation, int> violation_counts;
};

/// Per-category tallies: each pair counts at most once per transform kind.
CoverageReport coverage_report(const std::vector<ABPair>& pairs, const RuleParams& params = {});

}  // namespace flatcolor
