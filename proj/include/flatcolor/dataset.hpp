#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "flatcolor/augment.hpp"
#include "flatcolor/rules.hpp"

namespace flatcolor {

/// Raised when a plan cannot be satisfied (too small a target, exhausted catalog).
class PlanError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kMinTargetPairs = 400;
inline constexpr int kMaxTargetPairs = 1100;

/// Invariant failures for a pair; empty means valid. With a gap step in the
/// provenance, A's ink only has to be a subset of B's line pixels.
/// `line_slack` allows that many mismatching pixels (hand-edited pairs).
std::vector<std::string> pair_violations(const ABPair& pair, const ColorScheme& scheme,
                                         std::int64_t line_slack = 0);

/// 64-bit FNV-1a over A's bytes then B's bytes.
std::uint64_t content_hash(const ABPair& pair);

struct Drawing {
    std::string id;
    ClassTag class_tag = ClassTag::Flower;
    std::optional<Raster> image;  ///< loaded from `path` when empty
    std::filesystem::path path;
};

struct Rejected {
    std::string id;
    std::optional<ConformanceReport> report;
    std::string reason;
};

struct SeedResult {
    std::vector<ABPair> pairs;
    std::vector<Rejected> rejects;
};

/// Rule-colours every drawing; conforming ones become seed pairs, the rest are
/// reported. Throws std::invalid_argument on empty input.
SeedResult rule_color_originals(const std::vector<Drawing>& drawings, const RuleParams& params,
                                const ColorScheme& scheme, int canvas = 0);

/// Pairs files by stem and admits those passing the pair invariants.
/// Throws std::invalid_argument when the file counts differ.
SeedResult ingest_manual_pairs(const std::vector<std::filesystem::path>& a_files,
                               const std::vector<std::filesystem::path>& b_files, const ColorScheme& scheme,
                               std::int64_t line_slack, ClassTag class_tag = ClassTag::Creature);

using Catalogs = std::map<ClassTag, std::vector<PipelineSpec>>;

/// Built-in augmentation catalogs; pixel parameters scale with the canvas.
std::vector<PipelineSpec> default_catalog(ClassTag tag, int canvas = 400);

struct DatasetPlan {
    std::vector<Drawing> originals;
    ColorScheme scheme;
    RuleParams rule_params;
    Catalogs catalogs;
    int target_count = 506;
    double split = 0.9;
    int export_size = 256;
    std::uint64_t master_seed = 1;
    bool allow_out_of_range = false;
    int canvas = 400;
    int jobs = 1;
};

/// Human-readable warnings (target outside the usual 400-1100 range).
std::vector<std::string> plan_warnings(const DatasetPlan& plan);

/// Expands seed pairs round-robin (pipeline rounds outer, originals inner)
/// until exactly target_count unique pairs exist. Seed pairs come first.
/// Throws PlanError on infeasible targets and std::invalid_argument on
/// invalid catalogs.
std::vector<ABPair> build_dataset(const DatasetPlan& plan, const std::vector<ABPair>& seeds);

/// Drops pairs whose content hash matches an earlier pair.
std::vector<ABPair> dedup(std::vector<ABPair> pairs);

/// A resized into the left half, B into the right half of a 2*size x size image.
Raster compose_pair(const ABPair& pair, int size);
std::pair<Raster, Raster> split_composite(const Raster& composite);

struct ManifestRecord {
    std::string file;
    std::string split;
    std::string origin_id;
    std::string provenance;
    std::string class_tag;
    std::uint64_t hash = 0;
};

struct Manifest {
    std::vector<ManifestRecord> records;
};

std::string hash_hex(std::uint64_t h);
std::string provenance_summary(const ABPair& pair);

/// Writes train/ and val/ composites named %05d.png plus manifest.jsonl.
/// Throws IoError when the directory is not writable.
Manifest export_dataset(const std::vector<ABPair>& pairs, const std::filesystem::path& out_dir, int size,
                        double train_fraction, std::uint64_t seed, int jobs = 1);

}  // namespace flatcolor
