#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "flatcolor/raster.hpp"

namespace flatcolor {

enum class PartLabel : std::uint8_t { Background = 0, Body = 1, Appendage = 2, Eye = 3 };

std::string_view to_string(PartLabel label) noexcept;

/// Free parameters of the geometric part rules.
struct RuleParams {
    /// A non-body component farther than this from the background is an eye.
    double eye_distance_threshold = 4.0;
    /// Components below this area are treated as appendage noise.
    std::int64_t min_component_area = 0;
    Connectivity connectivity = Connectivity::Four;
    int binarize_threshold = kDefaultThreshold;

    void validate() const;
};

struct ColorScheme {
    Rgb background = kWhite;
    Rgb body{230, 120, 30};
    Rgb appendage{250, 220, 60};
    Rgb eye = kWhite;
    Rgb line = kBlack;

    Rgb color_of(PartLabel label) const noexcept;
    /// Throws std::invalid_argument if a part colour equals the line colour.
    void validate() const;
    /// Part colours plus line colour.
    std::vector<Rgb> palette() const;
};

enum class Violation { BackgroundDisconnected, BackgroundNotLargest, TooFewComponents };

std::string_view to_string(Violation v) noexcept;

struct ConformanceReport {
    std::vector<Violation> violations;

    bool conforms() const noexcept { return violations.empty(); }
    bool has(Violation v) const noexcept;
    std::string summary() const;
};

/// Part label per component, indexed by component id.
using Labeling = std::vector<PartLabel>;

/// Largest -> Background, second largest -> Body, remaining -> Appendage,
/// except remaining components farther than eye_distance_threshold from the
/// background, which become Eye. Area ties go to the lower id.
Labeling classify_parts(const ComponentMap& map, const RuleParams& params = {});

/// Decidable rule assumptions: one border-touching component, which is also
/// the largest, and at least two components.
ConformanceReport check_conformance(const ComponentMap& map, const RuleParams& params = {});

/// Flat fill every component with its part colour; line pixels get scheme.line.
Raster colorize(const Raster& img, const ComponentMap& map, const Labeling& labeling,
                const ColorScheme& scheme);

struct RuleColorResult {
    Raster colored;
    ConformanceReport report;
};

/// binarize -> label -> check -> classify -> colorize.
RuleColorResult rule_color(const Raster& img, const RuleParams& params = {},
                           const ColorScheme& scheme = {});

}  // namespace flatcolor
