#pragma once

#include <cstdint>
#include <vector>

#include "flatcolor/grid.hpp"

namespace flatcolor {

inline constexpr int kDefaultThreshold = 128;

enum class Connectivity { Four, Eight };

/// Rounded ITU-R 601 luma: round(0.299 R + 0.587 G + 0.114 B).
constexpr int luminance(Rgb c) noexcept {
    return (299 * c.r + 587 * c.g + 114 * c.b + 500) / 1000;
}

/// A pixel is line iff luminance(pixel) < threshold.
LineMask binarize(const Raster& img, int threshold = kDefaultThreshold);

/// Renders a mask as pure two-colour art.
Raster render_mask(const LineMask& mask, Rgb line = kBlack, Rgb paper = kWhite);

/// binarize + render_mask: snaps resampled line art back to two colours.
Raster rebinarize(const Raster& img, int threshold = kDefaultThreshold);

std::int64_t count_ink(const LineMask& mask);

struct Component {
    int id = 0;
    std::int64_t area = 0;
    Rect bbox;
    double cx = 0.0;
    double cy = 0.0;
    bool touches_border = false;
};

/// Labeling of the non-line pixels of a mask. Line pixels carry kLineLabel.
class ComponentMap {
public:
    static constexpr std::int32_t kLineLabel = -1;

    ComponentMap(Grid<std::int32_t> labels, std::vector<Component> components)
        : labels_(std::move(labels)), components_(std::move(components)) {}

    int width() const noexcept { return labels_.width(); }
    int height() const noexcept { return labels_.height(); }
    const Grid<std::int32_t>& labels() const noexcept { return labels_; }
    std::int32_t label_at(int x, int y) const { return labels_.at(x, y); }
    bool is_line(int x, int y) const { return labels_.at(x, y) == kLineLabel; }

    const std::vector<Component>& components() const noexcept { return components_; }
    std::size_t component_count() const noexcept { return components_.size(); }

    /// Throws std::out_of_range("unknown component ...") for invalid ids.
    const Component& component(int id) const;
    bool valid_id(int id) const noexcept {
        return id >= 0 && static_cast<std::size_t>(id) < components_.size();
    }

    /// Component ids sorted by decreasing area, ties by increasing id.
    std::vector<int> ranked_by_area() const;

private:
    Grid<std::int32_t> labels_;
    std::vector<Component> components_;
};

/// Labels connected non-line regions; ids follow row-major first-encounter order.
ComponentMap label_components(const LineMask& mask, Connectivity connectivity = Connectivity::Four);

/// Exact squared Euclidean distance from every pixel centre to the nearest
/// pixel where `seed` is true. Pixels with no seed anywhere get INT64_MAX.
Grid<std::int64_t> squared_distance_field(const Grid<std::uint8_t>& seed);

/// Minimum Euclidean distance between pixel centres of components a and b.
double component_distance(const ComponentMap& map, int a, int b);

/// Distance from component `from` to every component, indexed by id.
std::vector<double> distances_from(const ComponentMap& map, int from);

/// Paint-bucket fill of one component.
Raster fill_component(const Raster& img, const ComponentMap& map, int id, Rgb color);

}  // namespace flatcolor
