#include "flatcolor/rules.hpp"

#include <algorithm>
#include <stdexcept>

namespace flatcolor {

std::string_view to_string(PartLabel label) noexcept {
    switch (label) {
        case PartLabel::Background: return "background";
        case PartLabel::Body: return "body";
        case PartLabel::Appendage: return "appendage";
        case PartLabel::Eye: return "eye";
    }
    return "?";
}

std::string_view to_string(Violation v) noexcept {
    switch (v) {
        case Violation::BackgroundDisconnected: return "BackgroundDisconnected";
        case Violation::BackgroundNotLargest: return "BackgroundNotLargest";
        case Violation::TooFewComponents: return "TooFewComponents";
    }
    return "?";
}

void RuleParams::validate() const {
    if (!(eye_distance_threshold > 0.0)) {
        throw std::invalid_argument("eye_distance_threshold must be > 0");
    }
    if (min_component_area < 0) {
        throw std::invalid_argument("min_component_area must be >= 0");
    }
    if (binarize_threshold < 0 || binarize_threshold > 256) {
        throw std::invalid_argument("binarize threshold must be in [0, 256]");
    }
}

Rgb ColorScheme::color_of(PartLabel label) const noexcept {
    switch (label) {
        case PartLabel::Background: return background;
        case PartLabel::Body: return body;
        case PartLabel::Appendage: return appendage;
        case PartLabel::Eye: return eye;
    }
    return background;
}

void ColorScheme::validate() const {
    for (PartLabel p : {PartLabel::Background, PartLabel::Body, PartLabel::Appendage, PartLabel::Eye}) {
        if (color_of(p) == line) {
            throw std::invalid_argument("colour scheme: " + std::string(to_string(p)) +
                                        " colour equals the line colour");
        }
    }
}

std::vector<Rgb> ColorScheme::palette() const {
    std::vector<Rgb> out;
    for (Rgb c : {background, body, appendage, eye, line}) {
        if (std::find(out.begin(), out.end(), c) == out.end()) {
            out.push_back(c);
        }
    }
    return out;
}

bool ConformanceReport::has(Violation v) const noexcept {
    return std::find(violations.begin(), violations.end(), v) != violations.end();
}

std::string ConformanceReport::summary() const {
    if (conforms()) {
        return "conforms";
    }
    std::string out;
    for (Violation v : violations) {
        if (!out.empty()) {
            out += ',';
        }
        out += to_string(v);
    }
    return out;
}

Labeling classify_parts(const ComponentMap& map, const RuleParams& params) {
    Labeling labels(map.component_count(), PartLabel::Appendage);
    if (labels.empty()) {
        return labels;
    }
    const auto ranked = map.ranked_by_area();
    const int background = ranked.front();
    labels[static_cast<std::size_t>(background)] = PartLabel::Background;

    const auto is_noise = [&](int id) {
        return map.component(id).area < params.min_component_area;
    };

    int body = -1;
    for (std::size_t i = 1; i < ranked.size(); ++i) {
        if (!is_noise(ranked[i])) {
            body = ranked[i];
            break;
        }
    }
    if (body < 0) {
        return labels;
    }
    labels[static_cast<std::size_t>(body)] = PartLabel::Body;

    if (map.component_count() > 2) {
        const auto dist = distances_from(map, background);
        for (const auto& c : map.components()) {
            if (c.id == background || c.id == body || is_noise(c.id)) {
                continue;
            }
            if (dist[static_cast<std::size_t>(c.id)] > params.eye_distance_threshold) {
                labels[static_cast<std::size_t>(c.id)] = PartLabel::Eye;
            }
        }
    }
    return labels;
}

ConformanceReport check_conformance(const ComponentMap& map, const RuleParams&) {
    ConformanceReport report;
    const auto& comps = map.components();
    const auto border_touching =
        std::count_if(comps.begin(), comps.end(), [](const Component& c) { return c.touches_border; });
    if (border_touching > 1) {
        report.violations.push_back(Violation::BackgroundDisconnected);
    }
    if (!comps.empty() && !map.component(map.ranked_by_area().front()).touches_border) {
        report.violations.push_back(Violation::BackgroundNotLargest);
    }
    if (comps.size() < 2) {
        report.violations.push_back(Violation::TooFewComponents);
    }
    return report;
}

Raster colorize(const Raster& img, const ComponentMap& map, const Labeling& labeling,
                const ColorScheme& scheme) {
    require_same_shape(img, map, "colorize");
    if (labeling.size() != map.component_count()) {
        throw std::invalid_argument("colorize: labeling covers " + std::to_string(labeling.size()) +
                                    " of " + std::to_string(map.component_count()) + " components");
    }
    std::vector<Rgb> fill(labeling.size());
    std::transform(labeling.begin(), labeling.end(), fill.begin(),
                   [&](PartLabel p) { return scheme.color_of(p); });

    Raster out(img.width(), img.height());
    const auto labels = map.labels().cells();
    auto dst = out.cells();
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto id = labels[i];
        dst[i] = id == ComponentMap::kLineLabel ? scheme.line : fill[static_cast<std::size_t>(id)];
    }
    return out;
}

RuleColorResult rule_color(const Raster& img, const RuleParams& params, const ColorScheme& scheme) {
    params.validate();
    scheme.validate();
    const auto map = label_components(binarize(img, params.binarize_threshold), params.connectivity);
    auto report = check_conformance(map, params);
    const auto labeling = classify_parts(map, params);
    return {colorize(img, map, labeling, scheme), std::move(report)};
}

}  // namespace flatcolor
