#include "flatcolor/raster.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace flatcolor {

Rgb parse_hex_color(const std::string& text) {
    std::string s = text;
    if (!s.empty() && s.front() == '#') {
        s.erase(s.begin());
    }
    if (s.size() != 6 || !std::all_of(s.begin(), s.end(), [](unsigned char c) {
            return std::isxdigit(c) != 0;
        })) {
        throw std::invalid_argument("invalid hex color '" + text + "'");
    }
    const auto byte = [&](int i) {
        return static_cast<std::uint8_t>(std::stoi(s.substr(static_cast<std::size_t>(i), 2), nullptr, 16));
    };
    return Rgb{byte(0), byte(2), byte(4)};
}

std::string to_hex_color(Rgb c) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out = "#";
    for (std::uint8_t v : {c.r, c.g, c.b}) {
        out += kDigits[v >> 4];
        out += kDigits[v & 0xF];
    }
    return out;
}

LineMask binarize(const Raster& img, int threshold) {
    LineMask mask(img.width(), img.height());
    auto src = img.cells();
    auto dst = mask.cells();
    for (std::size_t i = 0; i < src.size(); ++i) {
        dst[i] = luminance(src[i]) < threshold ? Ink::Line : Ink::Paper;
    }
    return mask;
}

Raster render_mask(const LineMask& mask, Rgb line, Rgb paper) {
    Raster out(mask.width(), mask.height());
    auto src = mask.cells();
    auto dst = out.cells();
    for (std::size_t i = 0; i < src.size(); ++i) {
        dst[i] = src[i] == Ink::Line ? line : paper;
    }
    return out;
}

Raster rebinarize(const Raster& img, int threshold) {
    return render_mask(binarize(img, threshold));
}

std::int64_t count_ink(const LineMask& mask) {
    return std::count(mask.cells().begin(), mask.cells().end(), Ink::Line);
}

const Component& ComponentMap::component(int id) const {
    if (!valid_id(id)) {
        throw std::out_of_range("unknown component id " + std::to_string(id));
    }
    return components_[static_cast<std::size_t>(id)];
}

std::vector<int> ComponentMap::ranked_by_area() const {
    std::vector<int> order(components_.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return components_[static_cast<std::size_t>(a)].area >
               components_[static_cast<std::size_t>(b)].area;
    });
    return order;
}

ComponentMap label_components(const LineMask& mask, Connectivity connectivity) {
    const int w = mask.width();
    const int h = mask.height();
    Grid<std::int32_t> labels(w, h, ComponentMap::kLineLabel);
    std::vector<Component> comps;

    static constexpr int kDx4[] = {1, -1, 0, 0};
    static constexpr int kDy4[] = {0, 0, 1, -1};
    static constexpr int kDx8[] = {1, -1, 0, 0, 1, 1, -1, -1};
    static constexpr int kDy8[] = {0, 0, 1, -1, 1, -1, 1, -1};
    const int nbrs = connectivity == Connectivity::Four ? 4 : 8;
    const int* dxs = connectivity == Connectivity::Four ? kDx4 : kDx8;
    const int* dys = connectivity == Connectivity::Four ? kDy4 : kDy8;

    constexpr std::int32_t kUnvisited = -2;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (mask.cells()[i] == Ink::Paper) {
            labels.cells()[i] = kUnvisited;
        }
    }

    std::vector<std::pair<int, int>> stack;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (labels.at(x, y) != kUnvisited) {
                continue;
            }
            const auto id = static_cast<std::int32_t>(comps.size());
            Component c;
            c.id = id;
            int x0 = x, x1 = x, y0 = y, y1 = y;
            double sx = 0.0, sy = 0.0;
            labels.at(x, y) = id;
            stack.assign(1, {x, y});
            while (!stack.empty()) {
                const auto [px, py] = stack.back();
                stack.pop_back();
                ++c.area;
                sx += px;
                sy += py;
                x0 = std::min(x0, px);
                x1 = std::max(x1, px);
                y0 = std::min(y0, py);
                y1 = std::max(y1, py);
                if (px == 0 || py == 0 || px == w - 1 || py == h - 1) {
                    c.touches_border = true;
                }
                for (int k = 0; k < nbrs; ++k) {
                    const int nx = px + dxs[k];
                    const int ny = py + dys[k];
                    if (labels.contains(nx, ny) && labels.at(nx, ny) == kUnvisited) {
                        labels.at(nx, ny) = id;
                        stack.emplace_back(nx, ny);
                    }
                }
            }
            c.bbox = Rect{x0, y0, x1 - x0 + 1, y1 - y0 + 1};
            c.cx = sx / static_cast<double>(c.area);
            c.cy = sy / static_cast<double>(c.area);
            comps.push_back(c);
        }
    }
    return ComponentMap(std::move(labels), std::move(comps));
}

namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();

// Lower envelope of parabolas (Felzenszwalb & Huttenlocher), integer exact.
void distance_1d(const std::vector<std::int64_t>& f, std::vector<std::int64_t>& d,
                 std::vector<int>& v, std::vector<double>& z) {
    const int n = static_cast<int>(f.size());
    int k = -1;
    for (int q = 0; q < n; ++q) {
        if (f[static_cast<std::size_t>(q)] == kInf) {
            continue;
        }
        const auto fq = static_cast<double>(f[static_cast<std::size_t>(q)]);
        double s = 0.0;
        while (k >= 0) {
            const int p = v[static_cast<std::size_t>(k)];
            const auto fp = static_cast<double>(f[static_cast<std::size_t>(p)]);
            s = ((fq + static_cast<double>(q) * q) - (fp + static_cast<double>(p) * p)) /
                (2.0 * (q - p));
            if (s <= z[static_cast<std::size_t>(k)]) {
                --k;
            } else {
                break;
            }
        }
        ++k;
        v[static_cast<std::size_t>(k)] = q;
        z[static_cast<std::size_t>(k)] = k == 0 ? -std::numeric_limits<double>::infinity() : s;
        z[static_cast<std::size_t>(k) + 1] = std::numeric_limits<double>::infinity();
    }
    if (k < 0) {
        std::fill(d.begin(), d.end(), kInf);
        return;
    }
    int j = 0;
    for (int q = 0; q < n; ++q) {
        while (z[static_cast<std::size_t>(j) + 1] < q) {
            ++j;
        }
        const int p = v[static_cast<std::size_t>(j)];
        const std::int64_t dq = q - p;
        d[static_cast<std::size_t>(q)] = dq * dq + f[static_cast<std::size_t>(p)];
    }
}

}  // namespace

Grid<std::int64_t> squared_distance_field(const Grid<std::uint8_t>& seed) {
    const int w = seed.width();
    const int h = seed.height();
    Grid<std::int64_t> out(w, h, kInf);
    const int n = std::max(w, h);
    std::vector<std::int64_t> f, d;
    std::vector<int> v(static_cast<std::size_t>(n));
    std::vector<double> z(static_cast<std::size_t>(n) + 1);

    f.resize(static_cast<std::size_t>(h));
    d.resize(static_cast<std::size_t>(h));
    for (int x = 0; x < w; ++x) {
        for (int y = 0; y < h; ++y) {
            f[static_cast<std::size_t>(y)] = seed.at(x, y) != 0 ? 0 : kInf;
        }
        distance_1d(f, d, v, z);
        for (int y = 0; y < h; ++y) {
            out.at(x, y) = d[static_cast<std::size_t>(y)];
        }
    }
    f.resize(static_cast<std::size_t>(w));
    d.resize(static_cast<std::size_t>(w));
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            f[static_cast<std::size_t>(x)] = out.at(x, y);
        }
        distance_1d(f, d, v, z);
        for (int x = 0; x < w; ++x) {
            out.at(x, y) = d[static_cast<std::size_t>(x)];
        }
    }
    return out;
}

std::vector<double> distances_from(const ComponentMap& map, int from) {
    map.component(from);
    const auto& labels = map.labels();
    Grid<std::uint8_t> seed(labels.width(), labels.height(), 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        seed.cells()[i] = labels.cells()[i] == from ? 1 : 0;
    }
    const auto field = squared_distance_field(seed);
    std::vector<std::int64_t> best(map.component_count(), kInf);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto id = labels.cells()[i];
        if (id >= 0) {
            auto& b = best[static_cast<std::size_t>(id)];
            b = std::min(b, field.cells()[i]);
        }
    }
    std::vector<double> out(best.size());
    std::transform(best.begin(), best.end(), out.begin(),
                   [](std::int64_t sq) { return std::sqrt(static_cast<double>(sq)); });
    return out;
}

double component_distance(const ComponentMap& map, int a, int b) {
    map.component(a);
    map.component(b);
    if (a == b) {
        return 0.0;
    }
    return distances_from(map, a)[static_cast<std::size_t>(b)];
}

Raster fill_component(const Raster& img, const ComponentMap& map, int id, Rgb color) {
    require_same_shape(img, map, "fill_component");
    map.component(id);
    Raster out = img;
    const auto& labels = map.labels();
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels.cells()[i] == id) {
            out.cells()[i] = color;
        }
    }
    return out;
}

}  // namespace flatcolor
