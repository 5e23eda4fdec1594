#pragma once

// Independent reference implementations used as test oracles.

#include <cmath>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "flatcolor/raster.hpp"
#include "flatcolor/rng.hpp"

namespace testing {

using namespace flatcolor;

// '#' is ink, anything else is paper.
inline Raster ascii(const std::vector<std::string>& rows) {
    Raster img(static_cast<int>(rows[0].size()), static_cast<int>(rows.size()), kWhite);
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            if (rows[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)] == '#') {
                img.at(x, y) = kBlack;
            }
        }
    }
    return img;
}

inline LineMask random_mask(Rng& rng, int w, int h, double p) {
    LineMask m(w, h, Ink::Paper);
    for (auto& c : m.cells()) {
        c = rng.chance(p) ? Ink::Line : Ink::Paper;
    }
    return m;
}

struct OracleLabels {
    Grid<int> labels;
    std::vector<std::int64_t> areas;
};

// Queue BFS in row-major seed order.
inline OracleLabels bfs_label(const LineMask& m, bool eight = false) {
    OracleLabels out{Grid<int>(m.width(), m.height(), -1), {}};
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) {
            if (m.at(x, y) == Ink::Line || out.labels.at(x, y) != -1) {
                continue;
            }
            const int id = static_cast<int>(out.areas.size());
            out.areas.push_back(0);
            std::deque<std::pair<int, int>> q{{x, y}};
            out.labels.at(x, y) = id;
            while (!q.empty()) {
                auto [cx, cy] = q.front();
                q.pop_front();
                ++out.areas.back();
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if ((dx == 0 && dy == 0) || (!eight && dx != 0 && dy != 0)) {
                            continue;
                        }
                        const int nx = cx + dx, ny = cy + dy;
                        if (m.contains(nx, ny) && m.at(nx, ny) == Ink::Paper && out.labels.at(nx, ny) == -1) {
                            out.labels.at(nx, ny) = id;
                            q.emplace_back(nx, ny);
                        }
                    }
                }
            }
        }
    }
    return out;
}

// O(|a| |b|) pairwise minimum.
inline double brute_distance(const ComponentMap& map, int a, int b) {
    std::vector<std::pair<int, int>> pa, pb;
    for (int y = 0; y < map.height(); ++y) {
        for (int x = 0; x < map.width(); ++x) {
            if (map.label_at(x, y) == a) {
                pa.emplace_back(x, y);
            }
            if (map.label_at(x, y) == b) {
                pb.emplace_back(x, y);
            }
        }
    }
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    for (auto [ax, ay] : pa) {
        for (auto [bx, by] : pb) {
            const std::int64_t dx = ax - bx, dy = ay - by;
            best = std::min(best, dx * dx + dy * dy);
        }
    }
    return std::sqrt(static_cast<double>(best));
}

inline std::int64_t differing(const Raster& a, const Raster& b) {
    std::int64_t n = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        n += a.cells()[i] == b.cells()[i] ? 0 : 1;
    }
    return n;
}

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& tag) {
        path = std::filesystem::temp_directory_path() /
               ("flatcolor_" + tag + "_" + std::to_string(Rng(reinterpret_cast<std::uintptr_t>(this)).next()));
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
};

}  // namespace testing
