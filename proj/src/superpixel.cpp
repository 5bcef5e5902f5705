#include "nrf/superpixel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "nrf/error.hpp"
#include "nrf/kernels.hpp"

namespace nrf {

namespace {

struct LabPlanes {
    std::vector<float> l, a, b;
};

LabPlanes to_lab_planes(const RgbFrame& frame) {
    const std::size_t n = frame.pixel_count();
    LabPlanes planes{std::vector<float>(n), std::vector<float>(n), std::vector<float>(n)};
    for (std::size_t p = 0; p < n; ++p) {
        const Rgb lab = rgb_to_lab_raw(frame.rgb(p));
        planes.l[p] = float(lab[0]);
        planes.a[p] = float(lab[1]);
        planes.b[p] = float(lab[2]);
    }
    return planes;
}

// Moves a seed to the lowest-gradient position of its 3x3 neighborhood.
void perturb_seed(const LabPlanes& lab, int w, int h, int& sx, int& sy) {
    auto grad = [&](int x, int y) {
        const std::size_t c = std::size_t(y) * std::size_t(w);
        const std::size_t l = c + std::size_t(x - 1), r = c + std::size_t(x + 1);
        const std::size_t u = std::size_t(y - 1) * std::size_t(w) + std::size_t(x);
        const std::size_t d = std::size_t(y + 1) * std::size_t(w) + std::size_t(x);
        auto sq = [](float v) { return double(v) * double(v); };
        return sq(lab.l[r] - lab.l[l]) + sq(lab.a[r] - lab.a[l]) + sq(lab.b[r] - lab.b[l]) + sq(lab.l[d] - lab.l[u]) +
               sq(lab.a[d] - lab.a[u]) + sq(lab.b[d] - lab.b[u]);
    };
    int best_x = sx, best_y = sy;
    double best = std::numeric_limits<double>::infinity();
    for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
            const int x = sx + dx, y = sy + dy;
            if (x < 1 || y < 1 || x >= w - 1 || y >= h - 1) continue;
            const double g = grad(x, y);
            if (g < best) {
                best = g;
                best_x = x;
                best_y = y;
            }
        }
    }
    sx = best_x;
    sy = best_y;
}

}  // namespace

SuperpixelGrid make_grid(int width, int height, std::vector<std::int32_t> labels) {
    if (labels.size() != std::size_t(width) * std::size_t(height)) throw std::invalid_argument("label count mismatch");
    SuperpixelGrid grid;
    grid.width = width;
    grid.height = height;
    const auto max_label = labels.empty() ? -1 : *std::max_element(labels.begin(), labels.end());
    grid.count = int(max_label) + 1;
    grid.areas.assign(std::size_t(grid.count), 0);
    for (auto l : labels) {
        if (l < 0) throw std::invalid_argument("negative superpixel label");
        ++grid.areas[std::size_t(l)];
    }
    for (auto a : grid.areas)
        if (a == 0) throw std::invalid_argument("superpixel labels are not compact");
    grid.labels = std::move(labels);
    return grid;
}

SuperpixelGrid enforce_connectivity(int width, int height, const std::vector<std::int32_t>& labels,
                                    std::int64_t min_size) {
    const std::size_t n = std::size_t(width) * std::size_t(height);
    if (labels.size() != n) throw std::invalid_argument("label count mismatch");

    // 4-connected components, numbered in raster order of first pixel.
    std::vector<std::int32_t> comp(n, -1);
    std::vector<std::size_t> pixels;  // component pixels, grouped
    std::vector<std::size_t> start;   // start[c] .. start[c+1] index into pixels
    pixels.reserve(n);
    for (std::size_t seed = 0; seed < n; ++seed) {
        if (comp[seed] >= 0) continue;
        const auto id = std::int32_t(start.size());
        start.push_back(pixels.size());
        comp[seed] = id;
        pixels.push_back(seed);
        for (std::size_t head = start.back(); head < pixels.size(); ++head) {
            const std::size_t p = pixels[head];
            const int x = int(p % std::size_t(width)), y = int(p / std::size_t(width));
            const std::size_t nb[4] = {p - 1, p + 1, p - std::size_t(width), p + std::size_t(width)};
            const bool ok[4] = {x > 0, x + 1 < width, y > 0, y + 1 < height};
            for (int k = 0; k < 4; ++k) {
                if (ok[k] && comp[nb[k]] < 0 && labels[nb[k]] == labels[p]) {
                    comp[nb[k]] = id;
                    pixels.push_back(nb[k]);
                }
            }
        }
    }
    const std::size_t ncomp = start.size();
    start.push_back(pixels.size());

    std::vector<std::int32_t> parent(ncomp);
    std::iota(parent.begin(), parent.end(), 0);
    std::vector<std::int64_t> size(ncomp);
    for (std::size_t c = 0; c < ncomp; ++c) size[c] = std::int64_t(start[c + 1] - start[c]);
    auto find = [&](std::int32_t c) {
        while (parent[std::size_t(c)] != c) {
            parent[std::size_t(c)] = parent[std::size_t(parent[std::size_t(c)])];
            c = parent[std::size_t(c)];
        }
        return c;
    };

    for (std::size_t c = 0; c < ncomp; ++c) {
        const std::int32_t root = find(std::int32_t(c));
        if (size[std::size_t(root)] >= min_size) continue;
        std::int32_t target = -1;
        for (std::size_t k = start[c]; k < start[c + 1]; ++k) {
            const std::size_t p = pixels[k];
            const int x = int(p % std::size_t(width)), y = int(p / std::size_t(width));
            const std::size_t nb[4] = {p - 1, p + 1, p - std::size_t(width), p + std::size_t(width)};
            const bool ok[4] = {x > 0, x + 1 < width, y > 0, y + 1 < height};
            for (int j = 0; j < 4; ++j) {
                if (!ok[j]) continue;
                const std::int32_t other = find(comp[nb[j]]);
                if (other == root) continue;
                if (target < 0 || size[std::size_t(other)] > size[std::size_t(target)] ||
                    (size[std::size_t(other)] == size[std::size_t(target)] && other < target)) {
                    target = other;
                }
            }
        }
        if (target < 0) continue;
        parent[std::size_t(root)] = target;
        size[std::size_t(target)] += size[std::size_t(root)];
    }

    std::vector<std::int32_t> compact(ncomp, -1);
    std::vector<std::int32_t> out(n);
    std::int32_t next = 0;
    for (std::size_t p = 0; p < n; ++p) {
        const std::int32_t root = find(comp[p]);
        if (compact[std::size_t(root)] < 0) compact[std::size_t(root)] = next++;
        out[p] = compact[std::size_t(root)];
    }
    return make_grid(width, height, std::move(out));
}

SuperpixelGrid slic(const RgbFrame& frame, const SlicParams& params) {
    const int w = frame.width;
    const int h = frame.height;
    const std::int64_t n = std::int64_t(w) * std::int64_t(h);
    if (n < 2) throw std::invalid_argument("slic: degenerate frame");
    if (params.target_count < 2 || params.target_count > n)
        throw std::invalid_argument("slic: target_count must lie in [2, pixel count]");
    if (!(params.compactness > 0.0)) throw std::invalid_argument("slic: compactness must be positive");
    if (params.max_iters < 1) throw std::invalid_argument("slic: max_iters must be positive");

    const LabPlanes lab = to_lab_planes(frame);
    const double step = std::sqrt(double(n) / double(params.target_count));
    const int nx = std::clamp(int(std::lround(std::sqrt(double(params.target_count) * w / h))), 1, w);
    const int ny = std::clamp(int(std::lround(double(params.target_count) / nx)), 1, h);
    const double step_x = double(w) / nx;
    const double step_y = double(h) / ny;

    std::vector<kernels::SlicCenter> centers;
    centers.reserve(std::size_t(nx) * std::size_t(ny));
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            int sx = std::min(w - 1, int((ix + 0.5) * step_x));
            int sy = std::min(h - 1, int((iy + 0.5) * step_y));
            perturb_seed(lab, w, h, sx, sy);
            const std::size_t p = std::size_t(sy) * std::size_t(w) + std::size_t(sx);
            centers.push_back({lab.l[p], lab.a[p], lab.b[p], float(sx), float(sy)});
        }
    }

    const auto& kern = kernels::active();
    const float spatial_weight = float((params.compactness / step) * (params.compactness / step));
    const int reach = int(std::ceil(step));
    std::vector<std::int32_t> label(std::size_t(n), -1);
    std::vector<float> dist(static_cast<std::size_t>(n));

    for (int iter = 0; iter < params.max_iters; ++iter) {
        std::fill(dist.begin(), dist.end(), std::numeric_limits<float>::infinity());
        for (std::size_t k = 0; k < centers.size(); ++k) {
            const auto& c = centers[k];
            const int cx = int(std::lround(c.x)), cy = int(std::lround(c.y));
            const int x0 = std::max(0, cx - reach), x1 = std::min(w - 1, cx + reach);
            const int y0 = std::max(0, cy - reach), y1 = std::min(h - 1, cy + reach);
            for (int y = y0; y <= y1; ++y) {
                const std::size_t off = std::size_t(y) * std::size_t(w) + std::size_t(x0);
                kern.slic_assign_span(&lab.l[off], &lab.a[off], &lab.b[off], x0, x1 - x0 + 1, float(y), c,
                                      spatial_weight, std::int32_t(k), &dist[off], &label[off]);
            }
        }

        // Pixels outside every window keep their previous label; on the first
        // pass they take the nearest center.
        for (std::size_t p = 0; p < label.size(); ++p) {
            if (label[p] >= 0) continue;
            const float x = float(p % std::size_t(w)), y = float(p / std::size_t(w));
            float best = std::numeric_limits<float>::infinity();
            for (std::size_t k = 0; k < centers.size(); ++k) {
                const float dx = x - centers[k].x, dy = y - centers[k].y;
                if (dx * dx + dy * dy < best) {
                    best = dx * dx + dy * dy;
                    label[p] = std::int32_t(k);
                }
            }
        }

        std::vector<std::array<double, 6>> acc(centers.size(), {0, 0, 0, 0, 0, 0});
        for (std::size_t p = 0; p < label.size(); ++p) {
            auto& s = acc[std::size_t(label[p])];
            s[0] += lab.l[p];
            s[1] += lab.a[p];
            s[2] += lab.b[p];
            s[3] += double(p % std::size_t(w));
            s[4] += double(p / std::size_t(w));
            s[5] += 1.0;
        }
        for (std::size_t k = 0; k < centers.size(); ++k) {
            const auto& s = acc[k];
            if (s[5] == 0.0) continue;
            centers[k] = {float(s[0] / s[5]), float(s[1] / s[5]), float(s[2] / s[5]), float(s[3] / s[5]),
                          float(s[4] / s[5])};
        }
    }

    const std::int64_t min_size = (n / std::int64_t(centers.size())) / 4;
    return enforce_connectivity(w, h, label, min_size);
}

void save_label_map(const SuperpixelGrid& grid, const std::filesystem::path& path) {
    if (grid.count > 65536) throw std::invalid_argument("too many labels for a 16-bit label map");
    cv::Mat image(grid.height, grid.width, CV_16UC1);
    for (int y = 0; y < grid.height; ++y) {
        auto* row = image.ptr<std::uint16_t>(y);
        for (int x = 0; x < grid.width; ++x) row[x] = std::uint16_t(grid.label(x, y));
    }
    if (!cv::imwrite(path.string(), image)) throw InputError("cannot write " + path.string());
}

RgbFrame boundary_overlay(const RgbFrame& frame, const SuperpixelGrid& grid, const Rgb& color) {
    RgbFrame out = frame;
    for (int y = 0; y < grid.height; ++y) {
        for (int x = 0; x < grid.width; ++x) {
            const auto l = grid.label(x, y);
            const bool edge = (x + 1 < grid.width && grid.label(x + 1, y) != l) ||
                              (y + 1 < grid.height && grid.label(x, y + 1) != l);
            if (edge) out.set(x, y, color);
        }
    }
    return out;
}

}  // namespace nrf
