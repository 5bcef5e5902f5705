#include "nrf/flow.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "nrf/error.hpp"
#include "nrf/kernels.hpp"

namespace nrf {

std::string_view to_string(FlowMode mode) { return mode == FlowMode::reversible ? "reversible" : "cosine"; }

FlowMode parse_flow_mode(std::string_view text) {
    if (text == "reversible") return FlowMode::reversible;
    if (text == "cosine") return FlowMode::cosine;
    throw std::invalid_argument(fmt::format("unknown flow mode '{}'", text));
}

DistanceMatrix pairwise_l1(const SuperpixelFeatures& u, const SuperpixelFeatures& v) {
    if (u.count == 0 || v.count == 0) throw std::invalid_argument("pairwise_l1: empty feature set");
    if (u.dim != v.dim) throw std::invalid_argument("pairwise_l1: descriptor length mismatch");

    // Component-major copy of the targets for the vector kernel.
    const std::size_t stride = std::size_t(v.count);
    std::vector<double> soa(std::size_t(v.dim) * stride);
    for (int j = 0; j < v.count; ++j)
        for (int d = 0; d < v.dim; ++d) soa[std::size_t(d) * stride + std::size_t(j)] = v.data[std::size_t(j) * std::size_t(v.dim) + std::size_t(d)];

    DistanceMatrix dist{u.count, v.count, std::vector<double>(std::size_t(u.count) * stride)};
    const auto& kern = kernels::active();
    for (int i = 0; i < u.count; ++i) {
        kern.l1_to_many(u.row(i).data(), std::size_t(u.dim), soa.data(), stride, stride,
                        dist.values.data() + std::size_t(i) * stride);
    }
    return dist;
}

std::optional<int> RankTable::rank_of(int i, int j) const {
    const auto r = row(i);
    for (std::size_t k = 0; k < r.size(); ++k)
        if (r[k] == j) return int(k) + 1;
    return std::nullopt;
}

RankTable knn_ranks(const DistanceMatrix& dist, int kmax, bool transpose) {
    const int rows = transpose ? dist.cols : dist.rows;
    const int cols = transpose ? dist.rows : dist.cols;
    if (rows == 0 || cols == 0) throw std::invalid_argument("knn_ranks: empty feature set");
    if (kmax < 1 || kmax > cols) throw std::invalid_argument("knn_ranks: kmax must lie in [1, target count]");

    RankTable table{rows, kmax, std::vector<std::int32_t>(std::size_t(rows) * std::size_t(kmax))};
    std::vector<std::int32_t> order(static_cast<std::size_t>(cols));
    std::vector<double> d(static_cast<std::size_t>(cols));
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) d[std::size_t(j)] = transpose ? dist.at(j, i) : dist.at(i, j);
        std::iota(order.begin(), order.end(), 0);
        std::partial_sort(order.begin(), order.begin() + kmax, order.end(), [&](std::int32_t a, std::int32_t b) {
            return d[std::size_t(a)] < d[std::size_t(b)] || (d[std::size_t(a)] == d[std::size_t(b)] && a < b);
        });
        std::copy_n(order.begin(), kmax, table.neighbors.begin() + std::ptrdiff_t(i) * kmax);
    }
    return table;
}

RankTable knn_ranks(const SuperpixelFeatures& u, const SuperpixelFeatures& v, int kmax) {
    return knn_ranks(pairwise_l1(u, v), kmax, false);
}

std::optional<int> reversible_rank(int i, int j, const RankTable& ranks_uv, const RankTable& ranks_vu, int k0) {
    const auto forward = ranks_uv.rank_of(i, j);
    if (!forward || *forward > k0) return std::nullopt;
    const auto backward = ranks_vu.rank_of(j, i);
    if (!backward || *backward > k0) return std::nullopt;
    return std::max(*forward, *backward);
}

double flow_weight(int k, int k0) {
    if (k < 1 || k0 < 1) throw std::invalid_argument("flow_weight: k and k0 must be positive");
    return k <= k0 ? std::exp(-2.0 * double(k) / double(k0)) : 0.0;
}

std::size_t FlowMatrix::zero_row_count() const {
    std::size_t n = 0;
    for (int i = 0; i < rows; ++i) n += zero_row(i) ? 1 : 0;
    return n;
}

double FlowMatrix::row_sum(int i) const {
    double s = 0.0;
    for (std::size_t k = row_ptr[std::size_t(i)]; k < row_ptr[std::size_t(i) + 1]; ++k) s += values[k];
    return s;
}

std::vector<double> FlowMatrix::dense() const {
    std::vector<double> out(std::size_t(rows) * std::size_t(cols), 0.0);
    for (int i = 0; i < rows; ++i)
        for (std::size_t k = row_ptr[std::size_t(i)]; k < row_ptr[std::size_t(i) + 1]; ++k)
            out[std::size_t(i) * std::size_t(cols) + std::size_t(col_idx[k])] = values[k];
    return out;
}

FlowMatrix normalized_flow(int rows, int cols,
                           const std::vector<std::vector<std::pair<std::int32_t, double>>>& raw) {
    FlowMatrix flow;
    flow.rows = rows;
    flow.cols = cols;
    flow.row_ptr.assign(1, 0);
    for (const auto& entries : raw) {
        double sum = 0.0;
        for (const auto& [j, w] : entries) sum += w;
        if (sum > 0.0) {
            for (const auto& [j, w] : entries) {
                if (w <= 0.0) continue;
                flow.col_idx.push_back(j);
                flow.values.push_back(w / sum);
            }
        }
        flow.row_ptr.push_back(flow.values.size());
    }
    return flow;
}

FlowMatrix build_flow(const SuperpixelFeatures& u, const SuperpixelFeatures& v, int k0, FlowMode mode) {
    if (k0 < 1) throw std::invalid_argument("build_flow: k0 must be positive");
    const DistanceMatrix dist = pairwise_l1(u, v);
    const RankTable uv = knn_ranks(dist, std::min(k0, v.count), false);

    std::vector<std::vector<std::pair<std::int32_t, double>>> raw(std::size_t(u.count));
    if (mode == FlowMode::reversible) {
        const RankTable vu = knn_ranks(dist, std::min(k0, u.count), true);
        for (int i = 0; i < u.count; ++i) {
            const auto nn = uv.row(i);
            for (std::size_t r = 0; r < nn.size(); ++r) {
                const int j = nn[r];
                const auto back = vu.rank_of(j, i);
                if (!back) continue;
                const int k = std::max(int(r) + 1, *back);
                raw[std::size_t(i)].emplace_back(j, flow_weight(k, k0));
            }
            std::sort(raw[std::size_t(i)].begin(), raw[std::size_t(i)].end());
        }
    } else {
        for (int i = 0; i < u.count; ++i) {
            for (const int j : uv.row(i)) {
                double w = 0.0;
                try {
                    w = std::max(0.0, cosine_similarity(u.row(i), v.row(j)));
                } catch (const std::invalid_argument&) {
                    w = 0.0;  // all-zero descriptor has no direction
                }
                if (w > 0.0) raw[std::size_t(i)].emplace_back(j, w);
            }
            std::sort(raw[std::size_t(i)].begin(), raw[std::size_t(i)].end());
        }
    }
    return normalized_flow(u.count, v.count, raw);
}

KeyframeSet keyframe_set(int u, int dk, int frame_count) {
    if (u < 0 || u >= frame_count) throw std::invalid_argument("keyframe_set: frame index out of range");
    if (dk < 1) throw std::invalid_argument("keyframe_set: interval must be positive");
    KeyframeSet set{u, {}};
    for (const int offset : {-2 * dk, -dk, dk, 2 * dk}) {
        const long long t = (long long)u + offset;
        if (t >= 0 && t < frame_count) set.refs.push_back(int(t));
    }
    return set;
}

void save_flow_text(const FlowMatrix& flow, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path.string());
    for (int i = 0; i < flow.rows; ++i)
        for (std::size_t k = flow.row_ptr[std::size_t(i)]; k < flow.row_ptr[std::size_t(i) + 1]; ++k)
            out << fmt::format("{} {} {:.17g}\n", i, flow.col_idx[k], flow.values[k]);
}

}  // namespace nrf
