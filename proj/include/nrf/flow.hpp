#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "nrf/features.hpp"

namespace nrf {

enum class FlowMode { reversible, cosine };

std::string_view to_string(FlowMode mode);
FlowMode parse_flow_mode(std::string_view text);

// Pairwise l1 distances, rows index the first set.
struct DistanceMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> values;

    double at(int i, int j) const { return values[std::size_t(i) * std::size_t(cols) + std::size_t(j)]; }
};

DistanceMatrix pairwise_l1(const SuperpixelFeatures& u, const SuperpixelFeatures& v);

// For every query superpixel, the indices of its `kmax` nearest targets in
// rank order (rank 1 first). Ties go to the lower target index.
struct RankTable {
    int rows = 0;
    int kmax = 0;
    std::vector<std::int32_t> neighbors;  // rows x kmax

    std::span<const std::int32_t> row(int i) const {
        return {neighbors.data() + std::size_t(i) * std::size_t(kmax), std::size_t(kmax)};
    }
    // 1-based rank of target j for query i, if within kmax.
    std::optional<int> rank_of(int i, int j) const;
};

RankTable knn_ranks(const SuperpixelFeatures& u, const SuperpixelFeatures& v, int kmax);
// Ranks along rows of `dist`, or along its columns when `transpose` is set.
RankTable knn_ranks(const DistanceMatrix& dist, int kmax, bool transpose = false);

// Smallest k with j in N_k(i) and i in N_k(j): max of the two directed ranks,
// absent when either exceeds k0.
std::optional<int> reversible_rank(int i, int j, const RankTable& ranks_uv, const RankTable& ranks_vu, int k0);

// exp(-2k/k0) for k <= k0, else 0.
double flow_weight(int k, int k0);

// Sparse N_u x N_v correspondence matrix in CSR form, columns ascending
// within a row. Rows with any weight sum to 1; rows without stay empty.
struct FlowMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<std::size_t> row_ptr;  // rows + 1
    std::vector<std::int32_t> col_idx;
    std::vector<double> values;

    std::size_t nonzeros() const { return values.size(); }
    bool zero_row(int i) const { return row_ptr[std::size_t(i)] == row_ptr[std::size_t(i) + 1]; }
    std::size_t zero_row_count() const;
    double row_sum(int i) const;
    std::vector<double> dense() const;

    friend bool operator==(const FlowMatrix&, const FlowMatrix&) = default;
};

// Row-normalizes raw (column, weight) lists; each list must be sorted by column.
FlowMatrix normalized_flow(int rows, int cols, const std::vector<std::vector<std::pair<std::int32_t, double>>>& raw);

// Before normalization: reversible mode stores flow_weight(reversible_rank);
// cosine mode stores max(0, cosine) over each row's k0 nearest neighbors.
FlowMatrix build_flow(const SuperpixelFeatures& u, const SuperpixelFeatures& v, int k0,
                      FlowMode mode = FlowMode::reversible);

struct KeyframeSet {
    int frame = 0;
    std::vector<int> refs;  // subset of {u-2dk, u-dk, u+dk, u+2dk} inside [0, K)
};

KeyframeSet keyframe_set(int u, int dk, int frame_count);

// Lines "i j weight".
void save_flow_text(const FlowMatrix& flow, const std::filesystem::path& path);

}  // namespace nrf
