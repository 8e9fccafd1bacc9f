// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 mtt contributors
#pragma once

#include <vector>

#include <mtt/config.hpp>
#include <mtt/types.hpp>

namespace mtt {

/// Raw and median-filtered per-frame detection counts.
struct CountCurve {
    std::vector<int> raw;        // M_1..M_N
    std::vector<int> filtered;   // after median filtering

    static CountCurve from_counts(std::vector<int> raw, int w_median);
    static CountCurve from_frameset(const FrameSet& fs, int w_median);

    int frames() const { return static_cast<int>(raw.size()); }
};

/// One contiguous frame range [begin, end] with its raw detection total.
struct Subsequence {
    int begin{0};
    int end{0};
    long long detection_total{0};

    int length() const { return end - begin + 1; }
};

/// One-dimensional median filter with replicate padding at the edges.
/// Window must be odd; w == 1 is the identity.
std::vector<int> median_filter(const std::vector<int>& raw, int w_median);

/// Gradient metric r_t = |M_t - M_{t+delta}| / delta on the filtered curve.
/// t is 1-based; throws std::out_of_range outside 1..N-delta.
double gradient(const std::vector<int>& filtered, int t, int delta = 1);

/// Variable-length partitioning. A frame joins the running subsequence only
/// while its filtered count stays within a band of width d around the counts
/// already in it; afterwards each piece is greedily cut so every emitted
/// subsequence has length <= l_max and raw detection total <= u (a single
/// frame exceeding u is emitted alone).
std::vector<Subsequence> partition_adaptive(const CountCurve& curve, const Config& cfg);

/// Fixed windows: stride == length tiles 1..N (short tail allowed); stride <
/// length produces the N-L+1 overlapping sliding windows.
std::vector<Subsequence> partition_fixed(int n_frames, int window, int stride);

/// Attaches raw detection totals from a count curve to bare frame ranges.
void fill_detection_totals(std::vector<Subsequence>& subs, const std::vector<int>& raw);

}  // namespace mtt
