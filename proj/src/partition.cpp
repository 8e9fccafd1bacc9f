// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 mtt contributors
#include <mtt/partition.hpp>

#include <algorithm>
#include <stdexcept>

namespace mtt {

std::vector<int> median_filter(const std::vector<int>& raw, int w_median) {
    if (w_median < 1 || w_median % 2 == 0)
        throw ConfigError("median filter window must be odd and >= 1");
    if (w_median == 1 || raw.empty()) return raw;
    const int n = static_cast<int>(raw.size());
    const int half = w_median / 2;
    std::vector<int> out(raw.size());
    std::vector<int> window(w_median);
    for (int t = 0; t < n; ++t) {
        for (int k = -half; k <= half; ++k) {
            const int idx = std::clamp(t + k, 0, n - 1);   // replicate padding
            window[k + half] = raw[idx];
        }
        std::nth_element(window.begin(), window.begin() + half, window.end());
        out[t] = window[half];
    }
    return out;
}

CountCurve CountCurve::from_counts(std::vector<int> raw, int w_median) {
    CountCurve c;
    c.filtered = median_filter(raw, w_median);
    c.raw = std::move(raw);
    return c;
}

CountCurve CountCurve::from_frameset(const FrameSet& fs, int w_median) {
    return from_counts(fs.count_curve(), w_median);
}

double gradient(const std::vector<int>& filtered, int t, int delta) {
    const int n = static_cast<int>(filtered.size());
    if (delta < 1) throw std::out_of_range("gradient: delta must be >= 1");
    if (t < 1 || t > n - delta) throw std::out_of_range("gradient: frame index out of range");
    return std::abs(filtered[t - 1] - filtered[t - 1 + delta]) / static_cast<double>(delta);
}

void fill_detection_totals(std::vector<Subsequence>& subs, const std::vector<int>& raw) {
    for (auto& s : subs) {
        long long total = 0;
        for (int t = s.begin; t <= s.end; ++t) total += raw[t - 1];
        s.detection_total = total;
    }
}

namespace {

// Cuts [begin, end] greedily left to right: longest prefix with length <=
// l_max and raw total <= u; a single frame above u is emitted on its own.
void cap_subsequence(int begin, int end, const std::vector<int>& raw, int l_max, long long u,
                     std::vector<Subsequence>& out) {
    int a = begin;
    while (a <= end) {
        int b = a;
        long long total = raw[a - 1];
        while (b + 1 <= end && (b + 1 - a + 1) <= l_max && total + raw[b] <= u) {
            ++b;
            total += raw[b - 1];
        }
        out.push_back({a, b, total});
        a = b + 1;
    }
}

}  // namespace

std::vector<Subsequence> partition_adaptive(const CountCurve& curve, const Config& cfg) {
    const int n = curve.frames();
    std::vector<Subsequence> out;
    if (n == 0) return out;

    const auto& f = curve.filtered;
    const double d = cfg.grad_d;

    int band_begin = 1;
    int band_min = f[0];
    int band_max = f[0];
    for (int t = 2; t <= n; ++t) {
        const int m = f[t - 1];
        const bool joins = (m - band_min < d) && (band_max - m < d);
        if (joins) {
            band_min = std::min(band_min, m);
            band_max = std::max(band_max, m);
        } else {
            cap_subsequence(band_begin, t - 1, curve.raw, cfg.l_max, cfg.u_max, out);
            band_begin = t;
            band_min = band_max = m;
        }
    }
    cap_subsequence(band_begin, n, curve.raw, cfg.l_max, cfg.u_max, out);
    return out;
}

std::vector<Subsequence> partition_fixed(int n_frames, int window, int stride) {
    if (window < 1) throw ConfigError("window length must be >= 1");
    if (stride < 1) throw ConfigError("stride must be >= 1");
    if (stride > window) throw ConfigError("stride must not exceed window length");
    std::vector<Subsequence> out;
    if (n_frames < 1) return out;
    if (stride == window) {
        for (int a = 1; a <= n_frames; a += window)
            out.push_back({a, std::min(a + window - 1, n_frames), 0});
        return out;
    }
    // Sliding mode: N-L+1 overlapping windows; short sequences get one window.
    if (n_frames <= window) {
        out.push_back({1, n_frames, 0});
        return out;
    }
    for (int a = 1; a + window - 1 <= n_frames; a += stride)
        out.push_back({a, a + window - 1, 0});
    return out;
}

}  // namespace mtt
