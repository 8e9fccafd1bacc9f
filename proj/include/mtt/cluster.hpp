// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 mtt contributors
#pragma once

#include <vector>

#include <mtt/types.hpp>

namespace mtt {

/// Dense symmetric distance matrix with zero diagonal.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    explicit DistanceMatrix(int n) : n_(n), d_(static_cast<std::size_t>(n) * n, 0.0) {}

    int size() const { return n_; }
    double at(int i, int j) const { return d_[static_cast<std::size_t>(i) * n_ + j]; }
    void set(int i, int j, double v) {
        d_[static_cast<std::size_t>(i) * n_ + j] = v;
        d_[static_cast<std::size_t>(j) * n_ + i] = v;
    }

private:
    int n_{0};
    std::vector<double> d_;
};

inline constexpr int kNoiseLabel = -1;

/// Confidence threshold then greedy per-frame NMS (score-descending order;
/// boxes with IoU strictly above nms_iou against a kept box are suppressed).
std::vector<Detection> prefilter(std::vector<Detection> dets, double theta_s, double nms_iou);

/// Euclidean distances between detection box centers.
DistanceMatrix pixel_distance_matrix(const std::vector<Detection>& dets);

struct WeightedDistanceResult {
    DistanceMatrix matrix;
    int missing_embedding_pairs{0};   // pairs that fell back to the pixel term
};

/// Multi-weighted distance: alpha * cosine distance + beta * center distance
/// normalized by the image diagonal. Pairs lacking an embedding use the
/// location term only and are counted in missing_embedding_pairs.
WeightedDistanceResult weighted_distance_matrix(const std::vector<Detection>& dets,
                                                const EmbeddingTable& emb, double alpha,
                                                double beta, double image_diagonal);

/// Density clustering over a precomputed distance matrix. The eps-neighborhood
/// includes the point itself; points with |N_eps| >= min_pts are cores. Border
/// points join the lowest-id reachable cluster. Returns a label per index,
/// kNoiseLabel for noise; labels are canonicalized by smallest member index.
std::vector<int> dbscan(const DistanceMatrix& dm, double eps, int min_pts);

/// Groups indices by label; noise points become trailing singleton groups so
/// no detection is discarded. Groups are ordered by smallest member index.
std::vector<std::vector<int>> clusters_from_labels(const std::vector<int>& labels);

}  // namespace mtt
