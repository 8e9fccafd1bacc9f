// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 mtt contributors
#include <mtt/cluster.hpp>

#include <algorithm>
#include <deque>
#include <map>

namespace mtt {

std::vector<Detection> prefilter(std::vector<Detection> dets, double theta_s, double nms_iou) {
    std::vector<Detection> scored;
    scored.reserve(dets.size());
    for (auto& d : dets)
        if (d.score >= theta_s) scored.push_back(std::move(d));

    // Greedy NMS per frame, highest score first; det_id breaks ties.
    std::map<int, std::vector<Detection>> by_frame;
    for (auto& d : scored) by_frame[d.frame].push_back(std::move(d));

    std::vector<Detection> kept;
    kept.reserve(scored.size());
    for (auto& [frame, frame_dets] : by_frame) {
        std::sort(frame_dets.begin(), frame_dets.end(), [](const Detection& a, const Detection& b) {
            if (a.score != b.score) return a.score > b.score;
            return a.det_id < b.det_id;
        });
        std::vector<Detection> frame_kept;
        for (auto& d : frame_dets) {
            bool suppressed = false;
            for (const auto& k : frame_kept) {
                if (iou(d.box, k.box) > nms_iou) {
                    suppressed = true;
                    break;
                }
            }
            if (!suppressed) frame_kept.push_back(std::move(d));
        }
        for (auto& d : frame_kept) kept.push_back(std::move(d));
    }
    // Restore deterministic global ordering.
    std::sort(kept.begin(), kept.end(),
              [](const Detection& a, const Detection& b) { return a.det_id < b.det_id; });
    return kept;
}

DistanceMatrix pixel_distance_matrix(const std::vector<Detection>& dets) {
    const int n = static_cast<int>(dets.size());
    DistanceMatrix dm(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) dm.set(i, j, dets[i].box.center_distance(dets[j].box));
    return dm;
}

WeightedDistanceResult weighted_distance_matrix(const std::vector<Detection>& dets,
                                                const EmbeddingTable& emb, double alpha,
                                                double beta, double image_diagonal) {
    const int n = static_cast<int>(dets.size());
    WeightedDistanceResult res;
    res.matrix = DistanceMatrix(n);
    const double diag = image_diagonal > 0.0 ? image_diagonal : 1.0;
    std::vector<const std::vector<double>*> feats(n);
    for (int i = 0; i < n; ++i) feats[i] = emb.lookup(dets[i].det_id);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double pix = beta * dets[i].box.center_distance(dets[j].box) / diag;
            double d = pix;
            if (feats[i] && feats[j]) {
                d += alpha * (1.0 - cosine_similarity(*feats[i], *feats[j]));
            } else {
                ++res.missing_embedding_pairs;
            }
            res.matrix.set(i, j, d);
        }
    }
    return res;
}

std::vector<int> dbscan(const DistanceMatrix& dm, double eps, int min_pts) {
    const int n = dm.size();
    std::vector<int> labels(n, kNoiseLabel);
    if (n == 0) return labels;

    auto neighbors = [&](int p) {
        std::vector<int> out;
        for (int q = 0; q < n; ++q)
            if (dm.at(p, q) <= eps) out.push_back(q);   // includes p itself
        return out;
    };

    std::vector<bool> is_core(n, false);
    std::vector<std::vector<int>> nbrs(n);
    for (int p = 0; p < n; ++p) {
        nbrs[p] = neighbors(p);
        is_core[p] = static_cast<int>(nbrs[p].size()) >= min_pts;
    }

    // Phase 1: density-connect the core points.
    int next_cluster = 0;
    for (int seed = 0; seed < n; ++seed) {
        if (!is_core[seed] || labels[seed] != kNoiseLabel) continue;
        const int cid = next_cluster++;
        std::deque<int> queue;
        labels[seed] = cid;
        queue.push_back(seed);
        while (!queue.empty()) {
            const int p = queue.front();
            queue.pop_front();
            for (int q : nbrs[p]) {
                if (!is_core[q] || labels[q] != kNoiseLabel) continue;
                labels[q] = cid;
                queue.push_back(q);
            }
        }
    }

    // Phase 2: borders join the cluster of their first core neighbor.
    for (int p = 0; p < n; ++p) {
        if (is_core[p]) continue;
        for (int q : nbrs[p]) {
            if (q != p && is_core[q]) {
                labels[p] = labels[q];
                break;
            }
        }
    }

    // Canonicalize cluster ids by smallest member index.
    std::vector<int> first_member(next_cluster, n);
    for (int i = 0; i < n; ++i)
        if (labels[i] != kNoiseLabel) first_member[labels[i]] = std::min(first_member[labels[i]], i);
    std::vector<int> order(next_cluster);
    for (int c = 0; c < next_cluster; ++c) order[c] = c;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return first_member[a] < first_member[b]; });
    std::vector<int> remap(next_cluster);
    for (int rank = 0; rank < next_cluster; ++rank) remap[order[rank]] = rank;
    for (int& l : labels)
        if (l != kNoiseLabel) l = remap[l];
    return labels;
}

std::vector<std::vector<int>> clusters_from_labels(const std::vector<int>& labels) {
    int max_label = -1;
    for (int l : labels) max_label = std::max(max_label, l);
    std::vector<std::vector<int>> groups(max_label + 1);
    std::vector<int> noise;
    for (int i = 0; i < static_cast<int>(labels.size()); ++i) {
        if (labels[i] == kNoiseLabel)
            noise.push_back(i);
        else
            groups[labels[i]].push_back(i);
    }
    for (int i : noise) groups.push_back({i});   // keep isolated detections
    return groups;
}

}  // namespace mtt
