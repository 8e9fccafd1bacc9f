// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 mtt contributors
#pragma once

#include <string>
#include <vector>

#include <mtt/config.hpp>
#include <mtt/types.hpp>

namespace mtt {

/// Pairwise affinity over one cluster's detections. Same-frame pairs, pairs
/// failing the velocity gate and pairs failing the appearance gate are
/// forbidden outright; allowed pairs carry a positive affinity weight.
class AffinityGraph {
public:
    AffinityGraph() = default;
    explicit AffinityGraph(std::vector<Detection> nodes);

    int size() const { return static_cast<int>(nodes_.size()); }
    const std::vector<Detection>& nodes() const { return nodes_; }
    const Detection& node(int i) const { return nodes_[i]; }

    bool allowed(int i, int j) const { return weight_at(i, j) >= 0.0; }
    double weight(int i, int j) const { return allowed(i, j) ? weight_at(i, j) : 0.0; }

    void forbid(int i, int j) { set(i, j, kForbidden); }
    void set_weight(int i, int j, double w) { set(i, j, w); }

private:
    static constexpr double kForbidden = -1.0;
    double weight_at(int i, int j) const { return w_[static_cast<std::size_t>(i) * size() + j]; }
    void set(int i, int j, double v) {
        w_[static_cast<std::size_t>(i) * size() + j] = v;
        w_[static_cast<std::size_t>(j) * size() + i] = v;
    }

    std::vector<Detection> nodes_;
    std::vector<double> w_;
};

/// Disjoint blocks covering all node indices; every block is a clique of
/// allowed edges with at most one detection per frame.
struct Partition {
    std::vector<std::vector<int>> blocks;
    double objective{0.0};
};

/// Builds the affinity graph: pairs are forbidden when on the same frame,
/// when the center distance reaches min(w_i, w_j) * |frame gap| or when the
/// embedding similarity falls below theta_app (skipped if either embedding is
/// absent). Allowed pairs score exp(-dist/sigma_pos) times cosine similarity.
AffinityGraph edge_weights(std::vector<Detection> cluster, const EmbeddingTable* emb,
                           const Config& cfg);

/// Exact branch-and-bound maximizing the total within-block weight over all
/// clique partitions. Deterministic; ties prefer more singleton blocks, then
/// the lexicographically smallest assignment. Throws SizeError above the node
/// budget, or when the search exceeds max_search_nodes expansions (dense
/// worst-case instances; callers may fall back to greedy_partition).
Partition solve_clique_partition(const AffinityGraph& g, int budget,
                                 long long max_search_nodes = 50'000'000);

/// Exhaustive set-partition oracle for small instances (<= 10 nodes).
Partition brute_force_partition(const AffinityGraph& g);

/// Agglomerative fallback for over-budget instances: merges compatible blocks
/// along positive edges in weight order. Feasible, not optimal.
Partition greedy_partition(const AffinityGraph& g);

/// Converts blocks into tracklets with fresh ids (assigned in order of each
/// block's smallest det_id). The aggregated feature is filled by the caller.
std::vector<Tracklet> tracklets_from_partition(const Partition& p, const AffinityGraph& g,
                                               int& next_tracklet_id);

/// Plain-text dump of a solved instance: nodes, weights, chosen partition.
std::string describe_instance(const AffinityGraph& g, const Partition& p);

}  // namespace mtt
