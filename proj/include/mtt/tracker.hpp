// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 mtt contributors
#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include <mtt/config.hpp>
#include <mtt/kalman.hpp>
#include <mtt/scoring.hpp>
#include <mtt/types.hpp>

namespace mtt {

/// One node of a track tree. Roots carry the spawning tracklet; dummy nodes
/// stand for a missed observation and inherit the parent's feature.
struct TreeNode {
    enum class Kind { Root, Tracklet, Dummy };

    Kind kind{Kind::Root};
    std::optional<Tracklet> tracklet;   // absent for dummies
    int parent{-1};
    std::vector<int> children;
    bool alive{true};
    bool committed{false};

    KalmanState kstate;
    int kframe{0};            // frame the Kalman state refers to
    int last_real_frame{0};   // end of the last real tracklet on the path
    std::optional<std::vector<double>> feature;
    int miss_count{0};
    int depth{0};
    int node_uid{0};          // global creation order, used for tie-breaking

    ScoreComponents comps;
    double node_score{0.0};
    double cum_score{0.0};    // sum of node scores along the root path
};

/// Rooted hypothesis tree; each root-to-leaf path is a candidate trajectory.
struct TrackTree {
    int tree_id{0};
    std::vector<TreeNode> nodes;   // index 0 is the root
    bool alive{true};
    int rounds_unselected{0};

    std::vector<int> alive_leaves() const;
    /// Node indices from root to `node`, inclusive.
    std::vector<int> path_to(int node) const;
    /// det_ids along the root path of `node`.
    std::vector<int> path_det_ids(int node) const;
};

/// Maintains the forest of tracklet trees over successive rounds: spawns a
/// tree per new tracklet, attaches gated tracklets under every leaf, grows
/// dummy branches for misses and caps each tree at max_leaves hypotheses.
class Tracker {
public:
    Tracker(const Config& cfg, std::ostream* event_log = nullptr)
        : cfg_(cfg), event_log_(event_log) {}

    /// One update round. `round_end_frame` is the last frame of the consumed
    /// subsequence; `committed_dets` suppresses tracklets that reuse already
    /// committed observations (relevant for overlapping-window modes).
    void advance(const std::vector<Tracklet>& new_tracklets, int round_end_frame,
                 const std::set<int>& committed_dets);

    std::vector<TrackTree>& trees() { return trees_; }
    const std::vector<TrackTree>& trees() const { return trees_; }
    const Config& config() const { return cfg_; }
    std::ostream* event_log() const { return event_log_; }

    long long trees_spawned() const { return trees_spawned_; }
    long long nodes_created() const { return nodes_created_; }

    /// Removes a node and any ancestors left without alive children.
    static void kill_branch(TrackTree& tree, int node);

    /// Best alive leaf by cumulative score (ties: earlier creation); -1 when
    /// the tree is dead.
    static int best_leaf(const TrackTree& tree);

private:
    int attach(TrackTree& tree, int leaf, const Tracklet& t);
    void spawn(const Tracklet& t);
    int add_dummy(TrackTree& tree, int leaf, int round_end_frame);
    void cap_leaves(TrackTree& tree);

    Config cfg_;
    std::ostream* event_log_{nullptr};
    std::vector<TrackTree> trees_;
    int next_tree_id_{1};
    int next_node_uid_{0};
    long long trees_spawned_{0};
    long long nodes_created_{0};
};

/// Hypothesis management: trees whose best trajectories overlap in space for
/// several consecutive rounds describe the same target; the lower-scoring
/// tree is terminated (its committed prefix stays in the output).
class DuplicateSuppressor {
public:
    DuplicateSuppressor(double iou_threshold, int rounds)
        : iou_threshold_(iou_threshold), rounds_(rounds) {}

    void round(std::vector<TrackTree>& trees, int frame, const KalmanParams& kp,
               std::ostream* event_log = nullptr);

private:
    double iou_threshold_;
    int rounds_;
    std::map<std::pair<int, int>, int> streak_;   // (tree_id, tree_id) -> rounds
};

}  // namespace mtt
