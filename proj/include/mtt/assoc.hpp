// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 mtt contributors
#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <mtt/io.hpp>
#include <mtt/tracker.hpp>

namespace mtt {

/// Undirected node-weighted graph used by the MWIS solvers.
struct WeightedGraph {
    std::vector<double> weights;
    std::vector<std::vector<int>> adj;   // sorted neighbor lists, no self loops

    int size() const { return static_cast<int>(weights.size()); }
    std::size_t edge_count() const {
        std::size_t e = 0;
        for (const auto& a : adj) e += a.size();
        return e / 2;
    }
    void add_edge(int i, int j);
};

/// Conflict graph over hypothesis leaves: one node per alive leaf, an edge
/// whenever two hypotheses share an observation, weight = cumulative score.
struct ConflictGraph {
    WeightedGraph graph;
    std::vector<std::pair<int, int>> hypotheses;   // node -> (tree index, node index)
};

ConflictGraph build_conflict_graph(const std::vector<TrackTree>& trees);

/// Exact branch-and-bound MWIS. Only positive-weight nodes are eligible; ties
/// between optima resolve to the lexicographically smallest id set. Throws
/// SizeError above `hard_limit` nodes (callers switch to the greedy solver).
std::vector<int> mwis_exact(const WeightedGraph& g, int hard_limit = 1 << 20);

/// Greedy max weight/(degree+1) heuristic; always returns an independent set.
std::vector<int> mwis_greedy(const WeightedGraph& g);

/// Exhaustive oracle over all subsets; refuses graphs above 15 nodes.
std::vector<int> mwis_bruteforce(const WeightedGraph& g);

/// Dispatches to the exact solver up to `exact_threshold` nodes, greedy above.
std::vector<int> mwis_solve(const WeightedGraph& g, int exact_threshold,
                            std::string* solver_used = nullptr);

double set_weight(const WeightedGraph& g, const std::vector<int>& sel);

/// Observations fixed by pruning, grouped per tree, plus the global set used
/// to keep every committed detection in exactly one output track.
struct CommitBook {
    std::set<int> committed_dets;
    std::map<int, std::vector<Detection>> track_dets;   // tree_id -> chronological dets
};

/// N-scan pruning: per selected leaf, keep only branches through the ancestor
/// k levels up, commit the trunk above it (inclusive) and drop conflicting
/// branches in other trees. Unselected trees are deleted after k idle rounds.
void nscan_prune(std::vector<TrackTree>& trees,
                 const std::vector<std::pair<int, int>>& selected, int k, CommitBook& book,
                 std::ostream* event_log = nullptr);

/// End-of-sequence commit of the full selected paths (pruning depth 0).
void flush_commits(std::vector<TrackTree>& trees,
                   const std::vector<std::pair<int, int>>& selected, CommitBook& book,
                   std::ostream* event_log = nullptr);

/// Forward Kalman + backward RTS smoothing over a track's boxes; interior
/// missing frames are filled with smoothed means and flagged interpolated.
FinalTrack smooth_track(const FinalTrack& raw, const KalmanParams& p);

}  // namespace mtt
