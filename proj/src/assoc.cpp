// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 mtt contributors
#include <mtt/assoc.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace mtt {

void WeightedGraph::add_edge(int i, int j) {
    if (i == j) return;
    const auto at = std::lower_bound(adj[i].begin(), adj[i].end(), j);
    if (at != adj[i].end() && *at == j) return;   // already present
    adj[i].insert(at, j);
    adj[j].insert(std::lower_bound(adj[j].begin(), adj[j].end(), i), i);
}

ConflictGraph build_conflict_graph(const std::vector<TrackTree>& trees) {
    ConflictGraph cg;
    std::vector<std::vector<int>> det_sets;
    for (int ti = 0; ti < static_cast<int>(trees.size()); ++ti) {
        if (!trees[ti].alive) continue;
        for (int leaf : trees[ti].alive_leaves()) {
            cg.hypotheses.emplace_back(ti, leaf);
            cg.graph.weights.push_back(trees[ti].nodes[leaf].cum_score);
            det_sets.push_back(trees[ti].path_det_ids(leaf));
        }
    }
    const int n = cg.graph.size();
    cg.graph.adj.assign(n, {});
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const auto& a = det_sets[i];
            const auto& b = det_sets[j];
            bool share = false;
            std::size_t x = 0, y = 0;
            while (x < a.size() && y < b.size()) {
                if (a[x] == b[y]) {
                    share = true;
                    break;
                }
                if (a[x] < b[y])
                    ++x;
                else
                    ++y;
            }
            if (share) cg.graph.add_edge(i, j);
        }
    }
    return cg;
}

double set_weight(const WeightedGraph& g, const std::vector<int>& sel) {
    double w = 0.0;
    for (int i : sel) w += g.weights[i];
    return w;
}

namespace {

// Lexicographic order on the sorted id sequences.
bool lex_smaller(const std::vector<int>& a, const std::vector<int>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

struct MwisSearch {
    const WeightedGraph& g;
    double best_weight = 0.0;
    std::vector<int> best_set;   // empty set (weight 0) is always feasible

    explicit MwisSearch(const WeightedGraph& graph) : g(graph) {}

    void consider(double w, std::vector<int> sel) {
        std::sort(sel.begin(), sel.end());
        if (w > best_weight || (w == best_weight && lex_smaller(sel, best_set))) {
            best_weight = w;
            best_set = std::move(sel);
        }
    }

    void search(std::vector<int> candidates, double current, std::vector<int>& selected) {
        if (candidates.empty()) {
            consider(current, selected);
            return;
        }
        double remaining = 0.0;
        for (int c : candidates) remaining += g.weights[c];
        if (current + remaining < best_weight) return;

        // Branch on the candidate with the largest degree inside the set.
        int pick = candidates.front();
        std::size_t max_deg = 0;
        for (int c : candidates) {
            std::size_t deg = 0;
            for (int nb : g.adj[c])
                if (std::binary_search(candidates.begin(), candidates.end(), nb)) ++deg;
            if (deg > max_deg) {
                max_deg = deg;
                pick = c;
            }
        }

        // Include branch: drop the node and its neighborhood.
        std::vector<int> reduced;
        reduced.reserve(candidates.size());
        for (int c : candidates)
            if (c != pick && !std::binary_search(g.adj[pick].begin(), g.adj[pick].end(), c))
                reduced.push_back(c);
        selected.push_back(pick);
        search(reduced, current + g.weights[pick], selected);
        selected.pop_back();

        // Exclude branch.
        std::vector<int> rest;
        rest.reserve(candidates.size() - 1);
        for (int c : candidates)
            if (c != pick) rest.push_back(c);
        search(rest, current, selected);
    }
};

}  // namespace

std::vector<int> mwis_exact(const WeightedGraph& g, int hard_limit) {
    std::vector<int> candidates;
    for (int i = 0; i < g.size(); ++i)
        if (g.weights[i] > 0.0) candidates.push_back(i);
    if (static_cast<int>(candidates.size()) > hard_limit)
        throw SizeError("mwis_exact: instance above the exact-solver limit");

    MwisSearch search(g);
    // Greedy warm start tightens the bound from the first branch.
    const auto greedy = mwis_greedy(g);
    search.best_weight = set_weight(g, greedy);
    search.best_set = greedy;
    std::sort(search.best_set.begin(), search.best_set.end());

    std::vector<int> selected;
    search.search(candidates, 0.0, selected);
    return search.best_set;
}

std::vector<int> mwis_greedy(const WeightedGraph& g) {
    std::vector<bool> removed(g.size(), false);
    std::vector<int> selected;
    for (int i = 0; i < g.size(); ++i)
        if (g.weights[i] <= 0.0) removed[i] = true;

    while (true) {
        int pick = -1;
        double best_ratio = 0.0;
        for (int i = 0; i < g.size(); ++i) {
            if (removed[i]) continue;
            int deg = 0;
            for (int nb : g.adj[i])
                if (!removed[nb]) ++deg;
            const double ratio = g.weights[i] / static_cast<double>(deg + 1);
            if (pick < 0 || ratio > best_ratio) {
                pick = i;
                best_ratio = ratio;
            }
        }
        if (pick < 0) break;
        selected.push_back(pick);
        removed[pick] = true;
        for (int nb : g.adj[pick]) removed[nb] = true;
    }
    std::sort(selected.begin(), selected.end());
    return selected;
}

std::vector<int> mwis_bruteforce(const WeightedGraph& g) {
    std::vector<int> ids;
    for (int i = 0; i < g.size(); ++i)
        if (g.weights[i] > 0.0) ids.push_back(i);
    const int m = static_cast<int>(ids.size());
    if (m > 15) throw SizeError("mwis_bruteforce refused above 15 nodes");

    std::vector<std::uint32_t> adj_mask(m, 0);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            if (a != b && std::binary_search(g.adj[ids[a]].begin(), g.adj[ids[a]].end(), ids[b]))
                adj_mask[a] |= (1u << b);

    double best_weight = 0.0;
    std::vector<int> best_set;
    for (std::uint32_t s = 0; s < (1u << m); ++s) {
        bool independent = true;
        double w = 0.0;
        for (int a = 0; a < m && independent; ++a) {
            if (!(s & (1u << a))) continue;
            if (adj_mask[a] & s)
                independent = false;
            else
                w += g.weights[ids[a]];
        }
        if (!independent) continue;
        if (w > best_weight) {
            best_weight = w;
            best_set.clear();
            for (int a = 0; a < m; ++a)
                if (s & (1u << a)) best_set.push_back(ids[a]);
        } else if (w == best_weight && w > 0.0) {
            std::vector<int> cur;
            for (int a = 0; a < m; ++a)
                if (s & (1u << a)) cur.push_back(ids[a]);
            if (lex_smaller(cur, best_set)) best_set = std::move(cur);
        }
    }
    return best_set;
}

std::vector<int> mwis_solve(const WeightedGraph& g, int exact_threshold, std::string* solver_used) {
    int positive = 0;
    for (double w : g.weights)
        if (w > 0.0) ++positive;
    if (positive <= exact_threshold) {
        if (solver_used) *solver_used = "exact";
        return mwis_exact(g);
    }
    if (solver_used) *solver_used = "greedy";
    return mwis_greedy(g);
}

namespace {

void kill_subtree(TrackTree& tree, int node) {
    if (!tree.nodes[node].alive) return;
    tree.nodes[node].alive = false;
    for (int c : tree.nodes[node].children) kill_subtree(tree, c);
}

void commit_node(TrackTree& tree, int node, CommitBook& book, std::ostream* log) {
    TreeNode& n = tree.nodes[node];
    if (n.committed) return;
    n.committed = true;
    if (!n.tracklet) return;   // dummies fix no observations
    auto& dets = book.track_dets[tree.tree_id];
    for (const auto& d : n.tracklet->members) {
        dets.push_back(d);
        book.committed_dets.insert(d.det_id);
    }
    if (log)
        *log << "commit tree=" << tree.tree_id << " node=" << node
             << " tracklet=" << n.tracklet->id << "\n";
}

// Removes branches in every tree that reuse observations already committed
// elsewhere; committed nodes themselves are exempt.
void purge_conflicting_branches(std::vector<TrackTree>& trees, const std::set<int>& committed,
                                std::ostream* log) {
    for (auto& tree : trees) {
        if (!tree.alive) continue;
        for (int i = 0; i < static_cast<int>(tree.nodes.size()); ++i) {
            TreeNode& n = tree.nodes[i];
            if (!n.alive || n.committed || !n.tracklet) continue;
            bool conflict = false;
            for (const auto& d : n.tracklet->members)
                if (committed.count(d.det_id)) {
                    conflict = true;
                    break;
                }
            if (conflict) {
                if (log)
                    *log << "prune tree=" << tree.tree_id << " node=" << i
                         << " reason=committed-conflict\n";
                kill_subtree(tree, i);
            }
        }
        if (!tree.nodes.empty() && !tree.nodes[0].alive) tree.alive = false;
    }
}

}  // namespace

void nscan_prune(std::vector<TrackTree>& trees, const std::vector<std::pair<int, int>>& selected,
                 int k, CommitBook& book, std::ostream* event_log) {
    std::vector<bool> tree_selected(trees.size(), false);

    for (const auto& [ti, leaf] : selected) {
        TrackTree& tree = trees[ti];
        tree_selected[ti] = true;

        const auto path = tree.path_to(leaf);
        const int depth = static_cast<int>(path.size()) - 1;
        const int anchor_depth = depth - k;
        if (anchor_depth < 0) continue;   // tree still too shallow to decide

        // Drop every branch that does not pass through the anchor.
        for (int d = 0; d < anchor_depth; ++d) {
            const int on_path = path[d + 1];
            for (int c : trees[ti].nodes[path[d]].children)
                if (c != on_path && trees[ti].nodes[c].alive) {
                    if (event_log)
                        *event_log << "prune tree=" << tree.tree_id << " node=" << c
                                   << " reason=nscan\n";
                    kill_subtree(tree, c);
                }
        }
        // The trunk up to and including the anchor is now decided.
        for (int d = 0; d <= anchor_depth; ++d) commit_node(tree, path[d], book, event_log);
    }

    for (std::size_t ti = 0; ti < trees.size(); ++ti) {
        if (!trees[ti].alive) continue;
        if (tree_selected[ti]) {
            trees[ti].rounds_unselected = 0;
        } else if (++trees[ti].rounds_unselected > k) {
            if (event_log)
                *event_log << "prune tree=" << trees[ti].tree_id << " reason=stale\n";
            trees[ti].alive = false;
        }
    }

    purge_conflicting_branches(trees, book.committed_dets, event_log);
}

void flush_commits(std::vector<TrackTree>& trees,
                   const std::vector<std::pair<int, int>>& selected, CommitBook& book,
                   std::ostream* event_log) {
    for (const auto& [ti, leaf] : selected) {
        TrackTree& tree = trees[ti];
        for (int node : tree.path_to(leaf)) commit_node(tree, node, book, event_log);
    }
    purge_conflicting_branches(trees, book.committed_dets, event_log);
}

FinalTrack smooth_track(const FinalTrack& raw, const KalmanParams& p) {
    FinalTrack out;
    out.track_id = raw.track_id;
    if (raw.entries.empty()) return out;
    if (raw.entries.size() == 1) {
        out.entries = raw.entries;
        return out;
    }

    const int first = raw.entries.front().frame;
    const int last = raw.entries.back().frame;
    const int span = last - first + 1;

    std::vector<std::optional<Box>> meas(span);
    std::vector<const FinalTrack::Entry*> source(span, nullptr);
    double score_sum = 0.0;
    for (const auto& e : raw.entries) {
        meas[e.frame - first] = e.box;
        source[e.frame - first] = &e;
        score_sum += e.score;
    }
    const double mean_score = score_sum / static_cast<double>(raw.entries.size());

    const auto boxes = rts_smooth(meas, p);
    out.entries.reserve(span);
    for (int i = 0; i < span; ++i) {
        FinalTrack::Entry e;
        e.frame = first + i;
        e.box = boxes[i];
        if (source[i]) {
            e.score = source[i]->score;
            e.det_id = source[i]->det_id;
            e.interpolated = false;
        } else {
            e.score = mean_score;
            e.det_id = -1;
            e.interpolated = true;
        }
        out.entries.push_back(e);
    }
    return out;
}

}  // namespace mtt
