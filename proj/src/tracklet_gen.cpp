// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 mtt contributors
#include <mtt/tracklet_gen.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace mtt {

AffinityGraph::AffinityGraph(std::vector<Detection> nodes)
    : nodes_(std::move(nodes)), w_(nodes_.size() * nodes_.size(), kForbidden) {}

AffinityGraph edge_weights(std::vector<Detection> cluster, const EmbeddingTable* emb,
                           const Config& cfg) {
    std::sort(cluster.begin(), cluster.end(),
              [](const Detection& a, const Detection& b) { return a.det_id < b.det_id; });
    AffinityGraph g(std::move(cluster));
    const int n = g.size();
    std::vector<const std::vector<double>*> feats(n, nullptr);
    if (emb)
        for (int i = 0; i < n; ++i) feats[i] = emb->lookup(g.node(i).det_id);

    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const Detection& a = g.node(i);
            const Detection& b = g.node(j);
            if (a.frame == b.frame) continue;   // w5: stays forbidden
            const int frame_gap = std::abs(a.frame - b.frame);
            const double dist = a.box.center_distance(b.box);
            // w3: velocity gate scaled by the frame distance.
            if (dist >= std::min(a.box.w, b.box.w) * frame_gap) continue;
            double sim = 1.0;
            if (feats[i] && feats[j]) {
                sim = cosine_similarity(*feats[i], *feats[j]);
                if (sim < cfg.theta_app) continue;   // w4
            }
            const double affinity = std::exp(-dist / cfg.sigma_pos) * sim;
            g.set_weight(i, j, affinity);
        }
    }
    return g;
}

namespace {

// Shared search state for the exact solver. Nodes are assigned in index order
// to an existing compatible block or a fresh one; the bound adds, for every
// unassigned node, the weights it could still collect from earlier nodes.
struct PartitionSearch {
    const AffinityGraph& g;
    int n;
    std::vector<double> suffix_bound;        // suffix_bound[k]: max extra gain from nodes k..n-1
    std::vector<int> assignment;             // restricted-growth string
    std::vector<std::vector<int>> blocks;
    double objective = 0.0;

    double best_objective = -1.0;
    int best_singletons = -1;
    std::vector<int> best_assignment;
    long long expansions = 0;
    long long max_expansions = 0;

    explicit PartitionSearch(const AffinityGraph& graph) : g(graph), n(graph.size()) {
        // A node joins one block holding at most one earlier node per frame,
        // so its achievable gain is bounded by the best edge into each frame.
        suffix_bound.assign(n + 1, 0.0);
        std::map<int, double> best_per_frame;
        for (int j = n - 1; j >= 0; --j) {
            best_per_frame.clear();
            for (int i = 0; i < j; ++i) {
                if (!g.allowed(i, j)) continue;
                const double w = std::max(g.weight(i, j), 0.0);
                auto [it, inserted] = best_per_frame.try_emplace(g.node(i).frame, w);
                if (!inserted && w > it->second) it->second = w;
            }
            double gain = 0.0;
            for (const auto& [frame, w] : best_per_frame) gain += w;
            suffix_bound[j] = suffix_bound[j + 1] + gain;
        }
        assignment.assign(n, -1);
    }

    bool compatible(int node, const std::vector<int>& block) const {
        for (int m : block)
            if (!g.allowed(m, node)) return false;
        return true;
    }

    double gain(int node, const std::vector<int>& block) const {
        double s = 0.0;
        for (int m : block) s += g.weight(m, node);
        return s;
    }

    int singleton_count() const {
        int c = 0;
        for (const auto& b : blocks)
            if (b.size() == 1) ++c;
        return c;
    }

    void consider_leaf() {
        const int singles = singleton_count();
        if (objective > best_objective ||
            (objective == best_objective && singles > best_singletons) ||
            (objective == best_objective && singles == best_singletons &&
             (best_assignment.empty() ||
              std::lexicographical_compare(assignment.begin(), assignment.end(),
                                           best_assignment.begin(), best_assignment.end())))) {
            best_objective = objective;
            best_singletons = singles;
            best_assignment = assignment;
        }
    }

    void search(int node) {
        if (node == n) {
            consider_leaf();
            return;
        }
        if (max_expansions > 0 && ++expansions > max_expansions)
            throw SizeError("clique partition search budget exceeded");
        if (best_objective >= 0.0 && objective + suffix_bound[node] < best_objective) return;
        // Visit high-gain blocks first so strong incumbents prune early; ties
        // are still resolved exactly because equal-bound branches survive.
        struct Candidate {
            int block;
            double delta;
        };
        std::vector<Candidate> cands;
        cands.reserve(blocks.size());
        for (int b = 0; b < static_cast<int>(blocks.size()); ++b)
            if (compatible(node, blocks[b])) cands.push_back({b, gain(node, blocks[b])});
        std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
            if (a.delta != b.delta) return a.delta > b.delta;
            return a.block < b.block;
        });
        for (const auto& c : cands) {
            assignment[node] = c.block;
            blocks[c.block].push_back(node);
            objective += c.delta;
            search(node + 1);
            objective -= c.delta;
            blocks[c.block].pop_back();
        }
        assignment[node] = static_cast<int>(blocks.size());
        blocks.push_back({node});
        search(node + 1);
        blocks.pop_back();
        assignment[node] = -1;
    }

    Partition result() const {
        Partition p;
        if (n == 0) return p;
        const int n_blocks = 1 + *std::max_element(best_assignment.begin(), best_assignment.end());
        p.blocks.assign(n_blocks, {});
        for (int i = 0; i < n; ++i) p.blocks[best_assignment[i]].push_back(i);
        p.objective = best_objective;
        return p;
    }
};

}  // namespace

Partition solve_clique_partition(const AffinityGraph& g, int budget,
                                 long long max_search_nodes) {
    if (g.size() > budget)
        throw SizeError("clique partition instance has " + std::to_string(g.size()) +
                        " nodes, budget is " + std::to_string(budget));
    if (g.size() == 0) return {};
    PartitionSearch search(g);
    search.max_expansions = max_search_nodes;
    search.search(0);
    return search.result();
}

Partition brute_force_partition(const AffinityGraph& g) {
    if (g.size() > 10)
        throw SizeError("brute-force partition refused above 10 nodes");
    if (g.size() == 0) return {};

    const int n = g.size();
    std::vector<int> rgs(n, 0);   // restricted-growth string enumeration
    Partition best;
    best.objective = -1.0;
    int best_singletons = -1;
    std::vector<int> best_rgs;

    auto evaluate = [&]() {
        const int n_blocks = 1 + *std::max_element(rgs.begin(), rgs.end());
        std::vector<std::vector<int>> blocks(n_blocks);
        for (int i = 0; i < n; ++i) blocks[rgs[i]].push_back(i);
        double obj = 0.0;
        for (const auto& blk : blocks) {
            for (std::size_t a = 0; a < blk.size(); ++a) {
                for (std::size_t b = a + 1; b < blk.size(); ++b) {
                    if (!g.allowed(blk[a], blk[b])) return;   // invalid partition
                    obj += g.weight(blk[a], blk[b]);
                }
            }
        }
        int singles = 0;
        for (const auto& blk : blocks)
            if (blk.size() == 1) ++singles;
        if (obj > best.objective || (obj == best.objective && singles > best_singletons) ||
            (obj == best.objective && singles == best_singletons &&
             (best_rgs.empty() || std::lexicographical_compare(rgs.begin(), rgs.end(),
                                                               best_rgs.begin(), best_rgs.end())))) {
            best.objective = obj;
            best.blocks = blocks;
            best_singletons = singles;
            best_rgs = rgs;
        }
    };

    // Enumerate all restricted-growth strings of length n.
    while (true) {
        evaluate();
        int i = n - 1;
        for (; i > 0; --i) {
            int prefix_max = 0;
            for (int j = 0; j < i; ++j) prefix_max = std::max(prefix_max, rgs[j]);
            if (rgs[i] <= prefix_max) {
                ++rgs[i];
                std::fill(rgs.begin() + i + 1, rgs.end(), 0);
                break;
            }
        }
        if (i == 0) break;
    }
    return best;
}

Partition greedy_partition(const AffinityGraph& g) {
    const int n = g.size();
    std::vector<int> block_of(n);
    std::vector<std::vector<int>> blocks(n);
    for (int i = 0; i < n; ++i) {
        block_of[i] = i;
        blocks[i] = {i};
    }
    struct Edge {
        double w;
        int i, j;
    };
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (g.allowed(i, j)) edges.push_back({g.weight(i, j), i, j});
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        if (a.w != b.w) return a.w > b.w;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    });
    for (const auto& e : edges) {
        const int ba = block_of[e.i];
        const int bb = block_of[e.j];
        if (ba == bb) continue;
        bool ok = true;
        for (int u : blocks[ba]) {
            for (int v : blocks[bb]) {
                if (!g.allowed(u, v)) {
                    ok = false;
                    break;
                }
            }
            if (!ok) break;
        }
        if (!ok) continue;
        for (int v : blocks[bb]) {
            block_of[v] = ba;
            blocks[ba].push_back(v);
        }
        blocks[bb].clear();
    }
    Partition p;
    double obj = 0.0;
    for (auto& blk : blocks) {
        if (blk.empty()) continue;
        std::sort(blk.begin(), blk.end());
        for (std::size_t a = 0; a < blk.size(); ++a)
            for (std::size_t b = a + 1; b < blk.size(); ++b) obj += g.weight(blk[a], blk[b]);
        p.blocks.push_back(blk);
    }
    std::sort(p.blocks.begin(), p.blocks.end(),
              [](const std::vector<int>& a, const std::vector<int>& b) { return a[0] < b[0]; });
    p.objective = obj;
    return p;
}

std::vector<Tracklet> tracklets_from_partition(const Partition& p, const AffinityGraph& g,
                                               int& next_tracklet_id) {
    struct Keyed {
        int min_det;
        std::vector<int> block;
    };
    std::vector<Keyed> ordered;
    for (const auto& blk : p.blocks) {
        if (blk.empty()) continue;
        int min_det = std::numeric_limits<int>::max();
        for (int i : blk) min_det = std::min(min_det, g.node(i).det_id);
        ordered.push_back({min_det, blk});
    }
    std::sort(ordered.begin(), ordered.end(),
              [](const Keyed& a, const Keyed& b) { return a.min_det < b.min_det; });

    std::vector<Tracklet> out;
    out.reserve(ordered.size());
    for (const auto& k : ordered) {
        Tracklet t;
        t.id = next_tracklet_id++;
        for (int i : k.block) t.members.push_back(g.node(i));
        t.finalize();
        out.push_back(std::move(t));
    }
    return out;
}

std::string describe_instance(const AffinityGraph& g, const Partition& p) {
    std::ostringstream os;
    os << "nodes " << g.size() << "\n";
    for (int i = 0; i < g.size(); ++i) {
        const auto& d = g.node(i);
        os << "  [" << i << "] det " << d.det_id << " frame " << d.frame << " center ("
           << d.box.cx() << ", " << d.box.cy() << ") score " << d.score << "\n";
    }
    os << "weights\n";
    for (int i = 0; i < g.size(); ++i) {
        os << " ";
        for (int j = 0; j < g.size(); ++j) {
            if (i == j)
                os << "     .";
            else if (!g.allowed(i, j))
                os << "     x";
            else {
                char buf[16];
                std::snprintf(buf, sizeof(buf), " %5.3f", g.weight(i, j));
                os << buf;
            }
        }
        os << "\n";
    }
    os << "partition (objective " << p.objective << ")\n";
    for (const auto& blk : p.blocks) {
        os << "  {";
        for (std::size_t i = 0; i < blk.size(); ++i) os << (i ? " " : "") << blk[i];
        os << "}\n";
    }
    return os.str();
}

}  // namespace mtt
