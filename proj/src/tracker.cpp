// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 mtt contributors
#include <mtt/tracker.hpp>

#include <algorithm>
#include <ostream>

namespace mtt {

std::vector<int> TrackTree::alive_leaves() const {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
        if (!nodes[i].alive) continue;
        bool has_alive_child = false;
        for (int c : nodes[i].children)
            if (nodes[c].alive) {
                has_alive_child = true;
                break;
            }
        if (!has_alive_child) out.push_back(i);
    }
    return out;
}

std::vector<int> TrackTree::path_to(int node) const {
    std::vector<int> path;
    for (int i = node; i >= 0; i = nodes[i].parent) path.push_back(i);
    std::reverse(path.begin(), path.end());
    return path;
}

std::vector<int> TrackTree::path_det_ids(int node) const {
    std::vector<int> ids;
    for (int i : path_to(node)) {
        if (!nodes[i].tracklet) continue;
        for (const auto& d : nodes[i].tracklet->members) ids.push_back(d.det_id);
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

void Tracker::kill_branch(TrackTree& tree, int node) {
    int cur = node;
    while (cur >= 0 && tree.nodes[cur].alive) {
        bool has_alive_child = false;
        for (int c : tree.nodes[cur].children)
            if (tree.nodes[c].alive) {
                has_alive_child = true;
                break;
            }
        if (has_alive_child) break;
        tree.nodes[cur].alive = false;
        cur = tree.nodes[cur].parent;
    }
    if (!tree.nodes[0].alive) tree.alive = false;
}

namespace {

std::optional<std::vector<double>> blend_features(const std::optional<std::vector<double>>& parent,
                                                  const std::optional<std::vector<double>>& child) {
    if (parent && child) {
        std::vector<double> m(parent->size());
        for (std::size_t i = 0; i < m.size(); ++i) m[i] = 0.5 * (*parent)[i] + 0.5 * (*child)[i];
        return normalized(std::move(m));
    }
    if (parent) return parent;
    return child;
}

// Runs predict/update over every member box in chronological order, starting
// from `state` current at `kframe`. Returns the first member's gate data.
struct TrackletFilterResult {
    KalmanState state;
    int kframe;
    Vec4 first_innovation;
    Mat4 first_innovation_cov;
};

TrackletFilterResult filter_through_tracklet(KalmanState state, int kframe, const Tracklet& t,
                                             const KalmanParams& kp) {
    TrackletFilterResult res;
    bool first = true;
    for (const auto& d : t.members) {
        const int dt = d.frame - kframe;
        const KalmanState pred = kalman_predict(state, dt, kp);
        const KalmanUpdate upd = kalman_update(pred, d.box, kp);
        if (first) {
            res.first_innovation = upd.innovation;
            res.first_innovation_cov = upd.innovation_cov;
            first = false;
        }
        state = upd.state;
        kframe = d.frame;
    }
    res.state = state;
    res.kframe = kframe;
    return res;
}

bool intersects(const std::vector<int>& sorted_ids, const std::set<int>& committed) {
    for (int id : sorted_ids)
        if (committed.count(id)) return true;
    return false;
}

}  // namespace

int Tracker::attach(TrackTree& tree, int leaf, const Tracklet& t) {
    const TreeNode& parent = tree.nodes[leaf];
    const KalmanParams kp = KalmanParams::from_config(cfg_);

    const int dt = t.t_begin - parent.kframe;
    if (dt < 1 || t.t_begin <= parent.last_real_frame) return -1;

    const KalmanState pred = kalman_predict(parent.kstate, dt, kp);
    KalmanUpdate first_upd;
    try {
        first_upd = kalman_update(pred, t.members.front().box, kp);
    } catch (const NumericalError&) {
        return -1;
    }
    const GateResult mg =
        motion_gate(first_upd.innovation, first_upd.innovation_cov, cfg_.theta_mot);
    if (!mg.passes) return -1;

    double d_app = cfg_.theta_app;   // neutral when either feature is absent
    if (parent.feature && t.feature) {
        const AppearanceGate ag = appearance_gate(*parent.feature, *t.feature, cfg_.theta_app);
        if (!ag.passes) return -1;
        if (ag.similarity) d_app = *ag.similarity;
    }

    TreeNode node;
    node.kind = TreeNode::Kind::Tracklet;
    node.tracklet = t;
    node.parent = leaf;
    node.depth = parent.depth + 1;
    node.node_uid = next_node_uid_++;
    node.miss_count = 0;
    node.last_real_frame = t.t_end;

    const auto filtered = filter_through_tracklet(parent.kstate, parent.kframe, t, kp);
    node.kstate = filtered.state;
    node.kframe = filtered.kframe;
    node.feature = blend_features(parent.feature, t.feature);

    node.comps.s_mot = score_motion(mg.distance, first_upd.innovation_cov, cfg_.v_space);
    node.comps.s_app = score_appearance(d_app, cfg_.theta_null);
    node.comps.s_conf = score_confidence(t.mean_score, cfg_.theta_s);
    node.node_score = score_total(node.comps, cfg_);
    node.cum_score = parent.cum_score + node.node_score;

    const int idx = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back(std::move(node));
    tree.nodes[leaf].children.push_back(idx);
    ++nodes_created_;
    if (event_log_)
        *event_log_ << "attach tree=" << tree.tree_id << " node=" << idx << " parent=" << leaf
                    << " tracklet=" << t.id << " s_mot=" << tree.nodes[idx].comps.s_mot
                    << " s_app=" << tree.nodes[idx].comps.s_app
                    << " s_conf=" << tree.nodes[idx].comps.s_conf
                    << " cum=" << tree.nodes[idx].cum_score << "\n";
    return idx;
}

int Tracker::add_dummy(TrackTree& tree, int leaf, int round_end_frame) {
    const TreeNode& parent = tree.nodes[leaf];
    if (parent.miss_count + 1 > cfg_.patience) return -1;

    const KalmanParams kp = KalmanParams::from_config(cfg_);
    TreeNode node;
    node.kind = TreeNode::Kind::Dummy;
    node.parent = leaf;
    node.depth = parent.depth + 1;
    node.node_uid = next_node_uid_++;
    node.miss_count = parent.miss_count + 1;
    node.last_real_frame = parent.last_real_frame;
    const int dt = std::max(1, round_end_frame - parent.kframe);
    node.kstate = kalman_predict(parent.kstate, dt, kp);
    node.kframe = parent.kframe + dt;
    node.feature = parent.feature;   // dummy inherits the parent's features
    node.comps = {};
    node.node_score = -cfg_.miss_penalty * static_cast<double>(dt);   // per missed frame
    node.cum_score = parent.cum_score + node.node_score;

    const int idx = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back(std::move(node));
    tree.nodes[leaf].children.push_back(idx);
    ++nodes_created_;
    if (event_log_)
        *event_log_ << "dummy tree=" << tree.tree_id << " node=" << idx << " parent=" << leaf
                    << " miss=" << tree.nodes[idx].miss_count
                    << " cum=" << tree.nodes[idx].cum_score << "\n";
    return idx;
}

void Tracker::spawn(const Tracklet& t) {
    const KalmanParams kp = KalmanParams::from_config(cfg_);
    TrackTree tree;
    tree.tree_id = next_tree_id_++;

    TreeNode root;
    root.kind = TreeNode::Kind::Root;
    root.tracklet = t;
    root.parent = -1;
    root.depth = 0;
    root.node_uid = next_node_uid_++;
    root.last_real_frame = t.t_end;

    KalmanState ks = KalmanState::from_box(t.members.front().box, kp);
    int kframe = t.members.front().frame;
    for (std::size_t i = 1; i < t.members.size(); ++i) {
        const auto& d = t.members[i];
        ks = kalman_update(kalman_predict(ks, d.frame - kframe, kp), d.box, kp).state;
        kframe = d.frame;
    }
    root.kstate = ks;
    root.kframe = kframe;
    root.feature = t.feature;

    // A fresh hypothesis has no motion evidence; appearance stays neutral.
    root.comps.s_mot = 0.0;
    root.comps.s_app = score_appearance(cfg_.theta_app, cfg_.theta_null);
    root.comps.s_conf = score_confidence(t.mean_score, cfg_.theta_s);
    root.node_score = score_total(root.comps, cfg_);
    root.cum_score = root.node_score;

    tree.nodes.push_back(std::move(root));
    trees_.push_back(std::move(tree));
    ++trees_spawned_;
    ++nodes_created_;
    if (event_log_)
        *event_log_ << "spawn tree=" << trees_.back().tree_id << " tracklet=" << t.id
                    << " cum=" << trees_.back().nodes[0].cum_score << "\n";
}

void Tracker::cap_leaves(TrackTree& tree) {
    auto leaves = tree.alive_leaves();
    if (static_cast<int>(leaves.size()) <= cfg_.max_leaves) return;
    std::sort(leaves.begin(), leaves.end(), [&](int a, int b) {
        if (tree.nodes[a].cum_score != tree.nodes[b].cum_score)
            return tree.nodes[a].cum_score > tree.nodes[b].cum_score;
        return tree.nodes[a].node_uid < tree.nodes[b].node_uid;
    });
    for (std::size_t i = cfg_.max_leaves; i < leaves.size(); ++i) {
        if (event_log_)
            *event_log_ << "prune tree=" << tree.tree_id << " node=" << leaves[i]
                        << " reason=leaf-cap\n";
        kill_branch(tree, leaves[i]);
    }
}

void Tracker::advance(const std::vector<Tracklet>& new_tracklets, int round_end_frame,
                      const std::set<int>& committed_dets) {
    // Tracklets whose observations were already committed cannot be reused.
    std::vector<const Tracklet*> usable;
    for (const auto& t : new_tracklets) {
        if (t.members.empty()) continue;
        if (!intersects(t.det_ids(), committed_dets)) usable.push_back(&t);
    }

    for (auto& tree : trees_) {
        if (!tree.alive) continue;
        const auto leaves = tree.alive_leaves();
        std::vector<int> childless;
        for (int leaf : leaves) {
            bool extended = false;
            for (const Tracklet* t : usable)
                if (attach(tree, leaf, *t) >= 0) extended = true;
            if (add_dummy(tree, leaf, round_end_frame) >= 0) extended = true;
            if (!extended) childless.push_back(leaf);
        }
        // A leaf that could not even grow a dummy has exhausted its patience.
        for (int leaf : childless) {
            if (event_log_)
                *event_log_ << "prune tree=" << tree.tree_id << " node=" << leaf
                            << " reason=patience\n";
            kill_branch(tree, leaf);
        }
        if (tree.alive) cap_leaves(tree);
    }

    // Every new tracklet also starts its own hypothesis tree.
    for (const Tracklet* t : usable) spawn(*t);
}

int Tracker::best_leaf(const TrackTree& tree) {
    if (!tree.alive) return -1;
    int best = -1;
    for (int leaf : tree.alive_leaves()) {
        if (best < 0 || tree.nodes[leaf].cum_score > tree.nodes[best].cum_score ||
            (tree.nodes[leaf].cum_score == tree.nodes[best].cum_score &&
             tree.nodes[leaf].node_uid < tree.nodes[best].node_uid))
            best = leaf;
    }
    return best;
}

void DuplicateSuppressor::round(std::vector<TrackTree>& trees, int frame, const KalmanParams& kp,
                                std::ostream* event_log) {
    if (iou_threshold_ > 1.0) return;   // disabled

    struct Candidate {
        int index;
        int tree_id;
        double cum;
        Box box;
    };
    std::vector<Candidate> cands;
    for (int i = 0; i < static_cast<int>(trees.size()); ++i) {
        const int leaf = Tracker::best_leaf(trees[i]);
        if (leaf < 0) continue;
        const TreeNode& n = trees[i].nodes[leaf];
        const int dt = frame - n.kframe;
        const KalmanState state = dt >= 1 ? kalman_predict(n.kstate, dt, kp) : n.kstate;
        cands.push_back({i, trees[i].tree_id, n.cum_score, state.box()});
    }

    std::map<std::pair<int, int>, int> next_streak;
    std::vector<int> doomed;
    for (std::size_t a = 0; a < cands.size(); ++a) {
        for (std::size_t b = a + 1; b < cands.size(); ++b) {
            if (iou(cands[a].box, cands[b].box) <= iou_threshold_) continue;
            const auto key = std::make_pair(std::min(cands[a].tree_id, cands[b].tree_id),
                                            std::max(cands[a].tree_id, cands[b].tree_id));
            const auto it = streak_.find(key);
            const int run = (it == streak_.end() ? 0 : it->second) + 1;
            next_streak[key] = run;
            if (run < rounds_) continue;
            // Persistent overlap: drop the weaker (younger on ties) tree.
            const Candidate& loser =
                cands[a].cum != cands[b].cum ? (cands[a].cum < cands[b].cum ? cands[a] : cands[b])
                                             : (cands[a].tree_id > cands[b].tree_id ? cands[a]
                                                                                    : cands[b]);
            doomed.push_back(loser.index);
            if (event_log)
                *event_log << "prune tree=" << loser.tree_id << " reason=duplicate-of-"
                           << (loser.index == cands[a].index ? cands[b].tree_id
                                                             : cands[a].tree_id)
                           << "\n";
        }
    }
    streak_ = std::move(next_streak);
    for (int i : doomed) trees[i].alive = false;
}

}  // namespace mtt
