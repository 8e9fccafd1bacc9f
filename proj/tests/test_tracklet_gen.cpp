// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 mtt contributors
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include <mtt/tracklet_gen.hpp>

using namespace mtt;

namespace {

Detection det(int id, int frame, double cx, double cy, double w = 50, double h = 50,
              double score = 0.9) {
    Detection d;
    d.det_id = id;
    d.frame = frame;
    d.box = {cx - w / 2, cy - h / 2, w, h};
    d.score = score;
    return d;
}

// Random cluster on a handful of frames; embeddings optional.
std::vector<Detection> random_cluster(std::mt19937& rng, int n, int n_frames) {
    std::uniform_real_distribution<double> coord(0, 120);
    std::vector<Detection> dets;
    for (int i = 0; i < n; ++i)
        dets.push_back(det(i, 1 + static_cast<int>(rng() % n_frames), coord(rng), coord(rng)));
    return dets;
}

bool partition_is_valid(const AffinityGraph& g, const Partition& p) {
    std::set<int> seen;
    for (const auto& blk : p.blocks) {
        for (std::size_t a = 0; a < blk.size(); ++a) {
            if (!seen.insert(blk[a]).second) return false;
            for (std::size_t b = a + 1; b < blk.size(); ++b) {
                if (!g.allowed(blk[a], blk[b])) return false;
                if (g.node(blk[a]).frame == g.node(blk[b]).frame) return false;
            }
        }
    }
    return static_cast<int>(seen.size()) == g.size();
}

}  // namespace

TEST_CASE("edge weights forbid same-frame and dissimilar pairs") {
    Config cfg;
    EmbeddingTable emb;
    emb.insert(0, {1, 0, 0});
    emb.insert(1, {1, 0, 0});
    emb.insert(2, {0.80, 0.60, 0});   // cos vs (1,0,0) = 0.80 < 0.85

    // Same frame -> forbidden regardless of similarity.
    auto g = edge_weights({det(0, 1, 0, 0), det(1, 1, 10, 0)}, &emb, cfg);
    CHECK_FALSE(g.allowed(0, 1));

    // Appearance below theta_app -> forbidden.
    g = edge_weights({det(0, 1, 0, 0), det(2, 2, 10, 0)}, &emb, cfg);
    CHECK_FALSE(g.allowed(0, 1));

    // Adjacent frames, identical centers and embeddings -> weight 1.
    g = edge_weights({det(0, 1, 0, 0), det(1, 2, 0, 0)}, &emb, cfg);
    REQUIRE(g.allowed(0, 1));
    CHECK(g.weight(0, 1) == doctest::Approx(1.0));
}

TEST_CASE("the velocity gate scales with the frame gap") {
    Config cfg;
    // Width 50: one frame apart allows center moves below 50 px.
    auto g = edge_weights({det(0, 1, 0, 0), det(1, 2, 60, 0)}, nullptr, cfg);
    CHECK_FALSE(g.allowed(0, 1));
    g = edge_weights({det(0, 1, 0, 0), det(1, 3, 60, 0)}, nullptr, cfg);   // gap 2 -> 100 px
    CHECK(g.allowed(0, 1));
}

TEST_CASE("solver prefers the nearer match and isolates same-frame rivals") {
    Config cfg;
    EmbeddingTable emb;
    for (int i = 0; i < 3; ++i) emb.insert(i, {1, 0});
    const auto g = edge_weights(
        {det(0, 1, 0, 0, 500), det(1, 2, 5, 0, 500), det(2, 2, 400, 0, 500)}, &emb, cfg);
    const auto p = solve_clique_partition(g, 70);
    const auto oracle = brute_force_partition(g);
    CHECK(p.objective == oracle.objective);
    REQUIRE(p.blocks.size() == 2);
    CHECK(p.blocks[0] == std::vector<int>{0, 1});
    CHECK(p.blocks[1] == std::vector<int>{2});
}

TEST_CASE("degenerate partitions") {
    Config cfg;
    // All pairs forbidden (single frame) -> all singleton blocks.
    auto g = edge_weights({det(0, 1, 0, 0), det(1, 1, 30, 0), det(2, 1, 60, 0)}, nullptr, cfg);
    auto p = solve_clique_partition(g, 70);
    CHECK(p.blocks.size() == 3);
    CHECK(p.objective == 0.0);

    // A single positive edge merges.
    AffinityGraph two({det(0, 1, 0, 0), det(1, 2, 0, 0)});
    two.set_weight(0, 1, 0.9);
    p = solve_clique_partition(two, 70);
    REQUIRE(p.blocks.size() == 1);
    CHECK(p.objective == doctest::Approx(0.9));

    // One node.
    AffinityGraph one({det(0, 1, 0, 0)});
    auto q = brute_force_partition(one);
    CHECK(q.blocks.size() == 1);

    // Two nodes, forbidden edge.
    AffinityGraph forb({det(0, 1, 0, 0), det(1, 1, 0, 0)});
    q = brute_force_partition(forb);
    CHECK(q.blocks.size() == 2);
}

TEST_CASE("exact solver matches the exhaustive oracle on random clusters") {
    Config cfg;
    cfg.sigma_pos = 40.0;
    std::mt19937 rng(101);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 9);
        const auto cluster = random_cluster(rng, n, 2 + static_cast<int>(rng() % 3));
        const auto g = edge_weights(cluster, nullptr, cfg);
        const auto fast = solve_clique_partition(g, 70);
        const auto slow = brute_force_partition(g);
        CHECK(fast.objective == doctest::Approx(slow.objective).epsilon(1e-12));
        CHECK(partition_is_valid(g, fast));
        CHECK(partition_is_valid(g, slow));
    }
}

TEST_CASE("solver is deterministic and blocks satisfy the clique constraints") {
    Config cfg;
    std::mt19937 rng(7);
    const auto cluster = random_cluster(rng, 9, 3);
    const auto g = edge_weights(cluster, nullptr, cfg);
    const auto p1 = solve_clique_partition(g, 70);
    const auto p2 = solve_clique_partition(g, 70);
    CHECK(p1.blocks == p2.blocks);
    CHECK(partition_is_valid(g, p1));
}

TEST_CASE("allowing an extra positive edge never lowers the optimum") {
    std::mt19937 rng(55);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 4 + static_cast<int>(rng() % 5);
        std::vector<Detection> nodes;
        for (int i = 0; i < n; ++i) nodes.push_back(det(i, i + 1, 0, 0));
        AffinityGraph g(nodes);
        std::vector<std::pair<int, int>> forbidden;
        std::uniform_real_distribution<double> w(0.05, 1.0);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                if ((rng() & 1) != 0)
                    g.set_weight(i, j, w(rng));
                else
                    forbidden.push_back({i, j});
            }
        const double before = solve_clique_partition(g, 70).objective;
        if (forbidden.empty()) continue;
        const auto [i, j] = forbidden[rng() % forbidden.size()];
        g.set_weight(i, j, w(rng));
        const double after = solve_clique_partition(g, 70).objective;
        CHECK(after >= before - 1e-12);
    }
}

TEST_CASE("instances above the budget are refused unless greedy is allowed") {
    std::vector<Detection> nodes;
    for (int i = 0; i < 12; ++i) nodes.push_back(det(i, i + 1, 0, 0));
    AffinityGraph g(nodes);
    CHECK_THROWS_AS(solve_clique_partition(g, 10), SizeError);
    CHECK_THROWS_AS(brute_force_partition(g), SizeError);

    const auto p = greedy_partition(g);   // feasible even above budget
    CHECK(partition_is_valid(g, p));
}

TEST_CASE("the exact search respects its work budget") {
    Config cfg;
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> off(-20.0, 20.0);
    std::vector<Detection> cluster;
    int id = 0;
    for (int f = 1; f <= 4; ++f)
        for (int i = 0; i < 8; ++i)
            cluster.push_back(det(id++, f, 150 + 40.0 * i + off(rng), 100 + off(rng), 60, 60));
    const auto g = edge_weights(cluster, nullptr, cfg);
    CHECK_THROWS_AS(solve_clique_partition(g, 70, 10), SizeError);
    // With headroom the same instance solves exactly.
    const auto p = solve_clique_partition(g, 70, 5'000'000);
    CHECK(partition_is_valid(g, p));
}

TEST_CASE("tracklets inherit members, intervals and fresh ids") {
    Config cfg;
    const std::vector<Detection> cluster = {det(4, 3, 0, 0), det(9, 5, 10, 0),
                                            det(11, 4, 400, 400)};
    const auto g = edge_weights(cluster, nullptr, cfg);
    Partition p;
    p.blocks = {{0, 1}, {2}};   // indices into the det_id-sorted node list
    int next_id = 7;
    const auto tracklets = tracklets_from_partition(p, g, next_id);
    REQUIRE(tracklets.size() == 2);
    CHECK(tracklets[0].id == 7);
    CHECK(tracklets[1].id == 8);
    CHECK(tracklets[0].t_begin == 3);
    CHECK(tracklets[0].t_end == 5);   // gap at frame 4 stays inside the interval
    CHECK(tracklets[0].members.size() == 2);
    CHECK(tracklets[1].length() == 1);
    CHECK(next_id == 9);
}

TEST_CASE("instance dumps mention nodes and the objective") {
    Config cfg;
    const auto g = edge_weights({det(0, 1, 0, 0), det(1, 2, 5, 0)}, nullptr, cfg);
    const auto p = solve_clique_partition(g, 70);
    const auto text = describe_instance(g, p);
    CHECK(text.find("nodes 2") != std::string::npos);
    CHECK(text.find("objective") != std::string::npos);
}
