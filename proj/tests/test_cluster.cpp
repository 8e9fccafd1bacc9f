// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 mtt contributors
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <mtt/cluster.hpp>

using namespace mtt;

namespace {

Detection det(int id, int frame, double cx, double cy, double w = 10, double h = 10,
              double score = 0.9) {
    Detection d;
    d.det_id = id;
    d.frame = frame;
    d.box = {cx - w / 2, cy - h / 2, w, h};
    d.score = score;
    return d;
}

// Independent oracle: connected components of the eps-graph.
std::vector<int> connected_components(const DistanceMatrix& dm, double eps) {
    const int n = dm.size();
    std::vector<int> comp(n, -1);
    int next = 0;
    for (int s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        comp[s] = next;
        std::vector<int> stack{s};
        while (!stack.empty()) {
            const int p = stack.back();
            stack.pop_back();
            for (int q = 0; q < n; ++q)
                if (comp[q] < 0 && dm.at(p, q) <= eps) {
                    comp[q] = next;
                    stack.push_back(q);
                }
        }
        ++next;
    }
    return comp;
}

std::vector<std::vector<int>> canonical_groups(const std::vector<int>& labels) {
    auto groups = clusters_from_labels(labels);
    for (auto& g : groups) std::sort(g.begin(), g.end());
    std::sort(groups.begin(), groups.end());
    return groups;
}

}  // namespace

TEST_CASE("prefilter drops low scores and suppresses overlapping boxes") {
    // A (score .9) and B (score .8) overlap with IoU 0.6 > 0.5.
    std::vector<Detection> dets;
    Detection a = det(0, 1, 50, 50, 40, 40, 0.9);
    Detection b = a;
    b.det_id = 1;
    b.score = 0.8;
    b.box.x += 5.0;   // IoU = 35/45 ~ 0.78 > 0.5
    dets = {a, b};
    auto kept = prefilter(dets, 0.1, 0.5);
    REQUIRE(kept.size() == 1);
    CHECK(kept[0].det_id == 0);

    // Everything below the confidence threshold vanishes.
    for (auto& d : dets) d.score = 0.05;
    CHECK(prefilter(dets, 0.1, 0.5).empty());

    // Disjoint boxes all survive.
    std::vector<Detection> apart = {det(0, 1, 0, 0), det(1, 1, 100, 0), det(2, 1, 0, 100)};
    CHECK(prefilter(apart, 0.1, 0.5).size() == 3);
}

TEST_CASE("prefilter output is a subset with scores above the threshold") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> coord(0, 500), conf(0, 1);
    std::vector<Detection> dets;
    for (int i = 0; i < 60; ++i) {
        auto d = det(i, 1 + static_cast<int>(rng() % 4), coord(rng), coord(rng), 30, 30,
                     conf(rng));
        dets.push_back(d);
    }
    const auto kept = prefilter(dets, 0.1, 0.5);
    CHECK(kept.size() <= dets.size());
    for (const auto& d : kept) CHECK(d.score >= 0.1);
}

TEST_CASE("pixel distances are center Euclidean distances") {
    const auto dm = pixel_distance_matrix({det(0, 1, 0, 0), det(1, 1, 3, 4)});
    CHECK(dm.at(0, 1) == doctest::Approx(5.0));

    const auto single = pixel_distance_matrix({det(0, 1, 7, 7)});
    CHECK(single.size() == 1);
    CHECK(single.at(0, 0) == 0.0);

    const auto tri = pixel_distance_matrix(
        {det(0, 1, 0, 0), det(1, 1, 10, 0), det(2, 1, 0, 10)});
    CHECK(tri.at(1, 2) == doctest::Approx(std::sqrt(200.0)));
    CHECK(tri.at(2, 1) == tri.at(1, 2));
}

TEST_CASE("weighted distances combine appearance and normalized location") {
    EmbeddingTable emb;
    emb.insert(0, {1, 0});
    emb.insert(1, {0, 1});
    emb.insert(2, {1, 0});

    // Orthogonal embeddings, identical position: alpha=1, beta=0 -> 1.0.
    const auto ortho =
        weighted_distance_matrix({det(0, 1, 5, 5), det(1, 2, 5, 5)}, emb, 1.0, 0.0, 100.0);
    CHECK(ortho.matrix.at(0, 1) == doctest::Approx(1.0));
    CHECK(ortho.missing_embedding_pairs == 0);

    // Identical embedding and position -> 0.
    const auto zero =
        weighted_distance_matrix({det(0, 1, 5, 5), det(2, 2, 5, 5)}, emb, 1.0, 1.0, 100.0);
    CHECK(zero.matrix.at(0, 1) == doctest::Approx(0.0));

    // alpha=0 reduces to the diagonal-normalized pixel matrix.
    const std::vector<Detection> dets = {det(0, 1, 0, 0), det(1, 1, 30, 40)};
    const auto pixel_only = weighted_distance_matrix(dets, emb, 0.0, 1.0, 100.0);
    CHECK(pixel_only.matrix.at(0, 1) == doctest::Approx(0.5));

    // Pairs without embeddings fall back to the location term and are counted.
    const auto missing =
        weighted_distance_matrix({det(0, 1, 0, 0), det(7, 2, 30, 40)}, emb, 1.0, 1.0, 100.0);
    CHECK(missing.matrix.at(0, 1) == doctest::Approx(0.5));
    CHECK(missing.missing_embedding_pairs == 1);
}

TEST_CASE("dbscan groups nearby points and promotes noise to singletons") {
    const std::vector<Detection> dets = {det(0, 1, 0, 0), det(1, 2, 10, 0),
                                         det(2, 3, 500, 500)};
    const auto labels = dbscan(pixel_distance_matrix(dets), 80.0, 2);
    CHECK(labels[0] == 0);
    CHECK(labels[1] == 0);
    CHECK(labels[2] == kNoiseLabel);

    const auto groups = clusters_from_labels(labels);
    REQUIRE(groups.size() == 2);
    CHECK(groups[0] == std::vector<int>{0, 1});
    CHECK(groups[1] == std::vector<int>{2});   // noise re-emitted as a singleton
}

TEST_CASE("identical points form one cluster") {
    std::vector<Detection> dets;
    for (int i = 0; i < 6; ++i) dets.push_back(det(i, i + 1, 42, 42));
    const auto labels = dbscan(pixel_distance_matrix(dets), 80.0, 2);
    for (int l : labels) CHECK(l == 0);
}

TEST_CASE("with min_pts 1 dbscan matches connected components") {
    std::mt19937 rng(19);
    std::uniform_real_distribution<double> coord(0, 300);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Detection> dets;
        const int n = 2 + static_cast<int>(rng() % 20);
        for (int i = 0; i < n; ++i) dets.push_back(det(i, 1 + i, coord(rng), coord(rng)));
        const auto dm = pixel_distance_matrix(dets);
        const auto labels = dbscan(dm, 60.0, 1);
        const auto comps = connected_components(dm, 60.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                CHECK((labels[i] == labels[j]) == (comps[i] == comps[j]));
    }
}

TEST_CASE("dbscan is invariant under input permutation") {
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> coord(0, 400);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 15);
        std::vector<Detection> dets;
        for (int i = 0; i < n; ++i) dets.push_back(det(i, 1 + i, coord(rng), coord(rng)));

        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<Detection> shuffled;
        for (int i : perm) shuffled.push_back(dets[i]);

        const auto base = dbscan(pixel_distance_matrix(dets), 90.0, 2);
        const auto swapped = dbscan(pixel_distance_matrix(shuffled), 90.0, 2);
        // Map the shuffled labels back to original indexing before comparing.
        std::vector<int> mapped(n, kNoiseLabel);
        for (int pos = 0; pos < n; ++pos) mapped[perm[pos]] = swapped[pos];
        CHECK(canonical_groups(base) == canonical_groups(mapped));
    }
}

TEST_CASE("points in one cluster connect through eps-bounded hops") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> coord(0, 500);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 4 + static_cast<int>(rng() % 16);
        std::vector<Detection> dets;
        for (int i = 0; i < n; ++i) dets.push_back(det(i, 1 + i, coord(rng), coord(rng)));
        const auto dm = pixel_distance_matrix(dets);
        const auto labels = dbscan(dm, 70.0, 2);
        const auto comps = connected_components(dm, 70.0);
        std::vector<bool> core(n, false);
        for (int i = 0; i < n; ++i) {
            int nbrs = 0;
            for (int j = 0; j < n; ++j)
                if (dm.at(i, j) <= 70.0) ++nbrs;
            core[i] = nbrs >= 2;
        }
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                // Same cluster implies same eps-graph component.
                if (labels[i] != kNoiseLabel && labels[i] == labels[j])
                    CHECK(comps[i] == comps[j]);
                // Core points of different clusters sit more than eps apart.
                if (core[i] && core[j] && labels[i] != labels[j] &&
                    labels[i] != kNoiseLabel && labels[j] != kNoiseLabel)
                    CHECK(dm.at(i, j) > 70.0);
            }
        }
    }
}
