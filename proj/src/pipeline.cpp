// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 mtt contributors
#include <mtt/pipeline.hpp>

#include <algorithm>
#include <cmath>
#include <future>
#include <ostream>
#include <sstream>

#include <mtt/cluster.hpp>
#include <mtt/partition.hpp>
#include <mtt/scoring.hpp>
#include <mtt/tracker.hpp>
#include <mtt/tracklet_gen.hpp>

namespace mtt {

std::string PipelineMode::name() const {
    switch (kind) {
        case Kind::Adaptive: return "adaptive";
        case Kind::Fixed: return "fixed:" + std::to_string(window);
        case Kind::Sliding: return "sliding:" + std::to_string(window);
    }
    return "adaptive";
}

PipelineMode parse_mode(const std::string& text) {
    PipelineMode mode;
    if (text == "adaptive") {
        mode.kind = PipelineMode::Kind::Adaptive;
        return mode;
    }
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    if (head != "fixed" && head != "sliding")
        throw ConfigError("unknown mode '" + text + "' (expected adaptive, fixed:L, sliding:L)");
    if (colon == std::string::npos)
        throw ConfigError("mode '" + head + "' needs a window length, e.g. " + head + ":5");
    int window = 0;
    try {
        window = std::stoi(text.substr(colon + 1));
    } catch (const std::exception&) {
        throw ConfigError("bad window length in mode '" + text + "'");
    }
    if (window < 1) throw ConfigError("window length must be >= 1");
    mode.kind = head == "fixed" ? PipelineMode::Kind::Fixed : PipelineMode::Kind::Sliding;
    mode.window = window;
    return mode;
}

namespace {

std::vector<Subsequence> make_subsequences(const FrameSet& fs, const Config& cfg,
                                           const PipelineMode& mode) {
    const int n = fs.frame_count();
    std::vector<Subsequence> subs;
    switch (mode.kind) {
        case PipelineMode::Kind::Adaptive: {
            const auto curve = CountCurve::from_frameset(fs, cfg.w_median);
            subs = partition_adaptive(curve, cfg);
            break;
        }
        case PipelineMode::Kind::Fixed:
            subs = partition_fixed(n, mode.window, mode.window);
            break;
        case PipelineMode::Kind::Sliding:
            subs = partition_fixed(n, mode.window, std::min(cfg.stride_s, mode.window));
            break;
    }
    fill_detection_totals(subs, fs.count_curve());
    return subs;
}

std::vector<Tracklet> generate_tracklets(const std::vector<Detection>& subseq_dets,
                                         const EmbeddingTable& emb, const Config& cfg,
                                         int& next_tracklet_id, long long& cluster_counter,
                                         std::ostream* cluster_debug, int n_threads) {
    std::vector<Tracklet> out;
    if (subseq_dets.empty()) return out;

    std::vector<int> labels;
    if (cfg.use_weighted_distance && !emb.empty()) {
        const double diag = std::hypot(static_cast<double>(cfg.image_width),
                                       static_cast<double>(cfg.image_height));
        const auto wd = weighted_distance_matrix(subseq_dets, emb, cfg.dist_alpha, cfg.dist_beta,
                                                 diag);
        labels = dbscan(wd.matrix, cfg.weighted_eps, cfg.dbscan_min_pts);
    } else {
        labels = dbscan(pixel_distance_matrix(subseq_dets), cfg.dbscan_eps, cfg.dbscan_min_pts);
    }
    const auto clusters = clusters_from_labels(labels);

    if (cluster_debug) {
        for (std::size_t c = 0; c < clusters.size(); ++c)
            for (int i : clusters[c]) {
                const auto& d = subseq_dets[i];
                char buf[128];
                std::snprintf(buf, sizeof(buf), "%d,%d,%.2f,%.2f,%lld\n", d.det_id, d.frame,
                              d.box.cx(), d.box.cy(),
                              cluster_counter + static_cast<long long>(c));
                *cluster_debug << buf;
            }
    }
    cluster_counter += static_cast<long long>(clusters.size());

    auto solve_cluster = [&](const std::vector<int>& members) {
        std::vector<Detection> dets;
        dets.reserve(members.size());
        for (int i : members) dets.push_back(subseq_dets[i]);
        AffinityGraph g = edge_weights(std::move(dets), emb.empty() ? nullptr : &emb, cfg);
        Partition p;
        try {
            p = solve_clique_partition(g, cfg.clique_budget, cfg.clique_max_search_nodes);
        } catch (const SizeError&) {
            if (!cfg.clique_greedy_fallback) throw;
            p = greedy_partition(g);
        }
        return std::make_pair(std::move(g), std::move(p));
    };

    std::vector<std::pair<AffinityGraph, Partition>> solved(clusters.size());
    if (n_threads > 1 && clusters.size() > 1) {
        std::vector<std::future<std::pair<AffinityGraph, Partition>>> futures;
        futures.reserve(clusters.size());
        for (const auto& members : clusters)
            futures.push_back(std::async(std::launch::async, solve_cluster, members));
        for (std::size_t c = 0; c < clusters.size(); ++c) solved[c] = futures[c].get();
    } else {
        for (std::size_t c = 0; c < clusters.size(); ++c) solved[c] = solve_cluster(clusters[c]);
    }

    for (auto& [graph, partition] : solved) {
        auto tracklets = tracklets_from_partition(partition, graph, next_tracklet_id);
        for (auto& t : tracklets) {
            if (!emb.empty()) t.feature = tracklet_feature(t, emb);
            out.push_back(std::move(t));
        }
    }
    return out;
}

std::vector<FinalTrack> assemble_tracks(const CommitBook& book, const Config& cfg) {
    struct Raw {
        int tree_id;
        FinalTrack track;
    };
    std::vector<Raw> raws;
    for (const auto& [tree_id, dets] : book.track_dets) {
        if (dets.empty()) continue;
        FinalTrack t;
        t.track_id = tree_id;
        for (const auto& d : dets) t.entries.push_back({d.frame, d.box, d.score, false, d.det_id});
        std::sort(t.entries.begin(), t.entries.end(),
                  [](const FinalTrack::Entry& a, const FinalTrack::Entry& b) {
                      return a.frame < b.frame;
                  });
        raws.push_back({tree_id, std::move(t)});
    }
    std::sort(raws.begin(), raws.end(), [](const Raw& a, const Raw& b) {
        const int fa = a.track.entries.front().frame;
        const int fb = b.track.entries.front().frame;
        if (fa != fb) return fa < fb;
        return a.tree_id < b.tree_id;
    });

    const KalmanParams kp = KalmanParams::from_config(cfg);
    std::vector<FinalTrack> out;
    out.reserve(raws.size());
    int next_id = 1;
    for (auto& r : raws) {
        FinalTrack smoothed = smooth_track(r.track, kp);
        smoothed.track_id = next_id++;
        out.push_back(std::move(smoothed));
    }
    return out;
}

}  // namespace

PipelineResult run_pipeline(const FrameSet& fs, const EmbeddingTable& emb, const Config& cfg,
                            const PipelineMode& mode, const PipelineSinks& sinks, int n_threads) {
    cfg.validate();
    PipelineResult res;
    res.counts.frames = fs.frame_count();
    res.counts.detections = static_cast<long long>(fs.total_detections());

    const auto subs = make_subsequences(fs, cfg, mode);
    res.counts.subsequences = static_cast<int>(subs.size());

    // Confidence/NMS filtering once, then rounds consume frame slices.
    std::vector<Detection> all;
    for (int f = 1; f <= fs.frame_count(); ++f)
        for (const auto& d : fs.at(f)) all.push_back(d);
    auto filtered = prefilter(std::move(all), cfg.theta_s, cfg.nms_iou);
    res.counts.detections_prefiltered = static_cast<long long>(filtered.size());
    std::vector<std::vector<Detection>> filtered_by_frame(fs.frame_count() + 1);
    for (auto& d : filtered) {
        if (emb.lookup(d.det_id)) d.embedding_id = d.det_id;
        filtered_by_frame[d.frame].push_back(std::move(d));
    }

    Tracker tracker(cfg, sinks.event_log);
    DuplicateSuppressor dedup(cfg.duplicate_iou, cfg.duplicate_rounds);
    const KalmanParams kp = KalmanParams::from_config(cfg);
    CommitBook book;
    int next_tracklet_id = 1;
    long long cluster_counter = 0;
    int round = 0;

    auto assoc_round = [&](bool final_flush) {
        const ConflictGraph cg = build_conflict_graph(tracker.trees());
        std::string solver;
        const auto selected = mwis_solve(cg.graph, cfg.mwis_exact_threshold, &solver);
        std::vector<std::pair<int, int>> chosen;
        chosen.reserve(selected.size());
        for (int s : selected) chosen.push_back(cg.hypotheses[s]);
        if (sinks.assoc_log) {
            char buf[192];
            std::snprintf(buf, sizeof(buf),
                          "{\"round\":%d,\"nodes\":%d,\"edges\":%zu,\"solver\":\"%s\","
                          "\"objective\":%.6f,\"selected\":%zu,\"flush\":%s}\n",
                          round, cg.graph.size(), cg.graph.edge_count(), solver.c_str(),
                          set_weight(cg.graph, selected), selected.size(),
                          final_flush ? "true" : "false");
            *sinks.assoc_log << buf;
        }
        if (final_flush)
            flush_commits(tracker.trees(), chosen, book, sinks.event_log);
        else
            nscan_prune(tracker.trees(), chosen, cfg.prune_depth, book, sinks.event_log);
    };

    for (const auto& sub : subs) {
        ++round;
        std::vector<Detection> subseq_dets;
        for (int f = sub.begin; f <= sub.end && f < static_cast<int>(filtered_by_frame.size());
             ++f)
            for (const auto& d : filtered_by_frame[f]) subseq_dets.push_back(d);

        auto tracklets = generate_tracklets(subseq_dets, emb, cfg, next_tracklet_id,
                                            cluster_counter, sinks.cluster_debug, n_threads);
        res.counts.tracklets += static_cast<long long>(tracklets.size());

        tracker.advance(tracklets, sub.end, book.committed_dets);
        dedup.round(tracker.trees(), sub.end, kp, sinks.event_log);
        assoc_round(false);
    }
    if (!subs.empty()) assoc_round(true);

    res.counts.clusters = cluster_counter;
    res.counts.trees_spawned = tracker.trees_spawned();
    res.counts.hypotheses_scored = tracker.nodes_created();
    res.tracks = assemble_tracks(book, cfg);
    res.counts.final_tracks = static_cast<int>(res.tracks.size());
    return res;
}

std::string partition_debug_csv(const FrameSet& fs, const Config& cfg, const PipelineMode& mode) {
    const auto curve = CountCurve::from_frameset(fs, cfg.w_median);
    const auto subs = make_subsequences(fs, cfg, mode);
    std::vector<int> subseq_id(fs.frame_count() + 1, -1);
    for (int s = 0; s < static_cast<int>(subs.size()); ++s)
        for (int f = subs[s].begin; f <= subs[s].end; ++f)
            if (subseq_id[f] < 0) subseq_id[f] = s;   // first window wins in sliding mode

    std::ostringstream os;
    os << "frame,raw_count,filtered_count,subseq_id\n";
    for (int f = 1; f <= fs.frame_count(); ++f)
        os << f << "," << curve.raw[f - 1] << "," << curve.filtered[f - 1] << "," << subseq_id[f]
           << "\n";
    return os.str();
}

std::string RunManifest::to_json(const Config& cfg) const {
    std::ostringstream os;
    os << "{\n";
    os << "  \"inputs\": {\"dets\": \"" << dets_path << "\", \"emb\": \"" << emb_path
       << "\", \"config\": \"" << config_path << "\"},\n";
    os << "  \"mode\": \"" << mode << "\",\n";
    os << "  \"config\": " << config_to_json(cfg) << ",\n";
    os << "  \"counts\": {"
       << "\"frames\": " << counts.frames << ", \"detections\": " << counts.detections
       << ", \"detections_prefiltered\": " << counts.detections_prefiltered
       << ", \"subsequences\": " << counts.subsequences << ", \"clusters\": " << counts.clusters
       << ", \"tracklets\": " << counts.tracklets
       << ", \"trees_spawned\": " << counts.trees_spawned
       << ", \"hypotheses_scored\": " << counts.hypotheses_scored
       << ", \"final_tracks\": " << counts.final_tracks << "},\n";
    os << "  \"timings_ms\": {";
    bool first = true;
    for (const auto& [k, v] : timings_ms) {
        if (!first) os << ", ";
        first = false;
        char buf[64];
        std::snprintf(buf, sizeof(buf), "\"%s\": %.3f", k.c_str(), v);
        os << buf;
    }
    os << "}\n}\n";
    return os.str();
}

}  // namespace mtt
