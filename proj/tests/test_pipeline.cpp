// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 mtt contributors
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include <mtt/metrics.hpp>
#include <mtt/pipeline.hpp>
#include <mtt/simulator.hpp>

using namespace mtt;

namespace {

SceneSpec pipeline_spec(std::uint64_t seed = 5) {
    SceneSpec spec;
    spec.seed = seed;
    spec.n_targets = 5;
    spec.n_frames = 40;
    spec.miss_rate = 0.05;
    spec.fp_rate = 0.05;
    spec.jitter_px = 1.0;
    spec.n_occlusions = 1;
    spec.occlusion_min = 2;
    spec.occlusion_max = 4;
    return spec;
}

std::string track_bytes(const std::vector<FinalTrack>& tracks) {
    const auto path = (std::filesystem::temp_directory_path() / "pipeline_bytes.csv").string();
    write_tracks(tracks, path);
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

TrackSet tracks_to_set(const std::vector<FinalTrack>& tracks) {
    TrackSet ts;
    for (const auto& t : tracks)
        for (const auto& e : t.entries) ts.tracks[t.track_id][e.frame] = e.box;
    return ts;
}

}  // namespace

TEST_CASE("mode strings parse and reject garbage") {
    CHECK(parse_mode("adaptive").kind == PipelineMode::Kind::Adaptive);
    const auto fixed = parse_mode("fixed:3");
    CHECK(fixed.kind == PipelineMode::Kind::Fixed);
    CHECK(fixed.window == 3);
    const auto sliding = parse_mode("sliding:4");
    CHECK(sliding.kind == PipelineMode::Kind::Sliding);
    CHECK(sliding.window == 4);
    CHECK_THROWS_AS(parse_mode("fixed"), ConfigError);
    CHECK_THROWS_AS(parse_mode("nonsense"), ConfigError);
    CHECK_THROWS_AS(parse_mode("fixed:0"), ConfigError);
}

TEST_CASE("the full pipeline tracks a small synthetic scene") {
    const SceneData scene = generate(pipeline_spec());
    Config cfg;
    const auto result =
        run_pipeline(scene.detections, scene.embeddings, cfg, parse_mode("adaptive"));
    CHECK(result.counts.frames == 40);
    CHECK(result.counts.detections == static_cast<long long>(scene.detections.total_detections()));
    CHECK(result.counts.subsequences > 0);
    CHECK(result.counts.tracklets > 0);
    CHECK(result.counts.final_tracks > 0);
    CHECK(result.counts.final_tracks == static_cast<int>(result.tracks.size()));

    const EvalReport r =
        evaluate_tracks(scene.truth.to_track_set(), tracks_to_set(result.tracks), 0.5);
    CHECK(r.MOTA > 0.5);   // coarse sanity floor; the acceptance suite pins the real bar
}

TEST_CASE("final tracks never share a detection") {
    const SceneData scene = generate(pipeline_spec(17));
    Config cfg;
    const auto result =
        run_pipeline(scene.detections, scene.embeddings, cfg, parse_mode("adaptive"));
    std::set<int> seen;
    for (const auto& t : result.tracks)
        for (int id : t.det_ids()) CHECK(seen.insert(id).second);
}

TEST_CASE("two identical runs produce identical bytes") {
    const SceneData scene = generate(pipeline_spec(9));
    Config cfg;
    const auto a = run_pipeline(scene.detections, scene.embeddings, cfg, parse_mode("adaptive"));
    const auto b = run_pipeline(scene.detections, scene.embeddings, cfg, parse_mode("adaptive"));
    CHECK(track_bytes(a.tracks) == track_bytes(b.tracks));
    CHECK(a.counts.tracklets == b.counts.tracklets);
    CHECK(a.counts.final_tracks == b.counts.final_tracks);
}

TEST_CASE("fixed windows of length one make one tracklet per detection") {
    const SceneData scene = generate(pipeline_spec(3));
    Config cfg;
    const auto result =
        run_pipeline(scene.detections, scene.embeddings, cfg, parse_mode("fixed:1"));
    CHECK(result.counts.tracklets == result.counts.detections_prefiltered);

    const auto adaptive =
        run_pipeline(scene.detections, scene.embeddings, cfg, parse_mode("adaptive"));
    CHECK(adaptive.counts.tracklets < result.counts.tracklets);
}

TEST_CASE("the weighted distance metric drives the same pipeline") {
    const SceneData scene = generate(pipeline_spec(6));
    Config cfg;
    cfg.use_weighted_distance = true;
    const auto result =
        run_pipeline(scene.detections, scene.embeddings, cfg, parse_mode("adaptive"));
    CHECK(result.counts.final_tracks > 0);
    std::set<int> seen;
    for (const auto& t : result.tracks)
        for (int id : t.det_ids()) CHECK(seen.insert(id).second);

    const EvalReport r =
        evaluate_tracks(scene.truth.to_track_set(), tracks_to_set(result.tracks), 0.5);
    CHECK(r.MOTA > 0.5);
}

TEST_CASE("worker threads do not change the output") {
    const SceneData scene = generate(pipeline_spec(13));
    Config cfg;
    const auto serial =
        run_pipeline(scene.detections, scene.embeddings, cfg, parse_mode("adaptive"), {}, 1);
    const auto threaded =
        run_pipeline(scene.detections, scene.embeddings, cfg, parse_mode("adaptive"), {}, 4);
    CHECK(track_bytes(serial.tracks) == track_bytes(threaded.tracks));
    CHECK(serial.counts.tracklets == threaded.counts.tracklets);
}

TEST_CASE("over-budget clusters abort unless the greedy fallback is enabled") {
    const SceneData scene = generate(pipeline_spec(4));
    Config cfg;
    cfg.clique_budget = 1;
    CHECK_THROWS_AS(
        run_pipeline(scene.detections, scene.embeddings, cfg, parse_mode("adaptive")),
        SizeError);
    cfg.clique_greedy_fallback = true;
    const auto result =
        run_pipeline(scene.detections, scene.embeddings, cfg, parse_mode("adaptive"));
    CHECK(result.counts.final_tracks > 0);
}

TEST_CASE("an empty frame set runs to an empty result") {
    Config cfg;
    const auto result = run_pipeline(FrameSet{}, EmbeddingTable{}, cfg, parse_mode("adaptive"));
    CHECK(result.counts.final_tracks == 0);
    CHECK(result.tracks.empty());
}

TEST_CASE("sliding mode stays det-disjoint despite overlapping windows") {
    SceneSpec spec = pipeline_spec(21);
    spec.n_frames = 20;
    spec.n_targets = 3;
    const SceneData scene = generate(spec);
    Config cfg;
    const auto result =
        run_pipeline(scene.detections, scene.embeddings, cfg, parse_mode("sliding:3"));
    std::set<int> seen;
    for (const auto& t : result.tracks)
        for (int id : t.det_ids()) CHECK(seen.insert(id).second);
}

TEST_CASE("the partition debug table lists every frame once") {
    const SceneData scene = generate(pipeline_spec(2));
    Config cfg;
    const auto csv = partition_debug_csv(scene.detections, cfg, parse_mode("adaptive"));
    CHECK(csv.find("frame,raw_count,filtered_count,subseq_id") == 0);
    const auto lines = std::count(csv.begin(), csv.end(), '\n');
    CHECK(lines == 41);   // header plus one row per frame
}

TEST_CASE("event and association logs capture the round structure") {
    const SceneData scene = generate(pipeline_spec(8));
    Config cfg;
    std::ostringstream events, assoc;
    PipelineSinks sinks;
    sinks.event_log = &events;
    sinks.assoc_log = &assoc;
    run_pipeline(scene.detections, scene.embeddings, cfg, parse_mode("adaptive"), sinks);
    CHECK(events.str().find("spawn") != std::string::npos);
    CHECK(events.str().find("dummy") != std::string::npos);
    CHECK(assoc.str().find("\"solver\"") != std::string::npos);
    CHECK(assoc.str().find("\"flush\":true") != std::string::npos);
}

TEST_CASE("manifests render all count fields") {
    RunManifest m;
    m.mode = "adaptive";
    m.counts.frames = 3;
    m.timings_ms["total"] = 1.25;
    const auto json = m.to_json(Config{});
    for (const char* key :
         {"frames", "detections", "subsequences", "clusters", "tracklets", "trees_spawned",
          "hypotheses_scored", "final_tracks", "timings_ms", "config", "mode"})
        CHECK(json.find(key) != std::string::npos);
}
