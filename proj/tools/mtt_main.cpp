// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 mtt contributors
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <mtt/config.hpp>
#include <mtt/io.hpp>
#include <mtt/metrics.hpp>
#include <mtt/pipeline.hpp>
#include <mtt/simulator.hpp>

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 2;
constexpr int kExitBudget = 3;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

int worker_threads() {
    const char* env = std::getenv("MTT_THREADS");
    if (!env) return 1;
    const int n = std::atoi(env);
    return n >= 1 ? n : 1;
}

mtt::Config load_config_or_default(const std::string& path) {
    if (path.empty()) return mtt::Config{};
    std::vector<std::string> warnings;
    auto cfg = mtt::load_config(path, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    return cfg;
}

struct TrackArgs {
    std::string dets, emb, out, config;
    std::string mode = "adaptive";
    bool log_events = false;
    std::string assoc_log, dump_clusters;
};

int cmd_track(const TrackArgs& args) {
    if (!fs::exists(args.dets)) {
        std::cerr << "error: detection file not found: " << args.dets << "\n";
        return kExitBadInput;
    }
    if (!args.emb.empty() && !fs::exists(args.emb)) {
        std::cerr << "error: embedding file not found: " << args.emb << "\n";
        return kExitBadInput;
    }
    if (!args.config.empty() && !fs::exists(args.config)) {
        std::cerr << "error: config file not found: " << args.config << "\n";
        return kExitBadInput;
    }

    const auto t_start = Clock::now();
    mtt::RunManifest manifest;
    manifest.dets_path = args.dets;
    manifest.emb_path = args.emb;
    manifest.config_path = args.config;
    manifest.mode = args.mode;

    try {
        const mtt::Config cfg = load_config_or_default(args.config);
        const mtt::PipelineMode mode = mtt::parse_mode(args.mode);

        const auto t_parse = Clock::now();
        const mtt::FrameSet frames = mtt::parse_detections(args.dets);
        mtt::EmbeddingTable emb;
        if (!args.emb.empty()) emb = mtt::parse_embeddings(args.emb, frames);
        manifest.timings_ms["parse"] = ms_since(t_parse);

        std::ofstream event_stream, assoc_stream, cluster_stream;
        mtt::PipelineSinks sinks;
        if (args.log_events) {
            event_stream.open(args.out + ".events.log", std::ios::binary);
            sinks.event_log = &event_stream;
        }
        if (!args.assoc_log.empty()) {
            assoc_stream.open(args.assoc_log, std::ios::binary);
            sinks.assoc_log = &assoc_stream;
        }
        if (!args.dump_clusters.empty()) {
            cluster_stream.open(args.dump_clusters, std::ios::binary);
            cluster_stream << "det_id,frame,cx,cy,cluster_id\n";
            sinks.cluster_debug = &cluster_stream;
        }

        const auto t_pipeline = Clock::now();
        const auto result = mtt::run_pipeline(frames, emb, cfg, mode, sinks, worker_threads());
        manifest.timings_ms["pipeline"] = ms_since(t_pipeline);

        const auto t_write = Clock::now();
        mtt::write_tracks(result.tracks, args.out);
        manifest.timings_ms["write"] = ms_since(t_write);

        manifest.counts = result.counts;
        manifest.timings_ms["total"] = ms_since(t_start);
        std::ofstream mf(args.out + ".manifest.json", std::ios::binary);
        mf << manifest.to_json(cfg);

        std::cout << "tracked " << result.counts.final_tracks << " targets from "
                  << result.counts.detections << " detections ("
                  << result.counts.tracklets << " tracklets, "
                  << result.counts.subsequences << " subsequences)\n";
        return kExitOk;
    } catch (const mtt::SizeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBudget;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
}

int cmd_simulate(const std::string& spec_path, const std::string& out_dir) {
    if (!fs::exists(spec_path)) {
        std::cerr << "error: scene spec not found: " << spec_path << "\n";
        return kExitBadInput;
    }
    try {
        std::vector<std::string> warnings;
        const mtt::SceneSpec spec = mtt::load_scene_spec(spec_path, &warnings);
        for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
        fs::create_directories(out_dir);
        const mtt::SceneData scene = mtt::generate(spec);
        mtt::write_scene(scene, out_dir);
        std::cout << "wrote " << scene.detections.total_detections() << " detections over "
                  << scene.detections.frame_count() << " frames to " << out_dir << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
}

int cmd_evaluate(const std::string& gt_path, const std::string& tracks_path, double iou_min,
                 bool as_json) {
    if (!fs::exists(gt_path) || !fs::exists(tracks_path)) {
        std::cerr << "error: input file not found\n";
        return kExitBadInput;
    }
    try {
        const mtt::TrackSet gt = mtt::parse_track_set(gt_path);
        const mtt::TrackSet preds = mtt::parse_track_set(tracks_path);
        const mtt::EvalReport report = mtt::evaluate_tracks(gt, preds, iou_min);
        if (as_json)
            std::cout << report.to_json() << "\n";
        else
            std::cout << report.to_table();
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
}

int cmd_partition_debug(const std::string& dets_path, const std::string& config_path,
                        const std::string& mode_text, const std::string& out_path) {
    if (!fs::exists(dets_path)) {
        std::cerr << "error: detection file not found: " << dets_path << "\n";
        return kExitBadInput;
    }
    try {
        const mtt::Config cfg = load_config_or_default(config_path);
        const mtt::FrameSet frames = mtt::parse_detections(dets_path);
        const std::string csv = mtt::partition_debug_csv(frames, cfg, mtt::parse_mode(mode_text));
        if (out_path.empty()) {
            std::cout << csv;
        } else {
            std::ofstream out(out_path, std::ios::binary);
            out << csv;
        }
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-tracklet tracking engine"};
    app.require_subcommand(1);

    TrackArgs track_args;
    auto* track = app.add_subcommand("track", "run the tracking pipeline on a detection file");
    track->add_option("--dets", track_args.dets, "detection CSV (MOT format)")->required();
    track->add_option("--emb", track_args.emb, "embedding CSV (det_id,v1,...,vD)");
    track->add_option("--out", track_args.out, "output track CSV")->required();
    track->add_option("--config", track_args.config, "config file (key = value)");
    track->add_option("--mode", track_args.mode, "adaptive | fixed:L | sliding:L");
    track->add_flag("--log-events", track_args.log_events, "write <out>.events.log");
    track->add_option("--assoc-log", track_args.assoc_log, "per-round association JSON lines");
    track->add_option("--dump-clusters", track_args.dump_clusters, "cluster debug CSV");

    std::string sim_spec, sim_out;
    auto* simulate = app.add_subcommand("simulate", "generate a synthetic scene");
    simulate->add_option("--spec", sim_spec, "scene spec file (key = value)")->required();
    simulate->add_option("--out-dir", sim_out, "output directory")->required();

    std::string eval_gt, eval_tracks;
    double eval_iou = 0.5;
    bool eval_json = false;
    auto* evaluate = app.add_subcommand("evaluate", "score tracks against ground truth");
    evaluate->add_option("--gt", eval_gt, "ground-truth CSV")->required();
    evaluate->add_option("--tracks", eval_tracks, "track CSV")->required();
    evaluate->add_option("--iou", eval_iou, "IoU match threshold (default 0.5)");
    evaluate->add_flag("--json", eval_json, "emit the report as JSON");

    std::string pd_dets, pd_config, pd_out;
    std::string pd_mode = "adaptive";
    auto* pdebug = app.add_subcommand("partition-debug", "emit the count-curve partition CSV");
    pdebug->add_option("--dets", pd_dets, "detection CSV")->required();
    pdebug->add_option("--config", pd_config, "config file");
    pdebug->add_option("--mode", pd_mode, "adaptive | fixed:L | sliding:L");
    pdebug->add_option("--out", pd_out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitBadInput;
    }

    if (track->parsed()) return cmd_track(track_args);
    if (simulate->parsed()) return cmd_simulate(sim_spec, sim_out);
    if (evaluate->parsed()) return cmd_evaluate(eval_gt, eval_tracks, eval_iou, eval_json);
    if (pdebug->parsed()) return cmd_partition_debug(pd_dets, pd_config, pd_mode, pd_out);
    return kExitBadInput;
}
