// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 mtt contributors
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <mtt/assoc.hpp>
#include <mtt/cluster.hpp>
#include <mtt/config.hpp>
#include <mtt/io.hpp>
#include <mtt/metrics.hpp>
#include <mtt/partition.hpp>
#include <mtt/pipeline.hpp>
#include <mtt/scoring.hpp>
#include <mtt/simulator.hpp>

namespace py = pybind11;
using namespace mtt;

namespace {

Config config_from_dict(const py::dict& overrides) {
    Config cfg;
    for (auto item : overrides) {
        const std::string key = py::cast<std::string>(item.first);
        const std::string value = py::cast<std::string>(py::str(item.second));
        if (!apply_config_entry(cfg, key, value))
            throw py::value_error("unknown config key: " + key);
    }
    cfg.validate();
    return cfg;
}

py::dict counts_dict(const RunCounts& c) {
    py::dict d;
    d["frames"] = c.frames;
    d["detections"] = c.detections;
    d["detections_prefiltered"] = c.detections_prefiltered;
    d["subsequences"] = c.subsequences;
    d["clusters"] = c.clusters;
    d["tracklets"] = c.tracklets;
    d["trees_spawned"] = c.trees_spawned;
    d["hypotheses_scored"] = c.hypotheses_scored;
    d["final_tracks"] = c.final_tracks;
    return d;
}

py::dict report_dict(const EvalReport& r) {
    py::dict d;
    d["MOTA"] = r.MOTA;
    d["IDF1"] = r.IDF1;
    d["IDP"] = r.IDP;
    d["IDR"] = r.IDR;
    d["Recall"] = r.Recall;
    d["Precision"] = r.Precision;
    d["FP"] = r.FP;
    d["FN"] = r.FN;
    d["IDs"] = r.IDs;
    d["MT"] = r.MT;
    d["PT"] = r.PT;
    d["ML"] = r.ML;
    d["GT_count"] = r.GT_count;
    return d;
}

SceneSpec scene_from_dict(const py::dict& overrides) {
    SceneSpec spec;
    for (auto item : overrides) {
        const std::string key = py::cast<std::string>(item.first);
        if (key == "seed") spec.seed = py::cast<std::uint64_t>(item.second);
        else if (key == "n_targets") spec.n_targets = py::cast<int>(item.second);
        else if (key == "n_frames") spec.n_frames = py::cast<int>(item.second);
        else if (key == "miss_rate") spec.miss_rate = py::cast<double>(item.second);
        else if (key == "fp_rate") spec.fp_rate = py::cast<double>(item.second);
        else if (key == "jitter_px") spec.jitter_px = py::cast<double>(item.second);
        else if (key == "sigma_emb_deg") spec.sigma_emb_deg = py::cast<double>(item.second);
        else if (key == "identity_spread_deg")
            spec.identity_spread_deg = py::cast<double>(item.second);
        else if (key == "emb_dim") spec.emb_dim = py::cast<int>(item.second);
        else if (key == "n_occlusions") spec.n_occlusions = py::cast<int>(item.second);
        else if (key == "occlusion_min") spec.occlusion_min = py::cast<int>(item.second);
        else if (key == "occlusion_max") spec.occlusion_max = py::cast<int>(item.second);
        else if (key == "birth_rate") spec.birth_rate = py::cast<double>(item.second);
        else if (key == "death_rate") spec.death_rate = py::cast<double>(item.second);
        else throw py::value_error("unknown scene key: " + key);
    }
    return spec;
}

}  // namespace

PYBIND11_MODULE(_mtt, m) {
    m.doc() = "multi-tracklet tracking engine";

    m.def(
        "track",
        [](const std::string& dets, const std::string& out, const std::string& emb,
           const std::string& mode, const py::dict& config) {
            const Config cfg = config_from_dict(config);
            const FrameSet frames = parse_detections(dets);
            EmbeddingTable table;
            if (!emb.empty()) table = parse_embeddings(emb, frames);
            const auto result = run_pipeline(frames, table, cfg, parse_mode(mode));
            write_tracks(result.tracks, out);
            return counts_dict(result.counts);
        },
        py::arg("dets"), py::arg("out"), py::kw_only(), py::arg("emb") = std::string(),
        py::arg("mode") = "adaptive", py::arg("config") = py::dict(),
        "Run the full pipeline over a detection CSV; returns the run counts.");

    m.def(
        "simulate",
        [](const std::string& out_dir, const py::dict& spec_dict) {
            const SceneData scene = generate(scene_from_dict(spec_dict));
            write_scene(scene, out_dir);
            py::dict d;
            d["detections"] = scene.detections.total_detections();
            d["frames"] = scene.detections.frame_count();
            return d;
        },
        py::arg("out_dir"), py::arg("spec") = py::dict(),
        "Generate a synthetic scene (dets.csv, embeddings.csv, gt.csv).");

    m.def(
        "evaluate",
        [](const std::string& gt, const std::string& tracks, double iou_min) {
            return report_dict(
                evaluate_tracks(parse_track_set(gt), parse_track_set(tracks), iou_min));
        },
        py::arg("gt"), py::arg("tracks"), py::arg("iou") = 0.5,
        "CLEAR-MOT and identity metrics for a track file against ground truth.");

    m.def(
        "median_filter",
        [](const std::vector<int>& raw, int window) { return median_filter(raw, window); },
        py::arg("counts"), py::arg("window"));

    m.def(
        "partition_adaptive",
        [](const std::vector<int>& counts, const py::dict& config) {
            const Config cfg = config_from_dict(config);
            const auto subs =
                partition_adaptive(CountCurve::from_counts(counts, cfg.w_median), cfg);
            std::vector<std::pair<int, int>> out;
            for (const auto& s : subs) out.emplace_back(s.begin, s.end);
            return out;
        },
        py::arg("counts"), py::arg("config") = py::dict(),
        "Variable-length frame ranges [begin, end] from a detection-count curve.");

    m.def(
        "dbscan",
        [](const std::vector<std::vector<double>>& matrix, double eps, int min_pts) {
            const int n = static_cast<int>(matrix.size());
            DistanceMatrix dm(n);
            for (int i = 0; i < n; ++i) {
                if (static_cast<int>(matrix[i].size()) != n)
                    throw py::value_error("distance matrix must be square");
                for (int j = i + 1; j < n; ++j) dm.set(i, j, matrix[i][j]);
            }
            return dbscan(dm, eps, min_pts);
        },
        py::arg("distance_matrix"), py::arg("eps"), py::arg("min_pts"),
        "Density clustering over a dense distance matrix; -1 labels noise.");

    m.def(
        "mwis",
        [](const std::vector<double>& weights, const std::vector<std::pair<int, int>>& edges,
           int exact_threshold) {
            WeightedGraph g;
            g.weights = weights;
            g.adj.assign(weights.size(), {});
            for (auto [i, j] : edges) g.add_edge(i, j);
            return mwis_solve(g, exact_threshold);
        },
        py::arg("weights"), py::arg("edges"), py::arg("exact_threshold") = 40,
        "Maximum-weight independent set (exact up to the threshold, greedy above).");

    m.def(
        "score_motion",
        [](double d_motion, double v_space) {
            return score_motion(d_motion, Mat4::Identity(), v_space);
        },
        py::arg("d_motion"), py::arg("v_space") = 1920.0 * 1080.0,
        "Motion log-likelihood ratio with identity innovation covariance.");
    m.def("score_appearance", &score_appearance, py::arg("d_app"), py::arg("theta_null") = 0.3);
    m.def("score_confidence", &score_confidence, py::arg("mean_score"), py::arg("theta_s") = 0.1);

    m.attr("__version__") = "0.1.0";
}
