// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 mtt contributors
#pragma once

#include <string>
#include <vector>

#include <mtt/types.hpp>

namespace mtt {

/// Engine configuration. Defaults reproduce the reference parameter set;
/// every field can be overridden from a `key = value` text file.
struct Config {
    // Observation space
    int image_width = 1920;
    int image_height = 1080;
    double v_space = 1920.0 * 1080.0;   // observation-space volume for motion scoring

    // Tracklet generation
    int w_median = 5;                   // median filter window (odd)
    double theta_s = 0.1;               // confidence score threshold
    double nms_iou = 0.5;               // NMS suppression threshold
    double grad_d = 5.0;                // upper threshold of the gradient metric
    int stride_s = 1;                   // sliding-window step size
    int l_max = 5;                      // max subsequence length
    int u_max = 70;                     // max detection count in a subsequence
    double dbscan_eps = 80.0;           // DBSCAN radius (pixels)
    int dbscan_min_pts = 2;             // DBSCAN core-point threshold
    double theta_mot = 15.0;            // motion gate (Mahalanobis squared)
    double theta_app = 0.85;            // appearance gate (cosine similarity)

    // Affinity-graph position term and weighted clustering distance
    double sigma_pos = 80.0;            // position affinity decay scale (pixels)
    double dist_alpha = 1.0;            // appearance coefficient in weighted distance
    double dist_beta = 1.0;             // location coefficient in weighted distance
    double weighted_eps = 0.2;          // DBSCAN radius in the weighted metric
    bool use_weighted_distance = false; // pixel distance is the default metric

    // Tracklet tracking
    int prune_depth = 2;                // N-scan depth k
    double theta_null = 0.3;            // appearance likelihood of the null hypothesis
    int patience = 10;                  // max consecutive missed rounds
    int max_leaves = 8;                 // hypothesis cap per tree
    double w_mot = 0.1;
    double w_app = 0.9;
    double w_conf = 3.0;
    double miss_penalty = 0.3;          // score drop per missed frame
    double duplicate_iou = 0.6;         // trajectory-overlap termination (>1 disables)
    int duplicate_rounds = 3;           // consecutive rounds before termination

    // Kalman model (constant velocity on cx, cy, w, h)
    double kf_q_pos = 1.0;              // process noise, position/size (px^2/frame)
    double kf_q_vel = 0.25;             // process noise, velocities
    double kf_r = 1.0;                  // measurement noise (px^2)
    double kf_init_vel_var = 1000.0;    // initial velocity variance

    // Global association
    int mwis_exact_threshold = 40;      // exact solver above this falls to greedy
    int clique_budget = 70;             // node cap per clique-partition instance
    bool clique_greedy_fallback = false;
    long long clique_max_search_nodes = 5'000'000;   // exact-search work cap (0 = unlimited)

    /// Throws ConfigError on invalid values (even windows, negative thresholds...).
    void validate() const;
};

/// Parses `key = value` lines ('#' comments allowed). Unknown keys are skipped
/// and reported through `warnings`; malformed values throw ConfigError.
Config load_config(const std::string& path, std::vector<std::string>* warnings = nullptr);

/// Applies one `key = value` assignment to cfg; returns false on unknown key.
bool apply_config_entry(Config& cfg, const std::string& key, const std::string& value);

/// Configuration snapshot as deterministic JSON (sorted keys).
std::string config_to_json(const Config& cfg);

}  // namespace mtt
