// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 mtt contributors
#pragma once

#include <optional>
#include <vector>

#include <mtt/config.hpp>
#include <mtt/kalman.hpp>
#include <mtt/types.hpp>

namespace mtt {

/// Confidence-weighted average of the member embeddings, re-normalized to
/// unit length. Absent when no member has an embedding.
std::optional<std::vector<double>> tracklet_feature(const Tracklet& t, const EmbeddingTable& emb);

struct AppearanceGate {
    bool passes{true};
    std::optional<double> similarity;   // absent when the gate was skipped
};

/// Cosine-similarity gate: passes when cos >= theta_app. Zero vectors skip
/// the gate (pass with the similarity marked absent).
AppearanceGate appearance_gate(const std::vector<double>& f1, const std::vector<double>& f2,
                               double theta_app);

/// Motion log-likelihood ratio: ln(V/2pi) - ln|Sigma|/2 - d_motion/2.
double score_motion(double d_motion, const Mat4& innovation_cov, double v_space);

/// Appearance log-likelihood ratio against the null hypothesis:
/// -ln(1 + exp(-2 d_app)) - ln(theta_null).
double score_appearance(double d_app, double theta_null);

/// tanh(mean_score - theta_s); positive iff the tracklet's average confidence
/// clears the detector threshold.
double score_confidence(double mean_score, double theta_s);

struct ScoreComponents {
    double s_mot{0.0};
    double s_app{0.0};
    double s_conf{0.0};
};

/// Weighted sum w_mot*s_mot + w_app*s_app + w_conf*s_conf.
double score_total(const ScoreComponents& s, const Config& cfg);

}  // namespace mtt
