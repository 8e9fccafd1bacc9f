// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 mtt contributors
#include <mtt/scoring.hpp>

#include <cmath>

namespace mtt {

std::optional<std::vector<double>> tracklet_feature(const Tracklet& t, const EmbeddingTable& emb) {
    std::vector<const std::vector<double>*> feats;
    std::vector<double> weights;
    for (const auto& d : t.members) {
        if (const auto* f = emb.lookup(d.det_id)) {
            feats.push_back(f);
            weights.push_back(d.score);
        }
    }
    if (feats.empty()) return std::nullopt;

    double total = 0.0;
    for (double w : weights) total += w;
    if (total <= 0.0) {
        // All-zero confidences: fall back to a plain average.
        for (double& w : weights) w = 1.0;
        total = static_cast<double>(weights.size());
    }
    std::vector<double> acc(feats.front()->size(), 0.0);
    for (std::size_t k = 0; k < feats.size(); ++k) {
        const double w = weights[k] / total;
        const auto& f = *feats[k];
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * f[i];
    }
    return normalized(std::move(acc));
}

AppearanceGate appearance_gate(const std::vector<double>& f1, const std::vector<double>& f2,
                               double theta_app) {
    if (norm(f1) <= 0.0 || norm(f2) <= 0.0) return {true, std::nullopt};
    const double sim = cosine_similarity(f1, f2);
    return {sim >= theta_app, sim};
}

double score_motion(double d_motion, const Mat4& innovation_cov, double v_space) {
    const double det = innovation_cov.determinant();
    return std::log(v_space / (2.0 * M_PI)) - 0.5 * std::log(det) - d_motion / 2.0;
}

double score_appearance(double d_app, double theta_null) {
    return -std::log(1.0 + std::exp(-2.0 * d_app)) - std::log(theta_null);
}

double score_confidence(double mean_score, double theta_s) {
    return std::tanh(mean_score - theta_s);
}

double score_total(const ScoreComponents& s, const Config& cfg) {
    return cfg.w_mot * s.s_mot + cfg.w_app * s.s_app + cfg.w_conf * s.s_conf;
}

}  // namespace mtt
