// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 mtt contributors
#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <mtt/io.hpp>
#include <mtt/types.hpp>

namespace mtt {

/// Seeded generator with a fixed algorithm (mt19937_64 driving uniform
/// doubles; gaussians via Box-Muller) so scene bytes are reproducible.
class DeterministicRng {
public:
    explicit DeterministicRng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }
    int uniform_int(int lo, int hi) {   // inclusive bounds
        if (hi <= lo) return lo;
        return std::min(hi, lo + static_cast<int>(uniform() * (hi - lo + 1)));
    }
    double gaussian(double mean = 0.0, double stddev = 1.0);
    int poisson(double lambda);
    std::vector<double> unit_vector(int dim);

private:
    std::mt19937_64 gen_;
    bool have_spare_{false};
    double spare_{0.0};
};

/// One scripted disappearance of a target.
struct OcclusionEvent {
    int target{0};     // target index, 0-based
    int start{1};      // first occluded frame
    int duration{1};
};

/// Synthetic scene description. Same spec -> byte-identical outputs.
struct SceneSpec {
    std::uint64_t seed{1};
    int n_targets{10};
    int n_frames{100};
    int image_width{1920};
    int image_height{1080};

    double birth_rate{0.0};     // fraction of targets entering late
    double death_rate{0.0};     // fraction of targets leaving early
    double miss_rate{0.0};      // per-frame missed-detection probability
    double fp_rate{0.0};        // expected false detections per frame = fp_rate * n_targets

    double jitter_px{1.0};      // box corruption noise
    double conf_visible_mean{0.8};
    double conf_partial_mean{0.3};   // frames bordering an occlusion
    double conf_fp_mean{0.25};
    double conf_std{0.1};

    int emb_dim{64};
    double sigma_emb_deg{15.0};      // angular embedding noise per detection
    double identity_spread_deg{30.0};   // identity means scatter around a common
                                        // direction, mimicking the high inter-target
                                        // similarity of real extractor features

    int n_occlusions{0};             // auto-placed events
    int occlusion_min{2};
    int occlusion_max{8};
    std::vector<OcclusionEvent> occlusions;   // explicit events (additional)

    double speed_min{1.0};
    double speed_max{5.0};
    double accel_std{0.05};
    double box_min{30.0};
    double box_max{60.0};

    void validate() const;
};

/// Loads a scene spec from `key = value` text; `occlusion = target,start,len`
/// lines may repeat. Unknown keys are reported through `warnings`.
SceneSpec load_scene_spec(const std::string& path, std::vector<std::string>* warnings = nullptr);

/// Ground truth: per-identity per-frame boxes with visibility flags.
struct SceneTruth {
    std::map<int, std::map<int, Box>> boxes;        // identity -> frame -> box
    std::map<int, std::map<int, bool>> visible;     // identity -> frame -> visible

    TrackSet to_track_set() const {
        TrackSet ts;
        ts.tracks = boxes;
        return ts;
    }
};

struct SceneData {
    SceneTruth truth;
    FrameSet detections;
    EmbeddingTable embeddings;
    std::vector<int> det_identity;   // det_id -> identity, -1 for false positives
};

/// Generates constant-velocity targets with scripted occlusions, missed
/// detections, box jitter, confidence corruption and false positives.
SceneData generate(const SceneSpec& spec);

/// Writes dets.csv, embeddings.csv and gt.csv under out_dir.
void write_scene(const SceneData& scene, const std::string& out_dir);

/// Frame-to-frame greedy IoU matcher: no re-identification, no gap tolerance.
/// Unmatched detections open new tracks; unmatched tracks die immediately.
std::vector<FinalTrack> baseline_greedy_tracker(const FrameSet& fs, double iou_min);

}  // namespace mtt
