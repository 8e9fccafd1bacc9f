// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 mtt contributors
#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <mtt/assoc.hpp>
#include <mtt/config.hpp>
#include <mtt/io.hpp>
#include <mtt/types.hpp>

namespace mtt {

struct PipelineMode {
    enum class Kind { Adaptive, Fixed, Sliding };
    Kind kind{Kind::Adaptive};
    int window{5};

    std::string name() const;
};

/// Parses "adaptive", "fixed:L" or "sliding:L".
PipelineMode parse_mode(const std::string& text);

struct RunCounts {
    int frames{0};
    long long detections{0};
    long long detections_prefiltered{0};
    int subsequences{0};
    long long clusters{0};
    long long tracklets{0};
    long long trees_spawned{0};
    long long hypotheses_scored{0};
    int final_tracks{0};
};

struct RunManifest {
    std::string dets_path;
    std::string emb_path;
    std::string config_path;
    std::string mode;
    RunCounts counts;
    std::map<std::string, double> timings_ms;

    /// Deterministic JSON; timing fields live under a separate "timings_ms"
    /// object so determinism checks can drop them.
    std::string to_json(const Config& cfg) const;
};

struct PipelineSinks {
    std::ostream* event_log{nullptr};       // tracker/pruning event lines
    std::ostream* assoc_log{nullptr};       // per-round JSON-lines diagnostics
    std::ostream* cluster_debug{nullptr};   // det_id,frame,cx,cy,cluster_id
};

struct PipelineResult {
    std::vector<FinalTrack> tracks;
    RunCounts counts;
};

/// Runs the full engine over a parsed sequence. Throws SizeError if a
/// clique-partition instance exceeds the budget and no fallback is allowed.
PipelineResult run_pipeline(const FrameSet& fs, const EmbeddingTable& emb, const Config& cfg,
                            const PipelineMode& mode, const PipelineSinks& sinks = {},
                            int n_threads = 1);

/// Partitioner debug table `frame,raw_count,filtered_count,subseq_id`.
std::string partition_debug_csv(const FrameSet& fs, const Config& cfg, const PipelineMode& mode);

}  // namespace mtt
