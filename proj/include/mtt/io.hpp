// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 mtt contributors
#pragma once

#include <map>
#include <string>
#include <vector>

#include <mtt/types.hpp>

namespace mtt {

/// A set of trajectories keyed by track id: id -> frame -> box.
/// Shared between the evaluator inputs (ground truth and tracker output).
struct TrackSet {
    std::map<int, std::map<int, Box>> tracks;

    std::size_t total_boxes() const {
        std::size_t n = 0;
        for (const auto& [id, t] : tracks) n += t.size();
        return n;
    }
};

/// One output trajectory with per-frame boxes; interpolated frames flagged.
struct FinalTrack {
    struct Entry {
        int frame{0};
        Box box;
        double score{0.0};
        bool interpolated{false};
        int det_id{-1};   // -1 for interpolated entries
    };
    int track_id{0};
    std::vector<Entry> entries;   // strictly increasing frames

    std::vector<int> det_ids() const {
        std::vector<int> ids;
        for (const auto& e : entries)
            if (e.det_id >= 0) ids.push_back(e.det_id);
        return ids;
    }
};

/// Reads MOT detection CSV `frame,track_id,x,y,w,h,score[,...]` (track_id -1).
/// Rows are regrouped by frame; det_id is assigned in file order.
/// Throws ParseError naming the offending line.
FrameSet parse_detections(const std::string& path);

/// Reads embedding CSV `det_id,v1,...,vD`. Vectors are L2-normalized; missing
/// det_ids are permitted. Dimension mismatch or non-finite values throw.
EmbeddingTable parse_embeddings(const std::string& path, const FrameSet& expected);

/// Writes detections back out as `frame,-1,x,y,w,h,score,-1,-1,-1` rows.
void write_detections(const FrameSet& fs, const std::string& path);

/// Writes MOT track rows `frame,track_id,x,y,w,h,score,-1,-1,-1`, sorted by
/// frame then track_id. Byte-deterministic for identical input.
void write_tracks(const std::vector<FinalTrack>& tracks, const std::string& path);

/// Writes ground truth rows `frame,id,x,y,w,h,1,1,1`.
void write_ground_truth(const TrackSet& gt, const std::string& path);

/// Reads any MOT-format file (tracks or GT) into a TrackSet; rows with
/// track_id < 0 are rejected.
TrackSet parse_track_set(const std::string& path);

}  // namespace mtt
