// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 mtt contributors
#pragma once

#include <map>
#include <string>
#include <vector>

#include <mtt/io.hpp>
#include <mtt/types.hpp>

namespace mtt {

/// CLEAR-MOT and identity metrics for one sequence.
struct EvalReport {
    double MOTA{0.0};
    double IDF1{0.0};
    double IDP{0.0};
    double IDR{0.0};
    double Recall{0.0};
    double Precision{0.0};
    long long FP{0};
    long long FN{0};
    long long IDs{0};
    long long MT{0};
    long long PT{0};
    long long ML{0};
    long long GT_count{0};

    std::string to_json() const;
    std::string to_table() const;
};

/// Maximum-weight one-to-one assignment on a rectangular score matrix
/// (entries below `min_score` are unmatchable). Returns, per row, the matched
/// column or -1. Exact (Hungarian); deterministic lexicographic tie-break.
std::vector<int> max_score_assignment(const std::vector<std::vector<double>>& score,
                                      double min_score);

/// Per-frame CLEAR matching with carry-over: pairs matched in the previous
/// frame keep their match while still above iou_min; the rest are assigned by
/// maximizing total IoU. Returns gt index -> pred index (-1 unmatched).
std::vector<int> match_frame(const std::vector<Box>& gt_boxes,
                             const std::vector<Box>& pred_boxes, double iou_min,
                             const std::vector<int>& prev_match);

/// Full CLEAR-MOT accumulation plus the IDF1 family.
EvalReport evaluate_tracks(const TrackSet& gt, const TrackSet& preds, double iou_min = 0.5);

/// Global trajectory matching: returns (IDF1, IDP, IDR).
struct IdScores {
    double idf1{0.0}, idp{0.0}, idr{0.0};
};
IdScores idf1(const TrackSet& gt, const TrackSet& preds, double iou_min = 0.5);

}  // namespace mtt
