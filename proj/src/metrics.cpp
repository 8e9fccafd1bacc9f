// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 mtt contributors
#include <mtt/metrics.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>

namespace mtt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Hungarian algorithm (potentials form), minimization over a square matrix.
// Returns row -> column.
std::vector<int> hungarian_square(const std::vector<std::vector<double>>& cost) {
    const int n = static_cast<int>(cost.size());
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, kInf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const int i0 = p[j0];
            double delta = kInf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= n; ++j)
        if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

}  // namespace

std::vector<int> max_score_assignment(const std::vector<std::vector<double>>& score,
                                      double min_score) {
    const int n = static_cast<int>(score.size());
    if (n == 0) return {};
    const int m = static_cast<int>(score[0].size());
    std::vector<int> result(n, -1);
    if (m == 0) return result;

    // Square matrix with dummy rows/columns so any vertex may stay unmatched;
    // infeasible pairs cost the same as staying unmatched.
    const int s = n + m;
    std::vector<std::vector<double>> cost(s, std::vector<double>(s, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            if (score[i][j] >= min_score) cost[i][j] = -score[i][j];

    const auto assign = hungarian_square(cost);
    for (int i = 0; i < n; ++i) {
        const int j = assign[i];
        if (j >= 0 && j < m && score[i][j] >= min_score) result[i] = j;
    }
    return result;
}

std::vector<int> match_frame(const std::vector<Box>& gt_boxes,
                             const std::vector<Box>& pred_boxes, double iou_min,
                             const std::vector<int>& prev_match) {
    const int n = static_cast<int>(gt_boxes.size());
    const int m = static_cast<int>(pred_boxes.size());
    std::vector<int> match(n, -1);
    std::vector<bool> pred_taken(m, false);

    // Carry-over: previous pairs keep their match while still above threshold.
    for (int i = 0; i < n && i < static_cast<int>(prev_match.size()); ++i) {
        const int j = prev_match[i];
        if (j >= 0 && j < m && !pred_taken[j] && iou(gt_boxes[i], pred_boxes[j]) >= iou_min) {
            match[i] = j;
            pred_taken[j] = true;
        }
    }

    std::vector<int> free_gt, free_pred;
    for (int i = 0; i < n; ++i)
        if (match[i] < 0) free_gt.push_back(i);
    for (int j = 0; j < m; ++j)
        if (!pred_taken[j]) free_pred.push_back(j);
    if (free_gt.empty() || free_pred.empty()) return match;

    std::vector<std::vector<double>> score(free_gt.size(),
                                           std::vector<double>(free_pred.size(), 0.0));
    for (std::size_t a = 0; a < free_gt.size(); ++a)
        for (std::size_t b = 0; b < free_pred.size(); ++b)
            score[a][b] = iou(gt_boxes[free_gt[a]], pred_boxes[free_pred[b]]);

    const auto assigned = max_score_assignment(score, iou_min);
    for (std::size_t a = 0; a < free_gt.size(); ++a)
        if (assigned[a] >= 0) match[free_gt[a]] = free_pred[assigned[a]];
    return match;
}

IdScores idf1(const TrackSet& gt, const TrackSet& preds, double iou_min) {
    std::vector<const std::map<int, Box>*> g, p;
    for (const auto& [id, t] : gt.tracks) g.push_back(&t);
    for (const auto& [id, t] : preds.tracks) p.push_back(&t);

    const double gt_total = static_cast<double>(gt.total_boxes());
    const double pred_total = static_cast<double>(preds.total_boxes());
    IdScores out;
    if (g.empty() || p.empty()) return out;

    std::vector<std::vector<double>> overlap(g.size(), std::vector<double>(p.size(), 0.0));
    for (std::size_t a = 0; a < g.size(); ++a) {
        for (std::size_t b = 0; b < p.size(); ++b) {
            int count = 0;
            for (const auto& [frame, box] : *g[a]) {
                auto it = p[b]->find(frame);
                if (it != p[b]->end() && iou(box, it->second) >= iou_min) ++count;
            }
            overlap[a][b] = static_cast<double>(count);
        }
    }
    const auto assigned = max_score_assignment(overlap, 0.5);
    double idtp = 0.0;
    for (std::size_t a = 0; a < g.size(); ++a)
        if (assigned[a] >= 0) idtp += overlap[a][assigned[a]];

    out.idp = pred_total > 0 ? idtp / pred_total : 0.0;
    out.idr = gt_total > 0 ? idtp / gt_total : 0.0;
    out.idf1 = (pred_total + gt_total) > 0 ? 2.0 * idtp / (pred_total + gt_total) : 0.0;
    return out;
}

EvalReport evaluate_tracks(const TrackSet& gt, const TrackSet& preds, double iou_min) {
    EvalReport r;
    r.GT_count = static_cast<long long>(gt.total_boxes());

    std::set<int> frames;
    for (const auto& [id, t] : gt.tracks)
        for (const auto& [f, b] : t) frames.insert(f);
    for (const auto& [id, t] : preds.tracks)
        for (const auto& [f, b] : t) frames.insert(f);

    std::map<int, int> last_match;        // gt id -> most recent pred id
    std::map<int, long long> covered;     // gt id -> matched frame count
    long long tp = 0;

    for (int f : frames) {
        std::vector<int> gt_ids, pred_ids;
        std::vector<Box> gt_boxes, pred_boxes;
        for (const auto& [id, t] : gt.tracks) {
            auto it = t.find(f);
            if (it != t.end()) {
                gt_ids.push_back(id);
                gt_boxes.push_back(it->second);
            }
        }
        for (const auto& [id, t] : preds.tracks) {
            auto it = t.find(f);
            if (it != t.end()) {
                pred_ids.push_back(id);
                pred_boxes.push_back(it->second);
            }
        }

        std::vector<int> prev(gt_ids.size(), -1);
        for (std::size_t i = 0; i < gt_ids.size(); ++i) {
            auto it = last_match.find(gt_ids[i]);
            if (it == last_match.end()) continue;
            for (std::size_t j = 0; j < pred_ids.size(); ++j)
                if (pred_ids[j] == it->second) {
                    prev[i] = static_cast<int>(j);
                    break;
                }
        }

        const auto match = match_frame(gt_boxes, pred_boxes, iou_min, prev);
        long long matched = 0;
        std::vector<bool> pred_used(pred_ids.size(), false);
        for (std::size_t i = 0; i < gt_ids.size(); ++i) {
            if (match[i] < 0) continue;
            ++matched;
            pred_used[match[i]] = true;
            const int pid = pred_ids[match[i]];
            auto it = last_match.find(gt_ids[i]);
            if (it != last_match.end() && it->second != pid) ++r.IDs;
            last_match[gt_ids[i]] = pid;
            ++covered[gt_ids[i]];
        }
        tp += matched;
        r.FN += static_cast<long long>(gt_ids.size()) - matched;
        r.FP += static_cast<long long>(pred_ids.size()) - matched;
    }

    for (const auto& [id, t] : gt.tracks) {
        const double ratio =
            t.empty() ? 0.0
                      : static_cast<double>(covered.count(id) ? covered[id] : 0) /
                            static_cast<double>(t.size());
        if (ratio >= 0.8)
            ++r.MT;
        else if (ratio <= 0.2)
            ++r.ML;
        else
            ++r.PT;
    }

    const double denom = static_cast<double>(std::max<long long>(r.GT_count, 1));
    r.MOTA = 1.0 - static_cast<double>(r.FP + r.FN + r.IDs) / denom;
    r.Recall = static_cast<double>(tp) / denom;
    r.Precision = (tp + r.FP) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + r.FP) : 1.0;

    const IdScores id_scores = idf1(gt, preds, iou_min);
    r.IDF1 = id_scores.idf1;
    r.IDP = id_scores.idp;
    r.IDR = id_scores.idr;
    return r;
}

std::string EvalReport::to_json() const {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "{\"MOTA\":%.6f,\"IDF1\":%.6f,\"IDP\":%.6f,\"IDR\":%.6f,\"Recall\":%.6f,"
                  "\"Precision\":%.6f,\"FP\":%lld,\"FN\":%lld,\"IDs\":%lld,\"MT\":%lld,"
                  "\"PT\":%lld,\"ML\":%lld,\"GT_count\":%lld}",
                  MOTA, IDF1, IDP, IDR, Recall, Precision, FP, FN, IDs, MT, PT, ML, GT_count);
    return buf;
}

std::string EvalReport::to_table() const {
    std::ostringstream os;
    char buf[256];
    os << "Metric      Value\n";
    std::snprintf(buf, sizeof(buf), "MOTA       %7.4f\n", MOTA);
    os << buf;
    std::snprintf(buf, sizeof(buf), "IDF1       %7.4f\n", IDF1);
    os << buf;
    std::snprintf(buf, sizeof(buf), "IDP        %7.4f\n", IDP);
    os << buf;
    std::snprintf(buf, sizeof(buf), "IDR        %7.4f\n", IDR);
    os << buf;
    std::snprintf(buf, sizeof(buf), "Recall     %7.4f\n", Recall);
    os << buf;
    std::snprintf(buf, sizeof(buf), "Precision  %7.4f\n", Precision);
    os << buf;
    std::snprintf(buf, sizeof(buf), "FP         %7lld\n", FP);
    os << buf;
    std::snprintf(buf, sizeof(buf), "FN         %7lld\n", FN);
    os << buf;
    std::snprintf(buf, sizeof(buf), "IDs        %7lld\n", IDs);
    os << buf;
    std::snprintf(buf, sizeof(buf), "MT         %7lld\n", MT);
    os << buf;
    std::snprintf(buf, sizeof(buf), "PT         %7lld\n", PT);
    os << buf;
    std::snprintf(buf, sizeof(buf), "ML         %7lld\n", ML);
    os << buf;
    std::snprintf(buf, sizeof(buf), "GT_count   %7lld\n", GT_count);
    os << buf;
    return os.str();
}

}  // namespace mtt
