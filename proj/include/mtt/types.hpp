// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 mtt contributors
#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace mtt {

// ============================================================================
// Errors
// ============================================================================

struct ParseError : std::runtime_error {
    int line;
    ParseError(const std::string& msg, int line_no)
        : std::runtime_error(msg), line(line_no) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when a solver instance exceeds its node budget.
struct SizeError : std::runtime_error {
    explicit SizeError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// ============================================================================
// Geometry
// ============================================================================

/// Axis-aligned bounding box, top-left origin, pixel units.
struct Box {
    double x{0}, y{0}, w{0}, h{0};

    double cx() const { return x + w / 2.0; }
    double cy() const { return y + h / 2.0; }
    double area() const { return w * h; }

    double center_distance(const Box& o) const {
        const double dx = cx() - o.cx();
        const double dy = cy() - o.cy();
        return std::sqrt(dx * dx + dy * dy);
    }
};

inline double iou(const Box& a, const Box& b) {
    const double x1 = std::max(a.x, b.x);
    const double y1 = std::max(a.y, b.y);
    const double x2 = std::min(a.x + a.w, b.x + b.w);
    const double y2 = std::min(a.y + a.h, b.y + b.h);
    const double iw = x2 - x1;
    const double ih = y2 - y1;
    if (iw <= 0.0 || ih <= 0.0) return 0.0;
    const double inter = iw * ih;
    const double uni = a.area() + b.area() - inter;
    if (uni <= 0.0) return 0.0;
    return inter / uni;
}

// ============================================================================
// Detections
// ============================================================================

/// One detector report: a box with a confidence score at one frame.
struct Detection {
    int frame{1};                       // 1-based frame index
    Box box;
    double score{0.0};                  // confidence in [0,1]
    int det_id{0};                      // unique within the sequence
    std::optional<int> embedding_id;    // key into EmbeddingTable when bound
};

/// Appearance embeddings keyed by det_id. Vectors are L2-normalized on insert.
class EmbeddingTable {
public:
    EmbeddingTable() = default;

    int dim() const { return dim_; }
    bool empty() const { return vectors_.empty(); }
    std::size_t size() const { return vectors_.size(); }

    /// Normalizes and stores; throws on dimension mismatch or non-finite input.
    void insert(int det_id, std::vector<double> v);

    const std::vector<double>* lookup(int det_id) const {
        auto it = vectors_.find(det_id);
        return it == vectors_.end() ? nullptr : &it->second;
    }

private:
    int dim_{0};
    std::unordered_map<int, std::vector<double>> vectors_;
};

/// Detections of a sequence grouped by frame; frames are 1..N contiguous.
struct FrameSet {
    std::vector<std::vector<Detection>> by_frame;   // index f-1 holds frame f

    int frame_count() const { return static_cast<int>(by_frame.size()); }

    const std::vector<Detection>& at(int frame) const { return by_frame.at(frame - 1); }

    /// Adds a detection, growing the frame range as needed.
    void add(const Detection& d) {
        if (d.frame < 1) throw ParseError("frame index must be >= 1", 0);
        if (d.frame > frame_count()) by_frame.resize(d.frame);
        by_frame[d.frame - 1].push_back(d);
    }

    std::size_t total_detections() const {
        std::size_t n = 0;
        for (const auto& f : by_frame) n += f.size();
        return n;
    }

    /// Per-frame detection counts M_1..M_N.
    std::vector<int> count_curve() const {
        std::vector<int> m(by_frame.size());
        for (std::size_t i = 0; i < by_frame.size(); ++i)
            m[i] = static_cast<int>(by_frame[i].size());
        return m;
    }
};

// ============================================================================
// Tracklets
// ============================================================================

/// Identity-consistent detection fragment over a short interval; the atomic
/// association unit. Holds at most one member per frame (gaps allowed).
struct Tracklet {
    int id{0};
    int t_begin{0};
    int t_end{0};
    std::vector<Detection> members;                 // sorted by frame
    std::optional<std::vector<double>> feature;     // aggregated embedding
    double mean_score{0.0};

    int length() const { return static_cast<int>(members.size()); }

    const Detection* member_at(int frame) const {
        for (const auto& d : members)
            if (d.frame == frame) return &d;
        return nullptr;
    }

    std::vector<int> det_ids() const {
        std::vector<int> ids;
        ids.reserve(members.size());
        for (const auto& d : members) ids.push_back(d.det_id);
        return ids;
    }

    /// Normalizes bookkeeping from members: sorts, sets interval and mean score.
    void finalize();
};

// ============================================================================
// Small vector helpers shared by clustering/scoring
// ============================================================================

double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm(const std::vector<double>& v);

/// Cosine similarity; returns 0 for zero-norm inputs.
double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);

/// Returns v scaled to unit length; zero vector returned unchanged.
std::vector<double> normalized(std::vector<double> v);

}  // namespace mtt
