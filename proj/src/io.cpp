// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 mtt contributors
#include <mtt/io.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mtt {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

double to_double(const std::string& s, int line_no, const char* what) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("junk");
        return x;
    } catch (const std::exception&) {
        throw ParseError(std::string("malformed ") + what + " at line " + std::to_string(line_no),
                         line_no);
    }
}

int to_int(const std::string& s, int line_no, const char* what) {
    try {
        std::size_t pos = 0;
        const int x = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("junk");
        return x;
    } catch (const std::exception&) {
        throw ParseError(std::string("malformed ") + what + " at line " + std::to_string(line_no),
                         line_no);
    }
}

bool blank(const std::string& line) {
    return line.find_first_not_of(" \t\r\n") == std::string::npos;
}

void write_row(std::ostream& os, int frame, int id, const Box& b, double score) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%d,%d,%.6f,%.6f,%.6f,%.6f,%.6f,-1,-1,-1\n", frame, id, b.x,
                  b.y, b.w, b.h, score);
    os << buf;
}

}  // namespace

FrameSet parse_detections(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open detection file: " + path);
    FrameSet fs;
    std::string line;
    int line_no = 0;
    int next_det_id = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) continue;
        const auto cols = split_csv(line);
        if (cols.size() < 7)
            throw ParseError("expected at least 7 columns at line " + std::to_string(line_no),
                             line_no);
        Detection d;
        d.frame = to_int(cols[0], line_no, "frame");
        if (d.frame < 1)
            throw ParseError("frame must be >= 1 at line " + std::to_string(line_no), line_no);
        to_int(cols[1], line_no, "track_id");   // value unused for raw detections
        d.box.x = to_double(cols[2], line_no, "x");
        d.box.y = to_double(cols[3], line_no, "y");
        d.box.w = to_double(cols[4], line_no, "w");
        d.box.h = to_double(cols[5], line_no, "h");
        d.score = to_double(cols[6], line_no, "score");
        if (d.box.w <= 0.0 || d.box.h <= 0.0)
            throw ParseError("non-positive box at line " + std::to_string(line_no), line_no);
        if (d.score < 0.0 || d.score > 1.0)
            throw ParseError("score out of [0,1] at line " + std::to_string(line_no), line_no);
        d.det_id = next_det_id++;
        fs.add(d);
    }
    return fs;
}

EmbeddingTable parse_embeddings(const std::string& path, const FrameSet& expected) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open embedding file: " + path);
    const int max_det_id = static_cast<int>(expected.total_detections());
    EmbeddingTable table;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) continue;
        const auto cols = split_csv(line);
        if (cols.size() < 2)
            throw ParseError("expected det_id plus vector at line " + std::to_string(line_no),
                             line_no);
        const int det_id = to_int(cols[0], line_no, "det_id");
        (void)max_det_id;   // ids beyond the detection range are tolerated
        std::vector<double> v;
        v.reserve(cols.size() - 1);
        for (std::size_t i = 1; i < cols.size(); ++i)
            v.push_back(to_double(cols[i], line_no, "embedding value"));
        try {
            table.insert(det_id, std::move(v));
        } catch (const ParseError& e) {
            throw ParseError(std::string(e.what()) + " at line " + std::to_string(line_no),
                             line_no);
        }
    }
    return table;
}

void write_detections(const FrameSet& fs, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write detection file: " + path);
    for (int f = 1; f <= fs.frame_count(); ++f)
        for (const auto& d : fs.at(f)) write_row(out, f, -1, d.box, d.score);
    if (!out) throw IoError("write failed: " + path);
}

void write_tracks(const std::vector<FinalTrack>& tracks, const std::string& path) {
    struct Row {
        int frame;
        int id;
        Box box;
        double score;
    };
    std::vector<Row> rows;
    for (const auto& t : tracks)
        for (const auto& e : t.entries) rows.push_back({e.frame, t.track_id, e.box, e.score});
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.frame != b.frame) return a.frame < b.frame;
        return a.id < b.id;
    });
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write track file: " + path);
    for (const auto& r : rows) write_row(out, r.frame, r.id, r.box, r.score);
    if (!out) throw IoError("write failed: " + path);
}

void write_ground_truth(const TrackSet& gt, const std::string& path) {
    struct Row {
        int frame;
        int id;
        Box box;
    };
    std::vector<Row> rows;
    for (const auto& [id, traj] : gt.tracks)
        for (const auto& [frame, box] : traj) rows.push_back({frame, id, box});
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.frame != b.frame) return a.frame < b.frame;
        return a.id < b.id;
    });
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write ground-truth file: " + path);
    for (const auto& r : rows) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%d,%d,%.6f,%.6f,%.6f,%.6f,1,1,1\n", r.frame, r.id,
                      r.box.x, r.box.y, r.box.w, r.box.h);
        out << buf;
    }
    if (!out) throw IoError("write failed: " + path);
}

TrackSet parse_track_set(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open track file: " + path);
    TrackSet ts;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) continue;
        const auto cols = split_csv(line);
        if (cols.size() < 6)
            throw ParseError("expected at least 6 columns at line " + std::to_string(line_no),
                             line_no);
        const int frame = to_int(cols[0], line_no, "frame");
        const int id = to_int(cols[1], line_no, "track_id");
        if (id < 0)
            throw ParseError("negative track_id at line " + std::to_string(line_no), line_no);
        Box b;
        b.x = to_double(cols[2], line_no, "x");
        b.y = to_double(cols[3], line_no, "y");
        b.w = to_double(cols[4], line_no, "w");
        b.h = to_double(cols[5], line_no, "h");
        if (b.w <= 0.0 || b.h <= 0.0)
            throw ParseError("non-positive box at line " + std::to_string(line_no), line_no);
        ts.tracks[id][frame] = b;
    }
    return ts;
}

}  // namespace mtt
