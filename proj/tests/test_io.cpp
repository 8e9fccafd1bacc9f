// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 mtt contributors
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include <mtt/config.hpp>
#include <mtt/io.hpp>

using namespace mtt;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("parse_detections groups rows by frame") {
    const auto path = temp_path("dets_basic.csv");
    write_file(path,
               "1,-1,10,10,5,20,0.9\n"
               "1,-1,50,50,5,20,0.8\n"
               "2,-1,12,12,5,20,0.7\n");
    const FrameSet fs = parse_detections(path);
    CHECK(fs.frame_count() == 2);
    CHECK(fs.at(1).size() == 2);
    CHECK(fs.at(2).size() == 1);
    CHECK(fs.at(1)[0].det_id == 0);
    CHECK(fs.at(1)[1].det_id == 1);
    CHECK(fs.at(2)[0].det_id == 2);
}

TEST_CASE("parse_detections handles the empty file") {
    const auto path = temp_path("dets_empty.csv");
    write_file(path, "");
    const FrameSet fs = parse_detections(path);
    CHECK(fs.frame_count() == 0);
    CHECK(fs.total_detections() == 0);
}

TEST_CASE("parse_detections rejects non-positive boxes with the line number") {
    const auto path = temp_path("dets_bad.csv");
    write_file(path, "1,-1,10,10,-5,20,0.9\n");
    try {
        parse_detections(path);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 1);
        CHECK(std::string(e.what()).find("non-positive box at line 1") != std::string::npos);
    }
}

TEST_CASE("parse_detections regroups non-monotonic frames") {
    const auto path = temp_path("dets_shuffled.csv");
    write_file(path,
               "3,-1,1,1,2,2,0.5\n"
               "1,-1,2,2,2,2,0.5\n"
               "3,-1,3,3,2,2,0.5\n");
    const FrameSet fs = parse_detections(path);
    CHECK(fs.frame_count() == 3);
    CHECK(fs.at(1).size() == 1);
    CHECK(fs.at(2).empty());
    CHECK(fs.at(3).size() == 2);
    // det_id still follows file order
    CHECK(fs.at(3)[0].det_id == 0);
    CHECK(fs.at(1)[0].det_id == 1);
}

TEST_CASE("parse_embeddings normalizes and tolerates missing ids") {
    const auto dets = temp_path("dets_for_emb.csv");
    write_file(dets, "1,-1,0,0,1,1,0.5\n1,-1,5,5,1,1,0.5\n");
    const FrameSet fs = parse_detections(dets);

    const auto path = temp_path("emb_basic.csv");
    write_file(path, "0,3,4\n");
    const EmbeddingTable table = parse_embeddings(path, fs);
    CHECK(table.dim() == 2);
    const auto* v = table.lookup(0);
    REQUIRE(v != nullptr);
    CHECK((*v)[0] == doctest::Approx(0.6));
    CHECK((*v)[1] == doctest::Approx(0.8));
    CHECK(table.lookup(5) == nullptr);
}

TEST_CASE("parse_embeddings rejects inconsistent dimensions and non-finite values") {
    const auto dets = temp_path("dets_for_emb2.csv");
    write_file(dets, "1,-1,0,0,1,1,0.5\n");
    const FrameSet fs = parse_detections(dets);

    const auto bad_dim = temp_path("emb_baddim.csv");
    write_file(bad_dim, "0,1,0\n1,1,0,0\n");
    CHECK_THROWS_AS(parse_embeddings(bad_dim, fs), ParseError);

    const auto bad_val = temp_path("emb_badval.csv");
    write_file(bad_val, "0,nan,0\n");
    CHECK_THROWS_AS(parse_embeddings(bad_val, fs), ParseError);
}

TEST_CASE("write_tracks emits sorted deterministic rows") {
    FinalTrack a;
    a.track_id = 2;
    a.entries = {{1, {0, 0, 10, 10}, 0.9, false, 0},
                 {2, {1, 0, 10, 10}, 0.9, false, 1},
                 {3, {2, 0, 10, 10}, 0.9, false, 2}};
    FinalTrack b;
    b.track_id = 1;
    b.entries = {{1, {50, 50, 10, 10}, 0.8, false, 3}};

    const auto path = temp_path("tracks_out.csv");
    write_tracks({a, b}, path);
    const std::string text = read_file(path);
    // Rows ascend by frame; same frame orders by track id.
    CHECK(text.find("1,1,") < text.find("1,2,"));
    CHECK(text.find("1,2,") < text.find("2,2,"));
    CHECK(text.find("2,2,") < text.find("3,2,"));

    const auto empty_path = temp_path("tracks_empty.csv");
    write_tracks({}, empty_path);
    CHECK(read_file(empty_path).empty());

    // Identical input -> identical bytes.
    const auto path2 = temp_path("tracks_out2.csv");
    write_tracks({a, b}, path2);
    CHECK(read_file(path) == read_file(path2));
}

TEST_CASE("detections survive a write/parse round trip") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> coord(0.0, 1900.0), size(1.0, 80.0), conf(0.0, 1.0);
    FrameSet fs;
    int det_id = 0;
    for (int f = 1; f <= 5; ++f) {
        const int m = static_cast<int>(rng() % 4);
        for (int i = 0; i < m; ++i) {
            Detection d;
            d.frame = f;
            d.det_id = det_id++;
            d.box = {coord(rng), coord(rng), size(rng), size(rng)};
            d.score = conf(rng);
            fs.add(d);
        }
    }
    const auto path = temp_path("dets_roundtrip.csv");
    write_detections(fs, path);
    const FrameSet back = parse_detections(path);
    REQUIRE(back.total_detections() == fs.total_detections());
    for (int f = 1; f <= fs.frame_count(); ++f) {
        REQUIRE(back.at(f).size() == fs.at(f).size());
        for (std::size_t i = 0; i < fs.at(f).size(); ++i) {
            CHECK(back.at(f)[i].box.x == doctest::Approx(fs.at(f)[i].box.x).epsilon(1e-6));
            CHECK(back.at(f)[i].box.w == doctest::Approx(fs.at(f)[i].box.w).epsilon(1e-6));
            CHECK(back.at(f)[i].det_id == fs.at(f)[i].det_id);
        }
    }
    // Byte-determinism of the writer.
    const auto path2 = temp_path("dets_roundtrip2.csv");
    write_detections(fs, path2);
    CHECK(read_file(path) == read_file(path2));
}

TEST_CASE("config defaults reproduce the reference parameter table") {
    const Config cfg;
    CHECK(cfg.image_width == 1920);
    CHECK(cfg.image_height == 1080);
    CHECK(cfg.w_median == 5);
    CHECK(cfg.theta_s == 0.1);
    CHECK(cfg.nms_iou == 0.5);
    CHECK(cfg.grad_d == 5.0);
    CHECK(cfg.stride_s == 1);
    CHECK(cfg.l_max == 5);
    CHECK(cfg.u_max == 70);
    CHECK(cfg.dbscan_eps == 80.0);
    CHECK(cfg.dbscan_min_pts == 2);
    CHECK(cfg.theta_mot == 15.0);
    CHECK(cfg.theta_app == 0.85);
    CHECK(cfg.prune_depth == 2);
    CHECK(cfg.theta_null == 0.3);
    CHECK(cfg.patience == 10);
    CHECK(cfg.max_leaves == 8);
    CHECK(cfg.w_mot == 0.1);
    CHECK(cfg.w_app == 0.9);
    CHECK(cfg.w_conf == 3.0);
    CHECK(cfg.v_space == 1920.0 * 1080.0);
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("config files warn on unknown keys and reject bad values") {
    const auto path = temp_path("config_test.txt");
    write_file(path,
               "theta_app = 0.9\n"
               "# comment line\n"
               "no_such_key = 1\n"
               "l_max = 7\n");
    std::vector<std::string> warnings;
    const Config cfg = load_config(path, &warnings);
    CHECK(cfg.theta_app == 0.9);
    CHECK(cfg.l_max == 7);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("no_such_key") != std::string::npos);

    const auto bad = temp_path("config_bad.txt");
    write_file(bad, "theta_app = banana\n");
    CHECK_THROWS_AS(load_config(bad), ConfigError);

    const auto invalid = temp_path("config_invalid.txt");
    write_file(invalid, "w_median = 4\n");
    CHECK_THROWS_AS(load_config(invalid), ConfigError);
}
