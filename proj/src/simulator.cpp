// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 mtt contributors
#include <mtt/simulator.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

namespace mtt {

double DeterministicRng::gaussian(double mean, double stddev) {
    if (have_spare_) {
        have_spare_ = false;
        return mean + stddev * spare_;
    }
    const double u1 = 1.0 - uniform();   // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return mean + stddev * r * std::cos(a);
}

int DeterministicRng::poisson(double lambda) {
    if (lambda <= 0.0) return 0;
    const double limit = std::exp(-lambda);
    int k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= uniform();
    } while (p > limit);
    return k - 1;
}

std::vector<double> DeterministicRng::unit_vector(int dim) {
    std::vector<double> v(dim);
    double n2 = 0.0;
    do {
        n2 = 0.0;
        for (double& x : v) {
            x = gaussian();
            n2 += x * x;
        }
    } while (n2 <= 1e-12);
    const double inv = 1.0 / std::sqrt(n2);
    for (double& x : v) x *= inv;
    return v;
}

void SceneSpec::validate() const {
    auto rate = [](double r) { return r >= 0.0 && r <= 1.0; };
    if (n_targets < 0 || n_frames < 0) throw ConfigError("scene sizes must be >= 0");
    if (image_width < 1 || image_height < 1) throw ConfigError("image size must be positive");
    if (!rate(birth_rate) || !rate(death_rate) || !rate(miss_rate))
        throw ConfigError("rates must lie in [0,1]");
    if (fp_rate < 0.0) throw ConfigError("fp_rate must be >= 0");
    if (emb_dim < 1) throw ConfigError("emb_dim must be >= 1");
    if (sigma_emb_deg < 0.0 || identity_spread_deg < 0.0)
        throw ConfigError("embedding angles must be >= 0");
    if (occlusion_min < 1 || occlusion_max < occlusion_min)
        throw ConfigError("occlusion durations must be >= 1 and ordered");
    for (const auto& ev : occlusions)
        if (ev.duration < 1 || ev.start < 1) throw ConfigError("bad occlusion event");
    if (box_min <= 0.0 || box_max < box_min) throw ConfigError("bad box size range");
    if (speed_min < 0.0 || speed_max < speed_min) throw ConfigError("bad speed range");
}

SceneSpec load_scene_spec(const std::string& path, std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scene spec: " + path);
    SceneSpec spec;
    std::string line;
    int line_no = 0;

    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r\n");
        if (a == std::string::npos) return std::string();
        const auto b = s.find_last_not_of(" \t\r\n");
        return s.substr(a, b - a + 1);
    };

    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("missing '=' at line " + std::to_string(line_no) + " of " + path);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "seed") spec.seed = std::stoull(value);
            else if (key == "n_targets") spec.n_targets = std::stoi(value);
            else if (key == "n_frames") spec.n_frames = std::stoi(value);
            else if (key == "image_width") spec.image_width = std::stoi(value);
            else if (key == "image_height") spec.image_height = std::stoi(value);
            else if (key == "birth_rate") spec.birth_rate = std::stod(value);
            else if (key == "death_rate") spec.death_rate = std::stod(value);
            else if (key == "miss_rate") spec.miss_rate = std::stod(value);
            else if (key == "fp_rate") spec.fp_rate = std::stod(value);
            else if (key == "jitter_px") spec.jitter_px = std::stod(value);
            else if (key == "conf_visible_mean") spec.conf_visible_mean = std::stod(value);
            else if (key == "conf_partial_mean") spec.conf_partial_mean = std::stod(value);
            else if (key == "conf_fp_mean") spec.conf_fp_mean = std::stod(value);
            else if (key == "conf_std") spec.conf_std = std::stod(value);
            else if (key == "emb_dim") spec.emb_dim = std::stoi(value);
            else if (key == "sigma_emb_deg") spec.sigma_emb_deg = std::stod(value);
            else if (key == "identity_spread_deg") spec.identity_spread_deg = std::stod(value);
            else if (key == "n_occlusions") spec.n_occlusions = std::stoi(value);
            else if (key == "occlusion_min") spec.occlusion_min = std::stoi(value);
            else if (key == "occlusion_max") spec.occlusion_max = std::stoi(value);
            else if (key == "speed_min") spec.speed_min = std::stod(value);
            else if (key == "speed_max") spec.speed_max = std::stod(value);
            else if (key == "accel_std") spec.accel_std = std::stod(value);
            else if (key == "box_min") spec.box_min = std::stod(value);
            else if (key == "box_max") spec.box_max = std::stod(value);
            else if (key == "occlusion") {
                OcclusionEvent ev;
                if (std::sscanf(value.c_str(), "%d,%d,%d", &ev.target, &ev.start, &ev.duration) != 3)
                    throw ConfigError("occlusion expects 'target,start,duration'");
                spec.occlusions.push_back(ev);
            } else if (warnings) {
                warnings->push_back("unknown scene key '" + key + "' at line " +
                                    std::to_string(line_no));
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError("invalid value for '" + key + "' at line " + std::to_string(line_no));
        }
    }
    spec.validate();
    return spec;
}

namespace {

struct TargetState {
    double x, y, vx, vy, w, h;
    int birth, death;
    std::vector<double> mean_emb;
};

// Perturbs a unit vector with isotropic tangent-space noise so the angular
// deviation concentrates around `typical_angle` (von Mises-Fisher style).
std::vector<double> perturb_on_sphere(const std::vector<double>& mean, double typical_angle,
                                      DeterministicRng& rng) {
    const int dim = static_cast<int>(mean.size());
    if (typical_angle <= 0.0 || dim < 2) return mean;
    const double sigma = std::tan(typical_angle) / std::sqrt(static_cast<double>(dim - 1));
    std::vector<double> v(mean);
    std::vector<double> g(dim);
    for (double& x : g) x = rng.gaussian(0.0, sigma);
    const double proj = dot(g, mean);
    for (int i = 0; i < dim; ++i) v[i] += g[i] - proj * mean[i];
    return normalized(std::move(v));
}

}  // namespace

SceneData generate(const SceneSpec& spec) {
    spec.validate();
    SceneData scene;
    DeterministicRng rng(spec.seed);
    const double w_img = static_cast<double>(spec.image_width);
    const double h_img = static_cast<double>(spec.image_height);

    const std::vector<double> base_emb =
        spec.n_targets > 0 ? rng.unit_vector(spec.emb_dim) : std::vector<double>{};
    const double spread = spec.identity_spread_deg * M_PI / 180.0;
    std::vector<TargetState> targets(spec.n_targets);
    for (auto& t : targets) {
        t.w = rng.uniform(spec.box_min, spec.box_max);
        t.h = rng.uniform(spec.box_min, spec.box_max);
        t.x = rng.uniform(0.1 * w_img, 0.9 * w_img - t.w);
        t.y = rng.uniform(0.1 * h_img, 0.9 * h_img - t.h);
        const double speed = rng.uniform(spec.speed_min, spec.speed_max);
        const double dir = rng.uniform(0.0, 2.0 * M_PI);
        t.vx = speed * std::cos(dir);
        t.vy = speed * std::sin(dir);
        t.birth = 1;
        t.death = spec.n_frames;
        if (rng.uniform() < spec.birth_rate && spec.n_frames >= 3)
            t.birth = rng.uniform_int(2, std::max(2, spec.n_frames / 3));
        if (rng.uniform() < spec.death_rate && spec.n_frames >= 3)
            t.death = rng.uniform_int(2 * spec.n_frames / 3, spec.n_frames);
        t.mean_emb = perturb_on_sphere(base_emb, spread, rng);
    }

    auto events = spec.occlusions;
    for (int i = 0; i < spec.n_occlusions && spec.n_targets > 0; ++i) {
        OcclusionEvent ev;
        ev.target = rng.uniform_int(0, spec.n_targets - 1);
        ev.duration = rng.uniform_int(spec.occlusion_min, spec.occlusion_max);
        ev.start = rng.uniform_int(2, std::max(2, spec.n_frames - ev.duration));
        events.push_back(ev);
    }

    auto occluded = [&](int target, int frame) {
        for (const auto& ev : events)
            if (ev.target == target && frame >= ev.start && frame < ev.start + ev.duration)
                return true;
        return false;
    };
    auto partial = [&](int target, int frame) {
        for (const auto& ev : events)
            if (ev.target == target && (frame == ev.start - 1 || frame == ev.start + ev.duration))
                return true;
        return false;
    };

    int next_det_id = 0;
    const double sigma_emb = spec.sigma_emb_deg * M_PI / 180.0;

    for (int f = 1; f <= spec.n_frames; ++f) {
        for (int k = 0; k < spec.n_targets; ++k) {
            auto& t = targets[k];
            if (f < t.birth || f > t.death) continue;
            if (f > t.birth) {
                t.vx += rng.gaussian(0.0, spec.accel_std);
                t.vy += rng.gaussian(0.0, spec.accel_std);
                t.x += t.vx;
                t.y += t.vy;
                // Bounce off the image borders.
                if (t.x < 0.0) { t.x = 0.0; t.vx = std::abs(t.vx); }
                if (t.y < 0.0) { t.y = 0.0; t.vy = std::abs(t.vy); }
                if (t.x + t.w > w_img) { t.x = w_img - t.w; t.vx = -std::abs(t.vx); }
                if (t.y + t.h > h_img) { t.y = h_img - t.h; t.vy = -std::abs(t.vy); }
            }
            const Box truth_box{t.x, t.y, t.w, t.h};
            scene.truth.boxes[k][f] = truth_box;
            const bool occ = occluded(k, f);
            scene.truth.visible[k][f] = !occ;
            if (occ) continue;
            if (rng.uniform() < spec.miss_rate) continue;

            Detection d;
            d.frame = f;
            d.det_id = next_det_id++;
            d.box.x = t.x + rng.gaussian(0.0, spec.jitter_px);
            d.box.y = t.y + rng.gaussian(0.0, spec.jitter_px);
            d.box.w = std::max(2.0, t.w + rng.gaussian(0.0, spec.jitter_px * 0.5));
            d.box.h = std::max(2.0, t.h + rng.gaussian(0.0, spec.jitter_px * 0.5));
            const double mean_conf =
                partial(k, f) ? spec.conf_partial_mean : spec.conf_visible_mean;
            d.score = std::clamp(rng.gaussian(mean_conf, spec.conf_std), 0.01, 1.0);
            scene.detections.add(d);
            scene.det_identity.push_back(k);
            scene.embeddings.insert(d.det_id,
                                    perturb_on_sphere(t.mean_emb, sigma_emb, rng));
        }

        const int n_fp = rng.poisson(spec.fp_rate * spec.n_targets);
        for (int i = 0; i < n_fp; ++i) {
            Detection d;
            d.frame = f;
            d.det_id = next_det_id++;
            d.box.w = rng.uniform(spec.box_min, spec.box_max);
            d.box.h = rng.uniform(spec.box_min, spec.box_max);
            d.box.x = rng.uniform(0.0, w_img - d.box.w);
            d.box.y = rng.uniform(0.0, h_img - d.box.h);
            d.score = std::clamp(rng.gaussian(spec.conf_fp_mean, spec.conf_std), 0.01, 1.0);
            scene.detections.add(d);
            scene.det_identity.push_back(-1);
            scene.embeddings.insert(d.det_id, rng.unit_vector(spec.emb_dim));
        }
    }
    // Frames without detections still exist up to n_frames.
    if (spec.n_frames > scene.detections.frame_count() && spec.n_frames > 0)
        scene.detections.by_frame.resize(spec.n_frames);
    return scene;
}

void write_scene(const SceneData& scene, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    write_detections(scene.detections, out_dir + "/dets.csv");
    write_ground_truth(scene.truth.to_track_set(), out_dir + "/gt.csv");

    std::ofstream emb(out_dir + "/embeddings.csv", std::ios::binary);
    if (!emb) throw IoError("cannot write embeddings: " + out_dir + "/embeddings.csv");
    for (int f = 1; f <= scene.detections.frame_count(); ++f) {
        for (const auto& d : scene.detections.at(f)) {
            const auto* v = scene.embeddings.lookup(d.det_id);
            if (!v) continue;
            emb << d.det_id;
            char buf[32];
            for (double x : *v) {
                std::snprintf(buf, sizeof(buf), ",%.9f", x);
                emb << buf;
            }
            emb << "\n";
        }
    }
    if (!emb) throw IoError("write failed: " + out_dir + "/embeddings.csv");
}

std::vector<FinalTrack> baseline_greedy_tracker(const FrameSet& fs, double iou_min) {
    struct Active {
        int track_index;
        Box box;
        int last_frame;
    };
    std::vector<FinalTrack> tracks;
    std::vector<Active> active;
    int next_id = 1;

    for (int f = 1; f <= fs.frame_count(); ++f) {
        const auto& dets = fs.at(f);
        // Tracks not matched in the immediately preceding frame are dead.
        std::vector<Active> candidates;
        for (const auto& a : active)
            if (a.last_frame == f - 1) candidates.push_back(a);

        struct Pair {
            double iou;
            int a, d;
        };
        std::vector<Pair> pairs;
        for (int a = 0; a < static_cast<int>(candidates.size()); ++a)
            for (int d = 0; d < static_cast<int>(dets.size()); ++d) {
                const double v = iou(candidates[a].box, dets[d].box);
                if (v >= iou_min) pairs.push_back({v, a, d});
            }
        std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) {
            if (x.iou != y.iou) return x.iou > y.iou;
            if (x.a != y.a) return x.a < y.a;
            return x.d < y.d;
        });

        std::vector<bool> a_used(candidates.size(), false), d_used(dets.size(), false);
        std::vector<Active> next_active;
        for (const auto& p : pairs) {
            if (a_used[p.a] || d_used[p.d]) continue;
            a_used[p.a] = true;
            d_used[p.d] = true;
            auto& track = tracks[candidates[p.a].track_index];
            track.entries.push_back(
                {f, dets[p.d].box, dets[p.d].score, false, dets[p.d].det_id});
            next_active.push_back({candidates[p.a].track_index, dets[p.d].box, f});
        }
        for (int d = 0; d < static_cast<int>(dets.size()); ++d) {
            if (d_used[d]) continue;
            FinalTrack t;
            t.track_id = next_id++;
            t.entries.push_back({f, dets[d].box, dets[d].score, false, dets[d].det_id});
            tracks.push_back(std::move(t));
            next_active.push_back({static_cast<int>(tracks.size()) - 1, dets[d].box, f});
        }
        active = std::move(next_active);
    }
    return tracks;
}

}  // namespace mtt
