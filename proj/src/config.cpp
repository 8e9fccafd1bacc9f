// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 mtt contributors
#include <mtt/config.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace mtt {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

struct Field {
    std::function<void(Config&, const std::string&)> set;
    std::function<std::string(const Config&)> get;
};

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size() || !std::isfinite(x))
            throw std::invalid_argument("trailing junk");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("invalid numeric value for '" + key + "': " + v);
    }
}

int parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const int x = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing junk");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("invalid integer value for '" + key + "': " + v);
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("invalid boolean value for '" + key + "': " + v);
}

std::string fmt_double(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

#define FIELD_D(name) \
    {#name, Field{[](Config& c, const std::string& v) { c.name = parse_double(#name, v); }, \
                  [](const Config& c) { return fmt_double(c.name); }}}
#define FIELD_I(name) \
    {#name, Field{[](Config& c, const std::string& v) { c.name = parse_int(#name, v); }, \
                  [](const Config& c) { return std::to_string(c.name); }}}
#define FIELD_LL(name) \
    {#name, Field{[](Config& c, const std::string& v) { \
                      try { \
                          std::size_t pos = 0; \
                          c.name = std::stoll(v, &pos); \
                          if (pos != v.size()) throw std::invalid_argument("junk"); \
                      } catch (const std::exception&) { \
                          throw ConfigError("invalid integer value for '" #name "': " + v); \
                      } \
                  }, \
                  [](const Config& c) { return std::to_string(c.name); }}}
#define FIELD_B(name) \
    {#name, Field{[](Config& c, const std::string& v) { c.name = parse_bool(#name, v); }, \
                  [](const Config& c) { return c.name ? std::string("true") : std::string("false"); }}}

const std::map<std::string, Field>& fields() {
    static const std::map<std::string, Field> f = {
        FIELD_I(image_width),
        FIELD_I(image_height),
        FIELD_D(v_space),
        FIELD_I(w_median),
        FIELD_D(theta_s),
        FIELD_D(nms_iou),
        FIELD_D(grad_d),
        FIELD_I(stride_s),
        FIELD_I(l_max),
        FIELD_I(u_max),
        FIELD_D(dbscan_eps),
        FIELD_I(dbscan_min_pts),
        FIELD_D(theta_mot),
        FIELD_D(theta_app),
        FIELD_D(sigma_pos),
        FIELD_D(dist_alpha),
        FIELD_D(dist_beta),
        FIELD_D(weighted_eps),
        FIELD_B(use_weighted_distance),
        FIELD_I(prune_depth),
        FIELD_D(theta_null),
        FIELD_I(patience),
        FIELD_I(max_leaves),
        FIELD_D(w_mot),
        FIELD_D(w_app),
        FIELD_D(w_conf),
        FIELD_D(miss_penalty),
        FIELD_D(duplicate_iou),
        FIELD_I(duplicate_rounds),
        FIELD_D(kf_q_pos),
        FIELD_D(kf_q_vel),
        FIELD_D(kf_r),
        FIELD_D(kf_init_vel_var),
        FIELD_I(mwis_exact_threshold),
        FIELD_I(clique_budget),
        FIELD_B(clique_greedy_fallback),
        FIELD_LL(clique_max_search_nodes),
    };
    return f;
}

#undef FIELD_D
#undef FIELD_I
#undef FIELD_LL
#undef FIELD_B

}  // namespace

void Config::validate() const {
    if (w_median < 1 || w_median % 2 == 0)
        throw ConfigError("w_median must be odd and >= 1");
    if (theta_s < 0 || theta_s > 1) throw ConfigError("theta_s must lie in [0,1]");
    if (nms_iou < 0 || nms_iou > 1) throw ConfigError("nms_iou must lie in [0,1]");
    if (grad_d < 0) throw ConfigError("grad_d must be >= 0");
    if (l_max < 1) throw ConfigError("l_max must be >= 1");
    if (u_max < 1) throw ConfigError("u_max must be >= 1");
    if (stride_s < 1) throw ConfigError("stride_s must be >= 1");
    if (dbscan_eps <= 0) throw ConfigError("dbscan_eps must be > 0");
    if (dbscan_min_pts < 1) throw ConfigError("dbscan_min_pts must be >= 1");
    if (theta_mot < 0) throw ConfigError("theta_mot must be >= 0");
    if (theta_app < -1 || theta_app > 1) throw ConfigError("theta_app must lie in [-1,1]");
    if (sigma_pos <= 0) throw ConfigError("sigma_pos must be > 0");
    if (dist_alpha < 0 || dist_beta < 0) throw ConfigError("distance coefficients must be >= 0");
    if (weighted_eps <= 0) throw ConfigError("weighted_eps must be > 0");
    if (prune_depth < 1) throw ConfigError("prune_depth must be >= 1");
    if (theta_null <= 0 || theta_null >= 1) throw ConfigError("theta_null must lie in (0,1)");
    if (patience < 0) throw ConfigError("patience must be >= 0");
    if (max_leaves < 1) throw ConfigError("max_leaves must be >= 1");
    if (miss_penalty < 0) throw ConfigError("miss_penalty must be >= 0");
    if (duplicate_iou <= 0) throw ConfigError("duplicate_iou must be > 0");
    if (duplicate_rounds < 1) throw ConfigError("duplicate_rounds must be >= 1");
    if (!(std::isfinite(w_mot) && std::isfinite(w_app) && std::isfinite(w_conf)))
        throw ConfigError("scoring weights must be finite");
    if (kf_q_pos < 0 || kf_q_vel < 0 || kf_r < 0 || kf_init_vel_var < 0)
        throw ConfigError("Kalman noise parameters must be >= 0");
    if (v_space <= 0) throw ConfigError("v_space must be > 0");
    if (image_width < 1 || image_height < 1) throw ConfigError("image size must be positive");
    if (mwis_exact_threshold < 0) throw ConfigError("mwis_exact_threshold must be >= 0");
    if (clique_budget < 1) throw ConfigError("clique_budget must be >= 1");
    if (clique_max_search_nodes < 0)
        throw ConfigError("clique_max_search_nodes must be >= 0");
}

bool apply_config_entry(Config& cfg, const std::string& key, const std::string& value) {
    auto it = fields().find(key);
    if (it == fields().end()) return false;
    it->second.set(cfg, value);
    return true;
}

Config load_config(const std::string& path, std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    Config cfg;
    std::string line;
    int line_no = 0;
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
        if (!apply_config_entry(cfg, key, value)) {
            if (warnings)
                warnings->push_back("unknown config key '" + key + "' at line " +
                                    std::to_string(line_no));
        }
    }
    cfg.validate();
    return cfg;
}

std::string config_to_json(const Config& cfg) {
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (const auto& [name, field] : fields()) {
        if (!first) os << ",";
        first = false;
        os << "\"" << name << "\":" << field.get(cfg);
    }
    os << "}";
    return os.str();
}

}  // namespace mtt
