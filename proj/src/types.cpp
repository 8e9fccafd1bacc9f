// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 mtt contributors
#include <mtt/types.hpp>

#include <algorithm>

namespace mtt {

void EmbeddingTable::insert(int det_id, std::vector<double> v) {
    if (v.empty()) throw ParseError("empty embedding vector", 0);
    for (double x : v)
        if (!std::isfinite(x)) throw ParseError("non-finite embedding value", 0);
    if (dim_ == 0) dim_ = static_cast<int>(v.size());
    if (static_cast<int>(v.size()) != dim_)
        throw ParseError("embedding dimension mismatch: expected " + std::to_string(dim_) +
                             ", got " + std::to_string(v.size()),
                         0);
    const double n = norm(v);
    if (n <= 0.0) throw ParseError("zero-norm embedding vector", 0);
    for (double& x : v) x /= n;
    vectors_[det_id] = std::move(v);
}

void Tracklet::finalize() {
    std::sort(members.begin(), members.end(),
              [](const Detection& a, const Detection& b) { return a.frame < b.frame; });
    if (members.empty()) {
        t_begin = t_end = 0;
        mean_score = 0.0;
        return;
    }
    t_begin = members.front().frame;
    t_end = members.back().frame;
    double s = 0.0;
    for (const auto& d : members) s += d.score;
    mean_score = s / static_cast<double>(members.size());
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

double norm(const std::vector<double>& v) {
    return std::sqrt(dot(v, v));
}

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
    const double na = norm(a);
    const double nb = norm(b);
    if (na <= 0.0 || nb <= 0.0) return 0.0;
    return dot(a, b) / (na * nb);
}

std::vector<double> normalized(std::vector<double> v) {
    const double n = norm(v);
    if (n > 0.0)
        for (double& x : v) x /= n;
    return v;
}

}  // namespace mtt
