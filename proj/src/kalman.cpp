// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 mtt contributors
#include <mtt/kalman.hpp>

#include <cmath>
#include <limits>

namespace mtt {

namespace {

Mat8 transition(int dt) {
    Mat8 f = Mat8::Identity();
    for (int i = 0; i < 4; ++i) f(i, i + 4) = static_cast<double>(dt);
    return f;
}

Mat8 process_noise(const KalmanParams& p, int dt) {
    Mat8 q = Mat8::Zero();
    for (int i = 0; i < 4; ++i) {
        q(i, i) = p.q_pos * dt;
        q(i + 4, i + 4) = p.q_vel * dt;
    }
    return q;
}

Eigen::Matrix<double, 4, 8> measurement_model() {
    Eigen::Matrix<double, 4, 8> h = Eigen::Matrix<double, 4, 8>::Zero();
    for (int i = 0; i < 4; ++i) h(i, i) = 1.0;
    return h;
}

Vec4 box_to_measurement(const Box& b) {
    return Vec4(b.cx(), b.cy(), b.w, b.h);
}

constexpr double kMinExtent = 1e-3;

}  // namespace

KalmanState KalmanState::from_box(const Box& b, const KalmanParams& p) {
    KalmanState ks;
    ks.mean.head<4>() = box_to_measurement(b);
    ks.mean.tail<4>().setZero();
    ks.cov.setZero();
    const double pos_var = std::max(p.r, 1e-9);
    for (int i = 0; i < 4; ++i) {
        ks.cov(i, i) = pos_var;
        ks.cov(i + 4, i + 4) = std::max(p.init_vel_var, 1e-9);
    }
    return ks;
}

Box KalmanState::box() const {
    Box b;
    const double w = std::max(mean(2), kMinExtent);
    const double h = std::max(mean(3), kMinExtent);
    b.x = mean(0) - w / 2.0;
    b.y = mean(1) - h / 2.0;
    b.w = w;
    b.h = h;
    return b;
}

KalmanState kalman_predict(const KalmanState& ks, int dt, const KalmanParams& p) {
    const Mat8 f = transition(dt);
    KalmanState out;
    out.mean = f * ks.mean;
    out.cov = f * ks.cov * f.transpose() + process_noise(p, dt);
    return out;
}

KalmanUpdate kalman_update(const KalmanState& ks, const Box& obs, const KalmanParams& p) {
    static const Eigen::Matrix<double, 4, 8> h = measurement_model();
    const Vec4 z = box_to_measurement(obs);
    const Vec4 predicted = h * ks.mean;

    Mat4 s = h * ks.cov * h.transpose() + p.r * Mat4::Identity();
    Eigen::LLT<Mat4> llt(s);
    if (llt.info() != Eigen::Success) {
        s += 1e-6 * Mat4::Identity();
        llt.compute(s);
        if (llt.info() != Eigen::Success)
            throw NumericalError("innovation covariance is not positive definite");
    }

    const Eigen::Matrix<double, 8, 4> k = llt.solve(h * ks.cov).transpose();
    KalmanUpdate out;
    out.innovation = predicted - z;
    out.innovation_cov = s;
    out.state.mean = ks.mean + k * (z - predicted);
    out.state.cov = (Mat8::Identity() - k * h) * ks.cov;
    // Keep the covariance symmetric and the box extent positive.
    out.state.cov = 0.5 * (out.state.cov + out.state.cov.transpose()).eval();
    out.state.mean(2) = std::max(out.state.mean(2), kMinExtent);
    out.state.mean(3) = std::max(out.state.mean(3), kMinExtent);
    return out;
}

GateResult motion_gate(const Vec4& innovation, const Mat4& innovation_cov, double theta_mot) {
    Eigen::LLT<Mat4> llt(innovation_cov);
    if (llt.info() != Eigen::Success)
        return {false, std::numeric_limits<double>::infinity()};
    const double d2 = innovation.dot(llt.solve(innovation));
    return {d2 <= theta_mot, d2};
}

std::vector<Box> rts_smooth(const std::vector<std::optional<Box>>& measurements,
                            const KalmanParams& p) {
    const int n = static_cast<int>(measurements.size());
    std::vector<Box> out(n);
    if (n == 0) return out;

    int first = -1;
    for (int i = 0; i < n && first < 0; ++i)
        if (measurements[i]) first = i;
    if (first < 0) return out;

    std::vector<KalmanState> filtered(n);
    std::vector<KalmanState> predicted(n);

    KalmanState ks = KalmanState::from_box(*measurements[first], p);
    for (int i = 0; i < first; ++i) {
        predicted[i] = ks;
        filtered[i] = ks;
    }
    predicted[first] = ks;
    filtered[first] = ks;

    for (int t = first + 1; t < n; ++t) {
        predicted[t] = kalman_predict(filtered[t - 1], 1, p);
        if (measurements[t]) {
            filtered[t] = kalman_update(predicted[t], *measurements[t], p).state;
        } else {
            filtered[t] = predicted[t];
        }
    }

    std::vector<KalmanState> smoothed(n);
    smoothed[n - 1] = filtered[n - 1];
    for (int t = n - 2; t >= first; --t) {
        const Mat8 f = transition(1);
        const Mat8 p_pred = predicted[t + 1].cov;
        Eigen::LLT<Mat8> llt(p_pred);
        Mat8 gain = Mat8::Zero();
        if (llt.info() == Eigen::Success)
            gain = llt.solve(f * filtered[t].cov).transpose();
        smoothed[t].mean = filtered[t].mean + gain * (smoothed[t + 1].mean - predicted[t + 1].mean);
        smoothed[t].cov =
            filtered[t].cov +
            gain * (smoothed[t + 1].cov - predicted[t + 1].cov) * gain.transpose();
    }
    for (int t = 0; t < first; ++t) smoothed[t] = smoothed[first];

    for (int t = 0; t < n; ++t) out[t] = smoothed[t].box();
    return out;
}

}  // namespace mtt
