// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 mtt contributors
#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include <mtt/config.hpp>
#include <mtt/types.hpp>

namespace mtt {

using Vec4 = Eigen::Vector4d;
using Vec8 = Eigen::Matrix<double, 8, 1>;
using Mat4 = Eigen::Matrix4d;
using Mat8 = Eigen::Matrix<double, 8, 8>;

/// Constant-velocity filter parameters on (cx, cy, w, h).
struct KalmanParams {
    double q_pos{1.0};
    double q_vel{0.25};
    double r{1.0};
    double init_vel_var{1000.0};

    static KalmanParams from_config(const Config& cfg) {
        return {cfg.kf_q_pos, cfg.kf_q_vel, cfg.kf_r, cfg.kf_init_vel_var};
    }
};

/// State (cx, cy, w, h, vcx, vcy, vw, vh) with covariance, pixels and
/// pixels/frame.
struct KalmanState {
    Vec8 mean = Vec8::Zero();
    Mat8 cov = Mat8::Identity();

    static KalmanState from_box(const Box& b, const KalmanParams& p);
    Box box() const;
};

struct KalmanUpdate {
    KalmanState state;
    Vec4 innovation;       // predicted minus observed measurement
    Mat4 innovation_cov;
};

/// Constant-velocity propagation over dt >= 1 frames; process noise Q * dt.
KalmanState kalman_predict(const KalmanState& ks, int dt, const KalmanParams& p);

/// Linear update on the (cx, cy, w, h) measurement. Regularizes a non-PD
/// innovation covariance once with 1e-6 * I, then throws NumericalError.
KalmanUpdate kalman_update(const KalmanState& ks, const Box& obs, const KalmanParams& p);

struct GateResult {
    bool passes{false};
    double distance{0.0};   // Mahalanobis squared; +inf when the gate fails closed
};

/// Mahalanobis-squared gate; a singular covariance fails closed.
GateResult motion_gate(const Vec4& innovation, const Mat4& innovation_cov, double theta_mot);

/// Forward Kalman pass plus backward RTS pass over per-frame boxes (nullopt
/// marks a missing frame, which is predicted through and reported smoothed).
std::vector<Box> rts_smooth(const std::vector<std::optional<Box>>& measurements,
                            const KalmanParams& p);

}  // namespace mtt
