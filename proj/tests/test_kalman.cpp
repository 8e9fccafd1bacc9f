// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 mtt contributors
#include <doctest.h>

#include <cmath>

#include <mtt/kalman.hpp>

using namespace mtt;

namespace {

Box cv_box(double t, double x0, double vx, double y0, double vy, double w = 40, double h = 30) {
    return Box{x0 + vx * t - w / 2, y0 + vy * t - h / 2, w, h};
}

KalmanParams zero_noise() {
    KalmanParams p;
    p.q_pos = 0.0;
    p.q_vel = 0.0;
    p.r = 0.0;
    p.init_vel_var = 1000.0;
    return p;
}

}  // namespace

TEST_CASE("predict advances position by velocity") {
    KalmanParams p;
    KalmanState ks;
    ks.mean << 0, 0, 10, 10, 1, 0, 0, 0;
    ks.cov = Mat8::Identity();

    const auto one = kalman_predict(ks, 1, p);
    CHECK(one.mean(0) == doctest::Approx(1.0));
    CHECK(one.mean(1) == doctest::Approx(0.0));

    const auto three = kalman_predict(ks, 3, p);
    CHECK(three.mean(0) == doctest::Approx(3.0));

    CHECK(one.cov.trace() > ks.cov.trace());
    CHECK(three.cov.trace() > one.cov.trace());
}

TEST_CASE("update with the predicted box yields zero innovation") {
    KalmanParams p;
    KalmanState ks = KalmanState::from_box({10, 10, 20, 20}, p);
    const auto upd = kalman_update(ks, {10, 10, 20, 20}, p);
    CHECK(upd.innovation.norm() == doctest::Approx(0.0));
    // Posterior variance never exceeds the prior on measured components.
    for (int i = 0; i < 4; ++i) CHECK(upd.state.cov(i, i) <= ks.cov(i, i) + 1e-12);
}

TEST_CASE("repeated identical observations converge to the observation") {
    KalmanParams p;
    KalmanState ks = KalmanState::from_box({0, 0, 10, 10}, p);
    const Box target{100, 100, 30, 30};
    for (int i = 0; i < 20; ++i) ks = kalman_update(kalman_predict(ks, 1, p), target, p).state;
    CHECK(ks.mean(0) == doctest::Approx(target.cx()).epsilon(1e-3));
    CHECK(ks.mean(1) == doctest::Approx(target.cy()).epsilon(1e-3));
    CHECK(ks.mean(2) == doctest::Approx(target.w).epsilon(1e-3));
}

TEST_CASE("motion gate evaluates the Mahalanobis form") {
    const Mat4 identity = Mat4::Identity();
    auto g = motion_gate(Vec4::Zero(), identity, 15.0);
    CHECK(g.passes);
    CHECK(g.distance == doctest::Approx(0.0));

    g = motion_gate(Vec4(4, 0, 0, 0), identity, 15.0);
    CHECK_FALSE(g.passes);   // 16 > 15
    CHECK(g.distance == doctest::Approx(16.0));

    g = motion_gate(Vec4(4, 0, 0, 0), 4.0 * identity, 15.0);
    CHECK(g.distance == doctest::Approx(4.0));   // scaling Sigma by 4 divides d by 4
    CHECK(g.passes);

    // Singular covariance fails closed.
    Mat4 singular = Mat4::Zero();
    g = motion_gate(Vec4(1, 0, 0, 0), singular, 15.0);
    CHECK_FALSE(g.passes);
}

TEST_CASE("noise-free constant velocity track drives innovations to zero") {
    const KalmanParams p = zero_noise();
    KalmanState ks = KalmanState::from_box(cv_box(0, 100, 3, 200, -2), p);
    double last_innovation = 1e9;
    for (int t = 1; t <= 8; ++t) {
        const auto upd = kalman_update(kalman_predict(ks, 1, p), cv_box(t, 100, 3, 200, -2), p);
        ks = upd.state;
        last_innovation = upd.innovation.norm();
    }
    CHECK(last_innovation < 1e-6);
}

TEST_CASE("RTS smoothing reproduces exact constant-velocity data") {
    const KalmanParams p = zero_noise();
    std::vector<std::optional<Box>> meas;
    for (int t = 0; t < 20; ++t) meas.push_back(cv_box(t, 50, 4, 300, 1.5));
    const auto smoothed = rts_smooth(meas, p);
    for (int t = 0; t < 20; ++t) {
        const Box expect = cv_box(t, 50, 4, 300, 1.5);
        CHECK(std::abs(smoothed[t].x - expect.x) < 1e-6);
        CHECK(std::abs(smoothed[t].y - expect.y) < 1e-6);
        CHECK(std::abs(smoothed[t].w - expect.w) < 1e-6);
    }
}

TEST_CASE("RTS smoothing fills missing interior frames") {
    const KalmanParams p = zero_noise();
    std::vector<std::optional<Box>> meas;
    for (int t = 0; t < 10; ++t) {
        if (t == 5)
            meas.push_back(std::nullopt);
        else
            meas.push_back(cv_box(t, 0, 2, 0, 0));
    }
    const auto smoothed = rts_smooth(meas, p);
    const Box expect = cv_box(5, 0, 2, 0, 0);
    CHECK(std::abs(smoothed[5].cx() - expect.cx()) < 1e-3);
    CHECK(std::abs(smoothed[5].cy() - expect.cy()) < 1e-3);
}
