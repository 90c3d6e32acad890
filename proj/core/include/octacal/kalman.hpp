#pragma once

#include <Eigen/Core>

#include <vector>

namespace octacal {

/// Filtered (fx, fy) state. Transition and observation matrices are both
/// identity, so predict only inflates the covariance.
struct KalmanState {
    Eigen::Vector2d x = Eigen::Vector2d::Zero();
    Eigen::Matrix2d p = Eigen::Matrix2d::Zero();
    int t = 0;
};

struct NoiseSchedule {
    Eigen::Vector2d q_diag = Eigen::Vector2d::Constant(1e-4); // process covariance
    double r0_frac = 0.05;     // R0 = (r0_frac * f_prior)^2
    double r_decay = 0.995;    // multiplicative decay per accepted measurement
    double r_min_frac = 0.005; // floor, (r_min_frac * f_prior)^2
    bool quality_weighting = true;

    double r_at(int step, double f_prior) const;
};

/// One per-view measurement with an optional quality (reprojection RMS).
struct Measurement {
    double fx = 0.0;
    double fy = 0.0;
    double quality = 0.0;
};

KalmanState predict(const KalmanState& state, const Eigen::Vector2d& q_diag);

KalmanState update(const KalmanState& state, const Eigen::Vector2d& z,
                   const Eigen::Matrix2d& r);

struct KalmanTrajectory {
    std::vector<KalmanState> states; // one per accepted measurement
    KalmanState final;
};

/// Fold a measurement sequence: the first one initializes the state with
/// P = R0 I, each following step runs predict then update with
/// R_t = max(R0 decay^t, R_min), scaled by (1 + quality) when enabled.
KalmanTrajectory run_sequence(const std::vector<Measurement>& measurements,
                              const NoiseSchedule& schedule);

} // namespace octacal
