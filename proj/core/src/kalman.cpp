#include "octacal/kalman.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace octacal {

double NoiseSchedule::r_at(int step, double f_prior) const {
    const double r0 = (r0_frac * f_prior) * (r0_frac * f_prior);
    const double r_min = (r_min_frac * f_prior) * (r_min_frac * f_prior);
    return std::max(r0 * std::pow(r_decay, step), r_min);
}

KalmanState predict(const KalmanState& state, const Eigen::Vector2d& q_diag) {
    KalmanState out = state;
    out.p(0, 0) += q_diag(0);
    out.p(1, 1) += q_diag(1);
    return out;
}

KalmanState update(const KalmanState& state, const Eigen::Vector2d& z,
                   const Eigen::Matrix2d& r) {
    if (r(0, 0) <= 0.0 || r(1, 1) <= 0.0 || r.determinant() <= 0.0)
        throw std::invalid_argument("kalman update: R must be positive definite");

    const Eigen::Matrix2d k = state.p * (state.p + r).inverse();
    KalmanState out;
    out.x = state.x + k * (z - state.x);
    out.p = (Eigen::Matrix2d::Identity() - k) * state.p;
    out.t = state.t + 1;
    return out;
}

KalmanTrajectory run_sequence(const std::vector<Measurement>& measurements,
                              const NoiseSchedule& schedule) {
    if (measurements.empty())
        throw std::invalid_argument("run_sequence: empty measurement list");

    KalmanTrajectory traj;
    traj.states.reserve(measurements.size());

    const double f_prior = 0.5 * (measurements.front().fx + measurements.front().fy);

    KalmanState state;
    state.x = {measurements.front().fx, measurements.front().fy};
    const double r0 = schedule.r_at(0, f_prior);
    state.p = Eigen::Matrix2d::Identity() * r0;
    state.t = 1;
    traj.states.push_back(state);

    for (size_t i = 1; i < measurements.size(); ++i) {
        state = predict(state, schedule.q_diag);
        double r = schedule.r_at(static_cast<int>(i), f_prior);
        if (schedule.quality_weighting) r *= 1.0 + measurements[i].quality;
        const Eigen::Vector2d z(measurements[i].fx, measurements[i].fy);
        state = update(state, z, Eigen::Matrix2d::Identity() * r);
        traj.states.push_back(state);
    }
    traj.final = state;
    return traj;
}

} // namespace octacal
