#include "gsi/estimation.hpp"

#include <cmath>

namespace gsi {

std::optional<double> fuse_keypoints(std::span<const KeypointDetection> detections,
                                     const EstimatorConfig& cfg) {
    cfg.validate();
    double wsum = 0.0;
    double acc = 0.0;
    for (const auto& kp : detections) {
        if (kp.rel_distance < 0.0)
            throw std::invalid_argument("fuse_keypoints: negative keypoint distance");
        if (!(kp.confidence >= 0.0 && kp.confidence <= 1.0))
            throw std::invalid_argument("fuse_keypoints: confidence outside [0, 1]");
        if (kp.confidence < cfg.confidence_threshold) continue;
        wsum += kp.confidence;
        acc += kp.confidence * kp.rel_distance;
    }
    if (wsum <= 0.0) return std::nullopt;
    return acc / wsum;
}

VelocityEstimate estimate_velocity(double d_tm2, double d_tm1, double d_t, double T) {
    if (!(T > 0.0)) throw std::invalid_argument("estimate_velocity: T must be > 0");
    if (d_tm2 < 0.0 || d_tm1 < 0.0 || d_t < 0.0)
        throw std::invalid_argument("estimate_velocity: negative distance");
    const double radicand = (d_tm2 * d_tm2 - 2.0 * d_tm1 * d_tm1 + d_t * d_t) / 2.0;
    const double sign = (d_tm1 > d_t) ? 1.0 : (d_tm1 < d_t ? -1.0 : 0.0);
    if (radicand < 0.0) {
        // Non-monotone motion or noise; keep the stream alive with the
        // signed first difference and flag the sample.
        return {(d_tm1 - d_t) / T, true};
    }
    return {sign * std::sqrt(radicand) / T, false};
}

void HumanTrack::update(std::optional<double> fused_distance, double bearing_rad,
                        std::int64_t frame, const EstimatorConfig& cfg) {
    cfg.validate();
    if (frame <= last_update_)
        throw std::invalid_argument("HumanTrack::update: frame index must be strictly increasing");
    last_update_ = frame;

    if (!fused_distance) {
        state_.reset();
        degraded_ = false;
        if (last_seen_ >= 0 && frame - last_seen_ > cfg.dropout_timeout) {
            hist_n_ = 0;  // evict stale history
        }
        return;
    }

    if (*fused_distance < 0.0)
        throw std::invalid_argument("HumanTrack::update: negative fused distance");

    // A gap in detections invalidates the fixed-T spacing assumption.
    if (last_seen_ >= 0 && frame != last_seen_ + 1) hist_n_ = 0;
    last_seen_ = frame;

    if (hist_n_ == 3) {
        hist_[0] = hist_[1];
        hist_[1] = hist_[2];
        hist_[2] = *fused_distance;
    } else {
        hist_[hist_n_++] = *fused_distance;
    }

    if (hist_n_ < 3) {
        state_.reset();
        degraded_ = false;
        return;
    }

    const auto v = estimate_velocity(hist_[0], hist_[1], hist_[2], cfg.sample_period);
    state_ = RelativeState{hist_[2], v.value, normalize_angle(bearing_rad)};
    degraded_ = v.degraded;
}

}  // namespace gsi
