#ifndef GSI_ESTIMATION_HPP_
#define GSI_ESTIMATION_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gsi/core.hpp"

namespace gsi {

/// One skeletal keypoint observation: distance of the keypoint from the
/// robot plus the detector confidence used as a fusion weight.
struct KeypointDetection {
    int keypoint_id = 0;
    double rel_distance = 0.0;  // m, >= 0
    double confidence = 0.0;    // [0, 1]
};

struct EstimatorConfig {
    double confidence_threshold = 0.9;
    double sample_period = 1.0 / 30.0;  // s between consecutive frames
    int dropout_timeout = 5;            // frames before a track history is evicted

    void validate() const {
        if (!(confidence_threshold > 0.0 && confidence_threshold <= 1.0))
            throw std::invalid_argument("EstimatorConfig: confidence_threshold must be in (0, 1]");
        if (!(sample_period > 0.0))
            throw std::invalid_argument("EstimatorConfig: sample_period must be > 0");
        if (dropout_timeout < 1)
            throw std::invalid_argument("EstimatorConfig: dropout_timeout must be >= 1");
    }
};

/// Confidence-weighted fusion of keypoint distances. Keypoints below the
/// confidence threshold are dropped; surviving weights are renormalized to
/// sum to one. Returns nullopt when nothing passes the threshold.
std::optional<double> fuse_keypoints(std::span<const KeypointDetection> detections,
                                     const EstimatorConfig& cfg);

struct VelocityEstimate {
    double value = 0.0;     // m/s, positive = closing
    bool degraded = false;  // fell back to first difference (negative radicand)
};

/// Three-sample relative-velocity estimate from consecutive fused distances
/// spaced exactly T seconds apart. Sign comes from the latest first
/// difference: decreasing distance means closing (positive).
VelocityEstimate estimate_velocity(double d_tm2, double d_tm1, double d_t, double T);

/// Per-human measurement track. Keeps a 3-deep distance history; any frame
/// gap resets the history so no estimate ever spans a dropout.
class HumanTrack {
public:
    explicit HumanTrack(int human_id) : id_(human_id) {}

    /// Advance the track by one frame. fused_distance is absent on dropout.
    /// Frame indices must be strictly increasing.
    void update(std::optional<double> fused_distance, double bearing_rad,
                std::int64_t frame, const EstimatorConfig& cfg);

    int id() const { return id_; }
    std::int64_t last_seen() const { return last_seen_; }
    const std::optional<RelativeState>& latest_state() const { return state_; }
    bool degraded() const { return degraded_; }
    int history_size() const { return hist_n_; }

    /// True once the track has been unseen longer than the dropout timeout.
    bool stale(std::int64_t frame, const EstimatorConfig& cfg) const {
        return last_seen_ >= 0 && frame - last_seen_ > cfg.dropout_timeout;
    }

private:
    int id_;
    std::array<double, 3> hist_{};  // oldest first
    int hist_n_ = 0;
    std::int64_t last_seen_ = -1;
    std::int64_t last_update_ = -1;
    std::optional<RelativeState> state_;
    bool degraded_ = false;
};

}  // namespace gsi

#endif  // GSI_ESTIMATION_HPP_
