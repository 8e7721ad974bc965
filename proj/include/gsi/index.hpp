#ifndef GSI_INDEX_HPP_
#define GSI_INDEX_HPP_

#include <optional>
#include <span>
#include <vector>

#include "gsi/core.hpp"
#include "gsi/estimation.hpp"
#include "gsi/scenario.hpp"

namespace gsi {

/// Scalar safety index of a single human. raw_base is the normalized
/// distance-minus-stopping-distance term before clamping and before the
/// rho exponent; it can be negative (breach) or exceed 1 and is kept for
/// gradient/control use. value is the clamped [0, 1] report.
struct GsiHat {
    double raw_base = 0.0;
    double value = 0.0;
};

GsiHat gsi_hat(double d, double v, const SafetyParams& p);

/// Bearing-scaled safety: 1 - (1 - ghat) * cos(theta), with cos(theta)
/// clamped to [0, 1] so humans behind the heading half-plane read as safe.
double gsi_directional(double gsi_hat_clamped, double theta);

/// Smooth minimum (LogSumExp) of per-human directional values. Evaluated
/// with the minimum factored out so large -x/tau never overflows.
double gsi_collective(std::span<const double> values, double tau);

/// A human expressed in the world frame with its relative closing speed,
/// the input of the pose-based gradient.
struct WorldHuman {
    Vec2 position;
    double rel_velocity = 0.0;
};

struct GradientResult {
    Vec2 vector;               // magnitude = collective GSI, direction of steepest increase
    double collective = 0.0;
    bool flat = false;         // clamped plateau, gradient numerically zero
};

/// Central finite-difference gradient of the collective GSI w.r.t. the
/// robot (x, y), scaled so the emitted vector's magnitude equals the
/// collective GSI itself.
GradientResult gsi_gradient(const Pose2& robot, std::span<const WorldHuman> humans,
                            const SafetyParams& p, double step = 0.01);

/// Collective GSI of the given world-frame scene at the given robot pose.
double collective_at(const Pose2& robot, std::span<const WorldHuman> humans,
                     const SafetyParams& p);

struct PerHumanSafety {
    int human_id = 0;
    double distance = 0.0;
    double rel_velocity = 0.0;
    double bearing = 0.0;
    double gsi_hat = 0.0;          // clamped scalar index
    double gsi_directional = 0.0;
    Zone zone = Zone::Public;
    ScenarioLabel scenario;
    bool degraded = false;
};

/// Per-timestamp output. collective is absent when no humans have a valid
/// state ("fully safe frame, no humans in range" is reported distinctly,
/// never as 0 or 1).
struct SafetyFrame {
    double timestamp = 0.0;
    std::vector<PerHumanSafety> per_human;
    std::optional<double> collective;
    std::optional<GradientResult> gradient;
};

SafetyFrame evaluate_frame(const Pose2& robot, std::span<const HumanTrack> tracks,
                           const SafetyParams& p, double timestamp = 0.0,
                           bool with_gradient = false, const ZoneModel& zones = {});

/// State already associated with a human id (e.g. ground-truth replay).
struct IdentifiedState {
    int human_id = 0;
    RelativeState state;
    bool degraded = false;
};

SafetyFrame evaluate_frame(const Pose2& robot, std::span<const IdentifiedState> states,
                           const SafetyParams& p, double timestamp = 0.0,
                           bool with_gradient = false, const ZoneModel& zones = {});

}  // namespace gsi

#endif  // GSI_INDEX_HPP_
