#ifndef GSI_SIM_HPP_
#define GSI_SIM_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gsi/baselines.hpp"
#include "gsi/estimation.hpp"
#include "gsi/index.hpp"

namespace gsi {

struct Knot {
    double t = 0.0;  // s, strictly increasing per agent
    Vec2 pos;
};

struct AgentScript {
    int id = 0;
    std::vector<Knot> knots;
};

/// Waypoint-driven scene: piecewise-linear agent trajectories. Robot
/// heading follows its velocity unless a fixed heading is given.
struct WaypointScript {
    std::vector<Knot> robot_knots;
    std::optional<double> robot_heading;  // rad; overrides velocity heading
    std::vector<AgentScript> humans;
    double max_human_speed = 2.0;  // m/s validation bound

    double duration() const;
};

/// Sensor noise injection. distance_mape_pct is the target mean absolute
/// percentage error of the fused distance; internally a shared
/// multiplicative Gaussian factor is applied to all keypoints of a frame.
struct NoiseModel {
    double distance_mape_pct = 0.0;
    double keypoint_jitter = 0.01;   // m, independent per-keypoint
    double conf_base = 0.97;
    double conf_decay = 0.002;       // confidence loss per meter
    double conf_noise = 0.01;
    double bearing_noise = 0.0;      // rad std dev
    double dropout_probability = 0.0;

    void validate() const;
    static NoiseModel preset(const std::string& name);  // none | task-robot | observer
};

struct GroundTruth {
    double distance = 0.0;
    double rel_velocity = 0.0;
    double bearing = 0.0;
    ScenarioId scenario = ScenarioId::A;
};

struct HumanObservation {
    int id = 0;
    bool dropped = false;
    double bearing = 0.0;  // observed bearing, rad
    std::vector<KeypointDetection> keypoints;
    std::optional<GroundTruth> truth;
};

struct TrackLogHeader {
    double rate = 30.0;
    std::uint64_t seed = 0;
    std::string experiment;  // empty for custom scripts
    std::string noise_preset = "none";
    SafetyParams params;
    std::vector<int> agent_ids;
};

struct TrackLogFrame {
    std::int64_t frame = 0;
    double t = 0.0;
    Pose2 robot;
    std::vector<HumanObservation> humans;
};

struct TrackLog {
    TrackLogHeader header;
    std::vector<TrackLogFrame> frames;
};

/// Sample a script at the given rate, emitting ground-truth relative
/// states alongside noisy keypoint observations. Deterministic per seed.
TrackLog generate(const WaypointScript& script, double rate, const NoiseModel& noise,
                  std::uint64_t seed, const SafetyParams& params = {});

/// The four scripted three-human behaviors:
/// approach-retreat, two-approach, cross, random.
TrackLog scripted_experiment(const std::string& name, std::uint64_t seed,
                             double rate = 30.0,
                             const NoiseModel& noise = {});

void write_tracklog(const TrackLog& log, std::ostream& out);
std::string tracklog_to_string(const TrackLog& log);
TrackLog read_tracklog(std::istream& in);
TrackLog read_tracklog_file(const std::string& path);
void write_tracklog_file(const TrackLog& log, const std::string& path);

struct ReplayOptions {
    bool use_ground_truth = false;  // bypass the estimator even if keypoints exist
    bool with_gradient = false;
    EstimatorConfig estimator;
};

struct ReplayFrame {
    std::int64_t frame = 0;
    double t = 0.0;
    SafetyFrame safety;
    // Aggregated per-scale value: collective for GSI, mean for the rest.
    std::map<ScaleId, std::optional<double>> scale_agg;
    // Ground-truth scenario per human, when the log carries truth.
    std::map<int, ScenarioId> truth_scenarios;
};

struct EstimatorErrorSummary {
    bool available = false;
    double distance_mape_pct = 0.0;
    double velocity_mape_pct = 0.0;
    std::int64_t distance_samples = 0;
    std::int64_t velocity_samples = 0;
};

struct ReplayResult {
    TrackLogHeader header;
    std::vector<ReplayFrame> frames;
    EstimatorErrorSummary error;
    bool used_estimator = false;
};

ReplayResult replay(const TrackLog& log, const SafetyParams& params,
                    std::span<const ScaleId> scales, const BaselineConfig& baselines,
                    const ReplayOptions& opts = {});

}  // namespace gsi

#endif  // GSI_SIM_HPP_
