#include "gsi/index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gsi {

namespace {

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

GsiHat gsi_hat(double d, double v, const SafetyParams& p) {
    p.validate();
    if (!is_finite(d) || !is_finite(v) || d < 0.0)
        throw std::invalid_argument("gsi_hat: invalid (d, v)");
    const double stop_term = sign_of(v) * v * v / (2.0 * p.limits.a_max);
    const double base = (d - (stop_term + p.d_min)) / (p.d_max - p.d_min);
    GsiHat out;
    out.raw_base = base;
    out.value = std::min(std::pow(std::max(base, 0.0), p.rho), 1.0);
    return out;
}

double gsi_directional(double gsi_hat_clamped, double theta) {
    if (!(gsi_hat_clamped >= 0.0 && gsi_hat_clamped <= 1.0))
        throw std::invalid_argument("gsi_directional: value outside [0, 1]");
    const double c = clamp01(std::cos(theta));
    return 1.0 - (1.0 - gsi_hat_clamped) * c;
}

double gsi_collective(std::span<const double> values, double tau) {
    if (values.empty())
        throw std::invalid_argument("gsi_collective: empty value list (no-humans is reported by the caller)");
    if (!(tau > 0.0)) throw std::invalid_argument("gsi_collective: tau must be > 0");
    const double m = *std::min_element(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += std::exp(-(v - m) / tau);
    return m - tau * (std::log(sum) - std::log(static_cast<double>(values.size())));
}

double collective_at(const Pose2& robot, std::span<const WorldHuman> humans,
                     const SafetyParams& p) {
    std::vector<double> vals;
    vals.reserve(humans.size());
    for (const auto& h : humans) {
        const double d = distance(robot, h.position);
        const double th = bearing(robot, h.position);
        vals.push_back(gsi_directional(gsi_hat(d, h.rel_velocity, p).value, th));
    }
    return gsi_collective(vals, p.tau);
}

GradientResult gsi_gradient(const Pose2& robot, std::span<const WorldHuman> humans,
                            const SafetyParams& p, double step) {
    if (humans.empty()) throw std::invalid_argument("gsi_gradient: no humans");
    if (!(step > 0.0)) throw std::invalid_argument("gsi_gradient: step must be > 0");

    GradientResult out;
    out.collective = collective_at(robot, humans, p);

    Pose2 px = robot, mx = robot, py = robot, my = robot;
    px.x += step;
    mx.x -= step;
    py.y += step;
    my.y -= step;
    const Vec2 grad{(collective_at(px, humans, p) - collective_at(mx, humans, p)) / (2.0 * step),
                    (collective_at(py, humans, p) - collective_at(my, humans, p)) / (2.0 * step)};
    const double n = grad.norm();
    if (n < 1e-12) {
        out.flat = true;
        out.vector = {0.0, 0.0};
        return out;
    }
    out.vector = grad * (out.collective / n);
    return out;
}

SafetyFrame evaluate_frame(const Pose2& robot, std::span<const IdentifiedState> states,
                           const SafetyParams& p, double timestamp,
                           bool with_gradient, const ZoneModel& zones) {
    p.validate();
    SafetyFrame frame;
    frame.timestamp = timestamp;

    std::vector<double> directional;
    std::vector<WorldHuman> world;
    for (const auto& s : states) {
        s.state.validate();
        PerHumanSafety ph;
        ph.human_id = s.human_id;
        ph.distance = s.state.distance;
        ph.rel_velocity = s.state.rel_velocity;
        ph.bearing = s.state.bearing;
        ph.degraded = s.degraded;
        ph.gsi_hat = gsi_hat(s.state.distance, s.state.rel_velocity, p).value;
        ph.gsi_directional = gsi_directional(ph.gsi_hat, s.state.bearing);
        ph.zone = classify_zone(s.state.distance, zones);
        ph.scenario = classify_scenario(s.state.distance, s.state.rel_velocity, p);
        directional.push_back(ph.gsi_directional);
        if (with_gradient && s.state.distance > 0.0) {
            const double a = robot.theta + s.state.bearing;
            world.push_back({robot.position() + Vec2{std::cos(a), std::sin(a)} * s.state.distance,
                             s.state.rel_velocity});
        }
        frame.per_human.push_back(ph);
    }

    if (!directional.empty()) {
        frame.collective = gsi_collective(directional, p.tau);
        if (with_gradient && !world.empty())
            frame.gradient = gsi_gradient(robot, world, p);
    }
    return frame;
}

SafetyFrame evaluate_frame(const Pose2& robot, std::span<const HumanTrack> tracks,
                           const SafetyParams& p, double timestamp,
                           bool with_gradient, const ZoneModel& zones) {
    std::vector<IdentifiedState> states;
    states.reserve(tracks.size());
    for (const auto& track : tracks) {
        const auto& state = track.latest_state();
        if (!state) continue;  // dropped estimates are not used
        states.push_back({track.id(), *state, track.degraded()});
    }
    return evaluate_frame(robot, std::span<const IdentifiedState>(states), p, timestamp,
                          with_gradient, zones);
}

}  // namespace gsi
