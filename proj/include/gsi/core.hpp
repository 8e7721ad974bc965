#ifndef GSI_CORE_HPP_
#define GSI_CORE_HPP_

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gsi {

inline constexpr double kPi = std::numbers::pi;

/// Normalize an angle to (-pi, pi].
inline double normalize_angle(double a) {
    a = std::fmod(a + kPi, 2.0 * kPi);
    if (a <= 0.0) a += 2.0 * kPi;
    return a - kPi;
}

inline bool is_finite(double v) { return std::isfinite(v); }

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
};

/// Planar pose: position in meters, heading in radians counterclockwise
/// from the positive x-axis, stored normalized to (-pi, pi].
struct Pose2 {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;

    Vec2 position() const { return {x, y}; }
};

struct KinematicLimits {
    double v_max = 1.5;  // m/s, maximum robot speed in any direction
    double a_max = 1.0;  // m/s^2, maximum deceleration

    void validate() const {
        if (!(v_max > 0.0) || !(a_max > 0.0))
            throw std::invalid_argument("KinematicLimits: v_max and a_max must be positive");
    }
};

enum class Zone { Intimate, Personal, Social, Public };

inline const char* zone_name(Zone z) {
    switch (z) {
        case Zone::Intimate: return "intimate";
        case Zone::Personal: return "personal";
        case Zone::Social: return "social";
        case Zone::Public: return "public";
    }
    return "?";
}

/// Proxemic zone radii. Boundaries belong to the inner zone.
struct ZoneModel {
    double intimate_radius = 0.46;
    double personal_radius = 1.2;
    double social_radius = 3.7;

    void validate() const {
        if (!(0.0 < intimate_radius && intimate_radius < personal_radius &&
              personal_radius < social_radius))
            throw std::invalid_argument("ZoneModel: radii must satisfy 0 < intimate < personal < social");
    }
};

/// State of one human relative to the robot. rel_velocity is positive
/// when human and robot are closing distance.
struct RelativeState {
    double distance = 0.0;      // m, >= 0
    double rel_velocity = 0.0;  // m/s, positive = closing
    double bearing = 0.0;       // rad in (-pi, pi], w.r.t. robot heading

    void validate() const {
        if (!is_finite(distance) || !is_finite(rel_velocity) || !is_finite(bearing))
            throw std::invalid_argument("RelativeState: non-finite field");
        if (distance < 0.0)
            throw std::invalid_argument("RelativeState: negative distance");
    }
};

/// Hyperparameters of the safety index plus robot kinematic limits.
struct SafetyParams {
    double rho = 1.0;    // kernel exponent, > 0
    double tau = 0.01;   // smooth-min temperature, > 0
    double d_min = 0.46; // m
    double d_max = 3.7;  // m
    KinematicLimits limits;

    void validate() const {
        if (!(rho > 0.0)) throw std::invalid_argument("SafetyParams: rho must be > 0");
        if (!(tau > 0.0)) throw std::invalid_argument("SafetyParams: tau must be > 0");
        if (!(0.0 <= d_min && d_min < d_max))
            throw std::invalid_argument("SafetyParams: need 0 <= d_min < d_max");
        limits.validate();
    }
};

inline double distance(const Vec2& a, const Vec2& b) {
    if (!is_finite(a.x) || !is_finite(a.y) || !is_finite(b.x) || !is_finite(b.y))
        throw std::invalid_argument("distance: non-finite input");
    return (b - a).norm();
}

inline double distance(const Pose2& robot, const Vec2& human) {
    return distance(robot.position(), human);
}

/// Bearing of the human w.r.t. the robot heading, in (-pi, pi].
/// Throws on coincident positions (direction undefined).
inline double bearing(const Pose2& robot, const Vec2& human) {
    const Vec2 rel = human - robot.position();
    if (rel.x == 0.0 && rel.y == 0.0)
        throw std::domain_error("bearing: human coincident with robot");
    return normalize_angle(std::atan2(rel.y, rel.x) - robot.theta);
}

inline Zone classify_zone(double d, const ZoneModel& zones = {}) {
    if (d < 0.0) throw std::invalid_argument("classify_zone: negative distance");
    if (d <= zones.intimate_radius) return Zone::Intimate;
    if (d <= zones.personal_radius) return Zone::Personal;
    if (d <= zones.social_radius) return Zone::Social;
    return Zone::Public;
}

}  // namespace gsi

#endif  // GSI_CORE_HPP_
