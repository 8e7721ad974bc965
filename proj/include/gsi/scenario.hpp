#ifndef GSI_SCENARIO_HPP_
#define GSI_SCENARIO_HPP_

#include "gsi/core.hpp"

namespace gsi {

/// Stopping-zone scenario taxonomy over (distance, relative velocity).
enum class ScenarioId { A, B, C, D, E, F };

enum class Appropriateness { Safe, Between, Unsafe };

inline const char* scenario_name(ScenarioId s) {
    switch (s) {
        case ScenarioId::A: return "A";
        case ScenarioId::B: return "B";
        case ScenarioId::C: return "C";
        case ScenarioId::D: return "D";
        case ScenarioId::E: return "E";
        case ScenarioId::F: return "F";
    }
    return "?";
}

inline const char* appropriateness_name(Appropriateness a) {
    switch (a) {
        case Appropriateness::Safe: return "Safe";
        case Appropriateness::Between: return "Between";
        case Appropriateness::Unsafe: return "Unsafe";
    }
    return "?";
}

struct ScenarioLabel {
    ScenarioId id = ScenarioId::A;
    Zone stopping_zone = Zone::Public;
    Appropriateness appropriate = Appropriateness::Safe;
    bool on_boundary = false;  // stopping point exactly at d_min or d_max
};

/// Classify a (distance, velocity) state by the zone of the robot's
/// projected stopping point. Ties at zone boundaries resolve toward the
/// less safe scenario.
ScenarioLabel classify_scenario(double d, double v, const SafetyParams& p);

struct ScoreBands {
    double unsafe_max = 0.05;
    double safe_min = 0.95;

    void validate() const {
        if (!(0.0 < unsafe_max && unsafe_max < safe_min && safe_min < 1.0))
            throw std::invalid_argument("ScoreBands: need 0 < unsafe_max < safe_min < 1");
    }
};

/// Three-way reading of a continuous scale output.
Appropriateness band_of(double value, const ScoreBands& bands = {});

/// Whether a scale output lands in the band required by the scenario.
bool score_scale(double value, const ScenarioLabel& label, const ScoreBands& bands = {});

}  // namespace gsi

#endif  // GSI_SCENARIO_HPP_
