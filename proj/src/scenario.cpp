#include "gsi/scenario.hpp"

#include <cmath>

namespace gsi {

namespace {

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

Zone stopping_zone_of(double d_stop, const SafetyParams& p) {
    // Scenario reading of the stopping point: the d_max boundary belongs to
    // the public (safe) side, the d_min boundary to the intimate (unsafe)
    // side, matching the non-strict inequalities of the taxonomy.
    if (d_stop <= p.d_min) return Zone::Intimate;
    if (d_stop >= p.d_max) return Zone::Public;
    ZoneModel zm;
    zm.intimate_radius = p.d_min > 0.0 ? p.d_min : 1e-9;
    zm.social_radius = p.d_max;
    if (zm.personal_radius <= zm.intimate_radius || zm.personal_radius >= zm.social_radius)
        zm.personal_radius = 0.5 * (zm.intimate_radius + zm.social_radius);
    return classify_zone(d_stop, zm);
}

}  // namespace

ScenarioLabel classify_scenario(double d, double v, const SafetyParams& p) {
    p.validate();
    if (!(d >= 0.0) || !is_finite(d) || !is_finite(v))
        throw std::invalid_argument("classify_scenario: invalid (d, v)");

    const double stop_term = sign_of(v) * v * v / (2.0 * p.limits.a_max);
    const double d_stop = std::max(d - stop_term, 0.0);

    ScenarioLabel label;
    label.stopping_zone = stopping_zone_of(d_stop, p);
    label.on_boundary = (d_stop == p.d_min) || (d_stop == p.d_max);

    if (v > 0.0) {
        if (d_stop <= p.d_min) {
            // Unsafe rows win ties; starting from the public zone is E,
            // already within stopping reach of the intimate zone is F.
            label.id = (d >= p.d_max) ? ScenarioId::E : ScenarioId::F;
            label.appropriate = Appropriateness::Unsafe;
        } else if (d_stop >= p.d_max) {
            label.id = ScenarioId::B;
            label.appropriate = Appropriateness::Safe;
        } else {
            label.id = ScenarioId::C;
            label.appropriate = Appropriateness::Between;
        }
    } else {
        if (d_stop <= p.d_min) {
            label.id = ScenarioId::F;
            label.appropriate = Appropriateness::Unsafe;
        } else if (d_stop >= p.d_max) {
            label.id = ScenarioId::A;
            label.appropriate = Appropriateness::Safe;
        } else {
            label.id = ScenarioId::D;
            label.appropriate = Appropriateness::Between;
        }
    }
    return label;
}

Appropriateness band_of(double value, const ScoreBands& bands) {
    bands.validate();
    if (value <= bands.unsafe_max) return Appropriateness::Unsafe;
    if (value >= bands.safe_min) return Appropriateness::Safe;
    return Appropriateness::Between;
}

bool score_scale(double value, const ScenarioLabel& label, const ScoreBands& bands) {
    if (!(value >= 0.0 && value <= 1.0))
        throw std::invalid_argument("score_scale: value outside [0, 1]");
    return band_of(value, bands) == label.appropriate;
}

}  // namespace gsi
