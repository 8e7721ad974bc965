#ifndef GSI_BASELINES_HPP_
#define GSI_BASELINES_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gsi/index.hpp"
#include "gsi/scenario.hpp"

namespace gsi {

enum class ScaleId { GSI, DI, KDF, HSF, HSA };

const char* scale_name(ScaleId s);
std::optional<ScaleId> scale_from_name(const std::string& name);
std::span<const ScaleId> all_scales();

/// Comparison-scale configuration. The kernel forms are reconstructions of
/// the cited originals; the constants are calibrated to reproduce the
/// documented qualitative pattern, not exact published values.
struct BaselineConfig {
    SafetyParams params;
    double kdf_k1 = 0.32;    // KDF field strength
    double hsa_cv = 0.3;     // HSA velocity decay rate
    double hsa_floor = 0.1;  // HSA velocity factor floor (> unsafe band)
};

/// Danger Index, inverted to a safety value. Product form: a stationary
/// robot reads as fully safe at any distance.
double di(double d, double v, const BaselineConfig& cfg);

/// Kinetostatic danger field 1/d kernel, normalized and inverted.
/// Strictly monotone in d and v in the unclamped region. d = 0 is singular.
double kdf(double d, double v, double theta, const BaselineConfig& cfg);

/// Distance-only safety field scaled by 1/d_max.
double hsf(double d, const BaselineConfig& cfg);

/// Saturating distance factor times a bounded velocity decay factor.
double hsa(double d, double v, const BaselineConfig& cfg);

/// Arithmetic-mean aggregation the comparison scales use for multiple
/// humans. Empty input is the no-humans condition.
std::optional<double> aggregate_mean(std::span<const double> values);

/// Single-human value of any scale on a RelativeState-style input.
double scale_value(ScaleId scale, double d, double v, double theta, const BaselineConfig& cfg);

struct MatrixCell {
    ScenarioId scenario = ScenarioId::A;
    ScaleId scale = ScaleId::GSI;
    bool multi_human = false;
    bool not_applicable = false;  // DI has no multi-human aggregation
    double value = 0.0;
    Appropriateness required = Appropriateness::Safe;
    bool match = false;
    bool reference_match = false;   // documented pattern for this cell
    bool known_deviation = false;   // reconstruction disagrees with it
};

struct AppropriatenessMatrix {
    std::vector<MatrixCell> cells;
    ScoreBands bands;

    const MatrixCell* find(ScenarioId sc, ScaleId sl, bool mh) const;
};

/// Evaluate every requested scale on one representative state per scenario
/// (single-human) and on that state plus two far scenario-A bystanders
/// (multi-human).
AppropriatenessMatrix appropriateness_matrix(std::span<const ScaleId> scales,
                                             const BaselineConfig& cfg,
                                             const ScoreBands& bands = {});

}  // namespace gsi

#endif  // GSI_BASELINES_HPP_
