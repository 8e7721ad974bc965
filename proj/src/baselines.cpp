#include "gsi/baselines.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

namespace gsi {

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

const char* scale_name(ScaleId s) {
    switch (s) {
        case ScaleId::GSI: return "GSI";
        case ScaleId::DI: return "DI";
        case ScaleId::KDF: return "KDF";
        case ScaleId::HSF: return "HSF";
        case ScaleId::HSA: return "HSA";
    }
    return "?";
}

std::optional<ScaleId> scale_from_name(const std::string& name) {
    std::string up;
    for (char c : name) up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (up == "GSI") return ScaleId::GSI;
    if (up == "DI") return ScaleId::DI;
    if (up == "KDF") return ScaleId::KDF;
    if (up == "HSF") return ScaleId::HSF;
    if (up == "HSA") return ScaleId::HSA;
    return std::nullopt;
}

std::span<const ScaleId> all_scales() {
    static const std::array<ScaleId, 5> scales{ScaleId::GSI, ScaleId::DI, ScaleId::KDF,
                                              ScaleId::HSF, ScaleId::HSA};
    return scales;
}

double di(double d, double v, const BaselineConfig& cfg) {
    const auto& p = cfg.params;
    if (d < 0.0) throw std::invalid_argument("di: negative distance");
    const double f_d = clamp01((p.d_max - d) / (p.d_max - p.d_min));
    const double f_v = clamp01(v / p.limits.v_max);
    return 1.0 - f_d * f_v;
}

double kdf(double d, double v, double theta, const BaselineConfig& cfg) {
    const auto& p = cfg.params;
    if (!(d > 0.0)) throw std::domain_error("kdf: singular field at d = 0");
    const double v_hat = std::clamp(v, 0.0, p.limits.v_max) / p.limits.v_max;
    const double danger = (cfg.kdf_k1 / d) * (1.0 + v_hat * std::max(std::cos(theta), 0.0));
    return clamp01(1.0 - danger);
}

double hsf(double d, const BaselineConfig& cfg) {
    if (d < 0.0) throw std::invalid_argument("hsf: negative distance");
    return std::min(d / cfg.params.d_max, 1.0);
}

double hsa(double d, double v, const BaselineConfig& cfg) {
    if (d < 0.0) throw std::invalid_argument("hsa: negative distance");
    const double delta_d = std::min(d / cfg.params.d_max, 1.0);
    const double v_pos = std::max(v, 0.0);
    const double delta_v = std::max(std::exp(-cfg.hsa_cv * v_pos * v_pos), cfg.hsa_floor);
    return delta_d * delta_v;
}

std::optional<double> aggregate_mean(std::span<const double> values) {
    if (values.empty()) return std::nullopt;
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

double scale_value(ScaleId scale, double d, double v, double theta, const BaselineConfig& cfg) {
    switch (scale) {
        case ScaleId::GSI: return gsi_directional(gsi_hat(d, v, cfg.params).value, theta);
        case ScaleId::DI: return di(d, v, cfg);
        case ScaleId::KDF: return kdf(d, v, theta, cfg);
        case ScaleId::HSF: return hsf(d, cfg);
        case ScaleId::HSA: return hsa(d, v, cfg);
    }
    throw std::invalid_argument("scale_value: unknown scale");
}

const MatrixCell* AppropriatenessMatrix::find(ScenarioId sc, ScaleId sl, bool mh) const {
    for (const auto& c : cells)
        if (c.scenario == sc && c.scale == sl && c.multi_human == mh) return &c;
    return nullptr;
}

namespace {

struct RepPoint {
    ScenarioId id;
    double d;
    double v;
};

// One representative (d, v) per scenario, chosen well inside each region
// for the default parameter set.
constexpr std::array<RepPoint, 6> kRepPoints{{
    {ScenarioId::A, 8.0, -0.5},
    {ScenarioId::B, 8.0, 0.1},
    {ScenarioId::C, 4.0, 1.6},
    {ScenarioId::D, 3.0, 0.0},
    {ScenarioId::E, 4.0, 2.7},
    {ScenarioId::F, 0.3, 2.5},
}};

// Bystanders for the multi-human variant: scenario A, dead ahead, far
// enough that every scale reads them as fully safe.
constexpr double kBystanderD = 200.0;
constexpr double kBystanderV = -0.5;

// Documented reference pattern (match = true means the scale is reported
// as landing in the required band for that cell).
bool reference_pattern(ScaleId scale, ScenarioId sc, bool mh) {
    using S = ScenarioId;
    switch (scale) {
        case ScaleId::GSI:
            return true;
        case ScaleId::DI:
            // Single-human reference: correct only at A, B (and marked
            // incorrect at F). Multi-human is N/A, handled by the caller.
            return sc == S::A || sc == S::B;
        case ScaleId::KDF:
            if (!mh) return true;
            return sc == S::A || sc == S::B || sc == S::C;
        case ScaleId::HSF:
            return sc == S::A || sc == S::B || sc == S::D;
        case ScaleId::HSA:
            return sc != S::E;
    }
    return false;
}

}  // namespace

AppropriatenessMatrix appropriateness_matrix(std::span<const ScaleId> scales,
                                             const BaselineConfig& cfg,
                                             const ScoreBands& bands) {
    bands.validate();
    cfg.params.validate();
    AppropriatenessMatrix matrix;
    matrix.bands = bands;

    for (const auto& rep : kRepPoints) {
        const auto label = classify_scenario(rep.d, rep.v, cfg.params);
        for (ScaleId scale : scales) {
            // Single-human cell.
            MatrixCell sh;
            sh.scenario = rep.id;
            sh.scale = scale;
            sh.multi_human = false;
            sh.required = label.appropriate;
            sh.value = scale_value(scale, rep.d, rep.v, 0.0, cfg);
            sh.match = score_scale(sh.value, label, bands);
            sh.reference_match = reference_pattern(scale, rep.id, false);
            sh.known_deviation = (sh.match != sh.reference_match);
            matrix.cells.push_back(sh);

            // Multi-human cell: target human plus two scenario-A bystanders.
            MatrixCell mh = sh;
            mh.multi_human = true;
            if (scale == ScaleId::DI) {
                mh.not_applicable = true;
                mh.value = 0.0;
                mh.match = false;
                mh.reference_match = false;
                mh.known_deviation = false;
            } else {
                const std::array<double, 3> vals{
                    scale_value(scale, rep.d, rep.v, 0.0, cfg),
                    scale_value(scale, kBystanderD, kBystanderV, 0.0, cfg),
                    scale_value(scale, kBystanderD, kBystanderV, 0.0, cfg)};
                if (scale == ScaleId::GSI) {
                    mh.value = gsi_collective(vals, cfg.params.tau);
                } else {
                    mh.value = *aggregate_mean(vals);
                }
                mh.match = score_scale(mh.value, label, bands);
                mh.reference_match = reference_pattern(scale, rep.id, true);
                mh.known_deviation = (mh.match != mh.reference_match);
            }
            matrix.cells.push_back(mh);
        }
    }
    return matrix;
}

}  // namespace gsi
