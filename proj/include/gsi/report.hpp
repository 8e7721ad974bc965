#ifndef GSI_REPORT_HPP_
#define GSI_REPORT_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "gsi/config.hpp"
#include "gsi/sim.hpp"

namespace gsi {

/// Summary block of a replay: collective-GSI statistics, time spent per
/// scenario, and estimator error when ground truth was available.
struct ReplaySummary {
    std::int64_t frames = 0;
    std::int64_t frames_with_humans = 0;
    double collective_min = 0.0;
    double collective_mean = 0.0;
    double collective_p05 = 0.0;
    double collective_p50 = 0.0;
    double collective_p95 = 0.0;
    // Fraction of (frame, human) samples per scenario A..F.
    std::vector<double> scenario_fraction = std::vector<double>(6, 0.0);
    EstimatorErrorSummary error;
};

ReplaySummary summarize(const ReplayResult& result);
std::string summary_to_json(const ReplaySummary& s, const RunConfig& cfg);

/// Per-(frame, human) CSV of the safety series. Angles are emitted in
/// degrees; the effective configuration is echoed as '#' comment lines.
void write_evaluate_csv(const ReplayResult& result, const RunConfig& cfg, std::ostream& out);
void write_evaluate_jsonl(const ReplayResult& result, const RunConfig& cfg, std::ostream& out);

/// Per-frame aggregated series for every requested scale.
void write_compare_csv(const ReplayResult& result, const RunConfig& cfg, std::ostream& out);

void write_matrix_csv(const AppropriatenessMatrix& m, const RunConfig& cfg, std::ostream& out);
std::string matrix_grid(const AppropriatenessMatrix& m);

/// rho sweep: clamped scalar index over a distance grid at v = 0, one
/// column per rho value.
void write_rho_sweep_csv(const std::vector<double>& rho_grid, const SafetyParams& base,
                         const RunConfig& cfg, std::ostream& out);

/// tau sweep: collective value of a fixed set of individual safety values.
void write_tau_sweep_csv(const std::vector<double>& tau_grid,
                         const std::vector<double>& values, const RunConfig& cfg,
                         std::ostream& out);

}  // namespace gsi

#endif  // GSI_REPORT_HPP_
