#ifndef GSI_CONFIG_HPP_
#define GSI_CONFIG_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>

#include "gsi/baselines.hpp"
#include "gsi/estimation.hpp"
#include "gsi/sim.hpp"

namespace gsi {

/// Effective run configuration. Loaded from flat key=value files and
/// overridable per flag; the echo string is embedded in every output.
struct RunConfig {
    SafetyParams params;
    EstimatorConfig estimator;
    BaselineConfig baselines;
    ScoreBands bands;
    double sample_rate = 30.0;
    std::string noise_preset = "none";
    std::uint64_t seed = 0;
    std::vector<ScaleId> scales{ScaleId::GSI, ScaleId::DI, ScaleId::KDF, ScaleId::HSF,
                                ScaleId::HSA};

    void validate() const;

    /// Apply one key=value pair; throws with the key name on bad input.
    void apply(const std::string& key, const std::string& value);

    /// Single-line "k=v k=v ..." form for reproducibility headers.
    std::string echo() const;
};

/// Parse a flat key=value config file ('#' starts a comment).
RunConfig load_config(std::istream& in, RunConfig base = {});
RunConfig load_config_file(const std::string& path, RunConfig base = {});

}  // namespace gsi

#endif  // GSI_CONFIG_HPP_
