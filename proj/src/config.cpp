#include "gsi/config.hpp"

#include <fstream>
#include <sstream>

namespace gsi {

namespace {

double parse_double(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: " + key + ": not a number: '" + value + "'");
    }
    if (pos != value.size())
        throw std::invalid_argument("config: " + key + ": trailing characters in '" + value + "'");
    return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        return std::stoull(value);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: " + key + ": not an integer: '" + value + "'");
    }
}

}  // namespace

void RunConfig::validate() const {
    params.validate();
    estimator.validate();
    bands.validate();
    baselines.params.validate();
    if (!(sample_rate > 0.0)) throw std::invalid_argument("config: sample_rate must be > 0");
    if (scales.empty()) throw std::invalid_argument("config: no scales selected");
    NoiseModel::preset(noise_preset);  // throws on unknown preset
}

void RunConfig::apply(const std::string& key, const std::string& value) {
    if (key == "rho") params.rho = parse_double(key, value);
    else if (key == "tau") params.tau = parse_double(key, value);
    else if (key == "d_min") params.d_min = parse_double(key, value);
    else if (key == "d_max") params.d_max = parse_double(key, value);
    else if (key == "a_max") params.limits.a_max = parse_double(key, value);
    else if (key == "v_max") params.limits.v_max = parse_double(key, value);
    else if (key == "confidence_threshold") estimator.confidence_threshold = parse_double(key, value);
    else if (key == "dropout_timeout") estimator.dropout_timeout = static_cast<int>(parse_u64(key, value));
    else if (key == "sample_rate") sample_rate = parse_double(key, value);
    else if (key == "kdf_k1") baselines.kdf_k1 = parse_double(key, value);
    else if (key == "hsa_cv") baselines.hsa_cv = parse_double(key, value);
    else if (key == "hsa_floor") baselines.hsa_floor = parse_double(key, value);
    else if (key == "band_unsafe") bands.unsafe_max = parse_double(key, value);
    else if (key == "band_safe") bands.safe_min = parse_double(key, value);
    else if (key == "noise_preset") noise_preset = value;
    else if (key == "seed") seed = parse_u64(key, value);
    else if (key == "scales") {
        scales.clear();
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            auto s = scale_from_name(item);
            if (!s) throw std::invalid_argument("config: scales: unknown scale '" + item + "'");
            scales.push_back(*s);
        }
        if (scales.empty()) throw std::invalid_argument("config: scales: empty list");
    } else {
        throw std::invalid_argument("config: unknown key '" + key + "'");
    }
    baselines.params = params;
    estimator.sample_period = 1.0 / sample_rate;
}

std::string RunConfig::echo() const {
    std::ostringstream oss;
    oss.precision(17);
    oss << "rho=" << params.rho << " tau=" << params.tau << " d_min=" << params.d_min
        << " d_max=" << params.d_max << " a_max=" << params.limits.a_max
        << " v_max=" << params.limits.v_max
        << " confidence_threshold=" << estimator.confidence_threshold
        << " dropout_timeout=" << estimator.dropout_timeout
        << " sample_rate=" << sample_rate << " kdf_k1=" << baselines.kdf_k1
        << " hsa_cv=" << baselines.hsa_cv << " hsa_floor=" << baselines.hsa_floor
        << " band_unsafe=" << bands.unsafe_max << " band_safe=" << bands.safe_min
        << " noise_preset=" << noise_preset << " seed=" << seed << " scales=";
    for (std::size_t i = 0; i < scales.size(); ++i) {
        if (i) oss << ',';
        oss << scale_name(scales[i]);
    }
    return oss.str();
}

RunConfig load_config(std::istream& in, RunConfig base) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        // trim
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t\r");
        line = line.substr(b, e - b + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key=value, got '" + line + "'");
        auto key = line.substr(0, eq);
        auto value = line.substr(eq + 1);
        const auto ke = key.find_last_not_of(" \t");
        key = key.substr(0, ke == std::string::npos ? 0 : ke + 1);
        const auto vb = value.find_first_not_of(" \t");
        value = vb == std::string::npos ? "" : value.substr(vb);
        base.apply(key, value);
    }
    base.validate();
    return base;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    return load_config(in, std::move(base));
}

}  // namespace gsi
