#include "gsi/report.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace gsi {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr double kRadToDeg = 180.0 / kPi;

double percentile(std::vector<double> v, double p) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const double idx = p * (static_cast<double>(v.size()) - 1.0);
    const auto lo = static_cast<std::size_t>(std::floor(idx));
    const auto hi = static_cast<std::size_t>(std::ceil(idx));
    const double a = idx - static_cast<double>(lo);
    return v[lo] * (1.0 - a) + v[hi] * a;
}

void write_config_comment(const RunConfig& cfg, std::ostream& out) {
    out << "# config: " << cfg.echo() << "\n";
}

std::ostream& full(std::ostream& out) {
    out << std::setprecision(17);
    return out;
}

}  // namespace

ReplaySummary summarize(const ReplayResult& result) {
    ReplaySummary s;
    s.frames = static_cast<std::int64_t>(result.frames.size());
    s.error = result.error;

    std::vector<double> collectives;
    std::int64_t scenario_samples = 0;
    std::vector<std::int64_t> counts(6, 0);
    for (const auto& f : result.frames) {
        if (f.safety.collective) collectives.push_back(*f.safety.collective);
        for (const auto& ph : f.safety.per_human) {
            ++scenario_samples;
            ++counts[static_cast<int>(ph.scenario.id)];
        }
    }
    s.frames_with_humans = static_cast<std::int64_t>(collectives.size());
    if (!collectives.empty()) {
        s.collective_min = *std::min_element(collectives.begin(), collectives.end());
        double sum = 0.0;
        for (double c : collectives) sum += c;
        s.collective_mean = sum / static_cast<double>(collectives.size());
        s.collective_p05 = percentile(collectives, 0.05);
        s.collective_p50 = percentile(collectives, 0.50);
        s.collective_p95 = percentile(collectives, 0.95);
    }
    if (scenario_samples > 0)
        for (int i = 0; i < 6; ++i)
            s.scenario_fraction[i] =
                static_cast<double>(counts[i]) / static_cast<double>(scenario_samples);
    return s;
}

std::string summary_to_json(const ReplaySummary& s, const RunConfig& cfg) {
    ordered_json j;
    j["config"] = cfg.echo();
    j["frames"] = s.frames;
    j["frames_with_humans"] = s.frames_with_humans;
    if (s.frames_with_humans > 0) {
        j["collective_gsi"] = ordered_json{{"min", s.collective_min},
                                           {"mean", s.collective_mean},
                                           {"p05", s.collective_p05},
                                           {"p50", s.collective_p50},
                                           {"p95", s.collective_p95}};
    } else {
        j["collective_gsi"] = "not applicable (no humans)";
    }
    ordered_json hist;
    for (int i = 0; i < 6; ++i)
        hist[scenario_name(static_cast<ScenarioId>(i))] = s.scenario_fraction[i];
    j["time_in_scenario"] = hist;
    if (s.error.available) {
        j["estimator_error"] = ordered_json{
            {"distance_mape_pct", s.error.distance_mape_pct},
            {"velocity_mape_pct", s.error.velocity_mape_pct},
            {"distance_samples", s.error.distance_samples},
            {"velocity_samples", s.error.velocity_samples}};
    }
    return j.dump(2);
}

void write_evaluate_csv(const ReplayResult& result, const RunConfig& cfg, std::ostream& out) {
    write_config_comment(cfg, out);
    full(out);
    out << "frame,t,human_id,distance,rel_velocity,bearing_deg,zone,scenario,"
           "gsi_hat,gsi_directional,collective_gsi\n";
    for (const auto& f : result.frames) {
        if (f.safety.per_human.empty()) {
            out << f.frame << ',' << f.t << ",,,,,,,,,na\n";
            continue;
        }
        for (const auto& ph : f.safety.per_human) {
            out << f.frame << ',' << f.t << ',' << ph.human_id << ',' << ph.distance << ','
                << ph.rel_velocity << ',' << ph.bearing * kRadToDeg << ','
                << zone_name(ph.zone) << ',' << scenario_name(ph.scenario.id) << ','
                << ph.gsi_hat << ',' << ph.gsi_directional << ',' << *f.safety.collective
                << "\n";
        }
    }
}

void write_evaluate_jsonl(const ReplayResult& result, const RunConfig& cfg, std::ostream& out) {
    out << ordered_json{{"type", "config"}, {"config", cfg.echo()}}.dump() << "\n";
    for (const auto& f : result.frames) {
        ordered_json jf{{"type", "frame"}, {"frame", f.frame}, {"t", f.t}};
        ordered_json humans = ordered_json::array();
        for (const auto& ph : f.safety.per_human) {
            humans.push_back(ordered_json{{"id", ph.human_id},
                                          {"distance", ph.distance},
                                          {"rel_velocity", ph.rel_velocity},
                                          {"bearing_deg", ph.bearing * kRadToDeg},
                                          {"zone", zone_name(ph.zone)},
                                          {"scenario", scenario_name(ph.scenario.id)},
                                          {"gsi_hat", ph.gsi_hat},
                                          {"gsi_directional", ph.gsi_directional},
                                          {"degraded", ph.degraded}});
        }
        jf["humans"] = humans;
        if (f.safety.collective)
            jf["collective_gsi"] = *f.safety.collective;
        else
            jf["collective_gsi"] = "na";
        if (f.safety.gradient) {
            jf["gsi_gradient"] = ordered_json{{"x", f.safety.gradient->vector.x},
                                              {"y", f.safety.gradient->vector.y},
                                              {"flat", f.safety.gradient->flat}};
        }
        out << jf.dump() << "\n";
    }
}

void write_compare_csv(const ReplayResult& result, const RunConfig& cfg, std::ostream& out) {
    write_config_comment(cfg, out);
    full(out);
    out << "frame,t,n_humans";
    for (ScaleId s : cfg.scales) out << ',' << scale_name(s);
    out << "\n";
    for (const auto& f : result.frames) {
        out << f.frame << ',' << f.t << ',' << f.safety.per_human.size();
        for (ScaleId s : cfg.scales) {
            out << ',';
            const auto it = f.scale_agg.find(s);
            if (it != f.scale_agg.end() && it->second)
                out << *it->second;
            else
                out << "na";
        }
        out << "\n";
    }
}

void write_matrix_csv(const AppropriatenessMatrix& m, const RunConfig& cfg, std::ostream& out) {
    write_config_comment(cfg, out);
    full(out);
    out << "scenario,scale,variant,required,value,assessment,match,known_deviation\n";
    for (const auto& c : m.cells) {
        out << scenario_name(c.scenario) << ',' << scale_name(c.scale) << ','
            << (c.multi_human ? "MH" : "SH") << ',' << appropriateness_name(c.required) << ',';
        if (c.not_applicable) {
            out << "na,na,na,na\n";
            continue;
        }
        out << c.value << ',' << appropriateness_name(band_of(c.value, m.bands)) << ','
            << (c.match ? "match" : "mismatch") << ',' << (c.known_deviation ? "yes" : "no")
            << "\n";
    }
}

std::string matrix_grid(const AppropriatenessMatrix& m) {
    std::vector<ScaleId> scales;
    for (const auto& c : m.cells)
        if (std::find(scales.begin(), scales.end(), c.scale) == scales.end())
            scales.push_back(c.scale);

    std::ostringstream out;
    out << "scenario  required ";
    for (ScaleId s : scales) {
        std::ostringstream h;
        h << scale_name(s) << "(SH/MH)";
        out << ' ' << std::setw(12) << h.str();
    }
    out << "\n";
    for (int sc = 0; sc < 6; ++sc) {
        const auto id = static_cast<ScenarioId>(sc);
        const MatrixCell* any = m.find(id, scales.front(), false);
        out << std::setw(8) << scenario_name(id) << "  " << std::setw(8)
            << (any ? appropriateness_name(any->required) : "?");
        for (ScaleId s : scales) {
            const MatrixCell* sh = m.find(id, s, false);
            const MatrixCell* mh = m.find(id, s, true);
            auto mark = [](const MatrixCell* c) -> std::string {
                if (!c) return "?";
                if (c->not_applicable) return "n/a";
                std::string out = c->match ? "ok" : "X";
                if (c->known_deviation) out += "*";
                return out;
            };
            out << ' ' << std::setw(12) << (mark(sh) + "/" + mark(mh));
        }
        out << "\n";
    }
    out << "(* = documented deviation of the reconstructed scale from the reference pattern)\n";
    return out.str();
}

void write_rho_sweep_csv(const std::vector<double>& rho_grid, const SafetyParams& base,
                         const RunConfig& cfg, std::ostream& out) {
    if (rho_grid.empty()) throw std::invalid_argument("rho sweep: empty grid");
    for (double r : rho_grid)
        if (!(r > 0.0)) throw std::invalid_argument("rho sweep: rho values must be > 0");
    write_config_comment(cfg, out);
    full(out);
    out << "d";
    for (double r : rho_grid) out << ",rho_" << r;
    out << "\n";
    const int n = 200;
    for (int i = 0; i <= n; ++i) {
        const double d = base.d_min + (base.d_max - base.d_min) * i / static_cast<double>(n);
        out << d;
        for (double r : rho_grid) {
            SafetyParams p = base;
            p.rho = r;
            out << ',' << gsi_hat(d, 0.0, p).value;
        }
        out << "\n";
    }
}

void write_tau_sweep_csv(const std::vector<double>& tau_grid,
                         const std::vector<double>& values, const RunConfig& cfg,
                         std::ostream& out) {
    if (tau_grid.empty()) throw std::invalid_argument("tau sweep: empty grid");
    for (double t : tau_grid)
        if (!(t > 0.0)) throw std::invalid_argument("tau sweep: tau values must be > 0");
    if (values.empty()) throw std::invalid_argument("tau sweep: empty value list");
    write_config_comment(cfg, out);
    full(out);
    out << "tau,collective,min,mean\n";
    const double mn = *std::min_element(values.begin(), values.end());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    for (double t : tau_grid)
        out << t << ',' << gsi_collective(values, t) << ',' << mn << ',' << mean << "\n";
}

}  // namespace gsi
