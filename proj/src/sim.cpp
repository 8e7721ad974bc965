#include "gsi/sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"

namespace gsi {

using ordered_json = nlohmann::ordered_json;

namespace {

Vec2 interp_position(const std::vector<Knot>& knots, double t) {
    if (knots.empty()) throw std::invalid_argument("script: agent has no knots");
    if (t <= knots.front().t) return knots.front().pos;
    if (t >= knots.back().t) return knots.back().pos;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        if (t < knots[i + 1].t) {
            const double a = (t - knots[i].t) / (knots[i + 1].t - knots[i].t);
            return knots[i].pos + (knots[i + 1].pos - knots[i].pos) * a;
        }
    }
    return knots.back().pos;
}

Vec2 interp_velocity(const std::vector<Knot>& knots, double t) {
    if (t < knots.front().t || t >= knots.back().t) return {0.0, 0.0};
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        if (t < knots[i + 1].t) {
            const double dt = knots[i + 1].t - knots[i].t;
            return (knots[i + 1].pos - knots[i].pos) * (1.0 / dt);
        }
    }
    return {0.0, 0.0};
}

void validate_knots(const std::vector<Knot>& knots, const std::string& agent,
                    double max_speed) {
    if (knots.empty())
        throw std::invalid_argument("script: " + agent + " has no knots");
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        if (!(knots[i + 1].t > knots[i].t))
            throw std::invalid_argument("script: " + agent + " knot " + std::to_string(i + 1) +
                                        " time not strictly increasing");
        if (max_speed > 0.0) {
            const double speed =
                (knots[i + 1].pos - knots[i].pos).norm() / (knots[i + 1].t - knots[i].t);
            if (speed > max_speed + 1e-9)
                throw std::invalid_argument(
                    "script: " + agent + " knot " + std::to_string(i + 1) + " implies speed " +
                    std::to_string(speed) + " m/s above the " + std::to_string(max_speed) +
                    " m/s bound");
        }
    }
}

}  // namespace

double WaypointScript::duration() const {
    double end = robot_knots.empty() ? 0.0 : robot_knots.back().t;
    for (const auto& h : humans)
        if (!h.knots.empty()) end = std::max(end, h.knots.back().t);
    return end;
}

void NoiseModel::validate() const {
    if (distance_mape_pct < 0.0 || keypoint_jitter < 0.0 || conf_noise < 0.0 ||
        bearing_noise < 0.0)
        throw std::invalid_argument("NoiseModel: negative noise magnitude");
    if (!(dropout_probability >= 0.0 && dropout_probability < 1.0))
        throw std::invalid_argument("NoiseModel: dropout_probability must be in [0, 1)");
}

NoiseModel NoiseModel::preset(const std::string& name) {
    NoiseModel m;
    if (name == "none") {
        m.distance_mape_pct = 0.0;
        m.keypoint_jitter = 0.0;
        m.conf_noise = 0.0;
    } else if (name == "task-robot") {
        m.distance_mape_pct = 11.3;
    } else if (name == "observer") {
        m.distance_mape_pct = 5.07;
    } else {
        throw std::invalid_argument("unknown noise preset: " + name);
    }
    return m;
}

TrackLog generate(const WaypointScript& script, double rate, const NoiseModel& noise,
                  std::uint64_t seed, const SafetyParams& params) {
    if (!(rate > 0.0)) throw std::invalid_argument("generate: rate must be > 0");
    noise.validate();
    params.validate();
    validate_knots(script.robot_knots, "robot", 0.0);
    for (const auto& h : script.humans)
        validate_knots(h.knots, "human " + std::to_string(h.id), script.max_human_speed);

    // MAPE of |1 + sigma*N(0,1)| based multiplicative noise: E|x| of a
    // zero-mean normal is sigma*sqrt(2/pi), so invert that for sigma.
    const double sigma = (noise.distance_mape_pct / 100.0) * std::sqrt(kPi / 2.0);
    constexpr int kKeypoints = 5;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    TrackLog log;
    log.header.rate = rate;
    log.header.seed = seed;
    log.header.params = params;
    for (const auto& h : script.humans) log.header.agent_ids.push_back(h.id);

    const double duration = script.duration();
    const auto n_frames = static_cast<std::int64_t>(std::floor(duration * rate)) + 1;
    double heading = script.robot_heading.value_or(0.0);

    for (std::int64_t f = 0; f < n_frames; ++f) {
        const double t = static_cast<double>(f) / rate;
        TrackLogFrame frame;
        frame.frame = f;
        frame.t = t;

        const Vec2 rp = interp_position(script.robot_knots, t);
        const Vec2 rv = interp_velocity(script.robot_knots, t);
        if (!script.robot_heading && rv.norm() > 1e-9) heading = std::atan2(rv.y, rv.x);
        frame.robot = {rp.x, rp.y, normalize_angle(heading)};

        for (const auto& h : script.humans) {
            const Vec2 hp = interp_position(h.knots, t);
            const Vec2 hv = interp_velocity(h.knots, t);
            const Vec2 rel = hp - rp;
            const double d = rel.norm();

            HumanObservation obs;
            obs.id = h.id;

            GroundTruth gt;
            gt.distance = d;
            const Vec2 relv = hv - rv;
            gt.rel_velocity = d > 1e-12 ? -(rel.dot(relv) / d) : 0.0;
            gt.bearing = d > 1e-12 ? normalize_angle(std::atan2(rel.y, rel.x) - frame.robot.theta)
                                   : 0.0;
            gt.scenario = classify_scenario(d, gt.rel_velocity, params).id;
            obs.truth = gt;

            if (u01(rng) < noise.dropout_probability) {
                obs.dropped = true;
            } else {
                const double factor = 1.0 + sigma * gauss(rng);
                obs.bearing = normalize_angle(gt.bearing + noise.bearing_noise * gauss(rng));
                for (int k = 0; k < kKeypoints; ++k) {
                    KeypointDetection kp;
                    kp.keypoint_id = k;
                    kp.rel_distance =
                        std::max(d * factor + noise.keypoint_jitter * gauss(rng), 0.0);
                    double conf = noise.conf_base - noise.conf_decay * d +
                                  noise.conf_noise * uni(rng);
                    kp.confidence = std::clamp(conf, 0.0, 1.0);
                    obs.keypoints.push_back(kp);
                }
            }
            frame.humans.push_back(obs);
        }
        log.frames.push_back(frame);
    }
    return log;
}

namespace {

std::vector<Knot> hold_then_move(std::initializer_list<Knot> knots) { return knots; }

WaypointScript script_approach_retreat() {
    WaypointScript s;
    s.robot_knots = {{0.0, {0.0, 0.0}}, {17.0, {0.0, 0.0}}};
    s.robot_heading = 0.0;
    // Human 3 walks in, breaches the stopping reach, then backs off.
    s.humans.push_back({3, hold_then_move({{0.0, {8.0, 0.0}},
                                           {2.0, {8.0, 0.0}},
                                           {2.0 + 25.0 / 3.0, {5.5, 0.0}},   // 0.3 m/s
                                           {2.0 + 25.0 / 3.0 + 2.45, {0.6, 0.0}},  // 2.0 m/s
                                           {13.5, {0.6, 0.0}},
                                           {15.5, {2.6, 0.0}},               // 1.0 m/s retreat
                                           {17.0, {2.6, 0.0}}})});
    // Bystanders well into the public zone.
    s.humans.push_back({1, {{0.0, {0.0, 12.0}}, {17.0, {0.0, 12.0}}}});
    s.humans.push_back({2, {{0.0, {4.0, 12.0}}, {17.0, {4.0, 12.0}}}});
    return s;
}

WaypointScript script_two_approach() {
    WaypointScript s;
    s.robot_knots = {{0.0, {0.0, 0.0}}, {7.0, {0.0, 0.0}}};
    s.robot_heading = 0.0;
    const double t1 = 1.0 + 6.038 / 1.5;
    const double t2 = 1.5 + 6.038 / 1.5;
    s.humans.push_back({1, {{0.0, {7.0, 0.8}}, {1.0, {7.0, 0.8}}, {t1, {1.0, 0.12}}, {7.0, {1.0, 0.12}}}});
    s.humans.push_back({2, {{0.0, {7.0, -0.8}}, {1.5, {7.0, -0.8}}, {t2, {1.0, -0.12}}, {7.0, {1.0, -0.12}}}});
    s.humans.push_back({3, {{0.0, {2.0, 0.0}}, {7.0, {2.0, 0.0}}}});
    return s;
}

WaypointScript script_cross() {
    WaypointScript s;
    s.robot_knots = {{0.0, {0.0, 0.0}}, {8.0, {0.0, 0.0}}};
    s.robot_heading = 0.0;
    s.humans.push_back({3, {{0.0, {7.0, 0.0}}, {0.5, {7.0, 0.0}}, {0.5 + 5.8 / 1.25, {1.2, 0.0}}, {8.0, {1.2, 0.0}}}});
    s.humans.push_back({1, {{0.0, {2.0, 1.0}}, {8.0, {3.6, 1.8}}}});
    s.humans.push_back({2, {{0.0, {2.0, -1.0}}, {8.0, {3.6, -1.8}}}});
    return s;
}

std::vector<Knot> random_walk(std::mt19937_64& rng, double xmin, double xmax, double ymin,
                              double ymax, double max_speed, double duration) {
    std::uniform_real_distribution<double> ux(xmin, xmax);
    std::uniform_real_distribution<double> uy(ymin, ymax);
    std::uniform_real_distribution<double> udt(2.0, 4.0);
    std::uniform_real_distribution<double> uang(-kPi, kPi);
    std::uniform_real_distribution<double> uspeed(0.1, 0.9 * max_speed);

    std::vector<Knot> knots;
    Vec2 pos{ux(rng), uy(rng)};
    double t = 0.0;
    knots.push_back({t, pos});
    while (t < duration) {
        const double dt = udt(rng);
        const double a = uang(rng);
        const double sp = uspeed(rng);
        Vec2 target = pos + Vec2{std::cos(a), std::sin(a)} * (sp * dt);
        target.x = std::clamp(target.x, xmin, xmax);
        target.y = std::clamp(target.y, ymin, ymax);
        t += dt;
        pos = target;
        knots.push_back({t, pos});
    }
    return knots;
}

WaypointScript script_random(std::uint64_t seed) {
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 1ULL);
    const double duration = 20.0;
    WaypointScript s;
    s.robot_knots = {{0.0, {0.0, 0.0}}, {duration + 4.0, {0.0, 0.0}}};
    s.robot_heading = 0.0;
    s.humans.push_back({1, random_walk(rng, 5.0, 9.0, -3.0, 3.0, 1.5, duration)});
    s.humans.push_back({2, random_walk(rng, 5.0, 9.0, -3.0, 3.0, 1.5, duration)});
    // Human 3 drifts slowly inside the social zone the whole time.
    s.humans.push_back({3, random_walk(rng, 0.8, 3.1, -1.0, 1.0, 0.4, duration)});
    return s;
}

}  // namespace

TrackLog scripted_experiment(const std::string& name, std::uint64_t seed, double rate,
                             const NoiseModel& noise) {
    WaypointScript script;
    if (name == "approach-retreat") {
        script = script_approach_retreat();
    } else if (name == "two-approach") {
        script = script_two_approach();
    } else if (name == "cross") {
        script = script_cross();
    } else if (name == "random") {
        script = script_random(seed);
    } else {
        throw std::invalid_argument("unknown experiment: " + name);
    }
    // Slow platform so walking-speed humans can outrun the stopping
    // envelope from the public zone.
    SafetyParams params;
    params.limits.a_max = 0.5;
    TrackLog log = generate(script, rate, noise, seed, params);
    log.header.experiment = name;
    return log;
}

namespace {

ordered_json params_json(const SafetyParams& p) {
    return ordered_json{{"rho", p.rho},       {"tau", p.tau},
                        {"d_min", p.d_min},   {"d_max", p.d_max},
                        {"a_max", p.limits.a_max}, {"v_max", p.limits.v_max}};
}

SafetyParams params_from_json(const ordered_json& j) {
    SafetyParams p;
    p.rho = j.at("rho").get<double>();
    p.tau = j.at("tau").get<double>();
    p.d_min = j.at("d_min").get<double>();
    p.d_max = j.at("d_max").get<double>();
    p.limits.a_max = j.at("a_max").get<double>();
    p.limits.v_max = j.at("v_max").get<double>();
    return p;
}

ScenarioId scenario_from_string(const std::string& s) {
    if (s.size() == 1 && s[0] >= 'A' && s[0] <= 'F')
        return static_cast<ScenarioId>(s[0] - 'A');
    throw std::runtime_error("bad scenario label: " + s);
}

}  // namespace

void write_tracklog(const TrackLog& log, std::ostream& out) {
    ordered_json header{{"type", "header"},
                        {"version", 1},
                        {"rate", log.header.rate},
                        {"seed", log.header.seed},
                        {"experiment", log.header.experiment},
                        {"noise_preset", log.header.noise_preset},
                        {"agents", log.header.agent_ids},
                        {"params", params_json(log.header.params)}};
    out << header.dump() << "\n";
    for (const auto& f : log.frames) {
        ordered_json jf{{"type", "frame"},
                        {"frame", f.frame},
                        {"t", f.t},
                        {"robot", {f.robot.x, f.robot.y, f.robot.theta}}};
        ordered_json humans = ordered_json::array();
        for (const auto& h : f.humans) {
            ordered_json jh{{"id", h.id}};
            if (h.truth) {
                jh["gt"] = {h.truth->distance, h.truth->rel_velocity, h.truth->bearing,
                            scenario_name(h.truth->scenario)};
            }
            if (h.dropped) {
                jh["dropped"] = true;
            } else {
                jh["bearing"] = h.bearing;
                ordered_json kps = ordered_json::array();
                for (const auto& kp : h.keypoints)
                    kps.push_back({kp.keypoint_id, kp.rel_distance, kp.confidence});
                jh["kp"] = kps;
            }
            humans.push_back(jh);
        }
        jf["humans"] = humans;
        out << jf.dump() << "\n";
    }
}

std::string tracklog_to_string(const TrackLog& log) {
    std::ostringstream oss;
    write_tracklog(log, oss);
    return oss.str();
}

TrackLog read_tracklog(std::istream& in) {
    TrackLog log;
    std::string line;
    std::int64_t lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        ordered_json j;
        try {
            j = ordered_json::parse(line);
        } catch (const std::exception& e) {
            throw std::runtime_error("tracklog line " + std::to_string(lineno) +
                                     ": parse error: " + e.what());
        }
        try {
            const std::string type = j.at("type").get<std::string>();
            if (type == "header") {
                log.header.rate = j.at("rate").get<double>();
                log.header.seed = j.at("seed").get<std::uint64_t>();
                log.header.experiment = j.value("experiment", std::string{});
                log.header.noise_preset = j.value("noise_preset", std::string{"none"});
                log.header.agent_ids = j.at("agents").get<std::vector<int>>();
                log.header.params = params_from_json(j.at("params"));
                have_header = true;
            } else if (type == "frame") {
                TrackLogFrame f;
                f.frame = j.at("frame").get<std::int64_t>();
                f.t = j.at("t").get<double>();
                const auto& r = j.at("robot");
                f.robot = {r.at(0).get<double>(), r.at(1).get<double>(), r.at(2).get<double>()};
                for (const auto& jh : j.at("humans")) {
                    HumanObservation h;
                    h.id = jh.at("id").get<int>();
                    if (jh.contains("gt")) {
                        const auto& g = jh.at("gt");
                        GroundTruth gt;
                        gt.distance = g.at(0).get<double>();
                        gt.rel_velocity = g.at(1).get<double>();
                        gt.bearing = g.at(2).get<double>();
                        gt.scenario = scenario_from_string(g.at(3).get<std::string>());
                        h.truth = gt;
                    }
                    h.dropped = jh.value("dropped", false);
                    if (!h.dropped) {
                        h.bearing = jh.value("bearing", 0.0);
                        if (jh.contains("kp")) {
                            for (const auto& jkp : jh.at("kp")) {
                                KeypointDetection kp;
                                kp.keypoint_id = jkp.at(0).get<int>();
                                kp.rel_distance = jkp.at(1).get<double>();
                                kp.confidence = jkp.at(2).get<double>();
                                h.keypoints.push_back(kp);
                            }
                        }
                    }
                    f.humans.push_back(h);
                }
                log.frames.push_back(f);
            } else {
                throw std::runtime_error("unknown record type '" + type + "'");
            }
        } catch (const std::runtime_error&) {
            throw;
        } catch (const std::exception& e) {
            throw std::runtime_error("tracklog line " + std::to_string(lineno) +
                                     ": malformed record: " + e.what());
        }
    }
    if (!have_header) throw std::runtime_error("tracklog: missing header line");
    return log;
}

TrackLog read_tracklog_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open tracklog: " + path);
    return read_tracklog(in);
}

void write_tracklog_file(const TrackLog& log, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write tracklog: " + path);
    write_tracklog(log, out);
}

ReplayResult replay(const TrackLog& log, const SafetyParams& params,
                    std::span<const ScaleId> scales, const BaselineConfig& baselines,
                    const ReplayOptions& opts) {
    params.validate();
    ReplayResult result;
    result.header = log.header;

    bool any_keypoints = false;
    for (const auto& f : log.frames)
        for (const auto& h : f.humans)
            if (!h.keypoints.empty()) any_keypoints = true;
    const bool use_estimator = any_keypoints && !opts.use_ground_truth;
    result.used_estimator = use_estimator;

    EstimatorConfig est_cfg = opts.estimator;
    est_cfg.sample_period = 1.0 / log.header.rate;

    std::map<int, HumanTrack> tracks;
    for (int id : log.header.agent_ids) tracks.emplace(id, HumanTrack(id));

    double dist_err_sum = 0.0;
    double vel_err_sum = 0.0;
    std::int64_t dist_n = 0;
    std::int64_t vel_n = 0;
    bool any_truth = false;

    for (const auto& f : log.frames) {
        std::vector<IdentifiedState> states;
        if (use_estimator) {
            for (auto& [id, track] : tracks) {
                const HumanObservation* obs = nullptr;
                for (const auto& h : f.humans)
                    if (h.id == id) obs = &h;
                std::optional<double> fused;
                double brg = 0.0;
                if (obs && !obs->dropped && !obs->keypoints.empty()) {
                    fused = fuse_keypoints(obs->keypoints, est_cfg);
                    brg = obs->bearing;
                }
                track.update(fused, brg, f.frame, est_cfg);
                if (track.latest_state()) {
                    states.push_back({id, *track.latest_state(), track.degraded()});
                    if (obs && obs->truth) {
                        any_truth = true;
                        if (obs->truth->distance > 1e-9) {
                            dist_err_sum += std::abs(track.latest_state()->distance -
                                                     obs->truth->distance) /
                                            obs->truth->distance;
                            ++dist_n;
                        }
                        if (std::abs(obs->truth->rel_velocity) >= 0.05) {
                            vel_err_sum += std::abs(track.latest_state()->rel_velocity -
                                                    obs->truth->rel_velocity) /
                                           std::abs(obs->truth->rel_velocity);
                            ++vel_n;
                        }
                    }
                }
            }
        } else {
            for (const auto& h : f.humans) {
                if (!h.truth)
                    throw std::runtime_error("replay: frame " + std::to_string(f.frame) +
                                             " has neither keypoints nor ground truth for human " +
                                             std::to_string(h.id));
                states.push_back({h.id,
                                  RelativeState{h.truth->distance, h.truth->rel_velocity,
                                                h.truth->bearing},
                                  false});
            }
        }

        ReplayFrame rf;
        rf.frame = f.frame;
        rf.t = f.t;
        rf.safety = evaluate_frame(f.robot, std::span<const IdentifiedState>(states), params,
                                   f.t, opts.with_gradient);
        for (const auto& h : f.humans)
            if (h.truth) rf.truth_scenarios[h.id] = h.truth->scenario;

        for (ScaleId scale : scales) {
            if (scale == ScaleId::GSI) {
                rf.scale_agg[scale] = rf.safety.collective;
                continue;
            }
            std::vector<double> vals;
            for (const auto& s : states)
                vals.push_back(scale_value(scale, s.state.distance, s.state.rel_velocity,
                                           s.state.bearing, baselines));
            rf.scale_agg[scale] = aggregate_mean(vals);
        }
        result.frames.push_back(std::move(rf));
    }

    if (use_estimator && any_truth) {
        result.error.available = dist_n > 0;
        result.error.distance_samples = dist_n;
        result.error.velocity_samples = vel_n;
        if (dist_n > 0) result.error.distance_mape_pct = 100.0 * dist_err_sum / dist_n;
        if (vel_n > 0) result.error.velocity_mape_pct = 100.0 * vel_err_sum / vel_n;
    }
    return result;
}

}  // namespace gsi
