#include "qadapt/config.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "qadapt/csv.hpp"

namespace qadapt {

const char* start_mode_name(StartMode m) {
    return m == StartMode::fixed ? "fixed" : "random";
}
const char* update_rule_name(UpdateRule r) {
    return r == UpdateRule::taken_action ? "taken_action" : "predicted_max";
}
const char* update_timing_name(UpdateTiming t) {
    return t == UpdateTiming::episode_sweep ? "episode_sweep" : "per_step";
}
const char* mse_scope_name(MseScope s) {
    switch (s) {
        case MseScope::optimal_path: return "optimal_path";
        case MseScope::optimal_path_all_actions: return "optimal_path_all_actions";
        default: return "all";
    }
}
const char* oracle_variant_name(OracleVariant v) {
    return v == OracleVariant::stationary ? "stationary" : "step_augmented";
}

namespace {

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
    throw ConfigError("config: bad value '" + value + "' for key '" + key + "'");
}

template <class T>
T parse_enum(const std::string& s, std::initializer_list<std::pair<const char*, T>> table,
             const char* key) {
    for (const auto& [name, v] : table)
        if (s == name) return v;
    bad_value(key, s);
}

}  // namespace

StartMode start_mode_from(const std::string& s) {
    return parse_enum<StartMode>(s, {{"fixed", StartMode::fixed}, {"random", StartMode::random}},
                                 "start_mode");
}
UpdateRule update_rule_from(const std::string& s) {
    return parse_enum<UpdateRule>(
        s, {{"taken_action", UpdateRule::taken_action}, {"predicted_max", UpdateRule::predicted_max}},
        "update_rule");
}
UpdateTiming update_timing_from(const std::string& s) {
    return parse_enum<UpdateTiming>(s,
                                    {{"episode_sweep", UpdateTiming::episode_sweep},
                                     {"per_step", UpdateTiming::per_step}},
                                    "update_timing");
}
MseScope mse_scope_from(const std::string& s) {
    return parse_enum<MseScope>(s,
                                {{"optimal_path", MseScope::optimal_path},
                                 {"optimal_path_all_actions", MseScope::optimal_path_all_actions},
                                 {"all", MseScope::all}},
                                "mse_scope");
}
OracleVariant oracle_variant_from(const std::string& s) {
    return parse_enum<OracleVariant>(s,
                                     {{"stationary", OracleVariant::stationary},
                                      {"step_augmented", OracleVariant::step_augmented}},
                                     "oracle_variant");
}

namespace {

double to_double(const std::string& key, const std::string& value) {
    try {
        return parse_double(value);
    } catch (const std::invalid_argument&) {
        bad_value(key, value);
    }
}

long to_long(const std::string& key, const std::string& value) {
    try {
        return parse_long(value);
    } catch (const std::invalid_argument&) {
        bad_value(key, value);
    }
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
    // First pass: collect raw assignments, rejecting unknown and duplicate
    // keys with the offending line number.
    static const char* known[] = {
        "env",          "task",          "algorithm",   "episodes",     "lr",
        "gamma",        "eval_every",    "eval_rollouts", "seed",       "update_rule",
        "update_timing", "start_mode",   "mse",         "mse_scope",    "oracle_variant",
        "outdir",       "base_checkpoint", "world",     "ego_lane_y",   "ado_lane_x",
        "lane_width",   "car_radius",    "ego_velocity", "ado_velocity", "spawn_prob",
        "min_spawn_gap", "freeze_steps", "task_gap",
    };
    std::map<std::string, std::string> raw;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: expected 'key = value' on line " + std::to_string(lineno));
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok)
            throw ConfigError("config: unknown key '" + key + "' on line " + std::to_string(lineno));
        if (raw.count(key))
            throw ConfigError("config: duplicate key '" + key + "' on line " + std::to_string(lineno));
        raw[key] = value;
    }

    RunConfig cfg;
    const auto get = [&](const char* key) -> const std::string* {
        auto it = raw.find(key);
        return it == raw.end() ? nullptr : &it->second;
    };

    if (const auto* v = get("env")) {
        if (*v != "grid" && *v != "intersection") bad_value("env", *v);
        cfg.env = *v;
    }
    if (const auto* v = get("task")) {
        if (*v != "original" && *v != "adapted") bad_value("task", *v);
        cfg.task = *v;
    }
    const bool grid = cfg.env == "grid";

    // Env-dependent defaults; any explicit key wins.
    cfg.train.episodes = grid ? 20000 : 100000;
    cfg.train.eval_every = grid ? 10 : 500;
    cfg.train.eval_rollouts = grid ? 250 : 50;
    cfg.mse = grid;

    if (const auto* v = get("algorithm")) {
        auto a = parse_algorithm(*v);
        if (!a) bad_value("algorithm", *v);
        cfg.train.algorithm = *a;
    }
    if (const auto* v = get("episodes")) {
        cfg.train.episodes = to_long("episodes", *v);
        if (cfg.train.episodes < 0) bad_value("episodes", *v);
    }
    if (const auto* v = get("lr")) {
        cfg.train.lr = to_double("lr", *v);
        if (!(cfg.train.lr > 0)) bad_value("lr", *v);
    }
    if (const auto* v = get("gamma")) {
        cfg.train.gamma = to_double("gamma", *v);
        if (!(cfg.train.gamma > 0 && cfg.train.gamma <= 1)) bad_value("gamma", *v);
    }
    if (const auto* v = get("eval_every")) {
        cfg.train.eval_every = to_long("eval_every", *v);
        if (cfg.train.eval_every <= 0) bad_value("eval_every", *v);
    }
    if (const auto* v = get("eval_rollouts")) {
        cfg.train.eval_rollouts = int(to_long("eval_rollouts", *v));
        if (cfg.train.eval_rollouts <= 0) bad_value("eval_rollouts", *v);
    }
    if (const auto* v = get("seed")) cfg.train.seed = std::uint64_t(to_long("seed", *v));
    if (const auto* v = get("update_rule")) cfg.train.update_rule = update_rule_from(*v);
    if (const auto* v = get("update_timing")) cfg.train.update_timing = update_timing_from(*v);
    if (const auto* v = get("start_mode")) cfg.start_mode = start_mode_from(*v);
    if (const auto* v = get("mse")) {
        if (*v == "auto")
            cfg.mse = grid;
        else if (*v == "on")
            cfg.mse = true;
        else if (*v == "off")
            cfg.mse = false;
        else
            bad_value("mse", *v);
    }
    if (const auto* v = get("mse_scope")) cfg.train.mse_scope = mse_scope_from(*v);
    if (const auto* v = get("oracle_variant")) cfg.oracle_variant = oracle_variant_from(*v);
    if (const auto* v = get("outdir")) cfg.outdir = *v;
    if (const auto* v = get("base_checkpoint")) cfg.base_checkpoint = *v;

    const auto geo_key = [&](const char* key, double& slot) {
        if (const auto* v = get(key)) {
            slot = to_double(key, *v);
            if (!(slot >= 0)) bad_value(key, *v);
        }
    };
    geo_key("world", cfg.geo.world);
    geo_key("ego_lane_y", cfg.geo.ego_lane_y);
    geo_key("ado_lane_x", cfg.geo.ado_lane_x);
    geo_key("lane_width", cfg.geo.lane_width);
    geo_key("car_radius", cfg.geo.car_radius);
    geo_key("ego_velocity", cfg.geo.ego_velocity);
    geo_key("ado_velocity", cfg.geo.ado_velocity);
    geo_key("spawn_prob", cfg.geo.spawn_prob);
    geo_key("min_spawn_gap", cfg.geo.min_spawn_gap);
    if (const auto* v = get("freeze_steps")) {
        cfg.geo.freeze_steps = int(to_long("freeze_steps", *v));
        if (cfg.geo.freeze_steps <= 0) bad_value("freeze_steps", *v);
    }
    cfg.task_gap = cfg.task == "original" ? 80.0 : 120.0;
    geo_key("task_gap", cfg.task_gap);

    if (!grid && cfg.mse) {
        if (get("mse"))
            throw ConfigError("config: mse metrics need the grid oracle; "
                              "the intersection has none (set mse = auto or off)");
        cfg.mse = false;
    }

    // Echo: the file as given, then the resolved value of every key.
    std::string resolved;
    const auto put = [&](const std::string& key, const std::string& value) {
        resolved += key + " = " + value + "\n";
    };
    put("env", cfg.env);
    put("task", cfg.task);
    put("algorithm", algorithm_name(cfg.train.algorithm));
    put("episodes", std::to_string(cfg.train.episodes));
    put("lr", format_double(cfg.train.lr));
    put("gamma", format_double(cfg.train.gamma));
    put("eval_every", std::to_string(cfg.train.eval_every));
    put("eval_rollouts", std::to_string(cfg.train.eval_rollouts));
    put("seed", std::to_string(cfg.train.seed));
    put("update_rule", update_rule_name(cfg.train.update_rule));
    put("update_timing", update_timing_name(cfg.train.update_timing));
    put("start_mode", start_mode_name(cfg.start_mode));
    put("mse", cfg.mse ? "on" : "off");
    put("mse_scope", mse_scope_name(cfg.train.mse_scope));
    put("oracle_variant", oracle_variant_name(cfg.oracle_variant));
    put("outdir", cfg.outdir);
    put("base_checkpoint", cfg.base_checkpoint);
    if (!grid) {
        put("world", format_double(cfg.geo.world));
        put("ego_lane_y", format_double(cfg.geo.ego_lane_y));
        put("ado_lane_x", format_double(cfg.geo.ado_lane_x));
        put("lane_width", format_double(cfg.geo.lane_width));
        put("car_radius", format_double(cfg.geo.car_radius));
        put("ego_velocity", format_double(cfg.geo.ego_velocity));
        put("ado_velocity", format_double(cfg.geo.ado_velocity));
        put("spawn_prob", format_double(cfg.geo.spawn_prob));
        put("min_spawn_gap", format_double(cfg.geo.min_spawn_gap));
        put("freeze_steps", std::to_string(cfg.geo.freeze_steps));
        put("task_gap", format_double(cfg.task_gap));
    }
    cfg.resolved = resolved;
    cfg.echo = text;
    if (!cfg.echo.empty() && cfg.echo.back() != '\n') cfg.echo += '\n';
    cfg.echo += "\n# resolved\n" + resolved;
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str());
}

}  // namespace qadapt
