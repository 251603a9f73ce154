#pragma once
#include <stdexcept>
#include <string>

#include "qadapt/envs_grid.hpp"
#include "qadapt/envs_intersection.hpp"
#include "qadapt/oracle.hpp"
#include "qadapt/qlearn.hpp"

namespace qadapt {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One experiment run, resolved from a `key = value` config file. Every key
// has a default; env-dependent defaults (episodes, eval cadence) are filled
// in after the file is read. `echo` preserves the original text followed by
// the fully resolved form, and is written next to the run's outputs.
struct RunConfig {
    std::string env = "grid";  // grid | intersection
    std::string task = "original";
    StartMode start_mode = StartMode::fixed;
    TrainConfig train;
    bool mse = true;
    OracleVariant oracle_variant = OracleVariant::stationary;
    std::string outdir = "run";
    std::string base_checkpoint;
    IntersectionGeometry geo;
    double task_gap = 80.0;
    std::string resolved;  // canonical `key = value` form, one line per key
    std::string echo;      // original text followed by the resolved form
};

RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);

// Name round-trips for the enum-valued keys; parse throws ConfigError.
const char* start_mode_name(StartMode m);
const char* update_rule_name(UpdateRule r);
const char* update_timing_name(UpdateTiming t);
const char* mse_scope_name(MseScope s);
const char* oracle_variant_name(OracleVariant v);
StartMode start_mode_from(const std::string& s);
UpdateRule update_rule_from(const std::string& s);
UpdateTiming update_timing_from(const std::string& s);
MseScope mse_scope_from(const std::string& s);
OracleVariant oracle_variant_from(const std::string& s);

}  // namespace qadapt
