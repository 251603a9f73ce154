#pragma once
#include <optional>
#include <string>

#include "qadapt/config.hpp"
#include "qadapt/metrics.hpp"

namespace qadapt {

struct RunSummary {
    double acc_final = 0.0;
    std::optional<double> mse_optimal;
    std::optional<double> mse_all;
    std::optional<long> settle;
    double plateau = 0.0;
    std::string base_id;  // provenance hash of the base, empty for fresh runs
    std::string config_hash;
    std::string checkpoint_path;
    std::string evals_path;
};

// Executes one configured run end to end: builds the environment, expert and
// oracle, trains (from base_checkpoint when set), and writes config.txt,
// evals.csv and final.ckpt under cfg.outdir. Throws ConfigError for setup
// problems and std::runtime_error for IO failures.
RunSummary run_one(const RunConfig& cfg);

}  // namespace qadapt
