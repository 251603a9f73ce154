#pragma once
#include <iosfwd>
#include <string>
#include <vector>

#include "qadapt/runner.hpp"

namespace qadapt {

// A sweep manifest is a run-config file with two extra constructs:
//
//   base <name> = <checkpoint path>     named base models
//   run = <algorithm> <base|-> <seed> [key=value ...]
//
// Ordinary `key = value` lines form the shared defaults for every run; each
// run line may override them (outdir, algorithm, seed, base_checkpoint and
// env stay positional/shared and cannot be overridden). Every run gets the
// subdirectory <outdir>/<algorithm>[_<base>]_s<seed>.
struct SweepPlan {
    std::vector<RunConfig> runs;
    std::vector<std::string> run_ids;
    std::vector<std::string> base_names;  // per run, "-" when fresh
    std::string outdir;
};

SweepPlan parse_sweep_manifest(const std::string& text, bool long_budget = false);

struct SweepOutcome {
    std::string aggregate_path;
    int total = 0;
    std::vector<std::string> failures;  // "<run_id>: <error>"
};

// Runs the whole plan, continuing past individual failures, and writes
// <outdir>/aggregate.csv with one row per finished run plus one seed-mean row
// per (algorithm, base) group. Progress goes to `progress` when given.
SweepOutcome run_sweep(const SweepPlan& plan, std::ostream* progress = nullptr);

}  // namespace qadapt
