#include "qadapt/runner.hpp"

#include <filesystem>
#include <fstream>

#include "qadapt/adapt.hpp"
#include "qadapt/checkpoint.hpp"
#include "qadapt/csv.hpp"
#include "qadapt/oracle.hpp"

namespace qadapt {

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::string evals_csv(const RunRecord& rec, const std::string& base_id) {
    std::string csv = "episode,accuracy,mse_optimal,mse_all";
    if (!base_id.empty()) csv += ",base_id";
    csv += "\n";
    for (const EvalPoint& e : rec.evals) {
        csv += std::to_string(e.episode) + "," + format_double(e.accuracy) + ",";
        if (e.mse_optimal) csv += format_double(*e.mse_optimal);
        csv += ",";
        if (e.mse_all) csv += format_double(*e.mse_all);
        if (!base_id.empty()) csv += "," + base_id;
        csv += "\n";
    }
    return csv;
}

template <class Env, class Expert>
RunRecord execute(const Env& env, const RunConfig& cfg, const Expert& expert,
                  const QTable* oracle) {
    if (cfg.base_checkpoint.empty()) return train(env, cfg.train, &expert, oracle);
    const Checkpoint base = load_checkpoint(cfg.base_checkpoint);
    return retrain(env, cfg.train, &expert, oracle, base);
}

}  // namespace

RunSummary run_one(const RunConfig& cfg) {
    RunRecord rec;
    if (cfg.env == "grid") {
        const GridTask task =
            cfg.task == "original" ? original_grid_task() : adapt_task(original_grid_task());
        const GridEnv env{task, cfg.start_mode};
        const GridExpert expert = make_grid_expert(task, cfg.train.gamma);
        QTable oracle;
        if (cfg.mse) oracle = solve_grid_q(task, cfg.train.gamma, cfg.oracle_variant);
        rec = execute(env, cfg, expert, cfg.mse ? &oracle : nullptr);
    } else {
        const IntersectionEnv env{cfg.geo, cfg.task_gap};
        const IntersectionExpert expert{cfg.geo, cfg.task_gap};
        rec = execute(env, cfg, expert, nullptr);
    }

    const std::filesystem::path outdir(cfg.outdir);
    std::filesystem::create_directories(outdir);

    RunSummary sum;
    sum.base_id = rec.base_id;
    sum.config_hash = content_hash(cfg.resolved);
    if (!rec.evals.empty()) {
        const EvalPoint& last = rec.evals.back();
        sum.acc_final = last.accuracy;
        sum.mse_optimal = last.mse_optimal;
        sum.mse_all = last.mse_all;
    }
    sum.settle = rec.settle;
    sum.plateau = rec.plateau;

    write_file(outdir / "config.txt", cfg.echo);
    sum.evals_path = (outdir / "evals.csv").string();
    write_file(sum.evals_path, evals_csv(rec, rec.base_id));

    Provenance prov;
    prov.config_hash = sum.config_hash;
    prov.env = cfg.env;
    prov.task = cfg.task;
    prov.algorithm = algorithm_name(cfg.train.algorithm);
    prov.episodes = cfg.train.episodes;
    prov.seed = cfg.train.seed;
    sum.checkpoint_path = (outdir / "final.ckpt").string();
    save_checkpoint(rec.net, prov, sum.checkpoint_path);
    return sum;
}

}  // namespace qadapt
