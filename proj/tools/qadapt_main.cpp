#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qadapt/adapt.hpp"
#include "qadapt/config.hpp"
#include "qadapt/csv.hpp"
#include "qadapt/oracle.hpp"
#include "qadapt/report.hpp"
#include "qadapt/runner.hpp"
#include "qadapt/sweep.hpp"

using namespace qadapt;

namespace {

std::string read_file(const std::string& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(std::string(what) + ": cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void cmd_oracle(const std::string& task_name, double gamma, const std::string& variant_name) {
    if (task_name != "original" && task_name != "adapted")
        throw ConfigError("oracle: unknown task '" + task_name + "'");
    const OracleVariant variant = oracle_variant_from(variant_name);
    const GridTask task =
        task_name == "original" ? original_grid_task() : adapt_task(original_grid_task());
    const QTable table = solve_grid_q(task, gamma, variant);

    static const char* action_names[] = {"up", "down", "left", "right"};
    std::cout << "oracle: task=" << task_name << " gamma=" << format_double(gamma)
              << " variant=" << oracle_variant_name(variant) << "\n";
    std::cout << "(y,x)";
    for (const char* a : action_names) std::cout << "\t" << a;
    std::cout << "\tbest\n";
    for (Cell c : grid_white_cells(task)) {
        std::cout << "(" << c.y << "," << c.x << ")";
        for (int a = 0; a < kGridActions; ++a) {
            const double q = variant == OracleVariant::stationary ? table.value_at(c, a)
                                                                  : table.value_at(c, 0, a);
            std::cout << "\t" << format_double(q);
        }
        std::cout << "\t" << action_names[optimal_action(table, {c.y, c.x, 0})] << "\n";
    }

    std::cout << "\n";
    if (variant == OracleVariant::stationary) {
        std::cout << "y,x,action,q\n";
        for (Cell c : grid_white_cells(task))
            for (int a = 0; a < kGridActions; ++a)
                std::cout << c.y << "," << c.x << "," << action_names[a] << ","
                          << format_double(table.value_at(c, a)) << "\n";
    } else {
        std::cout << "y,x,step,action,q\n";
        for (Cell c : grid_white_cells(task))
            for (int k = 0; k <= kGridStepCap; ++k)
                for (int a = 0; a < kGridActions; ++a)
                    std::cout << c.y << "," << c.x << "," << k << "," << action_names[a] << ","
                              << format_double(table.value_at(c, k, a)) << "\n";
    }
}

void print_summary(const RunSummary& sum) {
    std::cout << "final accuracy " << format_double(sum.acc_final);
    if (sum.mse_optimal) std::cout << "  mse_optimal " << format_double(*sum.mse_optimal);
    if (sum.mse_all) std::cout << "  mse_all " << format_double(*sum.mse_all);
    if (sum.settle)
        std::cout << "  settle " << *sum.settle;
    else
        std::cout << "  settle none (plateau " << format_double(sum.plateau) << ")";
    std::cout << "\n";
    std::cout << "evals " << sum.evals_path << "\n";
    std::cout << "checkpoint " << sum.checkpoint_path << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deep Q-learning task-adaptation lab"};
    app.require_subcommand(1);

    auto* oracle = app.add_subcommand("oracle", "print the exact grid Q-table");
    std::string task = "original", variant = "stationary";
    double gamma = 1.0;
    oracle->add_option("--task", task, "original | adapted");
    oracle->add_option("--gamma", gamma, "discount factor");
    oracle->add_option("--variant", variant, "stationary | step_augmented");

    auto* train = app.add_subcommand("train", "run one training configuration");
    std::string train_config;
    train->add_option("config", train_config, "run-config file")->required();

    auto* adapt = app.add_subcommand("adapt", "retrain from a base checkpoint");
    std::string adapt_base, adapt_config;
    adapt->add_option("base", adapt_base, "base checkpoint")->required();
    adapt->add_option("config", adapt_config, "run-config file")->required();

    auto* sweep = app.add_subcommand("sweep", "run every entry of a sweep manifest");
    std::string manifest;
    bool long_budget = false;
    sweep->add_option("manifest", manifest, "sweep manifest file")->required();
    sweep->add_flag("--long", long_budget, "full-length intersection budget (1.5M episodes)");

    auto* report = app.add_subcommand("report", "render a sweep aggregate as a table");
    std::string aggregate;
    report->add_option("aggregate", aggregate, "aggregate.csv from a sweep")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (oracle->parsed()) {
            cmd_oracle(task, gamma, variant);
        } else if (train->parsed()) {
            print_summary(run_one(load_run_config(train_config)));
        } else if (adapt->parsed()) {
            RunConfig cfg = load_run_config(adapt_config);
            cfg.base_checkpoint = adapt_base;
            print_summary(run_one(cfg));
        } else if (sweep->parsed()) {
            const SweepPlan plan = parse_sweep_manifest(read_file(manifest, "manifest"), long_budget);
            const SweepOutcome out = run_sweep(plan, &std::cout);
            std::cout << "aggregate " << out.aggregate_path << "\n";
            if (!out.failures.empty()) {
                std::cerr << out.failures.size() << " of " << out.total << " runs failed:\n";
                for (const std::string& f : out.failures) std::cerr << "  " << f << "\n";
                return 2;
            }
        } else if (report->parsed()) {
            const ReportTable table = render_report(read_file(aggregate, "report"));
            std::cout << table.text;
            std::cout << table.csv;
        }
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    return 0;
}
