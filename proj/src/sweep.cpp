#include "qadapt/sweep.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "qadapt/csv.hpp"

namespace qadapt {

namespace {

struct Line {
    int no;
    std::string key;
    std::string value;
};

std::vector<Line> split_config_lines(const std::string& text) {
    std::vector<Line> lines;
    std::istringstream in(text);
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("manifest: expected 'key = value' on line " + std::to_string(no));
        lines.push_back({no, trim(line.substr(0, eq)), trim(line.substr(eq + 1))});
    }
    return lines;
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

}  // namespace

SweepPlan parse_sweep_manifest(const std::string& text, bool long_budget) {
    std::vector<std::pair<std::string, std::string>> defaults;  // insertion-ordered
    std::map<std::string, std::string> bases;
    struct RawRun {
        int no;
        std::string algorithm, base, seed;
        std::vector<std::pair<std::string, std::string>> overrides;
    };
    std::vector<RawRun> raws;

    for (const Line& l : split_config_lines(text)) {
        if (l.key == "run") {
            const auto toks = split_ws(l.value);
            if (toks.size() < 3)
                throw ConfigError("manifest: run needs '<algorithm> <base|-> <seed>' on line " +
                                  std::to_string(l.no));
            RawRun r{l.no, toks[0], toks[1], toks[2], {}};
            for (std::size_t i = 3; i < toks.size(); ++i) {
                auto eq = toks[i].find('=');
                if (eq == std::string::npos)
                    throw ConfigError("manifest: run override '" + toks[i] +
                                      "' is not key=value on line " + std::to_string(l.no));
                const std::string key = toks[i].substr(0, eq);
                if (key == "algorithm" || key == "seed" || key == "base_checkpoint" ||
                    key == "outdir" || key == "env")
                    throw ConfigError("manifest: '" + key + "' cannot be a run override (line " +
                                      std::to_string(l.no) + ")");
                r.overrides.emplace_back(key, toks[i].substr(eq + 1));
            }
            raws.push_back(std::move(r));
            continue;
        }
        if (l.key.rfind("base ", 0) == 0) {
            const std::string name = trim(l.key.substr(5));
            if (name.empty() || bases.count(name))
                throw ConfigError("manifest: bad or duplicate base name on line " +
                                  std::to_string(l.no));
            bases[name] = l.value;
            continue;
        }
        for (const auto& [k, v] : defaults)
            if (k == l.key)
                throw ConfigError("manifest: duplicate key '" + l.key + "' on line " +
                                  std::to_string(l.no));
        defaults.emplace_back(l.key, l.value);
    }
    if (raws.empty()) throw ConfigError("manifest: no run lines");

    const auto default_value = [&](const std::string& key) -> const std::string* {
        for (const auto& [k, v] : defaults)
            if (k == key) return &v;
        return nullptr;
    };
    std::string outdir = "sweep";
    if (const auto* v = default_value("outdir")) outdir = *v;

    SweepPlan plan;
    plan.outdir = outdir;
    for (const RawRun& r : raws) {
        std::string base_path;
        if (r.base != "-") {
            auto it = bases.find(r.base);
            if (it == bases.end())
                throw ConfigError("manifest: run on line " + std::to_string(r.no) +
                                  " uses undefined base '" + r.base + "'");
            base_path = it->second;
        }
        std::string run_id = r.algorithm;
        if (r.base != "-") run_id += "_" + r.base;
        run_id += "_s" + r.seed;
        for (const std::string& seen : plan.run_ids)
            if (seen == run_id)
                throw ConfigError("manifest: duplicate run '" + run_id + "' on line " +
                                  std::to_string(r.no));

        // Assemble the run's config text: defaults, then the positional
        // fields, then overrides; later lines replace earlier ones.
        std::vector<std::pair<std::string, std::string>> kv = defaults;
        const auto set = [&](const std::string& key, const std::string& value) {
            for (auto& [k, v] : kv)
                if (k == key) {
                    v = value;
                    return;
                }
            kv.emplace_back(key, value);
        };
        set("algorithm", r.algorithm);
        set("seed", r.seed);
        if (!base_path.empty()) set("base_checkpoint", base_path);
        for (const auto& [k, v] : r.overrides) set(k, v);
        bool episodes_set = false;
        for (const auto& [k, v] : kv) episodes_set = episodes_set || k == "episodes";
        const auto* env = default_value("env");
        if (long_budget && !episodes_set && env && *env == "intersection")
            set("episodes", "1500000");
        set("outdir", (std::filesystem::path(outdir) / run_id).string());

        std::string text_out;
        for (const auto& [k, v] : kv) text_out += k + " = " + v + "\n";
        RunConfig cfg;
        try {
            cfg = parse_run_config(text_out);
        } catch (const ConfigError& e) {
            throw ConfigError("manifest: run '" + run_id + "' (line " + std::to_string(r.no) +
                              "): " + e.what());
        }
        plan.runs.push_back(std::move(cfg));
        plan.run_ids.push_back(run_id);
        plan.base_names.push_back(r.base);
    }
    return plan;
}

namespace {

std::string opt_double(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
}

}  // namespace

SweepOutcome run_sweep(const SweepPlan& plan, std::ostream* progress) {
    SweepOutcome out;
    out.total = int(plan.runs.size());

    struct Row {
        std::string algorithm, base, seed;
        RunSummary sum;
    };
    std::vector<Row> rows;
    for (std::size_t i = 0; i < plan.runs.size(); ++i) {
        const RunConfig& cfg = plan.runs[i];
        if (progress)
            *progress << "[" << i + 1 << "/" << plan.runs.size() << "] " << plan.run_ids[i]
                      << std::endl;
        try {
            RunSummary sum = run_one(cfg);
            if (progress) {
                *progress << "    acc " << format_double(sum.acc_final);
                if (sum.mse_all) *progress << "  mse_all " << format_double(*sum.mse_all);
                if (sum.settle)
                    *progress << "  settle " << *sum.settle;
                else
                    *progress << "  settle none";
                *progress << std::endl;
            }
            rows.push_back({algorithm_name(cfg.train.algorithm), plan.base_names[i],
                            std::to_string(cfg.train.seed), std::move(sum)});
        } catch (const std::exception& e) {
            if (progress) *progress << "    FAILED: " << e.what() << std::endl;
            out.failures.push_back(plan.run_ids[i] + ": " + e.what());
        }
    }

    std::string csv = "algorithm,base,seed,acc_final,mse_optimal,mse_all,settle_episode\n";
    const auto emit = [&](const Row& r) {
        csv += r.algorithm + "," + r.base + "," + r.seed + "," + format_double(r.sum.acc_final) +
               "," + opt_double(r.sum.mse_optimal) + "," + opt_double(r.sum.mse_all) + "," +
               (r.sum.settle ? std::to_string(*r.sum.settle) : std::string()) + "\n";
    };
    for (const Row& r : rows) emit(r);

    // Seed-mean rows per (algorithm, base), in first-appearance order. The
    // settle mean is only meaningful when every seed settled.
    std::vector<std::pair<std::string, std::string>> groups;
    for (const Row& r : rows) {
        const auto key = std::make_pair(r.algorithm, r.base);
        bool seen = false;
        for (const auto& g : groups) seen = seen || g == key;
        if (!seen) groups.push_back(key);
    }
    for (const auto& [alg, base] : groups) {
        Row mean{alg, base, "mean", {}};
        int n = 0, n_settle = 0;
        double acc = 0, mo = 0, ma = 0, settle = 0;
        bool have_mo = true, have_ma = true;
        for (const Row& r : rows) {
            if (r.algorithm != alg || r.base != base || r.seed == "mean") continue;
            ++n;
            acc += r.sum.acc_final;
            have_mo = have_mo && r.sum.mse_optimal.has_value();
            have_ma = have_ma && r.sum.mse_all.has_value();
            if (r.sum.mse_optimal) mo += *r.sum.mse_optimal;
            if (r.sum.mse_all) ma += *r.sum.mse_all;
            if (r.sum.settle) {
                ++n_settle;
                settle += double(*r.sum.settle);
            }
        }
        mean.sum.acc_final = acc / n;
        if (have_mo) mean.sum.mse_optimal = mo / n;
        if (have_ma) mean.sum.mse_all = ma / n;
        if (n_settle == n) mean.sum.settle = long(settle / n);
        emit(mean);
    }

    const std::filesystem::path aggregate = std::filesystem::path(plan.outdir) / "aggregate.csv";
    std::filesystem::create_directories(plan.outdir);
    std::ofstream file(aggregate, std::ios::binary | std::ios::trunc);
    file << csv;
    if (!file) throw std::runtime_error("cannot write " + aggregate.string());
    out.aggregate_path = aggregate.string();
    return out;
}

}  // namespace qadapt
