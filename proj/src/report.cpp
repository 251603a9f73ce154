#include "qadapt/report.hpp"

#include <algorithm>
#include <cstdio>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "qadapt/csv.hpp"
#include "qadapt/qlearn.hpp"

namespace qadapt {

namespace {

[[noreturn]] void parse_error(int line, const std::string& why) {
    throw std::runtime_error("parse error on line " + std::to_string(line) + ": " + why);
}

struct MeanRow {
    int order;  // algorithm enum index, fixes the paper's row order
    std::string algorithm, base;
    double acc = 0.0;
    std::optional<double> mse_optimal, mse_all;
    std::optional<long> settle;
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

ReportTable render_report(const std::string& aggregate_csv) {
    static const std::string kHeader = "algorithm,base,seed,acc_final,mse_optimal,mse_all,settle_episode";

    std::istringstream in(aggregate_csv);
    std::string line;
    int lineno = 0;
    std::vector<MeanRow> rows;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (lineno == 1) {
            if (line != kHeader) parse_error(1, "expected header '" + kHeader + "'");
            continue;
        }
        if (trim(line).empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 7) parse_error(lineno, "expected 7 fields, got " + std::to_string(f.size()));
        if (f[2] != "mean") continue;
        MeanRow r;
        const auto alg = parse_algorithm(f[0]);
        if (!alg) parse_error(lineno, "unknown algorithm '" + f[0] + "'");
        r.order = int(*alg);
        r.algorithm = f[0];
        r.base = f[1];
        try {
            r.acc = parse_double(f[3]);
            if (!f[4].empty()) r.mse_optimal = parse_double(f[4]);
            if (!f[5].empty()) r.mse_all = parse_double(f[5]);
            if (!f[6].empty()) r.settle = parse_long(f[6]);
        } catch (const std::invalid_argument& e) {
            parse_error(lineno, e.what());
        }
        rows.push_back(std::move(r));
    }

    ReportTable out;
    out.csv = "algorithm,base,acc,settle_episode,mse_optimal,mse_all\n";
    if (rows.empty()) return out;

    // Bases keep their first-appearance order; rows inside a base group
    // follow the fixed algorithm order.
    std::vector<std::string> bases;
    for (const MeanRow& r : rows) {
        bool seen = false;
        for (const auto& b : bases) seen = seen || b == r.base;
        if (!seen) bases.push_back(r.base);
    }

    for (const std::string& base : bases) {
        std::vector<const MeanRow*> group;
        for (int order = 0; order < kAlgorithmCount; ++order)
            for (const MeanRow& r : rows)
                if (r.base == base && r.order == order) group.push_back(&r);

        const MeanRow* best_acc = nullptr;
        const MeanRow* best_settle = nullptr;
        const MeanRow* best_mo = nullptr;
        const MeanRow* best_ma = nullptr;
        for (const MeanRow* r : group) {
            if (!best_acc || r->acc > best_acc->acc) best_acc = r;
            if (r->settle && (!best_settle || *r->settle < *best_settle->settle)) best_settle = r;
            if (r->mse_optimal && (!best_mo || *r->mse_optimal < *best_mo->mse_optimal)) best_mo = r;
            if (r->mse_all && (!best_ma || *r->mse_all < *best_ma->mse_all)) best_ma = r;
        }

        struct Cells {
            std::string alg, acc, settle, mo, ma;
        };
        std::vector<Cells> cells;
        cells.push_back({"algorithm", "ACC", "EPI", "MSE*", "MSEq"});
        for (const MeanRow* r : group) {
            const auto star = [&](const std::string& s, bool best) {
                return best ? "*" + s + "*" : s;
            };
            cells.push_back({r->algorithm, star(num(r->acc), r == best_acc),
                             star(r->settle ? std::to_string(*r->settle) : "-", r == best_settle),
                             star(r->mse_optimal ? num(*r->mse_optimal) : "-", r == best_mo),
                             star(r->mse_all ? num(*r->mse_all) : "-", r == best_ma)});
            out.csv += r->algorithm + "," + base + "," + format_double(r->acc) + "," +
                       (r->settle ? std::to_string(*r->settle) : "") + "," +
                       (r->mse_optimal ? format_double(*r->mse_optimal) : "") + "," +
                       (r->mse_all ? format_double(*r->mse_all) : "") + "\n";
        }

        std::size_t w[5] = {0, 0, 0, 0, 0};
        for (const Cells& c : cells) {
            const std::string* cols[5] = {&c.alg, &c.acc, &c.settle, &c.mo, &c.ma};
            for (int i = 0; i < 5; ++i) w[i] = std::max(w[i], cols[i]->size());
        }
        out.text += "== base " + base + " ==\n";
        for (const Cells& c : cells) {
            const std::string* cols[5] = {&c.alg, &c.acc, &c.settle, &c.mo, &c.ma};
            std::string row = *cols[0] + std::string(w[0] - cols[0]->size(), ' ');
            for (int i = 1; i < 5; ++i)
                row += "  " + std::string(w[i] - cols[i]->size(), ' ') + *cols[i];
            out.text += row + "\n";
        }
        out.text += "\n";
    }
    return out;
}

}  // namespace qadapt
