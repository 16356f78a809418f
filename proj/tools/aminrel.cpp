// aminrel: compute exact reliability of acyclic multistate information
// networks; validate fixtures, benchmark the engines, generate instances.
//
// Exit codes: 0 ok, 1 validation/agreement failure, 2 input error,
// 3 resource cap or budget exceeded.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "amin/bat.hpp"
#include "amin/json_io.hpp"
#include "amin/model.hpp"
#include "amin/oracle.hpp"
#include "amin/ugfm.hpp"
#include "amin/workbench.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFail = 1;       // validation or agreement failure
constexpr int kInputError = 2; // unreadable/malformed input
constexpr int kResource = 3;   // term cap or enumeration budget

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw amin::ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw amin::ParseError("cannot write " + path);
    out << text;
}

unsigned env_threads() {
    const char* v = std::getenv("AMIN_REL_THREADS");
    if (!v) return 1;
    long n = std::strtol(v, nullptr, 10);
    return n >= 1 ? unsigned(n) : 1;
}

std::vector<int> parse_targets(const std::string& list) {
    std::vector<int> out;
    std::size_t start = 0;
    while (start <= list.size()) {
        std::size_t pos = list.find(',', start);
        std::string tok = list.substr(start, pos - start);
        if (tok.empty()) throw amin::ParseError("bad --targets list");
        out.push_back(int(amin::parse_u64(tok)));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

struct EngineRun {
    std::string engine;
    double reliability = 0.0;
    std::optional<std::uint64_t> feasible;
    std::optional<std::uint64_t> visited;
    std::optional<std::uint64_t> generated;
    double elapsed_s = 0.0;
};

amin::NetworkInstance load_instance(const std::string& path,
                                    const std::string& targets_override) {
    amin::NetworkInstance inst = amin::load_network(read_file(path));
    if (!targets_override.empty()) {
        amin::AminNetwork net(inst.network.node_count(),
                              inst.network.raw_arcs(),
                              parse_targets(targets_override));
        inst.network = std::move(net);
    }
    return inst;
}

int report_violations(const std::vector<amin::Violation>& violations) {
    for (const auto& v : violations) std::cout << v.message << "\n";
    return violations.empty() ? kOk : kFail;
}

int cmd_validate(const std::string& path) {
    amin::NetworkInstance inst = load_instance(path, "");
    auto violations = amin::validate(inst.network, inst.dist);
    int rc = report_violations(violations);
    if (rc == kOk) std::cout << "ok\n";
    return rc;
}

int cmd_rel(const std::string& path, const std::string& engine,
            const std::string& targets, std::uint64_t cap,
            std::uint64_t budget, const std::string& format) {
    amin::NetworkInstance inst = load_instance(path, targets);
    const amin::AminNetwork& net = inst.network;
    auto violations = amin::validate(net, inst.dist);
    if (!violations.empty()) return report_violations(violations);

    std::vector<EngineRun> runs;
    amin::NodeSubset required = net.targets();
    bool multi = required.count() > 1;
    auto run_one = [&](const std::string& name) {
        EngineRun r;
        r.engine = name;
        if (name == "bat") {
            amin::BatResult res = amin::reliability_odometer(
                net, inst.dist, required, env_threads());
            r.reliability = res.reliability;
            r.feasible = res.counters.feasible;
            r.visited = res.counters.visited;
            r.elapsed_s = res.counters.elapsed_s;
        } else if (name == "dfs") {
            amin::BatResult res = amin::reliability_frontier_dfs(net, inst.dist);
            r.reliability = res.reliability;
            r.feasible = res.counters.feasible;
            r.visited = res.counters.visited;
            r.elapsed_s = res.counters.elapsed_s;
        } else if (name == "ugfm") {
            amin::UgfResult res = amin::reliability_ugfm(net, inst.dist, cap);
            r.reliability = res.reliability;
            r.feasible = res.stats.final_term_count;
            r.generated = res.stats.generated_count;
            r.elapsed_s = res.stats.elapsed_s;
        } else {  // oracle
            amin::detail::StopWatch sw;
            r.reliability = amin::brute_force_reliability(net, inst.dist,
                                                          required, budget);
            r.elapsed_s = sw.seconds();
        }
        runs.push_back(r);
    };
    if (engine == "all") {
        // Comparison mode: an engine that hits its cap or precondition is
        // skipped with a note rather than aborting the other runs.
        for (const char* name : {"bat", "dfs", "ugfm", "oracle"}) {
            try {
                run_one(name);
            } catch (const amin::BudgetExceeded& e) {
                std::cerr << name << " skipped: " << e.what() << "\n";
            } catch (const amin::TermCapExceeded& e) {
                std::cerr << name << " skipped: " << e.what() << "\n";
            } catch (const std::invalid_argument& e) {
                std::cerr << name << " skipped: " << e.what() << "\n";
            }
        }
    } else {
        run_one(engine);
    }
    double max_delta = 0.0;
    for (const auto& a : runs)
        for (const auto& b : runs)
            max_delta =
                std::max(max_delta, std::abs(a.reliability - b.reliability));

    std::map<amin::NodeSubset, double> buckets;
    if (multi) {
        buckets = engine == "ugfm"
                      ? amin::ugfm_by_target_subset(net, inst.dist, cap).buckets
                      : amin::reliability_by_target_subset(net, inst.dist)
                            .buckets;
    }

    if (format == "json") {
        std::string out = "{\"engines\": [";
        for (std::size_t k = 0; k < runs.size(); ++k) {
            const auto& r = runs[k];
            out += "{\"engine\": \"" + r.engine +
                   "\", \"reliability\": " + amin::fmt_double(r.reliability);
            if (r.feasible)
                out += ", \"feasible\": " + std::to_string(*r.feasible);
            if (r.visited)
                out += ", \"visited\": " + std::to_string(*r.visited);
            if (r.generated)
                out += ", \"generated\": " + std::to_string(*r.generated);
            out += ", \"elapsed_s\": " + amin::fmt_fixed(r.elapsed_s, 6) + "}";
            if (k + 1 < runs.size()) out += ", ";
        }
        out += "]";
        if (runs.size() > 1)
            out += ", \"max_delta\": " + amin::fmt_double(max_delta);
        if (multi) {
            out += ", \"buckets\": {";
            bool first = true;
            for (const auto& [tau, p] : buckets) {
                if (!first) out += ", ";
                out += "\"" + tau.to_string() + "\": " + amin::fmt_double(p);
                first = false;
            }
            out += "}";
        }
        out += "}\n";
        std::cout << out;
    } else {
        for (const auto& r : runs) {
            std::cout << "engine: " << r.engine << "\n";
            std::cout << "R = " << amin::fmt_double(r.reliability) << "\n";
            if (r.feasible) std::cout << "feasible = " << *r.feasible << "\n";
            if (r.visited) std::cout << "visited = " << *r.visited << "\n";
            if (r.generated)
                std::cout << "generated = " << *r.generated << "\n";
            std::cout << "elapsed_s = " << amin::fmt_fixed(r.elapsed_s, 6)
                      << "\n";
        }
        if (runs.size() > 1)
            std::cout << "max_delta = " << amin::fmt_double(max_delta) << "\n";
        if (multi)
            for (const auto& [tau, p] : buckets)
                std::cout << "R" << tau.to_string() << " = "
                          << amin::fmt_double(p) << "\n";
    }
    if (runs.size() > 1 && max_delta > 1e-9) {
        std::cerr << "engines disagree: max delta "
                  << amin::fmt_double(max_delta) << "\n";
        return kFail;
    }
    return kOk;
}

std::pair<int, int> parse_range(const std::string& text) {
    std::size_t pos = text.find("..");
    if (pos == std::string::npos) {
        int n = int(amin::parse_u64(text));
        return {n, n};
    }
    int lo = int(amin::parse_u64(text.substr(0, pos)));
    int hi = int(amin::parse_u64(text.substr(pos + 2)));
    if (hi < lo) throw amin::ParseError("bad range " + text);
    return {lo, hi};
}

int cmd_bench(const std::string& range, const std::string& engine,
              std::uint64_t cap, std::optional<std::uint64_t> budget,
              bool long_run, const std::string& format,
              const std::string& out_path) {
    auto [lo, hi] = parse_range(range);
    amin::RunBenchOptions opt;
    opt.n_lo = lo;
    opt.n_hi = hi;
    opt.run_bat = engine == "bat" || engine == "all";
    opt.run_ugfm = engine == "ugfm" || engine == "all";
    opt.cap = cap;
    if (budget)
        opt.visited_budget = *budget;
    else if (long_run)
        opt.visited_budget = ~std::uint64_t{0};
    amin::BenchReport report = amin::run_bench(opt);
    for (const auto& row : report.rows)
        if (!row.note.empty())
            std::cerr << "n=" << row.n << ": " << row.note << "\n";
    if (format == "json") {
        write_output(out_path, amin::emit_json(report));
    } else if (format == "text") {
        std::string text;
        for (const auto& row : report.rows) {
            text += "n=" + std::to_string(row.n) +
                    " arcs=" + std::to_string(row.arcs) +
                    " n_all=" + std::to_string(row.n_all);
            if (row.n_feasible)
                text += " n_feasible=" + std::to_string(*row.n_feasible);
            if (row.reliability)
                text += " R=" + amin::fmt_double(*row.reliability);
            if (row.t_bat_s)
                text += " t_bat_s=" + amin::fmt_fixed(*row.t_bat_s, 6);
            if (row.t_ugfm_s)
                text += " t_ugfm_s=" + amin::fmt_fixed(*row.t_ugfm_s, 6);
            if (row.visited_bat)
                text += " visited=" + std::to_string(*row.visited_bat);
            if (row.generated_ugfm)
                text += " generated=" + std::to_string(*row.generated_ugfm);
            if (row.delta) text += " delta=" + amin::fmt_double(*row.delta);
            text += "\n";
        }
        write_output(out_path, text);
    } else {
        write_output(out_path, amin::emit_csv(report));
    }
    return kOk;
}

int cmd_gen(const std::string& kind, int n, std::uint64_t seed,
            double arc_prob, bool dirichlet, const std::string& out_path) {
    amin::NetworkInstance inst =
        kind == "semi" ? amin::gen_semi_complete(n)
                       : amin::gen_random_amin(n, arc_prob, seed, dirichlet);
    bool uniform = kind == "semi" || !dirichlet;
    write_output(out_path, amin::save_network(inst.network, inst.dist, uniform));
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact reliability of acyclic multistate information "
                 "networks"};
    app.require_subcommand(1);

    std::string path, engine = "bat", targets, format = "text";
    std::string range = "5..7", out_path, kind;
    std::uint64_t cap = amin::kDefaultUgfCap;
    std::uint64_t budget = amin::kDefaultOracleBudget;
    bool long_run = false, dirichlet = false;
    int gen_n = 0;
    std::uint64_t seed = 1;
    double arc_prob = 0.5;

    auto* validate_cmd =
        app.add_subcommand("validate", "check a network fixture");
    validate_cmd->add_option("path", path, "network JSON file")->required();

    auto* rel_cmd = app.add_subcommand("rel", "compute reliability");
    rel_cmd->add_option("path", path, "network JSON file")->required();
    rel_cmd->add_option("--engine", engine, "bat | dfs | ugfm | oracle | all")
        ->check(CLI::IsMember({"bat", "dfs", "ugfm", "oracle", "all"}));
    rel_cmd->add_option("--targets", targets, "override targets, e.g. 4,5");
    rel_cmd->add_option("--cap", cap, "UGF stored-term cap");
    rel_cmd->add_option("--budget", budget, "oracle enumeration budget");
    rel_cmd->add_option("--format", format, "text | json")
        ->check(CLI::IsMember({"text", "json"}));

    auto* bench_cmd = app.add_subcommand("bench", "semi-complete benchmark");
    bench_cmd->add_option("range", range, "node-count range, e.g. 5..7");
    bench_cmd->add_option("--engine", engine, "bat | ugfm | all")
        ->check(CLI::IsMember({"bat", "ugfm", "all"}));
    bench_cmd->add_option("--cap", cap, "UGF stored-term cap");
    bench_cmd->add_option("--budget", budget, "BAT visit budget");
    bench_cmd->add_flag("--long", long_run, "lift the BAT visit budget");
    bench_cmd->add_option("--format", format, "csv | json | text")
        ->check(CLI::IsMember({"csv", "json", "text"}));
    bench_cmd->add_option("-o,--out", out_path, "write to file");

    auto* gen_cmd = app.add_subcommand("gen", "generate a network fixture");
    gen_cmd->add_option("kind", kind, "semi | random")
        ->required()
        ->check(CLI::IsMember({"semi", "random"}));
    gen_cmd->add_option("n", gen_n, "node count")->required();
    gen_cmd->add_option("--seed", seed, "random seed");
    gen_cmd->add_option("--arc-prob", arc_prob, "arc probability");
    gen_cmd->add_flag("--dirichlet", dirichlet,
                      "Dirichlet state distributions");
    gen_cmd->add_option("-o,--out", out_path, "write to file");

    // default bench engine differs from rel's
    if (argc > 1 && std::string(argv[1]) == "bench") engine = "all";

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInputError;
    }
    bool budget_given = bench_cmd->count("--budget") > 0;

    try {
        if (validate_cmd->parsed()) return cmd_validate(path);
        if (rel_cmd->parsed())
            return cmd_rel(path, engine, targets, cap, budget, format);
        if (bench_cmd->parsed()) {
            if (format == "text" && bench_cmd->count("--format") == 0)
                format = "csv";
            return cmd_bench(range, engine, cap,
                             budget_given
                                 ? std::optional<std::uint64_t>(budget)
                                 : std::nullopt,
                             long_run, format, out_path);
        }
        if (gen_cmd->parsed())
            return cmd_gen(kind, gen_n, seed, arc_prob, dirichlet, out_path);
    } catch (const amin::TermCapExceeded& e) {
        std::cerr << e.what() << "\n";
        return kResource;
    } catch (const amin::BudgetExceeded& e) {
        std::cerr << e.what() << "\n";
        return kResource;
    } catch (const amin::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kInputError;
    }
    return kOk;
}
