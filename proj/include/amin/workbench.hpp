#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "amin/bat.hpp"
#include "amin/model.hpp"
#include "amin/numeric.hpp"
#include "amin/ugfm.hpp"

namespace amin {

struct NetworkInstance {
    AminNetwork network;
    StateDistribution dist;
};

// Dense benchmark family: every arc (i,j) with i < j, target {n}, and the
// uniform distribution p = 1/2^Deg(i) per subset.
inline NetworkInstance gen_semi_complete(int n) {
    if (n < 2) throw std::invalid_argument("semi-complete family needs n >= 2");
    std::vector<std::pair<int, int>> arcs;
    for (int i = 1; i < n; ++i)
        for (int j = i + 1; j <= n; ++j) arcs.emplace_back(i, j);
    AminNetwork net(n, std::move(arcs), {n});
    StateDistribution dist = StateDistribution::uniform(net);
    return {std::move(net), std::move(dist)};
}

namespace detail {

// Portable draws: mt19937_64 output is standard-defined, and we fold bits to
// doubles ourselves so instances are identical across platforms.
inline double uniform01(std::mt19937_64& rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}
inline double uniform01_open(std::mt19937_64& rng) {  // (0, 1]
    return double((rng() >> 11) + 1) * 0x1.0p-53;
}

}  // namespace detail

// Random test instance: each candidate arc appears with arc_probability; a
// random ascending chain is added when node n is not yet reachable from
// node 1. dirichlet=true draws each node's distribution from a flat
// Dirichlet instead of uniform. Identical arguments give identical
// instances.
inline NetworkInstance gen_random_amin(int n, double arc_probability,
                                       std::uint64_t seed,
                                       bool dirichlet = false) {
    if (n < 2) throw std::invalid_argument("random instance needs n >= 2");
    if (!(arc_probability > 0.0 && arc_probability <= 1.0))
        throw std::invalid_argument("arc probability must be in (0, 1]");
    std::mt19937_64 rng(seed);
    std::vector<std::pair<int, int>> arcs;
    for (int i = 1; i < n; ++i)
        for (int j = i + 1; j <= n; ++j)
            if (detail::uniform01(rng) < arc_probability)
                arcs.emplace_back(i, j);
    // Structural 1 -> n path, added as a random ascending chain if missing.
    std::uint64_t reached = 1;
    for (bool grew = true; grew;) {
        grew = false;
        for (auto [i, j] : arcs)
            if (((reached >> (i - 1)) & 1u) && !((reached >> (j - 1)) & 1u)) {
                reached |= std::uint64_t{1} << (j - 1);
                grew = true;
            }
    }
    if (!((reached >> (n - 1)) & 1u)) {
        int cur = 1;
        while (cur != n) {
            int next = cur + 1 + int(rng() % std::uint64_t(n - cur));
            std::pair<int, int> arc{cur, next};
            if (std::find(arcs.begin(), arcs.end(), arc) == arcs.end())
                arcs.push_back(arc);
            cur = next;
        }
    }
    AminNetwork net(n, std::move(arcs), {n});
    StateDistribution dist = StateDistribution::uniform(net);
    if (dirichlet) {
        for (int i : net.transmitting()) {
            std::size_t states = std::size_t{1} << net.degree(i);
            std::vector<double> w(states);
            NeumaierSum total;
            for (auto& v : w) {
                v = -std::log(detail::uniform01_open(rng));
                total.add(v);
            }
            for (auto& v : w) v /= total.value();
            dist.set_row(i, std::move(w));
        }
    }
    return {std::move(net), std::move(dist)};
}

// ---------------------------------------------------------------------------
// Table-style benchmark over the semi-complete family.
// ---------------------------------------------------------------------------

// Closed form for the odometer's visit count.
inline std::uint64_t visited_formula(const AminNetwork& net) {
    std::uint64_t v = (std::uint64_t{1} << net.degree(1)) - 1;
    for (int i : net.transmitting()) {
        if (i == 1) continue;
        if (__builtin_mul_overflow(
                v, (std::uint64_t{1} << net.degree(i)) + 1, &v))
            throw std::overflow_error("visited count exceeds 64 bits");
    }
    return v;
}

struct BenchRow {
    int n = 0;
    std::uint64_t arcs = 0;
    std::uint64_t n_all = 0;
    std::optional<std::uint64_t> n_feasible;
    std::optional<double> reliability;
    std::optional<double> t_bat_s;
    std::optional<double> t_ugfm_s;
    std::optional<std::uint64_t> visited_bat;
    std::optional<std::uint64_t> generated_ugfm;
    std::optional<double> delta;
    std::string note;  // why a cell is empty; not serialized
};

struct BenchReport {
    std::vector<BenchRow> rows;
};

inline constexpr std::uint64_t kDefaultVisitedBudget = 10'000'000;

struct RunBenchOptions {
    int n_lo = 5;
    int n_hi = 7;
    bool run_bat = true;
    bool run_ugfm = true;
    std::uint64_t cap = kDefaultUgfCap;
    // BAT runs only when its predicted visit count fits the budget; the
    // long-run mode lifts this.
    std::uint64_t visited_budget = kDefaultVisitedBudget;
};

// One row per n; engine failures (term cap, budget) mark cells instead of
// aborting the run.
inline BenchReport run_bench(const RunBenchOptions& opt) {
    BenchReport report;
    for (int n = opt.n_lo; n <= opt.n_hi; ++n) {
        auto [net, dist] = gen_semi_complete(n);
        BenchRow row;
        row.n = n;
        row.arcs = net.arc_count();
        row.n_all = n_all(net);
        if (opt.run_bat) {
            std::uint64_t predicted = visited_formula(net);
            if (predicted <= opt.visited_budget) {
                BatResult res = reliability_one_to_sink(net, dist);
                row.reliability = res.reliability;
                row.n_feasible = res.counters.feasible;
                row.visited_bat = res.counters.visited;
                row.t_bat_s = res.counters.elapsed_s;
            } else {
                row.note = "bat skipped: needs " + std::to_string(predicted) +
                           " visits, budget " +
                           std::to_string(opt.visited_budget);
            }
        }
        if (opt.run_ugfm) {
            try {
                UgfResult res = reliability_ugfm(net, dist, opt.cap);
                row.t_ugfm_s = res.stats.elapsed_s;
                row.generated_ugfm = res.stats.generated_count;
                if (!row.reliability) row.reliability = res.reliability;
                if (!row.n_feasible)
                    row.n_feasible = res.stats.final_term_count;
                if (row.t_bat_s)
                    row.delta = std::abs(*row.reliability - res.reliability);
            } catch (const TermCapExceeded& e) {
                if (!row.note.empty()) row.note += "; ";
                row.note += e.what();
            }
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

// ---------------------------------------------------------------------------
// Report serialization. Both formats round-trip byte-identically:
// emit(parse(emit(r))) == emit(r). Timings are fixed 6-decimal seconds,
// other reals are shortest round-trip decimals, empty cells are "-" in CSV
// and null in JSON.
// ---------------------------------------------------------------------------

inline constexpr const char* kBenchCsvHeader =
    "n,arcs,n_all,n_feasible,reliability,t_bat_s,t_ugfm_s,visited_bat,"
    "generated_ugfm,delta";

namespace detail {

template <class T, class Fmt>
inline std::string cell(const std::optional<T>& v, Fmt&& fmt) {
    return v ? fmt(*v) : std::string("-");
}

}  // namespace detail

inline std::string emit_csv(const BenchReport& report) {
    std::string out = std::string(kBenchCsvHeader) + "\n";
    auto u64s = [](std::uint64_t v) { return std::to_string(v); };
    auto dbl = [](double v) { return fmt_double(v); };
    auto time6 = [](double v) { return fmt_fixed(v, 6); };
    for (const auto& r : report.rows) {
        out += std::to_string(r.n) + "," + std::to_string(r.arcs) + "," +
               std::to_string(r.n_all) + "," +
               detail::cell(r.n_feasible, u64s) + "," +
               detail::cell(r.reliability, dbl) + "," +
               detail::cell(r.t_bat_s, time6) + "," +
               detail::cell(r.t_ugfm_s, time6) + "," +
               detail::cell(r.visited_bat, u64s) + "," +
               detail::cell(r.generated_ugfm, u64s) + "," +
               detail::cell(r.delta, dbl) + "\n";
    }
    return out;
}

inline BenchReport parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kBenchCsvHeader)
        throw std::invalid_argument("bench CSV: bad header");
    BenchReport report;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::size_t start = 0;
        for (;;) {
            std::size_t pos = line.find(',', start);
            f.push_back(line.substr(start, pos - start));
            if (pos == std::string::npos) break;
            start = pos + 1;
        }
        if (f.size() != 10)
            throw std::invalid_argument("bench CSV: expected 10 fields");
        auto opt_u64 = [](const std::string& s) -> std::optional<std::uint64_t> {
            if (s == "-") return std::nullopt;
            return parse_u64(s);
        };
        auto opt_dbl = [](const std::string& s) -> std::optional<double> {
            if (s == "-") return std::nullopt;
            return parse_double(s);
        };
        BenchRow r;
        r.n = int(parse_u64(f[0]));
        r.arcs = parse_u64(f[1]);
        r.n_all = parse_u64(f[2]);
        r.n_feasible = opt_u64(f[3]);
        r.reliability = opt_dbl(f[4]);
        r.t_bat_s = opt_dbl(f[5]);
        r.t_ugfm_s = opt_dbl(f[6]);
        r.visited_bat = opt_u64(f[7]);
        r.generated_ugfm = opt_u64(f[8]);
        r.delta = opt_dbl(f[9]);
        report.rows.push_back(std::move(r));
    }
    return report;
}

inline std::string emit_json(const BenchReport& report) {
    auto u64s = [](std::uint64_t v) { return std::to_string(v); };
    auto dbl = [](double v) { return fmt_double(v); };
    auto time6 = [](double v) { return fmt_fixed(v, 6); };
    auto cell_or_null = [](const auto& v, auto&& fmt) {
        return v ? fmt(*v) : std::string("null");
    };
    std::string out = "[\n";
    for (std::size_t k = 0; k < report.rows.size(); ++k) {
        const auto& r = report.rows[k];
        out += "  {\"n\": " + std::to_string(r.n) +
               ", \"arcs\": " + std::to_string(r.arcs) +
               ", \"n_all\": " + std::to_string(r.n_all) +
               ", \"n_feasible\": " + cell_or_null(r.n_feasible, u64s) +
               ", \"reliability\": " + cell_or_null(r.reliability, dbl) +
               ", \"t_bat_s\": " + cell_or_null(r.t_bat_s, time6) +
               ", \"t_ugfm_s\": " + cell_or_null(r.t_ugfm_s, time6) +
               ", \"visited_bat\": " + cell_or_null(r.visited_bat, u64s) +
               ", \"generated_ugfm\": " + cell_or_null(r.generated_ugfm, u64s) +
               ", \"delta\": " + cell_or_null(r.delta, dbl) + "}";
        out += k + 1 < report.rows.size() ? ",\n" : "\n";
    }
    out += "]\n";
    return out;
}

inline BenchReport parse_json(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text);
    if (!doc.is_array())
        throw std::invalid_argument("bench JSON: expected an array");
    BenchReport report;
    for (const auto& obj : doc) {
        BenchRow r;
        r.n = obj.at("n").get<int>();
        r.arcs = obj.at("arcs").get<std::uint64_t>();
        r.n_all = obj.at("n_all").get<std::uint64_t>();
        auto opt_u64 = [&](const char* key) -> std::optional<std::uint64_t> {
            const auto& v = obj.at(key);
            if (v.is_null()) return std::nullopt;
            return v.get<std::uint64_t>();
        };
        auto opt_dbl = [&](const char* key) -> std::optional<double> {
            const auto& v = obj.at(key);
            if (v.is_null()) return std::nullopt;
            return v.get<double>();
        };
        r.n_feasible = opt_u64("n_feasible");
        r.reliability = opt_dbl("reliability");
        r.t_bat_s = opt_dbl("t_bat_s");
        r.t_ugfm_s = opt_dbl("t_ugfm_s");
        r.visited_bat = opt_u64("visited_bat");
        r.generated_ugfm = opt_u64("generated_ugfm");
        r.delta = opt_dbl("delta");
        report.rows.push_back(std::move(r));
    }
    return report;
}

}  // namespace amin
