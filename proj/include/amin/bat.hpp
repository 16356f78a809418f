#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "amin/model.hpp"
#include "amin/numeric.hpp"
#include "amin/spread.hpp"

namespace amin {

struct BatCounters {
    std::uint64_t visited = 0;   // state vectors generated
    std::uint64_t feasible = 0;  // of those, feasible for the network targets
    double elapsed_s = 0.0;
};

namespace detail {

inline std::uint64_t node_mask_of(const std::vector<int>& nodes) {
    std::uint64_t m = 0;
    for (int v : nodes) m |= std::uint64_t{1} << (v - 1);
    return m;
}

class StopWatch {
    std::chrono::steady_clock::time_point t0 =
        std::chrono::steady_clock::now();

  public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             t0)
            .count();
    }
};

// Odometer walk with the node-1 coordinate restricted to [lo1, hi1]
// (inclusive); every other transmitting coordinate runs 0..2^Deg. The
// visitor sees every generated vector; spread fields beyond `consistent`
// and the probability are meaningful only for consistent vectors.
template <class Visitor>
inline BatCounters odometer_range(const AminNetwork& net,
                                  const StateDistribution& dist,
                                  StateLabel lo1, StateLabel hi1,
                                  NodeSubset required, Visitor&& visit) {
    if (!net.is_transmitting(1))
        throw std::invalid_argument("node 1 must be transmitting");
    BatCounters counters;
    if (lo1 > hi1) return counters;
    const auto& nodes = net.transmitting();
    StateVector x(net.node_count());
    x[1] = lo1;
    for (;;) {
        ++counters.visited;
        SpreadResult sr = propagate_early_exit(net, x);
        double px = 0.0;
        if (sr.consistent) {
            px = probability(net, dist, x);
            if (required.subset_of(sr.reached)) ++counters.feasible;
        }
        visit(static_cast<const StateVector&>(x), sr, px);
        // Mixed-radix increment, node-1 coordinate least significant.
        std::size_t k = 0;
        for (; k < nodes.size(); ++k) {
            int i = nodes[k];
            StateLabel hi =
                k == 0 ? hi1 : StateLabel(std::uint64_t{1} << net.degree(i));
            if (x[i] < hi) {
                ++x[i];
                break;
            }
            x[i] = k == 0 ? lo1 : 0;
        }
        if (k == nodes.size()) break;
    }
    return counters;
}

}  // namespace detail

// Full odometer enumeration: node 1 ranges over labels 2..2^Deg(1) (the
// source must transmit a non-empty subset), every other transmitting node
// over 0..2^Deg(i).
template <class Visitor>
inline BatCounters enumerate_odometer(const AminNetwork& net,
                                      const StateDistribution& dist,
                                      Visitor&& visit) {
    detail::StopWatch sw;
    BatCounters c = detail::odometer_range(
        net, dist, 2, StateLabel(std::uint64_t{1} << net.degree(1)),
        net.targets(), std::forward<Visitor>(visit));
    c.elapsed_s = sw.seconds();
    return c;
}

struct BatResult {
    double reliability = 0.0;
    BatCounters counters;
};

// Reliability of reaching every node of `required` from node 1, accumulated
// over the odometer enumeration. threads > 1 splits the node-1 label range
// into contiguous partitions whose partial sums are reduced in ascending
// partition order, so a given (input, threads) pair is bit-reproducible.
inline BatResult reliability_odometer(const AminNetwork& net,
                                      const StateDistribution& dist,
                                      NodeSubset required,
                                      unsigned threads = 1) {
    detail::StopWatch sw;
    StateLabel lo = 2, hi = StateLabel(std::uint64_t{1} << net.degree(1));
    std::uint64_t range = hi >= lo ? hi - lo + 1 : 0;
    unsigned parts = unsigned(std::min<std::uint64_t>(
        range, threads == 0 ? 1 : threads));
    BatResult out;
    if (parts <= 1) {
        NeumaierSum r;
        out.counters = detail::odometer_range(
            net, dist, lo, hi, required,
            [&](const StateVector&, const SpreadResult& sr, double px) {
                if (sr.consistent && required.subset_of(sr.reached))
                    r.add(px);
            });
        out.reliability = r.value();
    } else {
        std::uint64_t chunk = (range + parts - 1) / parts;
        std::vector<NeumaierSum> sums(parts);
        std::vector<BatCounters> counts(parts);
        std::vector<std::thread> workers;
        for (unsigned w = 0; w < parts; ++w) {
            StateLabel a = StateLabel(lo + w * chunk);
            StateLabel b =
                StateLabel(std::min<std::uint64_t>(hi, a + chunk - 1));
            workers.emplace_back([&, w, a, b] {
                counts[w] = detail::odometer_range(
                    net, dist, a, b, required,
                    [&sums, w, required](const StateVector&,
                                         const SpreadResult& sr, double px) {
                        if (sr.consistent && required.subset_of(sr.reached))
                            sums[w].add(px);
                    });
            });
        }
        for (auto& t : workers) t.join();
        NeumaierSum r;
        for (unsigned w = 0; w < parts; ++w) {
            r.add(sums[w].value());
            out.counters.visited += counts[w].visited;
            out.counters.feasible += counts[w].feasible;
        }
        out.reliability = r.value();
    }
    out.counters.elapsed_s = sw.seconds();
    return out;
}

// One-to-one reliability: the target is the network's single target, or a
// caller-designated node.
inline BatResult reliability_one_to_sink(const AminNetwork& net,
                                         const StateDistribution& dist,
                                         std::optional<int> target = {},
                                         unsigned threads = 1) {
    NodeSubset required;
    if (target) {
        required.add(*target);
    } else {
        required = net.targets();
        if (required.count() != 1)
            throw std::invalid_argument(
                "one-to-one reliability needs a single target");
    }
    return reliability_odometer(net, dist, required, threads);
}

namespace detail {

// Frontier DFS over flexible state vectors: repeatedly expand the
// smallest-label pending node through its labels 1..2^Deg. Reached
// transmitting nodes join the frontier, reached targets are recorded; an
// empty frontier is a complete consistent vector (unlisted nodes stay Z).
template <class OnComplete>
inline void frontier_rec(const AminNetwork& net,
                         const StateDistribution& dist,
                         std::uint64_t transmitting_mask, StateVector& x,
                         std::uint64_t frontier, std::uint64_t tau, double p,
                         std::uint64_t& assignments, OnComplete&& complete) {
    if (frontier == 0) {
        complete(static_cast<const StateVector&>(x),
                 NodeSubset::from_bits(tau), p);
        return;
    }
    int v = std::countr_zero(frontier) + 1;
    std::uint64_t rest = frontier & (frontier - 1);
    const auto& masks = net.state_masks(v);
    const auto& probs = dist.row(v);
    StateLabel top = StateLabel(std::uint64_t{1} << net.degree(v));
    for (StateLabel lab = 1; lab <= top; ++lab) {
        ++assignments;
        x[v] = lab;
        std::uint64_t sub = masks[lab];
        // Arcs ascend, so sub never contains an already-expanded node; new
        // pending nodes are exactly the transmitting members of sub.
        frontier_rec(net, dist, transmitting_mask, x,
                     rest | (sub & transmitting_mask),
                     tau | (sub & net.targets().bits), p * probs[lab - 1],
                     assignments, complete);
    }
    x[v] = kZState;
}

template <class OnComplete>
inline std::uint64_t frontier_walk(const AminNetwork& net,
                                   const StateDistribution& dist,
                                   OnComplete&& complete) {
    if (!net.is_transmitting(1))
        throw std::invalid_argument("node 1 must be transmitting");
    StateVector x(net.node_count());
    std::uint64_t assignments = 0;
    std::uint64_t tau0 = net.targets().bits & 1u;
    frontier_rec(net, dist, node_mask_of(net.transmitting()), x,
                 std::uint64_t{1}, tau0, 1.0, assignments,
                 std::forward<OnComplete>(complete));
    return assignments;
}

}  // namespace detail

// Emits the feasible vectors (canonical fixed-length form; unreached nodes
// at Z) found by the frontier DFS. visited counts label assignments tried.
template <class Visitor>
inline BatCounters enumerate_frontier_dfs(const AminNetwork& net,
                                          const StateDistribution& dist,
                                          Visitor&& visit) {
    detail::StopWatch sw;
    BatCounters counters;
    NodeSubset required = net.targets();
    counters.visited = detail::frontier_walk(
        net, dist,
        [&](const StateVector& x, NodeSubset tau, double px) {
            if (required.subset_of(tau)) {
                ++counters.feasible;
                visit(x, px);
            }
        });
    counters.elapsed_s = sw.seconds();
    return counters;
}

inline BatResult reliability_frontier_dfs(const AminNetwork& net,
                                          const StateDistribution& dist) {
    NeumaierSum r;
    BatResult out;
    out.counters = enumerate_frontier_dfs(
        net, dist, [&](const StateVector&, double px) { r.add(px); });
    out.reliability = r.value();
    return out;
}

struct SubsetReliability {
    std::map<NodeSubset, double> buckets;  // keyed by reached target subset
    BatCounters counters;
};

// Accumulates every consistent vector's probability into the bucket of its
// reached target subset; the ∅ bucket holds the failure mass and the buckets
// sum to 1. R for "at least τ" queries is the sum over superset buckets.
inline SubsetReliability reliability_by_target_subset(
    const AminNetwork& net, const StateDistribution& dist) {
    detail::StopWatch sw;
    SubsetReliability out;
    NodeSubset required = net.targets();
    std::map<NodeSubset, NeumaierSum> acc;
    acc[NodeSubset{}];  // failure bucket always present
    out.counters.visited = detail::frontier_walk(
        net, dist, [&](const StateVector&, NodeSubset tau, double px) {
            acc[tau].add(px);
            if (required.subset_of(tau)) ++out.counters.feasible;
        });
    for (auto& [tau, sum] : acc) out.buckets[tau] = sum.value();
    out.counters.elapsed_s = sw.seconds();
    return out;
}

}  // namespace amin
