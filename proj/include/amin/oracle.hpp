#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "amin/model.hpp"
#include "amin/numeric.hpp"

namespace amin {

struct BudgetExceeded : std::runtime_error {
    std::uint64_t required;
    std::uint64_t budget;
    BudgetExceeded(std::uint64_t req, std::uint64_t bud)
        : std::runtime_error("enumeration needs " + std::to_string(req) +
                             " steps, budget is " + std::to_string(bud)),
          required(req),
          budget(bud) {}
};

inline constexpr std::uint64_t kDefaultOracleBudget = std::uint64_t{1} << 26;

// Ground truth straight from the probability space: every transmitting node
// draws an unconditional subset choice; only choices of nodes the spread
// actually reaches take effect. No Z state, no state vectors, and none of
// the engine code — the duplication is the point.
inline double brute_force_reliability(
    const AminNetwork& net, const StateDistribution& dist,
    NodeSubset required_targets,
    std::uint64_t budget = kDefaultOracleBudget) {
    const auto& nodes = net.transmitting();
    std::uint64_t total = 1;
    for (int i : nodes) {
        if (__builtin_mul_overflow(total, std::uint64_t{1} << net.degree(i),
                                   &total))
            throw BudgetExceeded(~std::uint64_t{0}, budget);
    }
    if (total > budget) throw BudgetExceeded(total, budget);

    std::vector<std::uint64_t> choice(nodes.size(), 0);
    NeumaierSum reliability;
    for (std::uint64_t step = 0; step < total; ++step) {
        std::uint64_t reached = 1;
        double p = 1.0;
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            int i = nodes[k];
            if ((reached >> (i - 1)) & 1u) {
                const auto& adj = net.neighbors(i);
                for (int b = 0; b < int(adj.size()); ++b)
                    if ((choice[k] >> b) & 1u)
                        reached |= std::uint64_t{1} << (adj[b] - 1);
            }
            p *= dist.p(i, choice[k]);
        }
        if ((required_targets.bits & ~reached) == 0) reliability.add(p);
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            if (++choice[k] < (std::uint64_t{1} << net.degree(nodes[k])))
                break;
            choice[k] = 0;
        }
    }
    return reliability.value();
}

// Label-space ground truth: walk every state vector (all coordinates
// 0..2^Deg, the source included) and count those passing an independently
// written consistency-plus-coverage test.
inline std::uint64_t brute_force_feasible_count(
    const AminNetwork& net, NodeSubset required_targets,
    std::uint64_t budget = kDefaultOracleBudget) {
    const auto& nodes = net.transmitting();
    std::uint64_t total = 1;
    for (int i : nodes) {
        if (__builtin_mul_overflow(
                total, (std::uint64_t{1} << net.degree(i)) + 1, &total))
            throw BudgetExceeded(~std::uint64_t{0}, budget);
    }
    if (total > budget) throw BudgetExceeded(total, budget);

    std::vector<std::uint64_t> label(nodes.size(), 0);
    std::uint64_t count = 0;
    for (std::uint64_t step = 0; step < total; ++step) {
        std::uint64_t reached = 1;
        bool ok = true;
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            int i = nodes[k];
            bool in = (reached >> (i - 1)) & 1u;
            if (in != (label[k] >= 1)) {
                ok = false;
                break;
            }
            if (in && label[k] >= 1) {
                const auto& adj = net.neighbors(i);
                std::uint64_t mask = label[k] - 1;
                for (int b = 0; b < int(adj.size()); ++b)
                    if ((mask >> b) & 1u)
                        reached |= std::uint64_t{1} << (adj[b] - 1);
            }
        }
        if (ok && (required_targets.bits & ~reached) == 0) ++count;
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            if (++label[k] <= (std::uint64_t{1} << net.degree(nodes[k])))
                break;
            label[k] = 0;
        }
    }
    return count;
}

}  // namespace amin
