#pragma once

#include <cstdint>
#include <vector>

#include "amin/model.hpp"

namespace amin {

// One state label per node, indexed by node label ([0] unused). Nodes with
// out-degree 0 have no real coordinate and stay at the Z label 0.
struct StateVector {
    std::vector<StateLabel> labels;

    explicit StateVector(int node_count) : labels(node_count + 1, kZState) {}
    StateLabel operator[](int node) const { return labels[node]; }
    StateLabel& operator[](int node) { return labels[node]; }
};

struct SpreadResult {
    NodeSubset reached;          // always contains node 1
    bool consistent = false;     // x(i) >= 1 exactly for reached transmitters
    NodeSubset reached_targets;  // reached ∩ T
};

namespace detail {

// Single definition of the propagation semantics. reached is the least fixed
// point of "node 1 is reached; a reached node with a non-Z label reaches its
// labeled subset"; one ascending sweep suffices because arcs ascend. The
// early-exit variant stops at the first consistency violation, leaving
// reached partial (callers that only need `consistent` use it).
template <bool kEarlyExit>
inline SpreadResult propagate_impl(const AminNetwork& net,
                                   const StateVector& x) {
    std::uint64_t reached = 1;  // bit 0 = node 1
    bool consistent = true;
    for (int i : net.transmitting()) {
        StateLabel lab = x.labels[i];
        bool in = (reached >> (i - 1)) & 1u;
        if ((lab != kZState) != in) {
            consistent = false;
            if constexpr (kEarlyExit)
                return {NodeSubset::from_bits(reached), false, {}};
        }
        if (in) reached |= net.state_masks(i)[lab];
    }
    NodeSubset r = NodeSubset::from_bits(reached);
    return {r, consistent, r & net.targets()};
}

}  // namespace detail

inline SpreadResult propagate(const AminNetwork& net, const StateVector& x) {
    return detail::propagate_impl<false>(net, x);
}

// Same semantics as propagate, but gives up at the first inconsistency;
// reached/reached_targets are meaningful only when consistent.
inline SpreadResult propagate_early_exit(const AminNetwork& net,
                                         const StateVector& x) {
    return detail::propagate_impl<true>(net, x);
}

// Probability of a state vector: product over non-Z coordinates of the
// subset probability; Z coordinates contribute factor 1 (an unreached node's
// choices are marginalized out).
inline double probability(const AminNetwork& net,
                          const StateDistribution& dist,
                          const StateVector& x) {
    double p = 1.0;
    for (int i : net.transmitting()) {
        StateLabel lab = x.labels[i];
        if (lab != kZState) p *= dist.p(i, lab - 1);
    }
    return p;
}

inline bool is_feasible(const AminNetwork& net, const StateVector& x,
                        NodeSubset required_targets) {
    SpreadResult r = propagate_early_exit(net, x);
    return r.consistent && required_targets.subset_of(r.reached);
}

inline bool is_feasible(const AminNetwork& net, const StateVector& x) {
    return is_feasible(net, x, net.targets());
}

}  // namespace amin
