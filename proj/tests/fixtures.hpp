#pragma once

// Shared hand-checked instances. All expected numbers in the tests were
// derived independently with exact rational arithmetic before being frozen
// here; dyadic uniform cases compare exactly, everything else under a
// stated tolerance.

#include <array>
#include <utility>
#include <vector>

#include "amin/model.hpp"
#include "amin/workbench.hpp"

namespace fixtures {

// 4-node canonical example: V(1)={2,3}, V(2)={3,4}, V(3)={4}, target {4}.
inline amin::NetworkInstance canonical4() {
    amin::AminNetwork net(
        4, {{1, 2}, {1, 3}, {2, 3}, {2, 4}, {3, 4}}, {4});
    amin::StateDistribution dist = amin::StateDistribution::uniform(net);
    return {std::move(net), std::move(dist)};
}

// 5-node two-target example: V(1)={2,3}, V(2)={3,5}, V(3)={4}, targets
// {4,5}; nodes 4 and 5 are sinks.
inline amin::NetworkInstance net5() {
    amin::AminNetwork net(
        5, {{1, 2}, {1, 3}, {2, 3}, {2, 5}, {3, 4}}, {4, 5});
    amin::StateDistribution dist = amin::StateDistribution::uniform(net);
    return {std::move(net), std::move(dist)};
}

// Smallest possible network: one arc, one target.
inline amin::NetworkInstance single_arc() {
    amin::AminNetwork net(2, {{1, 2}}, {2});
    amin::StateDistribution dist = amin::StateDistribution::uniform(net);
    return {std::move(net), std::move(dist)};
}

// The three node labels of canonical4 that carry state coordinates.
inline std::vector<int> canonical4_transmitting() { return {1, 2, 3}; }

// The 11 feasible vectors of canonical4 as (x1, x2, x3), in odometer visit order.
inline std::vector<std::array<amin::StateLabel, 3>> canonical4_feasible() {
    return {{2, 3, 0}, {4, 3, 1}, {2, 4, 1}, {4, 4, 1}, {3, 0, 2},
            {4, 1, 2}, {2, 2, 2}, {4, 2, 2}, {4, 3, 2}, {2, 4, 2},
            {4, 4, 2}};
}

}  // namespace fixtures
