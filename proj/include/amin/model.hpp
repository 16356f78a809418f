#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "amin/numeric.hpp"

namespace amin {

// ---------------------------------------------------------------------------
// NodeSubset: a set of node labels 1..n as a 64-bit mask (bit i-1 <=> node i).
// Used for spread sets, UGF exponents, and target sets; caps networks at 64
// nodes, which construction enforces.
// ---------------------------------------------------------------------------
struct NodeSubset {
    std::uint64_t bits = 0;

    static constexpr NodeSubset from_bits(std::uint64_t b) { return {b}; }
    static NodeSubset from_nodes(std::initializer_list<int> nodes) {
        NodeSubset s;
        for (int v : nodes) s.add(v);
        return s;
    }

    constexpr bool empty() const { return bits == 0; }
    constexpr bool contains(int node) const {
        return (bits >> (node - 1)) & 1u;
    }
    void add(int node) { bits |= std::uint64_t{1} << (node - 1); }
    void remove(int node) { bits &= ~(std::uint64_t{1} << (node - 1)); }
    constexpr int count() const { return std::popcount(bits); }
    constexpr bool subset_of(NodeSubset o) const {
        return (bits & ~o.bits) == 0;
    }
    int lowest() const { return std::countr_zero(bits) + 1; }

    friend constexpr NodeSubset operator|(NodeSubset a, NodeSubset b) {
        return {a.bits | b.bits};
    }
    friend constexpr NodeSubset operator&(NodeSubset a, NodeSubset b) {
        return {a.bits & b.bits};
    }
    friend constexpr NodeSubset operator-(NodeSubset a, NodeSubset b) {
        return {a.bits & ~b.bits};
    }
    friend constexpr bool operator==(NodeSubset a, NodeSubset b) {
        return a.bits == b.bits;
    }
    friend constexpr bool operator<(NodeSubset a, NodeSubset b) {
        return a.bits < b.bits;
    }

    std::vector<int> to_nodes() const {
        std::vector<int> out;
        for (std::uint64_t b = bits; b; b &= b - 1)
            out.push_back(std::countr_zero(b) + 1);
        return out;
    }

    std::string to_string() const {
        std::string s = "{";
        bool first = true;
        for (int v : to_nodes()) {
            if (!first) s += ",";
            s += std::to_string(v);
            first = false;
        }
        return s + "}";
    }
};

// A node state label: 0 is the Z state ("never received information"),
// label j >= 1 encodes the out-neighbor subset with bitmask j-1.
using StateLabel = std::uint32_t;
inline constexpr StateLabel kZState = 0;

// ---------------------------------------------------------------------------
// AminNetwork: DAG on nodes 1..n whose arcs all point from lower to higher
// label; node 1 is the source. Immutable after construction.
// ---------------------------------------------------------------------------
class AminNetwork {
  public:
    AminNetwork(int node_count, std::vector<std::pair<int, int>> arcs,
                std::vector<int> targets)
        : node_count_(node_count),
          raw_arcs_(std::move(arcs)),
          raw_targets_(std::move(targets)) {
        if (node_count_ < 1 || node_count_ > 64)
            throw std::invalid_argument(
                "node count must be in 1..64 (64-bit subset masks)");
        adjacency_.assign(node_count_ + 1, {});
        for (auto [i, j] : raw_arcs_) {
            // Malformed arcs are kept in raw_arcs_ for validate() to report
            // but excluded from the working adjacency.
            if (i >= 1 && j >= 1 && i <= node_count_ && j <= node_count_ &&
                i < j)
                adjacency_[i].push_back(j);
        }
        for (auto& adj : adjacency_) {
            std::sort(adj.begin(), adj.end());
            adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
        }
        for (int t : raw_targets_)
            if (t >= 1 && t <= node_count_) target_set_.add(t);
        for (int i = 1; i <= node_count_; ++i)
            if (!adjacency_[i].empty()) transmitting_.push_back(i);
        build_state_masks();
    }

    int node_count() const { return node_count_; }
    const std::vector<std::pair<int, int>>& raw_arcs() const {
        return raw_arcs_;
    }
    const std::vector<int>& raw_targets() const { return raw_targets_; }
    const std::vector<int>& neighbors(int i) const { return adjacency_[i]; }
    int degree(int i) const { return int(adjacency_[i].size()); }
    bool is_transmitting(int i) const { return !adjacency_[i].empty(); }
    const std::vector<int>& transmitting() const { return transmitting_; }
    NodeSubset targets() const { return target_set_; }
    std::uint64_t arc_count() const {
        std::uint64_t c = 0;
        for (int i = 1; i <= node_count_; ++i) c += adjacency_[i].size();
        return c;
    }

    // Global-mask table for node i: entry 0 is the Z state (empty), entry
    // j >= 1 is the subset with bitmask j-1 over the ascending neighbor list.
    const std::vector<std::uint64_t>& state_masks(int i) const {
        return state_masks_[i];
    }

  private:
    void build_state_masks() {
        std::uint64_t total = 0;
        for (int i : transmitting_) total += std::uint64_t{1} << degree(i);
        if (total > (std::uint64_t{1} << 24))
            throw std::invalid_argument(
                "out-degrees too large for dense per-subset state tables");
        state_masks_.assign(node_count_ + 1, {});
        for (int i : transmitting_) {
            int d = degree(i);
            auto& tbl = state_masks_[i];
            tbl.assign((std::uint64_t{1} << d) + 1, 0);
            for (std::uint64_t m = 0; m < (std::uint64_t{1} << d); ++m) {
                std::uint64_t bitsv = 0;
                for (int k = 0; k < d; ++k)
                    if ((m >> k) & 1)
                        bitsv |= std::uint64_t{1} << (adjacency_[i][k] - 1);
                tbl[m + 1] = bitsv;
            }
        }
    }

    int node_count_;
    std::vector<std::pair<int, int>> raw_arcs_;
    std::vector<int> raw_targets_;
    std::vector<std::vector<int>> adjacency_;
    std::vector<int> transmitting_;
    NodeSubset target_set_;
    std::vector<std::vector<std::uint64_t>> state_masks_;
};

// ---------------------------------------------------------------------------
// StateDistribution: for each transmitting node i, a dense table of
// 2^Deg(i) probabilities indexed by subset bitmask.
// ---------------------------------------------------------------------------
class StateDistribution {
  public:
    StateDistribution() = default;
    explicit StateDistribution(int node_count)
        : table_(node_count + 1) {}

    static StateDistribution uniform(const AminNetwork& net) {
        StateDistribution d(net.node_count());
        for (int i : net.transmitting()) {
            std::size_t states = std::size_t{1} << net.degree(i);
            d.table_[i].assign(states, 1.0 / double(states));
        }
        return d;
    }

    void set_row(int node, std::vector<double> probs) {
        table_.at(node) = std::move(probs);
    }
    bool has_row(int node) const {
        return node >= 0 && node < int(table_.size()) &&
               !table_[node].empty();
    }
    const std::vector<double>& row(int node) const { return table_.at(node); }
    // Probability that node transmits exactly the subset with this bitmask.
    double p(int node, std::uint64_t mask) const {
        return table_.at(node).at(mask);
    }
    int node_count() const { return int(table_.size()) - 1; }

  private:
    std::vector<std::vector<double>> table_;
};

// ---------------------------------------------------------------------------
// Validation: semantic problems are reported as data, not thrown.
// ---------------------------------------------------------------------------
enum class ViolationKind {
    ArcOrder,
    ArcRange,
    DuplicateArc,
    SourceDegree,
    TargetsEmpty,
    TargetRange,
    TargetIsSource,
    DistributionShape,
    DistributionRange,
    DistributionSum,
    DistributionExtra,
};

struct Violation {
    ViolationKind kind;
    std::string message;
};

inline std::vector<Violation> validate(const AminNetwork& net,
                                       const StateDistribution& dist) {
    std::vector<Violation> out;
    auto arc_name = [](std::pair<int, int> a) {
        return "(" + std::to_string(a.first) + "," + std::to_string(a.second) +
               ")";
    };
    std::vector<std::pair<int, int>> seen;
    for (auto a : net.raw_arcs()) {
        auto [i, j] = a;
        if (i < 1 || j < 1 || i > net.node_count() || j > net.node_count())
            out.push_back({ViolationKind::ArcRange,
                           "arc " + arc_name(a) + ": endpoint outside 1.." +
                               std::to_string(net.node_count())});
        else if (i == j)
            out.push_back({ViolationKind::ArcOrder,
                           "arc " + arc_name(a) + ": self-loop"});
        else if (i > j)
            out.push_back(
                {ViolationKind::ArcOrder,
                 "arc " + arc_name(a) +
                     ": from higher to lower label (labels must ascend "
                     "along every arc)"});
        else if (std::find(seen.begin(), seen.end(), a) != seen.end())
            out.push_back({ViolationKind::DuplicateArc,
                           "arc " + arc_name(a) + ": duplicate"});
        else
            seen.push_back(a);
    }
    if (net.degree(1) == 0)
        out.push_back({ViolationKind::SourceDegree,
                       "node 1 (source) has out-degree 0"});
    if (net.raw_targets().empty())
        out.push_back({ViolationKind::TargetsEmpty, "target set is empty"});
    for (int t : net.raw_targets()) {
        if (t < 1 || t > net.node_count())
            out.push_back({ViolationKind::TargetRange,
                           "target " + std::to_string(t) + ": outside 1.." +
                               std::to_string(net.node_count())});
        else if (t == 1)
            out.push_back({ViolationKind::TargetIsSource,
                           "target 1: the source cannot be a target"});
    }
    for (int i = 1; i <= net.node_count(); ++i) {
        if (net.is_transmitting(i)) {
            std::size_t want = std::size_t{1} << net.degree(i);
            if (!dist.has_row(i) || dist.row(i).size() != want) {
                out.push_back({ViolationKind::DistributionShape,
                               "node " + std::to_string(i) + ": expected " +
                                   std::to_string(want) +
                                   " state probabilities"});
                continue;
            }
            NeumaierSum sum;
            bool in_range = true;
            for (double p : dist.row(i)) {
                if (!(p >= 0.0 && p <= 1.0)) in_range = false;
                sum.add(p);
            }
            if (!in_range)
                out.push_back({ViolationKind::DistributionRange,
                               "node " + std::to_string(i) +
                                   ": probability outside [0,1]"});
            if (std::abs(sum.value() - 1.0) > 1e-9)
                out.push_back({ViolationKind::DistributionSum,
                               "node " + std::to_string(i) +
                                   ": distribution sum " +
                                   fmt_double(sum.value()) + " != 1"});
        } else if (dist.has_row(i)) {
            out.push_back({ViolationKind::DistributionExtra,
                           "node " + std::to_string(i) +
                               ": probabilities given for a node with "
                               "out-degree 0"});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Label codecs.
// ---------------------------------------------------------------------------

// Label 0 (Z) maps to nullopt; label j >= 1 maps to the subset with bitmask
// j-1 over the ascending neighbor list of the node.
inline std::optional<NodeSubset> label_to_subset(const AminNetwork& net,
                                                 int node, StateLabel label) {
    if (label > (std::uint64_t{1} << net.degree(node)))
        throw std::out_of_range("label " + std::to_string(label) +
                                " out of range for node " +
                                std::to_string(node));
    if (label == kZState) return std::nullopt;
    return NodeSubset::from_bits(net.state_masks(node)[label]);
}

inline StateLabel subset_to_label(const AminNetwork& net, int node,
                                  NodeSubset subset) {
    std::uint64_t mask = 0;
    const auto& adj = net.neighbors(node);
    NodeSubset rest = subset;
    for (int k = 0; k < int(adj.size()); ++k) {
        if (rest.contains(adj[k])) {
            mask |= std::uint64_t{1} << k;
            rest.remove(adj[k]);
        }
    }
    if (!rest.empty())
        throw std::invalid_argument("subset " + subset.to_string() +
                                    " not contained in neighbors of node " +
                                    std::to_string(node));
    return StateLabel(mask + 1);
}

// Size of the full state-vector space: product of (2^Deg(i) + 1) over
// transmitting nodes. 64-bit overflow is refused, not wrapped.
inline std::uint64_t n_all(const AminNetwork& net) {
    std::uint64_t prod = 1;
    for (int i : net.transmitting()) {
        std::uint64_t states = (std::uint64_t{1} << net.degree(i)) + 1;
        if (__builtin_mul_overflow(prod, states, &prod))
            throw std::overflow_error("n_all exceeds 64 bits");
    }
    return prod;
}

// ---------------------------------------------------------------------------
// normalize_labels: relabel an arbitrary DAG so every arc ascends and the
// source becomes node 1.
// ---------------------------------------------------------------------------
struct CycleError : std::runtime_error {
    explicit CycleError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NormalizeResult {
    AminNetwork network;
    std::vector<int> old_to_new;  // index = old label, [0] unused
};

inline NormalizeResult normalize_labels(
    int node_count, const std::vector<std::pair<int, int>>& arcs,
    const std::vector<int>& targets, std::optional<int> source = {}) {
    if (node_count < 1 || node_count > 64)
        throw std::invalid_argument("node count must be in 1..64");
    std::vector<std::vector<int>> out(node_count + 1);
    std::vector<int> indeg(node_count + 1, 0);
    for (auto [i, j] : arcs) {
        if (i < 1 || j < 1 || i > node_count || j > node_count || i == j)
            throw std::invalid_argument("arc (" + std::to_string(i) + "," +
                                        std::to_string(j) + ") is malformed");
        out[i].push_back(j);
        ++indeg[j];
    }
    int src;
    if (source) {
        src = *source;
        if (src < 1 || src > node_count)
            throw std::invalid_argument("designated source out of range");
        if (indeg[src] != 0)
            throw std::invalid_argument(
                "designated source has incoming arcs");
    } else {
        std::vector<int> roots;
        for (int v = 1; v <= node_count; ++v)
            if (indeg[v] == 0) roots.push_back(v);
        if (roots.empty())
            throw std::invalid_argument(
                "no source candidate (every node has incoming arcs)");
        if (roots.size() > 1)
            throw std::invalid_argument(
                "ambiguous source: several nodes have no incoming arcs");
        src = roots[0];
    }
    // Kahn's algorithm; the designated source goes first, then smallest old
    // label first so an already-topological input keeps its labels.
    std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
    std::vector<int> old_to_new(node_count + 1, 0);
    std::vector<int> order;
    std::vector<int> deg = indeg;
    order.push_back(src);
    for (int v = 1; v <= node_count; ++v)
        if (v != src && deg[v] == 0) ready.push(v);
    for (std::size_t at = 0; at < order.size(); ++at) {
        int v = order[at];
        old_to_new[v] = int(at) + 1;
        for (int w : out[v])
            if (--deg[w] == 0) ready.push(w);
        if (at + 1 == order.size() && !ready.empty()) {
            order.push_back(ready.top());
            ready.pop();
        }
    }
    if (int(order.size()) != node_count) {
        for (int v = 1; v <= node_count; ++v)
            if (old_to_new[v] == 0 && deg[v] > 0)
                throw CycleError("directed cycle through node " +
                                 std::to_string(v));
        throw CycleError("directed cycle detected");
    }
    std::vector<std::pair<int, int>> new_arcs;
    new_arcs.reserve(arcs.size());
    for (auto [i, j] : arcs)
        new_arcs.emplace_back(old_to_new[i], old_to_new[j]);
    std::sort(new_arcs.begin(), new_arcs.end());
    std::vector<int> new_targets;
    for (int t : targets) {
        if (t < 1 || t > node_count)
            throw std::invalid_argument("target out of range");
        new_targets.push_back(old_to_new[t]);
    }
    std::sort(new_targets.begin(), new_targets.end());
    return {AminNetwork(node_count, std::move(new_arcs),
                        std::move(new_targets)),
            std::move(old_to_new)};
}

}  // namespace amin
