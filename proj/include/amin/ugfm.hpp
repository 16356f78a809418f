#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "amin/bat.hpp"
#include "amin/model.hpp"
#include "amin/numeric.hpp"

namespace amin {

inline constexpr std::uint64_t kDefaultUgfCap = 1'900'000;

struct UgfTerm {
    NodeSubset exponent;  // the z-subscript set: nodes still owed a choice
    double coefficient;   // probability mass of this sub-vector
};

// Aggregated (algebraic) view of a polynomial: one entry per distinct
// exponent with the summed coefficient and the number of stored terms
// backing it.
struct MergedUgfTerm {
    NodeSubset exponent;
    double coefficient;
    std::uint64_t product_count;
};

struct TermCapExceeded : std::runtime_error {
    int node;                 // compose step at which the cap burst
    std::uint64_t cap;
    std::uint64_t live;       // stored terms at the moment of failure
    std::uint64_t generated;  // products created up to the failure
    TermCapExceeded(int node_, std::uint64_t cap_, std::uint64_t live_,
                    std::uint64_t generated_)
        : std::runtime_error("UGF term cap " + std::to_string(cap_) +
                             " exceeded while composing node " +
                             std::to_string(node_)),
          node(node_),
          cap(cap_),
          live(live_),
          generated(generated_) {}
};

// A subnet-UGF. Terms are stored one per surviving sub-vector — the method
// keeps every partial vector in memory until it becomes a full vector, which
// is exactly what makes it burst its cap on dense instances — so distinct
// terms may repeat an exponent; merged() gives the per-exponent view.
// Empty-exponent products (dead spread) are never stored; their mass is
// tracked in pruned_mass so that total mass is conserved.
class UgfPolynomial {
  public:
    explicit UgfPolynomial(std::uint64_t cap = kDefaultUgfCap) : cap_(cap) {}

    const std::vector<UgfTerm>& terms() const { return terms_; }
    std::uint64_t size() const { return terms_.size(); }
    std::uint64_t cap() const { return cap_; }
    std::uint64_t generated_count() const { return generated_; }
    double pruned_mass() const { return pruned_.value(); }

    void reserve(std::uint64_t n) {
        terms_.reserve(std::size_t(std::min(n, cap_)));
    }
    // at_node: the step to blame in the cap-overflow diagnostics.
    void append(UgfTerm t, int at_node) {
        if (terms_.size() >= cap_)
            throw TermCapExceeded(at_node, cap_, terms_.size(), generated_);
        terms_.push_back(t);
    }
    void count_product() { ++generated_; }
    void prune(double mass) { pruned_.add(mass); }
    void carry_stats_from(const UgfPolynomial& prev) {
        generated_ = prev.generated_;
        pruned_ = prev.pruned_;
    }

    std::vector<MergedUgfTerm> merged() const {
        std::map<NodeSubset, std::pair<NeumaierSum, std::uint64_t>> byexp;
        for (const auto& t : terms_) {
            auto& [sum, cnt] = byexp[t.exponent];
            sum.add(t.coefficient);
            ++cnt;
        }
        std::vector<MergedUgfTerm> out;
        out.reserve(byexp.size());
        for (const auto& [exp, sc] : byexp)
            out.push_back({exp, sc.first.value(), sc.second});
        return out;
    }

  private:
    std::vector<UgfTerm> terms_;
    std::uint64_t cap_;
    std::uint64_t generated_ = 0;
    NeumaierSum pruned_;
};

// The node-UGF of a transmitting node: one term per subset of its
// out-neighbors. The source (node 1) must transmit, so its empty-subset term
// is omitted and its mass recorded as pruned; for any other node the
// empty-subset term is kept (received, transmits to nobody).
inline UgfPolynomial node_ugf(const AminNetwork& net,
                              const StateDistribution& dist, int i,
                              std::uint64_t cap = kDefaultUgfCap) {
    if (!net.is_transmitting(i))
        throw std::invalid_argument("node " + std::to_string(i) +
                                    " has no out-arcs, so no node-UGF");
    UgfPolynomial u(cap);
    const auto& masks = net.state_masks(i);
    std::uint64_t states = std::uint64_t{1} << net.degree(i);
    for (std::uint64_t m = 0; m < states; ++m) {
        if (i == 1 && m == 0) {
            u.prune(dist.p(i, 0));
            continue;
        }
        u.append({NodeSubset::from_bits(masks[m + 1]), dist.p(i, m)}, i);
    }
    return u;
}

// Expand U through node i: every term whose exponent contains i splits into
// one product per state I of node i, with exponent (J ∪ I) − {i}; terms not
// mentioning i pass through unchanged (node i's states sum out to 1).
// Products whose exponent comes up empty are dead spread: pruned, not stored.
inline UgfPolynomial compose(UgfPolynomial U, const AminNetwork& net,
                             const StateDistribution& dist, int i) {
    const auto& masks = net.state_masks(i);
    const auto& probs = dist.row(i);
    std::uint64_t states = std::uint64_t{1} << net.degree(i);
    std::uint64_t expanding = 0;
    for (const auto& t : U.terms())
        if (t.exponent.contains(i)) ++expanding;
    UgfPolynomial out(U.cap());
    out.carry_stats_from(U);
    out.reserve(U.size() - expanding + expanding * states);
    for (const auto& t : U.terms()) {
        if (!t.exponent.contains(i)) {
            out.append(t, i);
            continue;
        }
        NodeSubset base = t.exponent;
        base.remove(i);
        for (std::uint64_t m = 0; m < states; ++m) {
            out.count_product();
            NodeSubset exp = base | NodeSubset::from_bits(masks[m + 1]);
            double coeff = t.coefficient * probs[m];
            if (exp.empty())
                out.prune(coeff);
            else
                out.append({exp, coeff}, i);
        }
    }
    return out;
}

struct UgfStats {
    std::uint64_t generated_count = 0;  // products created across composes
    std::uint64_t peak_live_terms = 0;  // largest stored polynomial
    std::uint64_t final_term_count = 0;
    double pruned_mass = 0.0;
    double elapsed_s = 0.0;
};

struct UgfResult {
    double reliability = 0.0;
    UgfStats stats;
};

namespace detail {

inline void require_sink_targets(const AminNetwork& net) {
    for (int t : net.targets().to_nodes())
        if (net.is_transmitting(t))
            throw std::invalid_argument(
                "UGFM requires sink targets; node " + std::to_string(t) +
                " transmits");
}

template <class OnFinal>
inline UgfStats ugfm_pipeline(const AminNetwork& net,
                              const StateDistribution& dist,
                              std::uint64_t cap, OnFinal&& on_final) {
    require_sink_targets(net);
    StopWatch sw;
    UgfPolynomial U = node_ugf(net, dist, 1, cap);
    UgfStats stats;
    stats.peak_live_terms = U.size();
    for (int i : net.transmitting()) {
        if (i == 1) continue;
        U = compose(std::move(U), net, dist, i);
        stats.peak_live_terms = std::max(stats.peak_live_terms, U.size());
    }
    stats.generated_count = U.generated_count();
    stats.final_term_count = U.size();
    stats.pruned_mass = U.pruned_mass();
    on_final(static_cast<const UgfPolynomial&>(U));
    stats.elapsed_s = sw.seconds();
    return stats;
}

}  // namespace detail

// Full pipeline: U(1) = u(1), composed through every further transmitting
// node in ascending order; R is the mass of terms whose exponent covers the
// required targets.
inline UgfResult reliability_ugfm(const AminNetwork& net,
                                  const StateDistribution& dist,
                                  std::uint64_t cap = kDefaultUgfCap) {
    UgfResult out;
    NodeSubset required = net.targets();
    out.stats = detail::ugfm_pipeline(
        net, dist, cap, [&](const UgfPolynomial& U) {
            NeumaierSum r;
            for (const auto& t : U.terms())
                if (required.subset_of(t.exponent)) r.add(t.coefficient);
            out.reliability = r.value();
        });
    return out;
}

struct UgfSubsetResult {
    std::map<NodeSubset, double> buckets;
    UgfStats stats;
};

// Target-subset buckets from the final polynomial: each term lands in the
// bucket of the targets its exponent covers; pruned (dead) mass lands in ∅.
inline UgfSubsetResult ugfm_by_target_subset(
    const AminNetwork& net, const StateDistribution& dist,
    std::uint64_t cap = kDefaultUgfCap) {
    UgfSubsetResult out;
    NodeSubset T = net.targets();
    out.stats = detail::ugfm_pipeline(
        net, dist, cap, [&](const UgfPolynomial& U) {
            std::map<NodeSubset, NeumaierSum> acc;
            acc[NodeSubset{}];
            for (const auto& t : U.terms()) acc[t.exponent & T].add(t.coefficient);
            acc[NodeSubset{}].add(U.pruned_mass());
            for (auto& [tau, sum] : acc) out.buckets[tau] = sum.value();
        });
    return out;
}

}  // namespace amin
