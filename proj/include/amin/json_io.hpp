#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "amin/model.hpp"
#include "amin/numeric.hpp"
#include "amin/workbench.hpp"

namespace amin {

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Network fixture format:
//   {"nodes": n, "arcs": [[i,j],...], "targets": [t,...],
//    "prob": {"i": {"mask": p, ...}, ...}}
// prob is optional (omitted = uniform); masks are decimal strings indexing
// subsets of the ascending neighbor list. Nodes missing from prob stay
// uniform.
inline NetworkInstance load_network(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("network JSON: ") + e.what());
    }
    try {
        if (!doc.is_object()) throw ParseError("network JSON: not an object");
        int n = doc.at("nodes").get<int>();
        std::vector<std::pair<int, int>> arcs;
        for (const auto& a : doc.at("arcs")) {
            if (!a.is_array() || a.size() != 2)
                throw ParseError("network JSON: arc must be a pair");
            arcs.emplace_back(a[0].get<int>(), a[1].get<int>());
        }
        std::vector<int> targets;
        for (const auto& t : doc.at("targets")) targets.push_back(t.get<int>());
        AminNetwork net(n, std::move(arcs), std::move(targets));
        StateDistribution dist = StateDistribution::uniform(net);
        if (doc.contains("prob")) {
            if (!doc["prob"].is_object())
                throw ParseError("network JSON: prob must be an object");
            for (const auto& [key, row] : doc["prob"].items()) {
                int node = 0;
                try {
                    node = std::stoi(key);
                } catch (...) {
                    throw ParseError("network JSON: prob key '" + key +
                                     "' is not a node label");
                }
                if (node < 1 || node > n)
                    throw ParseError("network JSON: prob node " + key +
                                     " outside 1.." + std::to_string(n));
                std::size_t states =
                    std::size_t{1} << net.degree(node);
                std::vector<double> probs(states, 0.0);
                for (const auto& [mask_key, p] : row.items()) {
                    std::uint64_t mask = parse_u64(mask_key);
                    if (mask >= states)
                        throw ParseError("network JSON: node " + key +
                                         " mask " + mask_key +
                                         " out of range");
                    probs[mask] = p.get<double>();
                }
                dist.set_row(node, std::move(probs));
            }
        }
        return {std::move(net), std::move(dist)};
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("network JSON: ") + e.what());
    }
}

// Stable emitter: arcs sorted, targets sorted, prob rows ascending by node
// and mask. uniform=true omits prob entirely.
inline std::string save_network(const AminNetwork& net,
                                const StateDistribution& dist,
                                bool uniform) {
    std::string out = "{\n  \"nodes\": " + std::to_string(net.node_count()) +
                      ",\n  \"arcs\": [";
    std::vector<std::pair<int, int>> arcs;
    for (int i = 1; i <= net.node_count(); ++i)
        for (int j : net.neighbors(i)) arcs.emplace_back(i, j);
    for (std::size_t k = 0; k < arcs.size(); ++k) {
        out += "[" + std::to_string(arcs[k].first) + "," +
               std::to_string(arcs[k].second) + "]";
        if (k + 1 < arcs.size()) out += ",";
    }
    out += "],\n  \"targets\": [";
    auto targets = net.targets().to_nodes();
    for (std::size_t k = 0; k < targets.size(); ++k) {
        out += std::to_string(targets[k]);
        if (k + 1 < targets.size()) out += ",";
    }
    out += "]";
    if (!uniform) {
        out += ",\n  \"prob\": {\n";
        const auto& nodes = net.transmitting();
        for (std::size_t t = 0; t < nodes.size(); ++t) {
            int i = nodes[t];
            out += "    \"" + std::to_string(i) + "\": {";
            std::size_t states = std::size_t{1} << net.degree(i);
            for (std::size_t m = 0; m < states; ++m) {
                out += "\"" + std::to_string(m) +
                       "\": " + fmt_double(dist.p(i, m));
                if (m + 1 < states) out += ", ";
            }
            out += "}";
            out += t + 1 < nodes.size() ? ",\n" : "\n";
        }
        out += "  }";
    }
    out += "\n}\n";
    return out;
}

}  // namespace amin
