#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "amin/bat.hpp"
#include "amin/json_io.hpp"
#include "fixtures.hpp"

using namespace amin;

namespace {

const char* kCanonical4Json = R"({
  "nodes": 4,
  "arcs": [[1,2],[1,3],[2,3],[2,4],[3,4]],
  "targets": [4]
})";

}  // namespace

TEST_CASE("loading a plain fixture defaults to uniform") {
    NetworkInstance inst = load_network(kCanonical4Json);
    REQUIRE(inst.network.node_count() == 4);
    REQUIRE(inst.network.arc_count() == 5);
    REQUIRE(inst.network.targets() == NodeSubset::from_nodes({4}));
    REQUIRE(inst.dist.p(1, 0) == 0.25);
    REQUIRE(inst.dist.p(3, 1) == 0.5);
    REQUIRE(validate(inst.network, inst.dist).empty());
    REQUIRE(reliability_odometer(inst.network, inst.dist,
                                 inst.network.targets()).reliability ==
            15.0 / 32.0);
}

TEST_CASE("prob rows override the uniform default") {
    std::string text = R"({
      "nodes": 2,
      "arcs": [[1,2]],
      "targets": [2],
      "prob": {"1": {"0": 0.125, "1": 0.875}}
    })";
    NetworkInstance inst = load_network(text);
    REQUIRE(inst.dist.p(1, 0) == 0.125);
    REQUIRE(inst.dist.p(1, 1) == 0.875);

    // Masks left out default to probability zero; validation catches the
    // missing mass rather than the loader inventing it.
    NetworkInstance partial = load_network(R"({
      "nodes": 2, "arcs": [[1,2]], "targets": [2],
      "prob": {"1": {"1": 0.5}}
    })");
    REQUIRE(partial.dist.p(1, 0) == 0.0);
    auto vs = validate(partial.network, partial.dist);
    REQUIRE_FALSE(vs.empty());
}

TEST_CASE("malformed fixtures are rejected") {
    REQUIRE_THROWS_AS(load_network("{not json"), ParseError);
    REQUIRE_THROWS_AS(load_network("[1,2,3]"), ParseError);
    REQUIRE_THROWS_AS(load_network(R"({"arcs": [], "targets": []})"),
                      ParseError);  // nodes missing
    REQUIRE_THROWS_AS(
        load_network(R"({"nodes": 2, "arcs": [[1]], "targets": [2]})"),
        ParseError);
    REQUIRE_THROWS_AS(
        load_network(
            R"({"nodes": 2, "arcs": [[1,2]], "targets": [2],
                "prob": {"x": {"0": 1.0}}})"),
        ParseError);
    REQUIRE_THROWS_AS(
        load_network(
            R"({"nodes": 2, "arcs": [[1,2]], "targets": [2],
                "prob": {"1": {"7": 1.0}}})"),
        ParseError);
    REQUIRE_THROWS_AS(
        load_network(
            R"({"nodes": 2, "arcs": [[1,2]], "targets": [2],
                "prob": {"9": {"0": 1.0}}})"),
        ParseError);
}

TEST_CASE("save and load round-trip") {
    NetworkInstance inst = gen_random_amin(6, 0.6, 7, true);
    std::string text = save_network(inst.network, inst.dist, false);
    NetworkInstance back = load_network(text);
    REQUIRE(back.network.node_count() == inst.network.node_count());
    for (int i = 1; i <= inst.network.node_count(); ++i)
        REQUIRE(back.network.neighbors(i) == inst.network.neighbors(i));
    REQUIRE(back.network.targets() == inst.network.targets());
    for (int i : inst.network.transmitting())
        REQUIRE(back.dist.row(i) == inst.dist.row(i));

    // The emitter is stable: save(load(save(x))) == save(x).
    REQUIRE(save_network(back.network, back.dist, false) == text);
}

TEST_CASE("uniform fixtures omit the prob block") {
    NetworkInstance inst = gen_semi_complete(5);
    std::string text = save_network(inst.network, inst.dist, true);
    REQUIRE(text.find("prob") == std::string::npos);
    NetworkInstance back = load_network(text);
    REQUIRE(back.dist.p(1, 0) == inst.dist.p(1, 0));
}
