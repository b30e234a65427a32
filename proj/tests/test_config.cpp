#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "usvswarm/config.hpp"

using namespace usvswarm;
using nlohmann::json;

TEST_CASE("defaults survive an empty config") {
    auto config = parse_run_config(json::object());
    CHECK(config.algorithm == Algorithm::Maddpg);
    CHECK(config.world.arena_width == 40.0);
    CHECK(config.world.n_agents == 3);
    CHECK(config.training.episodes == 1000);
    CHECK(config.agent.gamma == 0.99);
    CHECK(config.master_seed == 0);
    // d_max defaults to the arena diagonal.
    CHECK(config.world.reward_weights.d_max ==
          doctest::Approx(std::hypot(40.0, 40.0)).epsilon(1e-15));
}

TEST_CASE("nested overrides are applied") {
    json j = {
        {"algorithm", "ddpg_single"},
        {"master_seed", 99},
        {"world", {{"arena_width", 20.0}, {"arena_height", 10.0}, {"n_agents", 1}, {"n_trash", 2}}},
        {"training", {{"episodes", 5}}},
        {"agent", {{"batch_size", 16}, {"actor_hidden", {32, 32}}}},
        {"output_dir", "out"},
    };
    auto config = parse_run_config(j);
    CHECK(config.algorithm == Algorithm::DdpgSingle);
    CHECK(config.world.arena_width == 20.0);
    CHECK(config.world.n_trash == 2);
    CHECK(config.training.episodes == 5);
    CHECK(config.agent.batch_size == 16);
    CHECK(config.agent.actor_hidden == std::vector<int>{32, 32});
    CHECK(config.master_seed == 99);
    // Diagonal default tracks the overridden arena.
    CHECK(config.world.reward_weights.d_max ==
          doctest::Approx(std::hypot(20.0, 10.0)).epsilon(1e-15));
}

TEST_CASE("explicit d_max is honored") {
    json j = {{"world", {{"reward_weights", {{"d_max", 12.5}}}}}};
    auto config = parse_run_config(j);
    CHECK(config.world.reward_weights.d_max == 12.5);
}

TEST_CASE("unknown keys are rejected with the key path") {
    CHECK_THROWS_AS(parse_run_config({{"tyop", 1}}), std::invalid_argument);
    CHECK_THROWS_AS(parse_run_config({{"world", {{"arena_widht", 10.0}}}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_run_config({{"agent", {{"gamm", 0.9}}}}), std::invalid_argument);
    try {
        parse_run_config({{"world", {{"arena_widht", 10.0}}}});
        FAIL("expected throw");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("arena_widht") != std::string::npos);
    }
}

TEST_CASE("type errors are rejected") {
    CHECK_THROWS_AS(parse_run_config({{"master_seed", "abc"}}), std::invalid_argument);
    CHECK_THROWS_AS(parse_run_config({{"world", {{"n_agents", 2.5}}}}), std::invalid_argument);
    CHECK_THROWS_AS(parse_run_config({{"algorithm", "dqn"}}), std::invalid_argument);
}

TEST_CASE("validation: ddpg_single requires exactly one agent") {
    json j = {{"algorithm", "ddpg_single"}, {"world", {{"n_agents", 3}}}};
    CHECK_THROWS_AS(parse_run_config(j), std::invalid_argument);

    json ok = {{"algorithm", "ddpg_single"}, {"world", {{"n_agents", 1}}}};
    CHECK(parse_run_config(ok).world.n_agents == 1);
}

TEST_CASE("validation: bad ranges are rejected") {
    CHECK_THROWS_AS(parse_run_config({{"world", {{"arena_width", -5.0}}}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_run_config({{"training", {{"episodes", 0}}}}), std::invalid_argument);
    CHECK_THROWS_AS(parse_run_config({{"agent", {{"gamma", 1.5}}}}), std::invalid_argument);
}

TEST_CASE("config echo round trips") {
    json j = {
        {"algorithm", "maddpg"},
        {"master_seed", 7},
        {"world", {{"arena_width", 30.0}, {"n_trash", 5}}},
    };
    auto config = parse_run_config(j);
    auto echoed = run_config_to_json(config);
    auto reparsed = parse_run_config(echoed);
    CHECK(reparsed.world.arena_width == config.world.arena_width);
    CHECK(reparsed.world.n_trash == config.world.n_trash);
    CHECK(reparsed.master_seed == config.master_seed);
    CHECK(run_config_to_json(reparsed) == echoed);
}

TEST_CASE("algorithm names round trip") {
    CHECK(algorithm_name(Algorithm::DdpgSingle) == "ddpg_single");
    CHECK(algorithm_name(Algorithm::Maddpg) == "maddpg");
    CHECK(algorithm_from_name("maddpg") == Algorithm::Maddpg);
    CHECK_THROWS_AS(algorithm_from_name("nope"), std::invalid_argument);
}
