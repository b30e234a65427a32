#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "usvswarm/checkpoint.hpp"
#include "usvswarm/config.hpp"
#include "usvswarm/maddpg.hpp"
#include "usvswarm/trainer.hpp"
#include "usvswarm/trajectory.hpp"
#include "usvswarm/world.hpp"

namespace {

using namespace usvswarm;

std::vector<const MlpParams*> actor_pointers(const Checkpoint& ckpt) {
    std::vector<const MlpParams*> actors;
    actors.reserve(ckpt.actors.size());
    for (const auto& a : ckpt.actors) actors.push_back(&a);
    return actors;
}

int cmd_train(const std::string& config_path) {
    RunConfig config;
    try {
        config = load_run_config(config_path);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    }
    Trainer trainer(config);
    const int status = trainer.run();
    if (status != 0)
        std::cerr << "training aborted; diagnostics in " << config.output_dir << "/failure.json\n";
    return status;
}

int cmd_eval(const std::string& ckpt_path, const std::string& config_path, int episodes,
             uint64_t seed, const std::string& out_path) {
    RunConfig config;
    Checkpoint ckpt;
    try {
        config = load_run_config(config_path);
        ckpt = load_checkpoint(ckpt_path);
        check_compatible(ckpt, config.world);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    EvalMetrics m = evaluate_decentralized(actor_pointers(ckpt), config.world, episodes, seed);
    nlohmann::json summary{
        {"episodes", episodes},
        {"seed", seed},
        {"mean_return", m.mean_return},
        {"mean_collected", m.mean_collected},
        {"mean_collisions", m.mean_collisions},
        {"mean_steps", m.mean_steps},
    };
    std::cout << summary.dump(2) << '\n';
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) {
            std::cerr << "error: cannot write " << out_path << '\n';
            return 2;
        }
        out << summary.dump(2) << '\n';
    }
    return 0;
}

int cmd_replay(const std::string& ckpt_path, const std::string& config_path, uint64_t seed,
               const std::string& out_dir) {
    RunConfig config;
    Checkpoint ckpt;
    try {
        config = load_run_config(config_path);
        ckpt = load_checkpoint(ckpt_path);
        check_compatible(ckpt, config.world);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    std::filesystem::create_directories(out_dir);
    const auto traj_path = std::filesystem::path(out_dir) / "trajectory.jsonl";
    const auto svg_path = std::filesystem::path(out_dir) / "paths.svg";
    std::ofstream traj(traj_path);
    std::ofstream svg(svg_path);
    if (!traj || !svg) {
        std::cerr << "error: cannot write to " << out_dir << '\n';
        return 2;
    }
    ReplayOutput out = run_replay_episode(actor_pointers(ckpt), config.world, seed, traj, svg);
    std::cout << "replay: " << out.steps << " steps, return " << out.episode_return
              << ", collected " << out.collected << '\n';
    std::cout << "wrote " << traj_path.string() << " and " << svg_path.string() << '\n';
    return 0;
}

int cmd_selftest() {
    bool ok = true;

    // Gradient check over a handful of random networks.
    {
        Rng rng(42);
        double worst = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<int> sizes{3 + static_cast<int>(rng.uniform_index(5))};
            const int layers = 2 + static_cast<int>(rng.uniform_index(2));
            for (int l = 0; l < layers; ++l) sizes.push_back(2 + static_cast<int>(rng.uniform_index(14)));
            MlpParams net = mlp_init(sizes, Activation::Tanh, Activation::Identity, rng.next_u64());
            Matrix input(3, sizes.front());
            for (auto& x : input.data) x = rng.uniform(-1.0, 1.0);
            worst = std::max(worst, finite_diff_check(net, input, 1e-5));
        }
        const bool pass = worst < 1e-6;
        ok = ok && pass;
        std::cout << (pass ? "[ok] " : "[FAIL] ") << "gradient check, max relative error "
                  << worst << '\n';
    }

    // Lidar ray cast against a coarse marching probe.
    {
        WorldConfig config;
        config.arena_width = config.arena_height = 30.0;
        config.n_agents = 2;
        config.n_trash = 4;
        config.lidar_beams = 8;
        config.lidar_max_range = 12.0;
        World world(config);
        double worst = 0.0;
        for (int scene = 0; scene < 20; ++scene) {
            world.reset(1000 + scene);
            const auto exact = world.lidar_scan(0);
            const auto& self = world.vessels()[0];
            for (int k = 0; k < config.lidar_beams; ++k) {
                const double angle = self.heading + 2.0 * std::numbers::pi * k / config.lidar_beams;
                const double dx = std::cos(angle), dy = std::sin(angle);
                double t = 0.0;
                const double step = 1e-3;
                for (; t < config.lidar_max_range; t += step) {
                    const double px = self.x + t * dx, py = self.y + t * dy;
                    if (px < 0 || px > config.arena_width || py < 0 || py > config.arena_height) break;
                    bool hit = false;
                    for (const auto& item : world.trash())
                        if (item.active && std::hypot(px - item.x, py - item.y) <= config.trash_radius)
                            hit = true;
                    if (std::hypot(px - world.vessels()[1].x, py - world.vessels()[1].y) <=
                        config.vessel.hull_radius)
                        hit = true;
                    if (hit) break;
                }
                worst = std::max(worst, std::abs(std::min(t, config.lidar_max_range) - exact[k]));
            }
        }
        const bool pass = worst < 1e-3;
        ok = ok && pass;
        std::cout << (pass ? "[ok] " : "[FAIL] ") << "lidar ray cast, max error " << worst
                  << " m\n";
    }

    // Reward arithmetic spot checks.
    {
        RewardWeights w;
        w.w1 = 1; w.w2 = 1; w.w3 = 1; w.w4 = 0.5;
        w.r_collect_unit = 1; w.p_coll_unit = 1; w.p_time_unit = 0.01; w.d_max = 10.0;
        const double r = compute_reward({1, 1}, {{0.0, 0.0}, {4.0, 0.0}}, w);
        const bool pass = std::abs(r - 0.29) < 1e-12;
        ok = ok && pass;
        std::cout << (pass ? "[ok] " : "[FAIL] ") << "reward arithmetic, got " << r << '\n';
    }

    std::cout << (ok ? "selftest passed\n" : "selftest FAILED\n");
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Swarm trash-collection RL: training, evaluation, replay"};
    app.require_subcommand(1);

    std::string config_path, ckpt_path, out_path;
    int episodes = 10;
    uint64_t seed = 0;

    auto* train = app.add_subcommand("train", "Run the training loop from a JSON config");
    train->add_option("config", config_path, "Run configuration file")->required();

    auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint greedily");
    eval->add_option("checkpoint", ckpt_path)->required();
    eval->add_option("config", config_path)->required();
    eval->add_option("--episodes", episodes, "Number of evaluation episodes");
    eval->add_option("--seed", seed, "Evaluation seed");
    eval->add_option("--out", out_path, "Optional JSON summary output file");

    auto* replay = app.add_subcommand("replay", "Record one greedy episode (JSONL + SVG)");
    replay->add_option("checkpoint", ckpt_path)->required();
    replay->add_option("config", config_path)->required();
    replay->add_option("--seed", seed, "Episode seed");
    replay->add_option("--out", out_path, "Output directory")->required();

    auto* selftest = app.add_subcommand("selftest", "Run the built-in oracle suites");

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed()) return cmd_train(config_path);
        if (eval->parsed()) return cmd_eval(ckpt_path, config_path, episodes, seed, out_path);
        if (replay->parsed()) return cmd_replay(ckpt_path, config_path, seed, out_path);
        if (selftest->parsed()) return cmd_selftest();
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
