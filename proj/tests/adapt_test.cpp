#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>

#include "qadapt/adapt.hpp"
#include "qadapt/checkpoint.hpp"
#include "qadapt/oracle.hpp"
#include "qadapt/qlearn.hpp"

using namespace qadapt;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / ("qadapt_test_" + std::to_string(::getpid()))) {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

Provenance sample_provenance() {
    Provenance p;
    p.config_hash = content_hash("algorithm=alt_random_expert\nepisodes=20000\n");
    p.env = "grid";
    p.task = "original";
    p.algorithm = "alt_random_expert";
    p.episodes = 20000;
    p.seed = 17;
    return p;
}

bool params_equal(const NetParams& a, const NetParams& b) {
    return a.dims == b.dims && a.w == b.w && a.b == b.b;
}

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return bytes;
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    os.write(bytes.data(), std::streamsize(bytes.size()));
}

}  // namespace

TEST_CASE("checkpoints round-trip bit-exactly") {
    TempDir dir;

    SUBCASE("grid-shaped network") {
        const NetParams net = init_network({2, 512, 4}, 8);
        const Provenance prov = sample_provenance();
        save_checkpoint(net, prov, dir.file("grid.ckpt"));
        const Checkpoint ck = load_checkpoint(dir.file("grid.ckpt"));
        CHECK(params_equal(ck.net, net));
        CHECK(ck.provenance == prov);
    }

    SUBCASE("intersection-shaped network") {
        const NetParams net = init_network({16, 1024, 2}, 9);
        Provenance prov = sample_provenance();
        prov.env = "intersection";
        prov.task = "gap80";
        save_checkpoint(net, prov, dir.file("xing.ckpt"));
        const Checkpoint ck = load_checkpoint(dir.file("xing.ckpt"));
        CHECK(params_equal(ck.net, net));
        CHECK(ck.provenance == prov);
    }

    SUBCASE("overwriting replaces the previous contents atomically") {
        const NetParams first = init_network({2, 8, 4}, 1);
        const NetParams second = init_network({2, 8, 4}, 2);
        save_checkpoint(first, sample_provenance(), dir.file("net.ckpt"));
        save_checkpoint(second, sample_provenance(), dir.file("net.ckpt"));
        CHECK(params_equal(load_checkpoint(dir.file("net.ckpt")).net, second));
        CHECK(!fs::exists(dir.file("net.ckpt") + ".tmp"));
    }
}

TEST_CASE("corrupt checkpoints are rejected with a clear error") {
    TempDir dir;
    const std::string path = dir.file("net.ckpt");
    save_checkpoint(init_network({2, 8, 4}, 3), sample_provenance(), path);
    const std::string good = read_file(path);

    const auto expect_corrupt = [&](const std::string& bytes) {
        write_file(path, bytes);
        CHECK_THROWS_WITH_AS(load_checkpoint(path), doctest::Contains("corrupt checkpoint"),
                             std::runtime_error);
    };

    SUBCASE("bad magic") {
        std::string bad = good;
        bad[0] = 'X';
        expect_corrupt(bad);
    }
    SUBCASE("unsupported version") {
        std::string bad = good;
        bad[8] = 99;
        expect_corrupt(bad);
    }
    SUBCASE("truncated payload") { expect_corrupt(good.substr(0, good.size() / 2)); }
    SUBCASE("truncated header") { expect_corrupt(good.substr(0, 10)); }
    SUBCASE("trailing garbage") { expect_corrupt(good + "x"); }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_checkpoint(dir.file("absent.ckpt")), std::runtime_error);
    }
}

TEST_CASE("content_hash is a stable 16-digit hex fingerprint") {
    CHECK(content_hash("") == "cbf29ce484222325");
    CHECK(content_hash("a") == content_hash("a"));
    CHECK(content_hash("a") != content_hash("b"));
    CHECK(content_hash("abc").size() == 16);
}

TEST_CASE("adapt_task swaps the grid's goal and hazard") {
    const GridTask original = original_grid_task();
    const GridTask adapted = adapt_task(original);
    CHECK(adapted.goal.y == 1);
    CHECK(adapted.goal.x == 2);
    CHECK(adapted.hazard.y == 0);
    CHECK(adapted.hazard.x == 0);
    CHECK(adapted.obstacle.y == original.obstacle.y);
    CHECK(adapted.obstacle.x == original.obstacle.x);

    const GridTask twice = adapt_task(adapted);
    CHECK(twice.goal.y == original.goal.y);
    CHECK(twice.goal.x == original.goal.x);
    CHECK(twice.hazard.y == original.hazard.y);
    CHECK(twice.hazard.x == original.hazard.x);
}

TEST_CASE("adapt_task_gap flips between the two crossing thresholds") {
    CHECK(adapt_task_gap(80.0) == 120.0);
    CHECK(adapt_task_gap(120.0) == 80.0);
    CHECK(adapt_task_gap(adapt_task_gap(80.0)) == 80.0);
    CHECK_THROWS_AS(adapt_task_gap(100.0), std::invalid_argument);
}

TEST_CASE("retrain starts from the base and carries its provenance") {
    TempDir dir;
    const GridEnv adapted_env{adapt_task(original_grid_task()), StartMode::fixed};
    const GridExpert expert = make_grid_expert(adapted_env.task);

    const NetParams base_net = init_network({2, 512, 4}, 5);
    const Provenance prov = sample_provenance();
    save_checkpoint(base_net, prov, dir.file("base.ckpt"));
    const std::string bytes_before = read_file(dir.file("base.ckpt"));
    const Checkpoint base = load_checkpoint(dir.file("base.ckpt"));

    SUBCASE("zero retraining episodes returns the base network unchanged") {
        TrainConfig cfg;
        cfg.episodes = 0;
        const RunRecord rec = retrain(adapted_env, cfg, &expert, nullptr, base);
        CHECK(params_equal(rec.net, base_net));
        CHECK(rec.base_id == prov.config_hash);
        CHECK(rec.evals.size() == 1);
    }

    SUBCASE("a real retraining step moves the parameters but not the file") {
        TrainConfig cfg;
        cfg.algorithm = Algorithm::alt_random_expert;
        cfg.episodes = 4;
        cfg.eval_every = 2;
        cfg.eval_rollouts = 10;
        const RunRecord rec = retrain(adapted_env, cfg, &expert, nullptr, base);
        CHECK(!params_equal(rec.net, base_net));
        CHECK(rec.base_id == prov.config_hash);
        CHECK(read_file(dir.file("base.ckpt")) == bytes_before);
    }

    SUBCASE("fresh training differs from retraining at equal seed") {
        TrainConfig cfg;
        cfg.algorithm = Algorithm::alt_random_expert;
        cfg.episodes = 4;
        cfg.eval_every = 2;
        cfg.eval_rollouts = 10;
        const RunRecord fresh = train(adapted_env, cfg, &expert, nullptr);
        const RunRecord warm = retrain(adapted_env, cfg, &expert, nullptr, base);
        CHECK(!params_equal(fresh.net, warm.net));
        CHECK(fresh.base_id.empty());
    }

    SUBCASE("dimension mismatch is rejected") {
        Checkpoint wrong = base;
        wrong.net = init_network({16, 1024, 2}, 0);
        TrainConfig cfg;
        cfg.episodes = 1;
        CHECK_THROWS_AS(retrain(adapted_env, cfg, &expert, nullptr, wrong),
                        std::invalid_argument);
    }
}
