#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "travelfield/io.hpp"
#include "travelfield/scenario.hpp"

using namespace tfld;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const char* tag) {
    const fs::path dir = fs::temp_directory_path() / (std::string("tfld_test_") + tag);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("field binary round trip is bitwise") {
    SpatialField field(Grid2D(9, 13));
    RngStream rng(55, 0);
    for (double& x : field.values) x = rng.next_normal() * 1e7;
    field.values[5] = 0.1 + 0.2;  // deliberately non-representable decimal
    const fs::path path = temp_dir("bin") / "field.bin";
    write_field_binary(path, field);
    const SpatialField back = read_field_binary(path);
    REQUIRE(back.grid.n1 == 9);
    REQUIRE(back.grid.n2 == 13);
    for (std::size_t c = 0; c < field.values.size(); ++c) CHECK(back.values[c] == field.values[c]);
}

TEST_CASE("field binary rejects foreign files") {
    const fs::path path = temp_dir("bad") / "junk.bin";
    std::ofstream(path) << "not a field";
    CHECK_THROWS_AS(read_field_binary(path), std::runtime_error);
}

TEST_CASE("pgm round trip stays within the 8-bit quantization bound") {
    SpatialField field(Grid2D(24, 24));
    RngStream rng(56, 0);
    for (double& x : field.values) x = rng.next_normal();
    const fs::path path = temp_dir("pgm") / "field.pgm";
    const PgmScale scale = write_field_pgm(path, field);

    std::ifstream in(path, std::ios::binary);
    std::string magic;
    int w, h, maxval;
    in >> magic >> w >> h >> maxval;
    REQUIRE(magic == "P5");
    REQUIRE(w == 24);
    REQUIRE(h == 24);
    in.get();
    const double quantum = (scale.max - scale.min) / 255.0;
    for (int i = 0; i < 24; ++i)
        for (int j = 0; j < 24; ++j) {
            const int byte = in.get();
            const double restored = scale.min + (scale.max - scale.min) * byte / 255.0;
            CHECK(std::abs(restored - field.at(i, j)) <= quantum * 0.5 + 1e-12);
        }
}

TEST_CASE("scenario config JSON round trip is lossless") {
    RngStream rng(57, 0);
    for (const std::string& preset : preset_names()) {
        ScenarioConfig cfg = make_preset(preset);
        cfg.seed = rng.next_u64();  // arbitrary u64 must survive
        cfg.dt = 0.1 + 0.2;         // non-representable decimal must survive too
        const ScenarioConfig back = ScenarioConfig::from_json(cfg.to_json());
        CHECK(back.canonical_text() == cfg.canonical_text());
    }
}

TEST_CASE("config parsing errors carry ConfigError") {
    nlohmann::json j = make_preset("fig2").to_json();
    j["velocity"]["kind"] = "warp-drive";
    CHECK_THROWS_AS(ScenarioConfig::from_json(j), ConfigError);
    j = make_preset("fig2").to_json();
    j["epochs"] = -3;
    CHECK_THROWS_AS(ScenarioConfig::from_json(j), ConfigError);
    j = make_preset("fig2").to_json();
    j.erase("grid");
    CHECK_THROWS_AS(ScenarioConfig::from_json(j), ConfigError);
}

TEST_CASE("mixture weights validation") {
    nlohmann::json j = make_preset("fig2").to_json();
    j["velocity"] = {{"kind", "mixture"},
                     {"velocities", {{1.0, 0.0}, {0.0, 1.0}}},
                     {"weights", {0.0, 0.0}}};
    CHECK_THROWS_AS(ScenarioConfig::from_json(j), ConfigError);
    j["velocity"]["weights"] = {0.5, -0.1};
    CHECK_THROWS_AS(ScenarioConfig::from_json(j), ConfigError);
}

TEST_CASE("run artifacts validate against the sidecar schema and reload bitwise") {
    ScenarioConfig cfg = make_preset("frozen_mc");
    cfg.output.pgm = true;
    const RunResult result = run_scenario(cfg);
    const fs::path dir = temp_dir("run");
    const nlohmann::json sidecar = write_run(dir, result, cfg.output);
    CHECK_NOTHROW(validate_sidecar(sidecar));

    for (int t = 0; t <= result.field.epochs(); ++t) {
        char stem[32];
        std::snprintf(stem, sizeof(stem), "frame_%04d.bin", t);
        const SpatialField frame = read_field_binary(dir / stem);
        for (std::size_t c = 0; c < frame.values.size(); ++c)
            CHECK(frame.values[c] == result.field.frames[t][c]);
    }

    nlohmann::json broken = sidecar;
    broken.erase("seed");
    CHECK_THROWS_AS(validate_sidecar(broken), ConfigError);
}

TEST_CASE("re-running a scenario is bitwise deterministic") {
    const ScenarioConfig cfg = make_preset("frozen_mc");
    const RunResult a = run_scenario(cfg);
    const RunResult b = run_scenario(cfg);
    for (int t = 0; t <= a.field.epochs(); ++t)
        for (std::size_t c = 0; c < a.field.frames[t].size(); ++c)
            CHECK(a.field.frames[t][c] == b.field.frames[t][c]);

    const RunResult other = run_scenario(cfg, 1);  // different member differs
    bool differs = false;
    for (std::size_t c = 0; c < a.field.frames[0].size() && !differs; ++c)
        differs = a.field.frames[0][c] != other.field.frames[0][c];
    CHECK(differs);
}

TEST_CASE("extended grid override below the plan fails planning") {
    ScenarioConfig cfg = make_preset("fig2");
    cfg.extended_grid_override = 200;  // needs 232
    CHECK_THROWS_AS(run_scenario(cfg), PlanningError);
}

TEST_CASE("scenario hash is stable") {
    CHECK(fnv1a64("travelfield") == fnv1a64("travelfield"));
    CHECK(fnv1a64("travelfield") != fnv1a64("travelfield2"));
}
