// Complete, serializable description of one simulation run, the figure
// presets, and the runner that turns a config into frames plus metadata.
//
// RNG stream layout (documented for replayability): ensemble member m draws
// its extended field from RngStream(seed, 2m) and all velocity randomness
// (mixture materialization, Gaussian velocities, rotation phases then
// translation, in that order) from RngStream(seed, 2m+1). A single run is
// member 0.
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "travelfield/core.hpp"
#include "travelfield/generators.hpp"
#include "travelfield/simulate.hpp"
#include "travelfield/spectrum.hpp"
#include "travelfield/velocity.hpp"

#include "json.hpp"

namespace tfld {

// The paper's figures travel a deterministic faded rectangle instead of a
// random field; shipping it as a generator makes the presets exactly
// reproducible. Placement is in window cell coordinates; a negative center
// means "window center". The fade ramps linearly over `fade` cells from the
// rectangle edge inward.
struct TestImageSpec {
    double width = 60.0;
    double height = 60.0;
    double fade = 20.0;
    double amplitude = 1.0;
    double center1 = -1.0;
    double center2 = -1.0;
};

struct OutputOptions {
    bool binary = true;
    bool pgm = false;
    bool csv = false;
    bool velocity_fields = false;  // store per-frame flow grids (evolving runs)
};

struct ScenarioConfig {
    std::string name = "scenario";
    Grid2D grid;  // the target n x n window
    int epochs = 0;
    double dt = 1.0;
    SpectrumSpec spectrum = SpectrumSpec::power_law(5.0);
    VelocitySpec velocity = VelocitySpec::constant({0.0, 0.0});
    std::uint64_t seed = 0;
    int extended_grid_override = 0;  // 0 = planner's choice

    enum class Base { Gaussian, TestImage } base = Base::Gaussian;
    TestImageSpec image;

    enum class Method { Auto, WindowShift, Spectral3D } method = Method::Auto;
    OutputOptions output;

    Method resolved_method() const;
    void validate() const;

    nlohmann::json to_json() const;
    static ScenarioConfig from_json(const nlohmann::json& j);
    std::string canonical_text() const;
};

// Built-in scenarios: fig1..fig6 pin every parameter of the paper's worked
// examples (fig3 has _damped and _freqdamped companions); white_noise and
// frozen_mc back the diagnostic checks.
std::vector<std::string> preset_names();
ScenarioConfig make_preset(const std::string& name);
std::string preset_description(const std::string& name);

// The faded rectangle on the extended grid, placed relative to the window.
SpatialField make_test_image(const Grid2D& ext_grid, const Grid2D& out_grid, const TestImageSpec& spec);

struct RunResult {
    ScenarioConfig config;  // with any sampled mixture materialized
    SpaceTimeField field;
    std::optional<PlanReport> plan;            // window-shift runs
    std::optional<EmbeddingReport> embedding;  // Gaussian base runs
    std::vector<FrameMeta> frames;
    std::vector<SpatialField> velocity_v1, velocity_v2;  // per-frame flow grids
};

RunResult run_scenario(const ScenarioConfig& cfg, int ensemble_member = 0);

// Generate an ensemble in parallel (worker count capped by
// TRAVELFIELD_THREADS); member m is always produced from streams (2m, 2m+1),
// so results do not depend on the worker count.
std::vector<SpaceTimeField> run_ensemble(const ScenarioConfig& cfg, int members);

// Write frames + sidecar into `out_dir`; returns the sidecar document.
nlohmann::json write_run(const std::filesystem::path& out_dir, const RunResult& result,
                         const OutputOptions& output);

// Worker count for ensemble loops: TRAVELFIELD_THREADS when set, otherwise
// the hardware concurrency.
int worker_count();

}  // namespace tfld
