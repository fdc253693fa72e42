#include "travelfield/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <thread>

#include "travelfield/io.hpp"

namespace tfld {

using nlohmann::json;

namespace {

json vec2_json(Vec2 v) { return json::array({v.first, v.second}); }
Vec2 vec2_from(const json& j) {
    if (!j.is_array() || j.size() != 2) throw ConfigError("expected a [x, y] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

json mat2_json(const Mat2& m) {
    return json::array({json::array({m[0][0], m[0][1]}), json::array({m[1][0], m[1][1]})});
}
Mat2 mat2_from(const json& j) {
    if (!j.is_array() || j.size() != 2) throw ConfigError("expected a 2x2 matrix");
    Mat2 m;
    for (int r = 0; r < 2; ++r) {
        if (!j[r].is_array() || j[r].size() != 2) throw ConfigError("expected a 2x2 matrix");
        for (int c = 0; c < 2; ++c) m[r][c] = j[r][c].get<double>();
    }
    return m;
}

json spatial_json(const SpatialSpectrum& s) {
    if (s.kind == SpatialSpectrum::Kind::PowerLaw) return {{"kind", "power_law"}, {"alpha", s.alpha}};
    return {{"kind", "compact"}, {"base", s.base}, {"rho", s.rho}, {"h0", s.h0}};
}

SpatialSpectrum spatial_from(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "power_law") return SpatialSpectrum::power_law(j.at("alpha").get<double>());
    if (kind == "compact")
        return SpatialSpectrum::compact(j.at("base").get<std::string>(), j.value("rho", 1.0),
                                        j.at("h0").get<double>());
    throw ConfigError("spectrum: unknown spatial kind '" + kind + "'");
}

}  // namespace

ScenarioConfig::Method ScenarioConfig::resolved_method() const {
    if (method != Method::Auto) return method;
    return spectrum.is_spatial() ? Method::WindowShift : Method::Spectral3D;
}

void ScenarioConfig::validate() const {
    if (epochs < 0) throw ConfigError("epochs must be >= 0");
    if (!(dt > 0.0)) throw ConfigError("dt must be > 0");
    spectrum.validate();
    velocity.validate();
    const Method m = resolved_method();
    if (m == Method::Spectral3D) {
        if (spectrum.is_spatial())
            throw ConfigError("spectral3d requires a space-time spectrum (frozen_delta/orient_persistent/damped/freq_damped)");
        if (epochs < 1) throw ConfigError("spectral3d requires epochs >= 1");
    } else {
        if (!spectrum.is_spatial() && base == Base::Gaussian)
            throw ConfigError("window_shift with a Gaussian base requires a spatial spectrum (power_law/compact)");
    }
    if (extended_grid_override < 0) throw ConfigError("extended_grid_override must be >= 0");
}

json ScenarioConfig::to_json() const {
    json j;
    j["name"] = name;
    j["grid"] = {{"n1", grid.n1},
                 {"n2", grid.n2},
                 {"spacing", grid.spacing},
                 {"origin", vec2_json(grid.origin)}};
    j["epochs"] = epochs;
    j["dt"] = dt;
    j["seed"] = seed;
    if (extended_grid_override > 0) j["extended_grid_override"] = extended_grid_override;

    switch (method) {
        case Method::WindowShift: j["method"] = "window_shift"; break;
        case Method::Spectral3D: j["method"] = "spectral3d"; break;
        default: break;
    }

    switch (spectrum.kind) {
        case SpectrumSpec::Kind::PowerLaw:
        case SpectrumSpec::Kind::CompactCovariance:
            j["spectrum"] = spatial_json(spectrum.spatial);
            break;
        case SpectrumSpec::Kind::FrozenDelta:
            j["spectrum"] = {{"kind", "frozen_delta"},
                             {"spatial", spatial_json(spectrum.spatial)},
                             {"v", vec2_json(spectrum.v)}};
            break;
        case SpectrumSpec::Kind::OrientPersistent:
            j["spectrum"] = {{"kind", "orient_persistent"},
                             {"spatial", spatial_json(spectrum.spatial)},
                             {"v", vec2_json(spectrum.v)},
                             {"delta", spectrum.delta}};
            break;
        case SpectrumSpec::Kind::Damped:
            j["spectrum"] = {{"kind", "damped"},
                             {"spatial", spatial_json(spectrum.spatial)},
                             {"v", vec2_json(spectrum.v)},
                             {"delta", spectrum.delta},
                             {"h", spectrum.h}};
            break;
        case SpectrumSpec::Kind::FreqDamped:
            j["spectrum"] = {{"kind", "freq_damped"},
                             {"spatial", spatial_json(spectrum.spatial)},
                             {"v", vec2_json(spectrum.v)},
                             {"delta", spectrum.delta},
                             {"a", spectrum.a}};
            break;
    }

    switch (velocity.kind) {
        case VelocitySpec::Kind::Constant:
            j["velocity"] = {{"kind", "constant"}, {"v", vec2_json(velocity.v)}};
            break;
        case VelocitySpec::Kind::GaussianRandom:
            j["velocity"] = {{"kind", "gaussian"},
                             {"mu", vec2_json(velocity.gauss.mu)},
                             {"cov", mat2_json(velocity.gauss.cov)},
                             {"redraw", redraw_name(velocity.redraw)}};
            break;
        case VelocitySpec::Kind::Mixture: {
            json m = {{"kind", "mixture"}};
            if (velocity.sampled) {
                m["sample"] = {{"v_pref", vec2_json(velocity.sampling.v_pref)},
                               {"n_v", velocity.sampling.n_v},
                               {"phase_sigma", velocity.sampling.phase_sigma},
                               {"amp_sigma", velocity.sampling.amp_sigma}};
            } else {
                json vels = json::array();
                for (const Vec2& v : velocity.velocities) vels.push_back(vec2_json(v));
                m["velocities"] = vels;
                m["weights"] = velocity.weights;
            }
            j["velocity"] = m;
            break;
        }
        case VelocitySpec::Kind::RotationMixture:
            j["velocity"] = {{"kind", "rotation_mixture"},
                             {"n_theta", velocity.rotation.n_theta},
                             {"phase", {{"mu", velocity.rotation.phase.mu},
                                        {"sigma", velocity.rotation.phase.sigma}}},
                             {"translation", {{"mu", vec2_json(velocity.rotation.translation.mu)},
                                              {"cov", mat2_json(velocity.rotation.translation.cov)}}},
                             {"c0", vec2_json(velocity.rotation.c0)}};
            break;
        case VelocitySpec::Kind::Field:
            j["velocity"] = {{"kind", "field"},
                             {"flow", velocity.flow.name()},
                             {"k", velocity.flow.k},
                             {"v0", vec2_json(velocity.flow.v0)}};
            break;
    }

    if (base == Base::TestImage) {
        j["base"] = {{"kind", "test_image"}, {"width", image.width},    {"height", image.height},
                     {"fade", image.fade},   {"amplitude", image.amplitude},
                     {"center", vec2_json({image.center1, image.center2})}};
    } else {
        j["base"] = {{"kind", "gaussian"}};
    }

    j["output"] = {{"binary", output.binary},
                   {"pgm", output.pgm},
                   {"csv", output.csv},
                   {"velocity_fields", output.velocity_fields}};
    return j;
}

ScenarioConfig ScenarioConfig::from_json(const json& j) {
    ScenarioConfig cfg;
    try {
        cfg.name = j.value("name", "scenario");
        const json& g = j.at("grid");
        cfg.grid = Grid2D(g.at("n1").get<int>(), g.at("n2").get<int>(), g.value("spacing", 1.0),
                          g.contains("origin") ? vec2_from(g["origin"]) : Vec2{0.0, 0.0});
        cfg.epochs = j.at("epochs").get<int>();
        cfg.dt = j.value("dt", 1.0);
        cfg.seed = j.value("seed", static_cast<std::uint64_t>(0));
        cfg.extended_grid_override = j.value("extended_grid_override", 0);

        if (j.contains("method")) {
            const std::string m = j["method"].get<std::string>();
            if (m == "window_shift") cfg.method = Method::WindowShift;
            else if (m == "spectral3d") cfg.method = Method::Spectral3D;
            else if (m != "auto") throw ConfigError("unknown method '" + m + "'");
        }

        const json& sp = j.at("spectrum");
        const std::string spec_kind = sp.at("kind").get<std::string>();
        if (spec_kind == "power_law" || spec_kind == "compact") {
            cfg.spectrum = SpectrumSpec{};
            cfg.spectrum.kind = spec_kind == "power_law" ? SpectrumSpec::Kind::PowerLaw
                                                         : SpectrumSpec::Kind::CompactCovariance;
            cfg.spectrum.spatial = spatial_from(sp);
        } else if (spec_kind == "frozen_delta") {
            cfg.spectrum = SpectrumSpec::frozen_delta(spatial_from(sp.at("spatial")), vec2_from(sp.at("v")));
        } else if (spec_kind == "orient_persistent") {
            cfg.spectrum = SpectrumSpec::orient_persistent(spatial_from(sp.at("spatial")),
                                                           vec2_from(sp.at("v")), sp.at("delta").get<double>());
        } else if (spec_kind == "damped") {
            cfg.spectrum = SpectrumSpec::damped(spatial_from(sp.at("spatial")), vec2_from(sp.at("v")),
                                                sp.at("delta").get<double>(), sp.at("h").get<double>());
        } else if (spec_kind == "freq_damped") {
            cfg.spectrum = SpectrumSpec::freq_damped(spatial_from(sp.at("spatial")), vec2_from(sp.at("v")),
                                                     sp.at("delta").get<double>(), sp.at("a").get<double>());
        } else {
            throw ConfigError("unknown spectrum kind '" + spec_kind + "'");
        }

        const json& vel = j.at("velocity");
        const std::string vel_kind = vel.at("kind").get<std::string>();
        if (vel_kind == "constant") {
            cfg.velocity = VelocitySpec::constant(vec2_from(vel.at("v")));
        } else if (vel_kind == "gaussian") {
            cfg.velocity = VelocitySpec::gaussian(vec2_from(vel.at("mu")), mat2_from(vel.at("cov")),
                                                  redraw_from_name(vel.value("redraw", "once-per-field")));
        } else if (vel_kind == "mixture") {
            if (vel.contains("sample")) {
                const json& s = vel["sample"];
                cfg.velocity = VelocitySpec::sampled_mixture({vec2_from(s.at("v_pref")),
                                                              s.at("n_v").get<int>(),
                                                              s.at("phase_sigma").get<double>(),
                                                              s.at("amp_sigma").get<double>()});
            } else {
                std::vector<Vec2> vels;
                for (const auto& item : vel.at("velocities")) vels.push_back(vec2_from(item));
                cfg.velocity = VelocitySpec::mixture(std::move(vels),
                                                     vel.at("weights").get<std::vector<double>>());
            }
        } else if (vel_kind == "rotation_mixture") {
            RotationMixtureSpec r;
            r.n_theta = vel.at("n_theta").get<int>();
            r.phase = {vel.at("phase").at("mu").get<double>(), vel.at("phase").at("sigma").get<double>()};
            r.translation = {vec2_from(vel.at("translation").at("mu")),
                             mat2_from(vel.at("translation").at("cov"))};
            r.c0 = vec2_from(vel.at("c0"));
            cfg.velocity = VelocitySpec::rotation_mixture(r);
        } else if (vel_kind == "field") {
            cfg.velocity = VelocitySpec::field(FlowField::from_name(
                vel.at("flow").get<std::string>(), vel.value("k", 0.0),
                vel.contains("v0") ? vec2_from(vel["v0"]) : Vec2{0.0, 0.0}));
        } else {
            throw ConfigError("unknown velocity kind '" + vel_kind + "'");
        }

        if (j.contains("base")) {
            const json& b = j["base"];
            const std::string base_kind = b.at("kind").get<std::string>();
            if (base_kind == "test_image") {
                cfg.base = Base::TestImage;
                cfg.image.width = b.value("width", 60.0);
                cfg.image.height = b.value("height", 60.0);
                cfg.image.fade = b.value("fade", 20.0);
                cfg.image.amplitude = b.value("amplitude", 1.0);
                if (b.contains("center")) {
                    const Vec2 c = vec2_from(b["center"]);
                    cfg.image.center1 = c.first;
                    cfg.image.center2 = c.second;
                }
            } else if (base_kind != "gaussian") {
                throw ConfigError("unknown base kind '" + base_kind + "'");
            }
        }

        if (j.contains("output")) {
            const json& o = j["output"];
            cfg.output.binary = o.value("binary", true);
            cfg.output.pgm = o.value("pgm", false);
            cfg.output.csv = o.value("csv", false);
            cfg.output.velocity_fields = o.value("velocity_fields", false);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

std::string ScenarioConfig::canonical_text() const { return to_json().dump(); }

SpatialField make_test_image(const Grid2D& ext_grid, const Grid2D& out_grid, const TestImageSpec& spec) {
    const double c1 = spec.center1 >= 0.0 ? spec.center1 : 0.5 * (out_grid.n1 - 1);
    const double c2 = spec.center2 >= 0.0 ? spec.center2 : 0.5 * (out_grid.n2 - 1);
    // Rectangle bounds in window cell coordinates.
    const double lo1 = c1 - 0.5 * spec.width, hi1 = c1 + 0.5 * spec.width;
    const double lo2 = c2 - 0.5 * spec.height, hi2 = c2 + 0.5 * spec.height;
    const double inv = 1.0 / ext_grid.spacing;

    SpatialField img(ext_grid);
    for (int i = 0; i < ext_grid.n1; ++i) {
        for (int j = 0; j < ext_grid.n2; ++j) {
            const Vec2 coord = index_to_coord(ext_grid, i, j);
            const double w1 = (coord.first - out_grid.origin.first) * inv;
            const double w2 = (coord.second - out_grid.origin.second) * inv;
            const double d = std::min(std::min(w1 - lo1, hi1 - w1), std::min(w2 - lo2, hi2 - w2));
            if (d > 0.0) img.at(i, j) = spec.amplitude * std::min(1.0, d / spec.fade);
        }
    }
    return img;
}

namespace {

ScenarioConfig base_fig_config(const std::string& name, std::uint64_t seed) {
    ScenarioConfig cfg;
    cfg.name = name;
    cfg.grid = Grid2D(150, 150);
    cfg.epochs = 8;
    cfg.seed = seed;
    cfg.extended_grid_override = 600;
    cfg.base = ScenarioConfig::Base::TestImage;
    cfg.spectrum = SpectrumSpec::power_law(5.0);
    return cfg;
}

}  // namespace

std::vector<std::string> preset_names() {
    return {"fig1",         "fig2", "fig3", "fig3_damped", "fig3_freqdamped",
            "fig4",         "fig5", "fig6", "white_noise", "frozen_mc"};
}

std::string preset_description(const std::string& name) {
    if (name == "fig1") return "extended test image, window at rest (T=0)";
    if (name == "fig2") return "classic frozen field, v=(10,0), N=600, n=150, T=8";
    if (name == "fig3") return "orientationally persistent field, alpha=5, delta=2, v=(10,0), T=4";
    if (name == "fig3_damped") return "damped frozen field, h=1 (fig3 companion)";
    if (name == "fig3_freqdamped") return "frequency-dependent damped frozen field, a=1 (fig3 companion)";
    if (name == "fig4") return "distributed frozen field, n_v=10 velocities around (10,0)";
    if (name == "fig5") return "rotation mixture, n_theta=20, WN(0,5^2), mu=(5,0), C0=(75,105)";
    if (name == "fig6") return "evolving frozen field, spiral flow R(s)=||s||/2";
    if (name == "white_noise") return "white spatial field, T=0 (periodogram check)";
    if (name == "frozen_mc") return "frozen field ensemble scenario, exp rho=4, v=(1,0), n=32, T=4";
    throw ConfigError("unknown preset '" + name + "'");
}

ScenarioConfig make_preset(const std::string& name) {
    if (name == "fig1") {
        ScenarioConfig cfg = base_fig_config(name, 101);
        cfg.epochs = 0;
        return cfg;
    }
    if (name == "fig2") {
        ScenarioConfig cfg = base_fig_config(name, 102);
        cfg.velocity = VelocitySpec::constant({10.0, 0.0});
        return cfg;
    }
    if (name == "fig3" || name == "fig3_damped" || name == "fig3_freqdamped") {
        ScenarioConfig cfg;
        cfg.name = name;
        cfg.grid = Grid2D(150, 150);
        cfg.epochs = 4;
        cfg.seed = 103;
        cfg.method = ScenarioConfig::Method::Spectral3D;
        const SpatialSpectrum spatial = SpatialSpectrum::power_law(5.0);
        const Vec2 v{10.0, 0.0};
        if (name == "fig3") cfg.spectrum = SpectrumSpec::orient_persistent(spatial, v, 2.0);
        else if (name == "fig3_damped") cfg.spectrum = SpectrumSpec::damped(spatial, v, 2.0, 1.0);
        else cfg.spectrum = SpectrumSpec::freq_damped(spatial, v, 2.0, 1.0);
        return cfg;
    }
    if (name == "fig4") {
        ScenarioConfig cfg = base_fig_config(name, 104);
        cfg.velocity = VelocitySpec::sampled_mixture({{10.0, 0.0}, 10, 0.5, 2.0});
        return cfg;
    }
    if (name == "fig5") {
        ScenarioConfig cfg = base_fig_config(name, 105);
        RotationMixtureSpec r;
        r.n_theta = 20;
        r.phase = {0.0, 5.0};
        r.translation = {{5.0, 0.0}, {{{1.0, 0.0}, {0.0, 1.0}}}};
        r.c0 = {75.0, 105.0};
        cfg.velocity = VelocitySpec::rotation_mixture(r);
        return cfg;
    }
    if (name == "fig6") {
        ScenarioConfig cfg = base_fig_config(name, 106);
        cfg.velocity = VelocitySpec::field(FlowField::spiral());
        cfg.output.velocity_fields = true;
        return cfg;
    }
    if (name == "white_noise") {
        ScenarioConfig cfg;
        cfg.name = name;
        cfg.grid = Grid2D(32, 32);
        cfg.epochs = 0;
        cfg.seed = 107;
        cfg.spectrum = SpectrumSpec::compact("exponential", 1.0, 0.5);
        return cfg;
    }
    if (name == "frozen_mc") {
        ScenarioConfig cfg;
        cfg.name = name;
        cfg.grid = Grid2D(32, 32);
        cfg.epochs = 4;
        cfg.seed = 108;
        cfg.spectrum = SpectrumSpec::compact("exponential", 4.0, 16.0);
        cfg.velocity = VelocitySpec::constant({1.0, 0.0});
        return cfg;
    }
    throw ConfigError("unknown preset '" + name + "'");
}

int worker_count() {
    if (const char* env = std::getenv("TRAVELFIELD_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

RunResult run_scenario(const ScenarioConfig& input, int ensemble_member) {
    input.validate();
    RunResult result;
    result.config = input;
    ScenarioConfig& cfg = result.config;

    RngStream field_rng(cfg.seed, 2 * static_cast<std::uint64_t>(ensemble_member));
    RngStream velocity_rng(cfg.seed, 2 * static_cast<std::uint64_t>(ensemble_member) + 1);

    if (cfg.resolved_method() == ScenarioConfig::Method::Spectral3D) {
        const FreqGrid3 freq(cfg.grid.n1, cfg.grid.n2, cfg.epochs + 1);
        result.field = simulate_spacetime_spectral(cfg.spectrum, freq, field_rng, cfg.dt);
        result.field.grid = cfg.grid;
        result.frames.assign(cfg.epochs + 1, FrameMeta{});
        return result;
    }

    // Window shift: materialize sampled mixtures, plan, build the extended
    // field, then dispatch on the velocity kind.
    if (cfg.velocity.kind == VelocitySpec::Kind::Mixture && cfg.velocity.sampled) {
        auto [vels, weights] = sample_mixture_velocities(
            cfg.velocity.sampling.v_pref, cfg.velocity.sampling.n_v, cfg.velocity.sampling.phase_sigma,
            cfg.velocity.sampling.amp_sigma, velocity_rng);
        cfg.velocity = VelocitySpec::mixture(std::move(vels), std::move(weights));
    }

    const PlanReport plan = plan_extended_grid(cfg.grid, cfg.epochs, cfg.velocity, cfg.dt);
    result.plan = plan;
    const Grid2D ext_grid = extended_grid_for(cfg.grid, plan, cfg.extended_grid_override);

    SpatialField big;
    if (cfg.base == ScenarioConfig::Base::TestImage) {
        big = make_test_image(ext_grid, cfg.grid, cfg.image);
    } else {
        auto [field, report] = simulate_spatial_circulant(cfg.spectrum, ext_grid, field_rng);
        big = std::move(field);
        result.embedding = report;
    }

    switch (cfg.velocity.kind) {
        case VelocitySpec::Kind::Constant:
            result.field = frozen_field(big, cfg.grid, cfg.epochs, cfg.velocity.v, cfg.dt);
            result.frames.assign(cfg.epochs + 1, FrameMeta{{cfg.velocity.v}, {}, {}, {}, std::nullopt});
            break;
        case VelocitySpec::Kind::GaussianRandom:
            result.field = random_velocity_field(big, cfg.grid, cfg.epochs, cfg.velocity.gauss.mu,
                                                 cfg.velocity.gauss.cov, cfg.velocity.redraw,
                                                 velocity_rng, cfg.dt, &result.frames);
            break;
        case VelocitySpec::Kind::Mixture:
            result.field = distributed_field(big, cfg.grid, cfg.epochs, cfg.velocity.velocities,
                                             cfg.velocity.weights, cfg.dt, &result.frames);
            break;
        case VelocitySpec::Kind::RotationMixture:
            result.field = rotation_mixture_field(big, cfg.grid, cfg.epochs, cfg.velocity.rotation,
                                                  velocity_rng, cfg.dt, &result.frames);
            break;
        case VelocitySpec::Kind::Field: {
            result.field = evolving_field(big, cfg.grid, cfg.epochs, cfg.velocity.flow, cfg.dt,
                                          &result.frames);
            if (cfg.output.velocity_fields) {
                for (int t = 0; t <= cfg.epochs; ++t) {
                    SpatialField v1(cfg.grid), v2(cfg.grid);
                    for (int i = 0; i < cfg.grid.n1; ++i)
                        for (int j = 0; j < cfg.grid.n2; ++j) {
                            const Vec2 w = cfg.velocity.flow.eval(index_to_coord(cfg.grid, i, j),
                                                                  t * cfg.dt);
                            v1.at(i, j) = w.first;
                            v2.at(i, j) = w.second;
                        }
                    result.velocity_v1.push_back(std::move(v1));
                    result.velocity_v2.push_back(std::move(v2));
                }
            }
            break;
        }
    }

    for (const auto& frame : result.field.frames)
        for (double x : frame)
            if (!std::isfinite(x)) throw std::runtime_error("generator produced non-finite values");
    return result;
}

std::vector<SpaceTimeField> run_ensemble(const ScenarioConfig& cfg, int members) {
    std::vector<SpaceTimeField> out(members);
    const int workers = std::max(1, std::min(worker_count(), members));
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (int m = next.fetch_add(1); m < members; m = next.fetch_add(1))
                    out[m] = run_scenario(cfg, m).field;
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& err : errors)
        if (err) std::rethrow_exception(err);
    return out;
}

nlohmann::json write_run(const std::filesystem::path& out_dir, const RunResult& result,
                         const OutputOptions& output) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    const std::string config_text = result.config.canonical_text();
    json sidecar;
    sidecar["scenario"] = result.config.to_json();
    char hash_hex[32];
    std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(config_text)));
    sidecar["scenario_hash"] = hash_hex;
    sidecar["grid"] = {{"n1", result.field.grid.n1},
                       {"n2", result.field.grid.n2},
                       {"spacing", result.field.grid.spacing},
                       {"origin", vec2_json(result.field.grid.origin)}};
    sidecar["dt"] = result.field.dt;
    sidecar["epochs"] = result.field.epochs();
    sidecar["seed"] = result.config.seed;

    json plan = json::object();
    if (result.plan) {
        plan["n_required"] = result.plan->n_required;
        plan["v_max"] = result.plan->v_max;
        plan["margin_cells"] = result.plan->margin_cells;
        plan["rule"] = result.plan->rule == PlanReport::Rule::Deterministic ? "deterministic"
                       : result.plan->rule == PlanReport::Rule::FieldSup    ? "field-sup"
                                                                            : "percentile95";
        plan["window_base"] = json::array({result.plan->window_base[0], result.plan->window_base[1]});
    } else {
        plan["n_required"] = result.field.grid.n1;
        plan["v_max"] = 0.0;
        plan["margin_cells"] = 0;
        plan["rule"] = "spectral3d";
    }
    sidecar["plan"] = plan;

    if (result.embedding) {
        sidecar["embedding"] = {{"m1", result.embedding->m1},
                                {"m2", result.embedding->m2},
                                {"min_eigenvalue", result.embedding->min_eigenvalue},
                                {"clipped_mass_fraction", result.embedding->clipped_mass_fraction},
                                {"exact", result.embedding->exact},
                                {"clip_warning", result.embedding->clip_warning}};
    }

    json frames = json::array();
    for (int t = 0; t <= result.field.epochs(); ++t) {
        char stem[32];
        std::snprintf(stem, sizeof(stem), "frame_%04d", t);
        SpatialField frame(result.field.grid);
        frame.values = result.field.frames[t];

        json fj;
        fj["t"] = t;
        fj["file"] = std::string(stem) + ".bin";
        if (output.binary) write_field_binary(out_dir / (std::string(stem) + ".bin"), frame);
        if (output.pgm) {
            const PgmScale scale = write_field_pgm(out_dir / (std::string(stem) + ".pgm"), frame);
            fj["pgm"] = std::string(stem) + ".pgm";
            fj["pgm_scale"] = {{"min", scale.min}, {"max", scale.max}};
        }
        if (output.csv) {
            write_field_csv(out_dir / (std::string(stem) + ".csv"), frame);
            fj["csv"] = std::string(stem) + ".csv";
        }

        if (t < static_cast<int>(result.frames.size())) {
            const FrameMeta& meta = result.frames[t];
            if (!meta.velocities.empty()) {
                json vels = json::array();
                for (const Vec2& v : meta.velocities) vels.push_back(vec2_json(v));
                fj["velocities"] = vels;
            }
            if (!meta.weights_raw.empty()) fj["weights_raw"] = meta.weights_raw;
            if (!meta.weights_norm.empty()) fj["weights_norm"] = meta.weights_norm;
            if (!meta.thetas.empty()) fj["thetas"] = meta.thetas;
            if (meta.rotation_center) fj["rotation_center"] = vec2_json(*meta.rotation_center);
        }

        if (t < static_cast<int>(result.velocity_v1.size())) {
            char vstem[40];
            std::snprintf(vstem, sizeof(vstem), "velocity_%04d", t);
            write_field_binary(out_dir / (std::string(vstem) + "_v1.bin"), result.velocity_v1[t]);
            write_field_binary(out_dir / (std::string(vstem) + "_v2.bin"), result.velocity_v2[t]);
            fj["velocity_field"] = {{"v1", std::string(vstem) + "_v1.bin"},
                                    {"v2", std::string(vstem) + "_v2.bin"}};
        }
        frames.push_back(fj);
    }
    sidecar["frames"] = frames;

    validate_sidecar(sidecar);
    std::ofstream config_out(out_dir / "scenario.json");
    config_out << result.config.to_json().dump(2) << '\n';
    std::ofstream sidecar_out(out_dir / "sidecar.json");
    sidecar_out << sidecar.dump(2) << '\n';
    return sidecar;
}

}  // namespace tfld
