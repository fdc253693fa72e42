// travelfield CLI: scenario execution, figure presets, verification checks,
// and the method benchmark.
//
// Exit codes: 0 ok, 2 invalid config, 3 planning failure, 4 runtime/domain
// error, 5 a requested check failed, 6 benchmark timeout.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "travelfield/bench.hpp"
#include "travelfield/checks.hpp"
#include "travelfield/io.hpp"
#include "travelfield/scenario.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliError {
    int code;
    std::string message;
};

tfld::ScenarioConfig load_config(const std::string& config_path, const std::string& preset,
                                 std::uint64_t seed, bool seed_set) {
    tfld::ScenarioConfig cfg;
    if (!preset.empty()) {
        cfg = tfld::make_preset(preset);
    } else if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw CliError{2, "cannot open config file '" + config_path + "'"};
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw CliError{2, std::string("config is not valid JSON: ") + e.what()};
        }
        cfg = tfld::ScenarioConfig::from_json(j);
    } else {
        throw CliError{2, "either --config or --preset is required"};
    }
    if (seed_set) cfg.seed = seed;
    return cfg;
}

void apply_format(tfld::ScenarioConfig& cfg, const std::string& formats) {
    if (formats.empty()) return;
    cfg.output.pgm = false;
    cfg.output.csv = false;
    std::stringstream ss(formats);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "bin") continue;  // frame binaries anchor the sidecar, always on
        if (item == "pgm") cfg.output.pgm = true;
        else if (item == "csv") cfg.output.csv = true;
        else throw CliError{2, "unknown format '" + item + "' (have bin, pgm, csv)"};
    }
}

void print_plan(const tfld::RunResult& result) {
    if (!result.plan) {
        std::cout << "plan: direct spectral synthesis (no extended grid)\n";
        return;
    }
    const tfld::PlanReport& p = *result.plan;
    const char* rule = p.rule == tfld::PlanReport::Rule::Deterministic ? "deterministic"
                       : p.rule == tfld::PlanReport::Rule::FieldSup    ? "field-sup"
                                                                       : "percentile95";
    std::cout << "plan: N_required=" << p.n_required << " v_max=" << p.v_max << " rule=" << rule
              << " margin_cells=" << p.margin_cells << " window_base=(" << p.window_base[0] << ","
              << p.window_base[1] << ")\n";
    if (result.embedding) {
        std::cout << "embedding: " << result.embedding->m1 << "x" << result.embedding->m2
                  << " min_eig=" << result.embedding->min_eigenvalue
                  << " clipped=" << result.embedding->clipped_mass_fraction
                  << (result.embedding->clip_warning ? " [clip warning]" : "") << "\n";
    }
}

int cmd_simulate(const tfld::ScenarioConfig& cfg, const std::string& out_dir, int ensemble) {
    if (ensemble <= 1) {
        const tfld::RunResult result = tfld::run_scenario(cfg);
        print_plan(result);
        tfld::write_run(out_dir, result, result.config.output);
        std::cout << "wrote " << result.field.epochs() + 1 << " frames to " << out_dir << "\n";
        return 0;
    }
    for (int m = 0; m < ensemble; ++m) {
        const tfld::RunResult result = tfld::run_scenario(cfg, m);
        if (m == 0) print_plan(result);
        char sub[32];
        std::snprintf(sub, sizeof(sub), "m%04d", m);
        tfld::write_run(fs::path(out_dir) / sub, result, result.config.output);
    }
    std::cout << "wrote " << ensemble << " realizations to " << out_dir << "\n";
    return 0;
}

int cmd_diagnose(const tfld::ScenarioConfig& cfg, const std::string& out_dir,
                 std::vector<std::string> checks, int ensemble) {
    if (checks.empty()) {
        // Pick the checks this scenario supports.
        if (cfg.velocity.kind == tfld::VelocitySpec::Kind::Field) checks = {"path"};
        else if (cfg.resolved_method() == tfld::ScenarioConfig::Method::Spectral3D || cfg.epochs == 0)
            checks = {"periodogram"};
        else checks = {"cov-match", "taylor"};
    }
    fs::create_directories(out_dir);
    json verdicts = json::array();
    bool all_pass = true;
    for (const std::string& name : checks) {
        const tfld::CheckVerdict verdict = tfld::run_check(name, cfg, ensemble);
        std::cout << (verdict.pass ? "[PASS] " : "[FAIL] ") << verdict.check
                  << " statistic=" << verdict.statistic << " threshold=" << verdict.threshold << "\n";
        verdicts.push_back(verdict.to_json());
        all_pass = all_pass && verdict.pass;

        std::ofstream csv(fs::path(out_dir) / (name + ".csv"));
        csv << "check,statistic,threshold,pass\n"
            << verdict.check << ',' << verdict.statistic << ',' << verdict.threshold << ','
            << (verdict.pass ? 1 : 0) << '\n';
    }
    std::ofstream out(fs::path(out_dir) / "verdicts.json");
    out << verdicts.dump(2) << '\n';
    return all_pass ? 0 : 5;
}

int cmd_bench(const std::vector<int>& grids, const std::vector<int>& epochs,
              const std::vector<std::string>& methods, int repeats, double budget,
              const std::string& out_dir) {
    fs::create_directories(out_dir);
    std::ofstream csv(fs::path(out_dir) / "bench.csv");
    csv << "method,n,T,wall_time_s,peak_bytes,repeats\n";

    std::map<std::string, std::vector<std::pair<double, double>>> curves;
    for (const std::string& method_name : methods) {
        const auto method = tfld::bench_method_from_name(method_name);
        for (int T : epochs) {
            for (int n : grids) {
                if (method == tfld::BenchResult::Method::Cholesky &&
                    static_cast<long long>(n) * n * (T + 1) > 4096) {
                    std::cout << "skip " << method_name << " n=" << n << " T=" << T
                              << " (beyond the 4096-point cap)\n";
                    continue;
                }
                const tfld::BenchResult r = tfld::run_bench(method, n, T, repeats, budget);
                csv << method_name << ',' << r.n << ',' << r.T << ',' << r.wall_time_s << ','
                    << r.peak_bytes << ',' << r.repeats << '\n';
                std::cout << method_name << " n=" << n << " T=" << T << " median=" << r.wall_time_s
                          << "s peak_bytes=" << r.peak_bytes << "\n";
                curves[method_name].emplace_back(n, r.wall_time_s);
            }
        }
    }

    std::ofstream slopes(fs::path(out_dir) / "slopes.csv");
    slopes << "method,slope_log_time_vs_log_n\n";
    for (const auto& [name, points] : curves) {
        if (points.size() < 2) continue;
        std::vector<double> xs, ys;
        for (const auto& [x, y] : points) {
            xs.push_back(x);
            ys.push_back(y);
        }
        const double slope = tfld::fit_loglog_slope(xs, ys);
        slopes << name << ',' << slope << '\n';
        std::cout << "slope " << name << ": " << slope << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"traveling Gaussian random field simulator"};
    app.require_subcommand(1);

    std::string config_path, preset, out_dir = "out", formats;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int ensemble = 1;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "scenario config JSON");
        cmd->add_option("--preset", preset, "built-in preset name");
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option_function<std::uint64_t>(
            "--seed",
            [&](const std::uint64_t& s) {
                seed = s;
                seed_set = true;
            },
            "seed override (u64)");
        cmd->add_option("--ensemble", ensemble, "number of realizations");
    };

    CLI::App* simulate = app.add_subcommand("simulate", "run a scenario and write frames");
    add_common(simulate);
    simulate->add_option("--format", formats, "comma list of outputs: bin,pgm,csv");

    CLI::App* diagnose = app.add_subcommand("diagnose", "run verification checks");
    add_common(diagnose);
    std::vector<std::string> checks;
    diagnose->add_option("--check", checks, "cov-match, taylor, periodogram, path");

    CLI::App* bench = app.add_subcommand("bench", "benchmark the simulation methods");
    std::vector<int> grid_list{32, 64, 128};
    std::vector<int> epoch_list{8};
    std::vector<std::string> methods{"window_shift", "spectral3d"};
    int repeats = 5;
    double budget = 120.0;
    bench->add_option("--grid-list", grid_list, "window sizes n");
    bench->add_option("--epoch-list", epoch_list, "epoch counts T");
    bench->add_option("--methods", methods, "window_shift, spectral3d, cholesky");
    bench->add_option("--repeats", repeats, "timed repeats per cell (median)");
    bench->add_option("--time-budget", budget, "per-run budget in seconds");
    bench->add_option("--out", out_dir, "output directory");

    CLI::App* presets = app.add_subcommand("presets", "preset utilities");
    CLI::App* presets_list = presets->add_subcommand("list", "list built-in presets");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) {
            tfld::ScenarioConfig cfg = load_config(config_path, preset, seed, seed_set);
            apply_format(cfg, formats);
            return cmd_simulate(cfg, out_dir, ensemble);
        }
        if (diagnose->parsed()) {
            tfld::ScenarioConfig cfg = load_config(config_path, preset, seed, seed_set);
            const int members = ensemble > 1 ? ensemble : 50;
            return cmd_diagnose(cfg, out_dir, checks, members);
        }
        if (bench->parsed()) return cmd_bench(grid_list, epoch_list, methods, repeats, budget, out_dir);
        if (presets_list->parsed() || presets->parsed()) {
            for (const std::string& name : tfld::preset_names())
                std::cout << name << "  -  " << tfld::preset_description(name) << "\n";
            return 0;
        }
    } catch (const CliError& e) {
        std::cerr << "error: " << e.message << "\n";
        return e.code;
    } catch (const tfld::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const tfld::PlanningError& e) {
        std::cerr << "planning error: " << e.what() << "\n";
        return 3;
    } catch (const tfld::BenchTimeout& e) {
        std::cerr << "bench timeout: " << e.what() << "\n";
        return 6;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
