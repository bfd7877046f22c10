// mfc_lab: run, inspect, and compare closed-loop controller experiments.
//
// Exit codes: 0 success, 2 configuration/usage error, 3 diverged run
// (outputs are still written so the truncated trace can be inspected).

#include "mfc/bank.hpp"
#include "mfc/config_json.hpp"
#include "mfc/csv.hpp"
#include "mfc/metrics.hpp"
#include "mfc/plot.hpp"
#include "mfc/scenario.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitDiverged = 3;

struct RunOptions {
    std::string scenario;
    std::string config_path;
    std::string controller;
    std::string out_dir;
    double ts = 0.0;
    double horizon = 0.0;
    bool ts_set = false;
    bool horizon_set = false;
};

struct CompareOptions {
    std::string scenario;
    std::string controllers = "pi,ipi,istar_pi";
    std::string out_dir;
    double band_pct = 2.0;
};

std::string default_out_dir(const std::string& flag_value) {
    if (!flag_value.empty()) {
        return flag_value;
    }
    if (const char* env = std::getenv("MFC_LAB_OUT"); env != nullptr && *env != '\0') {
        return env;
    }
    return "out";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw mfc::ConfigError("cannot read config file: " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw mfc::ConfigError("cannot write file: " + path.string());
    }
    out << content;
}

std::vector<std::string> split_csv_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(text);
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

/// RunManifest: what a run consumed and what it produced.
struct RunManifest {
    std::string config_path;
    std::string output_dir;
    std::vector<std::string> files;
    std::string config_digest;
    nlohmann::json resolved_config;

    nlohmann::json to_json() const {
        nlohmann::json out;
        out["config_path"] = config_path;
        out["output_dir"] = output_dir;
        out["files"] = files;
        out["config_digest"] = config_digest;
        out["resolved_config"] = resolved_config;
        return out;
    }
};

void print_metrics_line(const std::string& label, const mfc::MetricsReport& m) {
    std::printf("%-10s ise=%-11.4g iae=%-10.4g overshoot=%-7.3g%% undershoot=%-7.3g%% ",
                label.c_str(), m.ise, m.iae, m.overshoot_pct, m.undershoot_pct);
    if (m.settling_time) {
        std::printf("settle=%-8.4gs ", *m.settling_time);
    } else {
        std::printf("settle=never    ");
    }
    std::printf("peak_u=%-9.4g %s\n", m.peak_u, m.diverged ? "DIVERGED" : "ok");
}

int cmd_run(const RunOptions& opts) {
    if (opts.scenario.empty() == opts.config_path.empty()) {
        std::fprintf(stderr, "run: pass exactly one of --scenario or --config\n");
        return kExitConfigError;
    }

    mfc::ScenarioConfig config;
    std::string config_source;
    if (!opts.config_path.empty()) {
        config = mfc::parse_config(read_file(opts.config_path));
        config_source = opts.config_path;
    } else {
        config = mfc::builtin_scenario(opts.scenario);
        config_source = "builtin:" + opts.scenario;
    }

    if (!opts.controller.empty()) {
        // Tuned per-scenario defaults exist only for the builtin catalog.
        config.controller = mfc::builtin_controller_spec(
            config.name, mfc::controller_kind_from_string(opts.controller));
    }
    if (opts.ts_set) {
        config.ts = opts.ts;
    }
    if (opts.horizon_set) {
        config.horizon = opts.horizon;
    }
    config.validate();

    const fs::path out_dir = default_out_dir(opts.out_dir);
    fs::create_directories(out_dir);

    const mfc::SimTrace trace = mfc::run_closed_loop(config);
    const mfc::MetricsReport metrics = mfc::compute_metrics(trace);

    write_file(out_dir / "trace.csv", mfc::trace_csv_string(trace));
    write_file(out_dir / "metrics.json", mfc::metrics_to_json(metrics).dump(2) + "\n");
    {
        std::ostringstream svg;
        mfc::write_plot_svg(svg, trace, config.name + " / " + to_string(config.controller.kind));
        write_file(out_dir / "plot.svg", svg.str());
    }
    RunManifest manifest;
    manifest.config_path = config_source;
    manifest.output_dir = out_dir.string();
    manifest.files = {"trace.csv", "metrics.json", "plot.svg"};
    manifest.config_digest = trace.config_digest;
    manifest.resolved_config = mfc::serialize_config(config);
    write_file(out_dir / "manifest.json", manifest.to_json().dump(2) + "\n");

    std::printf("scenario   %s\n", config.name.c_str());
    std::printf("controller %s\n", to_string(config.controller.kind).c_str());
    std::printf("samples    %zu (ts=%g, horizon=%g)\n", trace.rows.size(), config.ts,
                config.horizon);
    std::printf("digest     %s\n", trace.config_digest.c_str());
    print_metrics_line("metrics", metrics);
    for (const auto& rec : metrics.post_switch_recovery) {
        if (rec.recovery_seconds) {
            std::printf("  event @ %-8.4gs recovered in %.4gs\n", rec.event_time,
                        *rec.recovery_seconds);
        } else {
            std::printf("  event @ %-8.4gs never recovered\n", rec.event_time);
        }
    }
    if (trace.diverged) {
        std::printf("diverged at t=%.6g; trace truncated\n", trace.divergence_time);
    }
    std::printf("wrote %s/{trace.csv,metrics.json,plot.svg,manifest.json}\n",
                out_dir.string().c_str());
    return trace.diverged ? kExitDiverged : kExitOk;
}

int cmd_list() {
    const auto bank = mfc::builtin_bank();
    std::printf("builtin bank (%zu entries):\n", bank.size());
    for (std::size_t i = 0; i < bank.size(); ++i) {
        std::printf("  [%zu] %-9s order %d  %s\n", i, bank[i].label.c_str(), bank[i].order(),
                    bank[i].description.c_str());
    }
    std::printf("\nbuiltin scenarios:\n");
    for (const auto& config : mfc::builtin_scenarios()) {
        std::string sequence = bank[static_cast<std::size_t>(config.schedule.initial_index)].label;
        std::string times;
        for (const auto& e : config.schedule.events) {
            if (e.time == 0.0) {
                continue; // initial-condition event, not a mid-run change
            }
            sequence += " -> " + bank[static_cast<std::size_t>(e.plant_index)].label;
            if (!times.empty()) {
                times += ", ";
            }
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%g", e.time);
            times += buf;
        }
        std::printf("  %-7s ts=%-7g horizon=%-5g %s", config.name.c_str(), config.ts,
                    config.horizon, sequence.c_str());
        if (!times.empty()) {
            std::printf("  @ (%s)", times.c_str());
        }
        std::printf("\n");
    }
    return kExitOk;
}

int cmd_compare(const CompareOptions& opts) {
    const auto kinds = split_csv_list(opts.controllers);
    if (kinds.size() < 2) {
        std::fprintf(stderr, "compare: need at least two controllers\n");
        return kExitConfigError;
    }
    nlohmann::json table = nlohmann::json::array();
    std::printf("scenario %s, band %.3g%%\n", opts.scenario.c_str(), opts.band_pct);
    bool out_requested = !opts.out_dir.empty();
    fs::path out_dir;
    if (out_requested) {
        out_dir = opts.out_dir;
        fs::create_directories(out_dir);
    }
    for (const auto& kind_name : kinds) {
        mfc::ScenarioConfig config = mfc::builtin_scenario(opts.scenario);
        config.controller = mfc::builtin_controller_spec(
            config.name, mfc::controller_kind_from_string(kind_name));
        const mfc::SimTrace trace = mfc::run_closed_loop(config);
        const mfc::MetricsReport metrics = mfc::compute_metrics(trace, opts.band_pct);
        print_metrics_line(kind_name, metrics);
        nlohmann::json row = mfc::metrics_to_json(metrics);
        row["controller"] = kind_name;
        table.push_back(std::move(row));
        if (out_requested) {
            write_file(out_dir / ("trace_" + kind_name + ".csv"),
                       mfc::trace_csv_string(trace));
        }
    }
    if (out_requested) {
        write_file(out_dir / "compare.json", table.dump(2) + "\n");
        std::printf("wrote %s/compare.json\n", out_dir.string().c_str());
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"closed-loop controller experiments on switching and delayed plants"};
    app.require_subcommand(1);

    RunOptions run_opts;
    CLI::App* run = app.add_subcommand("run", "run one scenario and export its artifacts");
    run->add_option("--scenario", run_opts.scenario, "builtin scenario name");
    run->add_option("--config", run_opts.config_path, "JSON config file");
    run->add_option("--controller", run_opts.controller,
                    "override controller kind: pi, ipi, istar_pi");
    run->add_option("--out", run_opts.out_dir, "output directory (default $MFC_LAB_OUT or ./out)");
    run->add_option("--ts", run_opts.ts, "sampling period override")
        ->check(CLI::PositiveNumber);
    run->add_option("--horizon", run_opts.horizon, "horizon override")
        ->check(CLI::PositiveNumber);

    CLI::App* list = app.add_subcommand("list", "print the builtin bank and scenario catalog");

    CompareOptions cmp_opts;
    CLI::App* compare =
        app.add_subcommand("compare", "run several controllers on one scenario");
    compare->add_option("--scenario", cmp_opts.scenario, "builtin scenario name")->required();
    compare->add_option("--controllers", cmp_opts.controllers,
                        "comma-separated kinds (default pi,ipi,istar_pi)");
    compare->add_option("--out", cmp_opts.out_dir, "write per-controller traces here");
    compare->add_option("--band", cmp_opts.band_pct, "settling band percent")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfigError;
    }

    try {
        if (run->parsed()) {
            run_opts.ts_set = run->count("--ts") > 0;
            run_opts.horizon_set = run->count("--horizon") > 0;
            return cmd_run(run_opts);
        }
        if (list->parsed()) {
            return cmd_list();
        }
        if (compare->parsed()) {
            return cmd_compare(cmp_opts);
        }
    } catch (const mfc::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfigError;
    }
    return kExitConfigError;
}
