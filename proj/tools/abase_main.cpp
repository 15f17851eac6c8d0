#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "abase/autoscale.hpp"
#include "abase/forecast.hpp"
#include "abase/reschedule.hpp"
#include "abase/scenario.hpp"
#include "abase/sim.hpp"

namespace {

int log_level() {
    const char* v = std::getenv("ABASE_LITE_LOG");
    if (!v) return 1;
    std::string s(v);
    if (s == "debug") return 2;
    if (s == "quiet" || s == "error") return 0;
    return 1;
}

void info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "[abase] " << msg << "\n";
}

int cmd_run(const std::string& scenario_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed_override) {
    abase::scenario::ScenarioConfig cfg;
    try {
        cfg = abase::scenario::load_scenario(scenario_path);
    } catch (const std::exception& e) {
        std::cerr << "scenario validation failed: " << e.what() << "\n";
        return 2;
    }
    if (seed_override) cfg.seed = *seed_override;

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        std::cerr << "cannot create output directory " << out_dir << ": " << ec.message() << "\n";
        return 2;
    }

    try {
        info("running scenario '" + cfg.name + "' (seed " + std::to_string(cfg.seed) + ")");
        abase::sim::Simulation simulation(cfg);
        simulation.run();

        simulation.sink().write_csv(out_dir + "/metrics.csv");
        std::ofstream summary(out_dir + "/summary.json");
        summary << simulation.summary_json();
        std::ofstream decisions(out_dir + "/decisions.ndjson");
        for (const auto& line : simulation.decision_log()) decisions << line << "\n";

        std::string audit_msg;
        if (!simulation.sink().audit(&audit_msg)) {
            std::cerr << "conservation audit failed: " << audit_msg << "\n";
            return 1;
        }
        info("audit ok; outputs in " + out_dir);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "run failed: " << e.what() << "\n";
        return 1;
    }
}

int cmd_reschedule(const std::string& pool_path, int iterations, bool balance_counts,
                   bool inter_pool) {
    std::vector<abase::reschedule::PoolState> pools;
    try {
        pools = abase::reschedule::load_pool_file(pool_path);
    } catch (const std::exception& e) {
        std::cerr << "pool snapshot invalid: " << e.what() << "\n";
        return 2;
    }

    try {
        if (inter_pool && pools.size() >= 2) {
            abase::reschedule::PlannerConfig cfg;
            auto report = abase::reschedule::inter_pool_reschedule(pools, cfg);
            if (!report.triggered) {
                std::cout << "inter-pool: no action (utilization gap below trigger)\n";
            } else {
                std::cout << "inter-pool: moved " << report.moved_nodes.size() << " node(s) from '"
                          << report.from_pool << "' to '" << report.to_pool << "'\n";
                for (const auto& w : report.warnings) std::cout << "warning: " << w << "\n";
            }
        }
        for (auto& pool : pools) {
            abase::reschedule::PlannerConfig cfg;
            auto report = abase::reschedule::run_rounds(pool, iterations, cfg, balance_counts);
            std::cout << "pool '" << pool.name << "': " << report.moves.size() << " migration(s) in "
                      << report.rounds << " round(s)\n";
            for (const auto& m : report.moves) {
                std::cout << "  move replica " << m.replica_id << " (tenant " << m.tenant
                          << ") node " << m.src_node << " -> " << m.dst_node << " gain " << m.gain
                          << (m.dimension == abase::reschedule::Dimension::kRu ? " [ru]"
                                                                               : " [storage]")
                          << "\n";
            }
            std::cout << "  ru util std-dev:      " << report.before.ru_util_stddev << " -> "
                      << report.after.ru_util_stddev << "\n";
            std::cout << "  storage util variance: " << report.before.storage_util_variance
                      << " -> " << report.after.storage_util_variance << "\n";
            std::cout << "  max node loss:         " << report.before.max_loss << " -> "
                      << report.after.max_loss << "\n";
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "reschedule failed: " << e.what() << "\n";
        return 1;
    }
}

int cmd_forecast(const std::string& series_path, const std::string& quota_path, int horizon,
                 const std::string& out_path, double q_t, int partitions) {
    abase::forecast::MetricSeries usage, quota;
    try {
        usage = abase::forecast::load_series_csv(series_path);
        if (!quota_path.empty()) quota = abase::forecast::load_series_csv(quota_path);
    } catch (const std::exception& e) {
        std::cerr << "series invalid: " << e.what() << "\n";
        return 2;
    }

    try {
        abase::forecast::ForecastConfig cfg;
        cfg.horizon = horizon;
        if (usage.values.size() < 14 * 24) {
            std::cout << "notice: series shorter than 14 days; only the historical-average "
                         "component is used\n";
        }
        auto result = abase::forecast::forecast(usage, quota, cfg);
        std::string doc = abase::forecast::result_to_json(result);
        if (!out_path.empty()) {
            std::ofstream out(out_path);
            out << doc;
        } else {
            std::cout << doc << "\n";
        }
        std::cout << "U_max = " << result.u_max << "\n";

        if (q_t > 0.0) {
            abase::autoscale::ScalingState state;
            state.q_t = q_t;
            state.n = static_cast<std::uint32_t>(std::max(1, partitions));
            state.q_p = q_t / state.n;
            // Offline snapshot: pretend enough time has passed for a downscale.
            auto decision = abase::autoscale::decide(state, result.u_max,
                                                     abase::autoscale::kDownscaleCooldown);
            switch (decision.action) {
                case abase::autoscale::ScaleAction::kNone:
                    std::cout << "recommendation: none (U_max inside the target band)\n";
                    break;
                case abase::autoscale::ScaleAction::kScaleUp:
                    std::cout << "recommendation: scale_up to Q_T = " << decision.new_q_t
                              << " (Q_P = " << decision.new_q_p << ", partitions = "
                              << decision.new_partition_count << ")\n";
                    break;
                case abase::autoscale::ScaleAction::kScaleDown:
                    std::cout << "recommendation: scale_down to Q_T = " << decision.new_q_t
                              << " (Q_P = " << decision.new_q_p << ")\n";
                    break;
            }
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "forecast failed: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"abase-lite: multi-tenant KV serving mechanics under a deterministic simulator"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run a scenario and write metrics");
    std::string scenario_path, out_dir = "out";
    std::uint64_t seed = 0;
    bool seed_set = false;
    run->add_option("--scenario", scenario_path, "Scenario config file")->required();
    run->add_option("--out", out_dir, "Output directory");
    run->add_option("--seed", seed, "Override the scenario seed")->each([&](const std::string&) {
        seed_set = true;
    });

    auto* resched = app.add_subcommand("reschedule", "Plan migrations for a pool snapshot");
    std::string pool_path;
    int iterations = 32;
    bool balance_counts = false, inter_pool = false;
    resched->add_option("--pool-state", pool_path, "Pool snapshot file")->required();
    resched->add_option("--iterations", iterations, "Maximum planning rounds");
    resched->add_flag("--balance-counts", balance_counts, "Run replica-count balancing first");
    resched->add_flag("--inter-pool", inter_pool, "Allow node reassignment between pools");

    auto* fc = app.add_subcommand("forecast", "Forecast a usage series");
    std::string series_path, quota_path, fc_out;
    int horizon = 168;
    double q_t = 0.0;
    int partitions = 1;
    fc->add_option("--series", series_path, "Hourly usage CSV")->required();
    fc->add_option("--quota", quota_path, "Hourly quota CSV (denoising aid)");
    fc->add_option("--horizon", horizon, "Hours ahead")->check(CLI::PositiveNumber);
    fc->add_option("--out", fc_out, "Write the forecast document here");
    fc->add_option("--q-t", q_t, "Current tenant quota, enables the scaling recommendation");
    fc->add_option("--partitions", partitions, "Current partition count");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        return cmd_run(scenario_path, out_dir,
                       seed_set ? std::optional<std::uint64_t>(seed) : std::nullopt);
    }
    if (resched->parsed()) return cmd_reschedule(pool_path, iterations, balance_counts, inter_pool);
    if (fc->parsed()) return cmd_forecast(series_path, quota_path, horizon, fc_out, q_t, partitions);
    return 2;
}
