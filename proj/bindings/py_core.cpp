#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "abase/forecast.hpp"
#include "abase/reschedule.hpp"
#include "abase/ru.hpp"
#include "abase/scenario.hpp"
#include "abase/sim.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

// Runs one scenario and returns every artifact as strings; the python layer
// parses them into dicts.
py::dict run_scenario(const std::string& config_json, std::optional<std::uint64_t> seed) {
    abase::scenario::ScenarioConfig cfg = abase::scenario::parse_scenario(config_json);
    if (seed) cfg.seed = *seed;
    abase::sim::Simulation simulation(cfg);
    simulation.run();

    const auto& sink = simulation.sink();
    std::ostringstream csv;
    csv << "second,tenant,success,arrivals\n";
    for (std::int64_t s = 0; s < sink.seconds(); ++s) {
        for (std::uint32_t t = 0; t < sink.tenant_count(); ++t) {
            csv << s << ',' << t << ',' << sink.success_in(t, s, s + 1) << ','
                << sink.arrivals_in(t, s, s + 1) << "\n";
        }
    }

    py::dict out;
    out["summary"] = simulation.summary_json();
    out["qps_csv"] = csv.str();
    py::list decisions;
    for (const auto& line : simulation.decision_log()) decisions.append(line);
    out["decisions"] = decisions;
    return out;
}

std::string forecast_values(const std::vector<double>& values, int horizon) {
    abase::forecast::MetricSeries series;
    series.values = values;
    abase::forecast::ForecastConfig cfg;
    cfg.horizon = horizon;
    auto result = abase::forecast::forecast(series, abase::forecast::MetricSeries{}, cfg);
    return abase::forecast::result_to_json(result);
}

std::string plan_reschedule(const std::string& pool_json, int iterations, bool balance_counts) {
    auto pools = abase::reschedule::pools_from_json(pool_json);
    abase::reschedule::PlannerConfig cfg;
    json rep = json::array();
    for (auto& pool : pools) {
        auto report = abase::reschedule::run_rounds(pool, iterations, cfg, balance_counts);
        json jp;
        jp["pool"] = pool.name;
        jp["rounds"] = report.rounds;
        json moves = json::array();
        for (const auto& m : report.moves) {
            moves.push_back({{"replica", m.replica_id},
                             {"tenant", m.tenant},
                             {"from", m.src_node},
                             {"to", m.dst_node},
                             {"gain", m.gain}});
        }
        jp["moves"] = moves;
        jp["before"] = {{"ru_util_stddev", report.before.ru_util_stddev},
                        {"storage_util_variance", report.before.storage_util_variance},
                        {"max_loss", report.before.max_loss}};
        jp["after"] = {{"ru_util_stddev", report.after.ru_util_stddev},
                       {"storage_util_variance", report.after.storage_util_variance},
                       {"max_loss", report.after.max_loss}};
        rep.push_back(jp);
    }
    return rep.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Multi-tenant KV serving mechanics: RU accounting, admission, scheduling, "
              "caching, forecasting, and a deterministic scenario simulator.";

    m.def("ru_write", [](std::int64_t size, std::uint32_t replicas) {
        abase::ru::RuConfig cfg;
        cfg.replica_count = replicas;
        return abase::ru::ru_write(size, cfg);
    }, py::arg("value_size"), py::arg("replicas") = 1,
       "Billed request units for a write of the given size.");

    m.def("settle_read", [](std::int64_t size, const std::string& served_from) {
        abase::ru::RuConfig cfg;
        abase::ru::ServedFrom from = abase::ru::ServedFrom::kDisk;
        if (served_from == "proxy_cache") from = abase::ru::ServedFrom::kProxyCache;
        else if (served_from == "node_cache") from = abase::ru::ServedFrom::kNodeCache;
        else if (served_from != "disk") throw std::invalid_argument("served_from must be proxy_cache, node_cache, or disk");
        return abase::ru::settle_read(size, from, cfg);
    }, py::arg("actual_size"), py::arg("served_from") = "disk",
       "Billed request units for a completed read.");

    m.def("run_scenario", &run_scenario, py::arg("config_json"),
          py::arg("seed") = py::none(),
          "Run a scenario config (JSON text); returns summary, per-second QPS CSV, and "
          "decision records.");

    m.def("validate_scenario", [](const std::string& text) {
        return abase::scenario::serialize_scenario(abase::scenario::parse_scenario(text));
    }, py::arg("config_json"), "Parse and canonicalize a scenario config; throws on errors.");

    m.def("forecast", &forecast_values, py::arg("hourly_values"), py::arg("horizon") = 168,
          "Forecast an hourly usage series; returns the forecast document as JSON text.");

    m.def("plan_reschedule", &plan_reschedule, py::arg("pool_json"), py::arg("iterations") = 32,
          py::arg("balance_counts") = false,
          "Plan replica migrations for a pool snapshot (JSON text); returns a JSON report.");
}
