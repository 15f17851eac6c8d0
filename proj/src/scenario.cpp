#include "abase/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace abase::scenario {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ConfigError(path + ": " + msg);
}

// Tracks which keys a block consumed so leftovers can be reported.
class Obj {
  public:
    Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j.is_object()) fail(path_, "expected an object");
    }

    bool has(const char* k) const { return j_.contains(k); }

    double num(const char* k, double dflt) {
        const json* v = take(k);
        if (!v) return dflt;
        if (!v->is_number()) fail(key_path(k), "expected a number");
        return v->get<double>();
    }

    double req_num(const char* k) {
        if (!has(k)) fail(key_path(k), "missing required key");
        return num(k, 0.0);
    }

    std::int64_t integer(const char* k, std::int64_t dflt) {
        const json* v = take(k);
        if (!v) return dflt;
        if (!v->is_number_integer()) fail(key_path(k), "expected an integer");
        return v->get<std::int64_t>();
    }

    std::uint64_t uint(const char* k, std::uint64_t dflt) {
        const json* v = take(k);
        if (!v) return dflt;
        if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<std::int64_t>() >= 0))
            fail(key_path(k), "expected a non-negative integer");
        return v->get<std::uint64_t>();
    }

    bool boolean(const char* k, bool dflt) {
        const json* v = take(k);
        if (!v) return dflt;
        if (!v->is_boolean()) fail(key_path(k), "expected a boolean");
        return v->get<bool>();
    }

    std::string str(const char* k, std::string dflt) {
        const json* v = take(k);
        if (!v) return dflt;
        if (!v->is_string()) fail(key_path(k), "expected a string");
        return v->get<std::string>();
    }

    std::string req_str(const char* k) {
        if (!has(k)) fail(key_path(k), "missing required key");
        return str(k, "");
    }

    const json* opt_child(const char* k) { return take(k); }

    const json& child(const char* k) {
        const json* v = take(k);
        if (!v) fail(key_path(k), "missing required key");
        return *v;
    }

    std::string key_path(const char* k) const { return path_ + "." + k; }

    void done() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!used_.count(it.key())) fail(path_ + "." + it.key(), "unknown key");
        }
    }

  private:
    const json* take(const char* k) {
        used_.insert(k);
        auto it = j_.find(k);
        return it == j_.end() ? nullptr : &*it;
    }

    const json& j_;
    std::string path_;
    std::set<std::string> used_;
};

workload::ArrivalSpec parse_arrival(const json& j, const std::string& path) {
    Obj o(j, path);
    workload::ArrivalSpec a;
    std::string kind = o.req_str("kind");
    if (kind == "constant") {
        a.kind = workload::ArrivalKind::kConstant;
        a.rate = o.req_num("rate");
        if (a.rate < 0) fail(path + ".rate", "rate must be >= 0");
    } else if (kind == "burst") {
        a.kind = workload::ArrivalKind::kBurst;
        a.rate = o.req_num("base");
        a.burst_rate = o.req_num("burst_rate");
        a.t_start_s = o.req_num("t_start_s");
        a.t_end_s = o.req_num("t_end_s");
        if (a.rate < 0 || a.burst_rate < 0) fail(path, "rates must be >= 0");
        if (a.t_end_s < a.t_start_s) fail(path, "t_end_s before t_start_s");
    } else if (kind == "diurnal") {
        a.kind = workload::ArrivalKind::kDiurnal;
        a.base = o.req_num("base");
        a.amplitude = o.num("amplitude", 0.0);
        a.peak_hour = o.num("peak_hour", 0.0);
        a.growth_per_day = o.num("growth_per_day", 0.0);
        a.day_offset = o.num("day_offset", 0.0);
        if (a.base < 0) fail(path + ".base", "rate must be >= 0");
        if (a.amplitude < 0 || a.amplitude > 1) fail(path + ".amplitude", "must be in [0,1]");
    } else {
        fail(path + ".kind", "unknown arrival kind '" + kind + "'");
    }
    o.done();
    return a;
}

workload::KeySpec parse_keys(const json& j, const std::string& path) {
    Obj o(j, path);
    workload::KeySpec k;
    std::string kind = o.req_str("kind");
    k.space = o.uint("space", 1000);
    if (k.space == 0) fail(path + ".space", "key space must be positive");
    if (kind == "uniform") {
        k.kind = workload::KeyKind::kUniform;
    } else if (kind == "zipf") {
        k.kind = workload::KeyKind::kZipf;
        k.zipf_s = o.num("s", 1.0);
        if (k.zipf_s <= 0) fail(path + ".s", "zipf exponent must be positive");
    } else if (kind == "hot_key") {
        k.kind = workload::KeyKind::kHotKey;
        k.hot_fraction = o.req_num("fraction");
        k.hot_count = o.uint("hot_count", 1);
        if (k.hot_fraction < 0 || k.hot_fraction > 1) fail(path + ".fraction", "must be in [0,1]");
        if (k.hot_count == 0 || k.hot_count > k.space) fail(path + ".hot_count", "must be in [1, space]");
    } else {
        fail(path + ".kind", "unknown key kind '" + kind + "'");
    }
    o.done();
    return k;
}

workload::SizeSpec parse_size(const json& j, const std::string& path) {
    Obj o(j, path);
    workload::SizeSpec s;
    std::string kind = o.req_str("kind");
    if (kind == "fixed") {
        s.kind = workload::SizeKind::kFixed;
        s.bytes = o.integer("bytes", 2048);
        if (s.bytes <= 0) fail(path + ".bytes", "must be positive");
    } else if (kind == "lognormal") {
        s.kind = workload::SizeKind::kLognormal;
        s.mu = o.req_num("mu");
        s.sigma = o.req_num("sigma");
        s.min_bytes = o.integer("min_bytes", 1);
        s.max_bytes = o.integer("max_bytes", 1 << 22);
        if (s.sigma < 0) fail(path + ".sigma", "must be >= 0");
        if (s.min_bytes <= 0 || s.max_bytes < s.min_bytes) fail(path, "bad size bounds");
    } else {
        fail(path + ".kind", "unknown size kind '" + kind + "'");
    }
    o.done();
    return s;
}

HistorySpec parse_history(const json& j, const std::string& path) {
    Obj o(j, path);
    HistorySpec h;
    std::string kind = o.req_str("kind");
    h.start_epoch_s = o.integer("start_epoch_s", 0);
    if (kind == "values") {
        h.kind = HistoryKind::kValues;
        const json& vals = o.child("values");
        if (!vals.is_array() || vals.empty()) fail(path + ".values", "expected a non-empty array");
        for (const auto& v : vals) {
            if (!v.is_number()) fail(path + ".values", "expected numbers");
            h.values.push_back(v.get<double>());
        }
    } else if (kind == "diurnal") {
        h.kind = HistoryKind::kDiurnal;
        h.base_ru = o.req_num("base_ru");
        h.amplitude = o.num("amplitude", 0.0);
        h.peak_hour = o.num("peak_hour", 0.0);
        h.growth_per_day = o.num("growth_per_day", 0.0);
        h.hours = static_cast<std::uint32_t>(o.uint("hours", 336));
        if (h.base_ru < 0) fail(path + ".base_ru", "must be >= 0");
        if (h.hours == 0) fail(path + ".hours", "must be positive");
    } else {
        fail(path + ".kind", "unknown history kind '" + kind + "'");
    }
    o.done();
    return h;
}

TenantConfig parse_tenant(const json& j, const std::string& path) {
    Obj o(j, path);
    TenantConfig t;
    t.spec.name = o.req_str("name");
    t.spec.pool = o.req_str("pool");
    t.spec.quota_ru = o.req_num("quota_ru");
    t.spec.storage_quota_bytes = o.num("storage_quota_bytes", 1e9);
    t.spec.partition_count = static_cast<std::uint32_t>(o.uint("partitions", 1));
    t.spec.replication = static_cast<std::uint32_t>(o.uint("replication", 1));
    t.spec.proxy_count = static_cast<std::uint32_t>(o.uint("proxies", 1));
    t.spec.fanout_groups = static_cast<std::uint32_t>(o.uint("fanout_groups", 1));
    t.spec.initial_fill = o.num("initial_fill", 0.5);
    if (const json* h = o.opt_child("usage_history")) t.history = parse_history(*h, path + ".usage_history");
    o.done();
    return t;
}

domain::PoolSpec parse_pool(const json& j, const std::string& path) {
    Obj o(j, path);
    domain::PoolSpec p;
    p.name = o.req_str("name");
    p.node_count = static_cast<std::uint32_t>(o.uint("nodes", 1));
    p.node_ru_capacity = o.num("node_ru_capacity", 10000.0);
    p.node_storage_bytes = o.num("node_storage_bytes", 1e12);
    o.done();
    return p;
}

WorkloadConfig parse_workload(const json& j, const std::string& path) {
    Obj o(j, path);
    WorkloadConfig w;
    w.tenant = o.req_str("tenant");
    w.arrival = parse_arrival(o.child("arrival"), path + ".arrival");
    w.keys = parse_keys(o.child("keys"), path + ".keys");
    w.read_ratio = o.num("read_ratio", 1.0);
    if (w.read_ratio < 0 || w.read_ratio > 1) fail(path + ".read_ratio", "must be in [0,1]");
    if (const json* s = o.opt_child("value_size")) {
        w.value_size = parse_size(*s, path + ".value_size");
    }
    w.ttl_s = o.num("ttl_s", 0.0);
    if (w.ttl_s < 0) fail(path + ".ttl_s", "must be >= 0");
    w.target_partition = static_cast<std::int32_t>(o.integer("target_partition", -1));
    o.done();
    return w;
}

Toggles parse_toggles(const json& j, const std::string& path) {
    Obj o(j, path);
    Toggles t;
    t.proxy_quota = o.boolean("proxy_quota", t.proxy_quota);
    t.partition_quota = o.boolean("partition_quota", t.partition_quota);
    t.wfq = o.boolean("wfq", t.wfq);
    t.proxy_cache = o.boolean("proxy_cache", t.proxy_cache);
    t.node_cache = o.boolean("node_cache", t.node_cache);
    t.autoscaler = o.boolean("autoscaler", t.autoscaler);
    t.rescheduler = o.boolean("rescheduler", t.rescheduler);
    o.done();
    return t;
}

Params parse_params(const json& j, const std::string& path) {
    Obj o(j, path);
    Params p;
    p.t_cpu_us_per_ru = o.num("t_cpu_us_per_ru", p.t_cpu_us_per_ru);
    p.t_io_us_per_iops = o.num("t_io_us_per_iops", p.t_io_us_per_iops);
    p.io_block_bytes = o.integer("io_block_bytes", p.io_block_bytes);
    p.cpu_workers = static_cast<std::uint32_t>(o.uint("cpu_workers", p.cpu_workers));
    p.io_basic_threads = static_cast<std::uint32_t>(o.uint("io_basic_threads", p.io_basic_threads));
    p.io_extra_threads = static_cast<std::uint32_t>(o.uint("io_extra_threads", p.io_extra_threads));
    p.queue_limit = o.integer("queue_limit", p.queue_limit);
    p.reject_cost_factor = o.num("reject_cost_factor", p.reject_cost_factor);
    p.reject_debt_cap_s = o.num("reject_debt_cap_s", p.reject_debt_cap_s);
    p.proxy_quota_start_s = o.num("proxy_quota_start_s", p.proxy_quota_start_s);
    p.large_threshold_bytes = o.integer("large_threshold_bytes", p.large_threshold_bytes);
    p.node_cache_bytes = o.integer("node_cache_bytes", p.node_cache_bytes);
    p.proxy_cache_bytes = o.integer("proxy_cache_bytes", p.proxy_cache_bytes);
    p.refresh_window_s = o.num("refresh_window_s", p.refresh_window_s);
    p.refresh_hot_threshold =
        static_cast<std::uint32_t>(o.uint("refresh_hot_threshold", p.refresh_hot_threshold));
    p.window_k = static_cast<std::uint32_t>(o.uint("window_k", p.window_k));
    p.meta_poll_s = o.num("meta_poll_s", p.meta_poll_s);
    p.meta_directive_delay_s = o.num("meta_directive_delay_s", p.meta_directive_delay_s);
    p.proxy_hit_us = o.num("proxy_hit_us", p.proxy_hit_us);
    p.wfq_max_reads = static_cast<std::uint32_t>(o.uint("wfq_max_reads", p.wfq_max_reads));
    p.wfq_max_writes = static_cast<std::uint32_t>(o.uint("wfq_max_writes", p.wfq_max_writes));
    p.wfq_write_ru_ceiling = o.num("wfq_write_ru_ceiling", p.wfq_write_ru_ceiling);
    p.rule3_enabled = o.boolean("rule3_enabled", p.rule3_enabled);
    p.rule3_fraction = o.num("rule3_fraction", p.rule3_fraction);
    p.autoscale_upper = o.num("autoscale_upper", p.autoscale_upper);
    p.autoscale_lower = o.num("autoscale_lower", p.autoscale_lower);
    p.autoscale_period_s = o.num("autoscale_period_s", p.autoscale_period_s);
    p.autoscale_first_s = o.num("autoscale_first_s", p.autoscale_first_s);
    p.reschedule_period_s = o.num("reschedule_period_s", p.reschedule_period_s);
    p.migration_mb_s = o.num("migration_mb_s", p.migration_mb_s);
    o.done();
    if (p.t_cpu_us_per_ru < 0 || p.t_io_us_per_iops < 0) fail(path, "service times must be >= 0");
    if (p.io_block_bytes <= 0) fail(path + ".io_block_bytes", "must be positive");
    if (p.cpu_workers == 0) fail(path + ".cpu_workers", "must be positive");
    if (p.io_basic_threads == 0) fail(path + ".io_basic_threads", "must be positive");
    if (p.queue_limit <= 0) fail(path + ".queue_limit", "must be positive");
    if (p.migration_mb_s <= 0) fail(path + ".migration_mb_s", "must be positive");
    return p;
}

json arrival_json(const workload::ArrivalSpec& a) {
    json j;
    switch (a.kind) {
        case workload::ArrivalKind::kConstant:
            j["kind"] = "constant";
            j["rate"] = a.rate;
            break;
        case workload::ArrivalKind::kBurst:
            j["kind"] = "burst";
            j["base"] = a.rate;
            j["burst_rate"] = a.burst_rate;
            j["t_start_s"] = a.t_start_s;
            j["t_end_s"] = a.t_end_s;
            break;
        case workload::ArrivalKind::kDiurnal:
            j["kind"] = "diurnal";
            j["base"] = a.base;
            j["amplitude"] = a.amplitude;
            j["peak_hour"] = a.peak_hour;
            j["growth_per_day"] = a.growth_per_day;
            j["day_offset"] = a.day_offset;
            break;
    }
    return j;
}

json keys_json(const workload::KeySpec& k) {
    json j;
    j["space"] = k.space;
    switch (k.kind) {
        case workload::KeyKind::kUniform:
            j["kind"] = "uniform";
            break;
        case workload::KeyKind::kZipf:
            j["kind"] = "zipf";
            j["s"] = k.zipf_s;
            break;
        case workload::KeyKind::kHotKey:
            j["kind"] = "hot_key";
            j["fraction"] = k.hot_fraction;
            j["hot_count"] = k.hot_count;
            break;
    }
    return j;
}

json size_json(const workload::SizeSpec& s) {
    json j;
    if (s.kind == workload::SizeKind::kFixed) {
        j["kind"] = "fixed";
        j["bytes"] = s.bytes;
    } else {
        j["kind"] = "lognormal";
        j["mu"] = s.mu;
        j["sigma"] = s.sigma;
        j["min_bytes"] = s.min_bytes;
        j["max_bytes"] = s.max_bytes;
    }
    return j;
}

json history_json(const HistorySpec& h) {
    json j;
    j["start_epoch_s"] = h.start_epoch_s;
    if (h.kind == HistoryKind::kValues) {
        j["kind"] = "values";
        j["values"] = h.values;
    } else {
        j["kind"] = "diurnal";
        j["base_ru"] = h.base_ru;
        j["amplitude"] = h.amplitude;
        j["peak_hour"] = h.peak_hour;
        j["growth_per_day"] = h.growth_per_day;
        j["hours"] = h.hours;
    }
    return j;
}

}  // namespace

forecast::MetricSeries materialize_history(const HistorySpec& h) {
    forecast::MetricSeries s;
    s.start_epoch_s = h.start_epoch_s;
    if (h.kind == HistoryKind::kNone) return s;
    if (h.kind == HistoryKind::kValues) {
        s.values = h.values;
        return s;
    }
    workload::ArrivalSpec a;
    a.kind = workload::ArrivalKind::kDiurnal;
    a.base = h.base_ru;
    a.amplitude = h.amplitude;
    a.peak_hour = h.peak_hour;
    a.growth_per_day = h.growth_per_day;
    s.values.reserve(h.hours);
    for (std::uint32_t i = 0; i < h.hours; ++i) {
        s.values.push_back(workload::diurnal_rate(a, static_cast<double>(i) + 0.5));
    }
    return s;
}

ScenarioConfig parse_scenario(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario: invalid JSON: ") + e.what());
    }
    Obj o(root, "scenario");
    ScenarioConfig sc;
    sc.name = o.req_str("name");
    sc.seed = o.uint("seed", 1);
    sc.duration_s = o.req_num("duration_s");
    if (sc.duration_s <= 0) fail("scenario.duration_s", "must be positive");
    sc.hash_seed = o.uint("hash_seed", 0x5eedULL);

    const json& pools = o.child("pools");
    if (!pools.is_array() || pools.empty()) fail("scenario.pools", "expected a non-empty array");
    for (std::size_t i = 0; i < pools.size(); ++i) {
        sc.pools.push_back(parse_pool(pools[i], "scenario.pools[" + std::to_string(i) + "]"));
    }

    const json& tenants = o.child("tenants");
    if (!tenants.is_array() || tenants.empty()) fail("scenario.tenants", "expected a non-empty array");
    for (std::size_t i = 0; i < tenants.size(); ++i) {
        sc.tenants.push_back(parse_tenant(tenants[i], "scenario.tenants[" + std::to_string(i) + "]"));
    }

    if (const json* w = o.opt_child("workloads")) {
        if (!w->is_array()) fail("scenario.workloads", "expected an array");
        for (std::size_t i = 0; i < w->size(); ++i) {
            sc.workloads.push_back(parse_workload((*w)[i], "scenario.workloads[" + std::to_string(i) + "]"));
        }
    }

    if (const json* t = o.opt_child("toggles")) sc.toggles = parse_toggles(*t, "scenario.toggles");
    if (const json* p = o.opt_child("params")) sc.params = parse_params(*p, "scenario.params");
    o.done();

    std::set<std::string> pool_names, tenant_names;
    for (const auto& p : sc.pools) {
        if (!pool_names.insert(p.name).second) fail("scenario.pools", "duplicate pool '" + p.name + "'");
    }
    for (const auto& t : sc.tenants) {
        if (!tenant_names.insert(t.spec.name).second)
            fail("scenario.tenants", "duplicate tenant '" + t.spec.name + "'");
        if (!pool_names.count(t.spec.pool))
            fail("scenario.tenants", "tenant '" + t.spec.name + "' references unknown pool '" + t.spec.pool + "'");
    }
    for (std::size_t i = 0; i < sc.workloads.size(); ++i) {
        const WorkloadConfig& w = sc.workloads[i];
        if (!tenant_names.count(w.tenant))
            fail("scenario.workloads[" + std::to_string(i) + "].tenant", "unknown tenant '" + w.tenant + "'");
        for (const auto& t : sc.tenants) {
            if (t.spec.name == w.tenant && w.target_partition >= 0 &&
                static_cast<std::uint32_t>(w.target_partition) >= t.spec.partition_count) {
                fail("scenario.workloads[" + std::to_string(i) + "].target_partition", "out of range");
            }
        }
    }
    return sc;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("scenario: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string serialize_scenario(const ScenarioConfig& sc) {
    json root;
    root["name"] = sc.name;
    root["seed"] = sc.seed;
    root["duration_s"] = sc.duration_s;
    root["hash_seed"] = sc.hash_seed;

    json pools = json::array();
    for (const auto& p : sc.pools) {
        json j;
        j["name"] = p.name;
        j["nodes"] = p.node_count;
        j["node_ru_capacity"] = p.node_ru_capacity;
        j["node_storage_bytes"] = p.node_storage_bytes;
        pools.push_back(j);
    }
    root["pools"] = pools;

    json tenants = json::array();
    for (const auto& t : sc.tenants) {
        json j;
        j["name"] = t.spec.name;
        j["pool"] = t.spec.pool;
        j["quota_ru"] = t.spec.quota_ru;
        j["storage_quota_bytes"] = t.spec.storage_quota_bytes;
        j["partitions"] = t.spec.partition_count;
        j["replication"] = t.spec.replication;
        j["proxies"] = t.spec.proxy_count;
        j["fanout_groups"] = t.spec.fanout_groups;
        j["initial_fill"] = t.spec.initial_fill;
        if (t.history.kind != HistoryKind::kNone) j["usage_history"] = history_json(t.history);
        tenants.push_back(j);
    }
    root["tenants"] = tenants;

    json workloads = json::array();
    for (const auto& w : sc.workloads) {
        json j;
        j["tenant"] = w.tenant;
        j["arrival"] = arrival_json(w.arrival);
        j["keys"] = keys_json(w.keys);
        j["read_ratio"] = w.read_ratio;
        j["value_size"] = size_json(w.value_size);
        j["ttl_s"] = w.ttl_s;
        j["target_partition"] = w.target_partition;
        workloads.push_back(j);
    }
    root["workloads"] = workloads;

    json toggles;
    toggles["proxy_quota"] = sc.toggles.proxy_quota;
    toggles["partition_quota"] = sc.toggles.partition_quota;
    toggles["wfq"] = sc.toggles.wfq;
    toggles["proxy_cache"] = sc.toggles.proxy_cache;
    toggles["node_cache"] = sc.toggles.node_cache;
    toggles["autoscaler"] = sc.toggles.autoscaler;
    toggles["rescheduler"] = sc.toggles.rescheduler;
    root["toggles"] = toggles;

    const Params& p = sc.params;
    json params;
    params["t_cpu_us_per_ru"] = p.t_cpu_us_per_ru;
    params["t_io_us_per_iops"] = p.t_io_us_per_iops;
    params["io_block_bytes"] = p.io_block_bytes;
    params["cpu_workers"] = p.cpu_workers;
    params["io_basic_threads"] = p.io_basic_threads;
    params["io_extra_threads"] = p.io_extra_threads;
    params["queue_limit"] = p.queue_limit;
    params["reject_cost_factor"] = p.reject_cost_factor;
    params["reject_debt_cap_s"] = p.reject_debt_cap_s;
    params["proxy_quota_start_s"] = p.proxy_quota_start_s;
    params["large_threshold_bytes"] = p.large_threshold_bytes;
    params["node_cache_bytes"] = p.node_cache_bytes;
    params["proxy_cache_bytes"] = p.proxy_cache_bytes;
    params["refresh_window_s"] = p.refresh_window_s;
    params["refresh_hot_threshold"] = p.refresh_hot_threshold;
    params["window_k"] = p.window_k;
    params["meta_poll_s"] = p.meta_poll_s;
    params["meta_directive_delay_s"] = p.meta_directive_delay_s;
    params["proxy_hit_us"] = p.proxy_hit_us;
    params["wfq_max_reads"] = p.wfq_max_reads;
    params["wfq_max_writes"] = p.wfq_max_writes;
    params["wfq_write_ru_ceiling"] = p.wfq_write_ru_ceiling;
    params["rule3_enabled"] = p.rule3_enabled;
    params["rule3_fraction"] = p.rule3_fraction;
    params["autoscale_upper"] = p.autoscale_upper;
    params["autoscale_lower"] = p.autoscale_lower;
    params["autoscale_period_s"] = p.autoscale_period_s;
    params["autoscale_first_s"] = p.autoscale_first_s;
    params["reschedule_period_s"] = p.reschedule_period_s;
    params["migration_mb_s"] = p.migration_mb_s;
    root["params"] = params;

    return root.dump(2) + "\n";
}

domain::TopologySpec topology_of(const ScenarioConfig& sc) {
    domain::TopologySpec spec;
    spec.hash_seed = sc.hash_seed;
    spec.pools = sc.pools;
    spec.tenants.reserve(sc.tenants.size());
    for (const auto& t : sc.tenants) spec.tenants.push_back(t.spec);
    return spec;
}

std::vector<workload::WorkloadProfile> profiles_of(const ScenarioConfig& sc) {
    std::vector<workload::WorkloadProfile> out;
    out.reserve(sc.workloads.size());
    for (const auto& w : sc.workloads) {
        workload::WorkloadProfile p;
        for (std::size_t i = 0; i < sc.tenants.size(); ++i) {
            if (sc.tenants[i].spec.name == w.tenant) p.tenant = static_cast<std::uint32_t>(i);
        }
        p.arrival = w.arrival;
        p.keys = w.keys;
        p.read_ratio = w.read_ratio;
        p.value_size = w.value_size;
        if (w.ttl_s > 0) p.ttl_s = w.ttl_s;
        if (w.target_partition >= 0) p.target_partition = static_cast<std::uint32_t>(w.target_partition);
        out.push_back(p);
    }
    return out;
}

}  // namespace abase::scenario
