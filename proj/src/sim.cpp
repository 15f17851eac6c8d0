#include "abase/sim.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "abase/hash.hpp"
#include "abase/ru.hpp"

namespace abase::sim {

using nlohmann::json;

namespace {
constexpr double kDebtChunkUs = 10'000.0;
}

Simulation::Simulation(const scenario::ScenarioConfig& cfg)
    : cfg_(cfg),
      world_(domain::build_topology(scenario::topology_of(cfg))),
      duration_(us_from_seconds(cfg.duration_s)),
      sink_(static_cast<std::uint32_t>(world_.tenants.size()), duration_) {
    const scenario::Params& p = cfg_.params;
    Rng master(cfg_.seed);

    nodes_.resize(world_.nodes.size());
    wfq::CpuLimits limits;
    limits.max_reads = static_cast<int>(p.wfq_max_reads);
    limits.max_writes = static_cast<int>(p.wfq_max_writes);
    limits.write_ru_ceiling = p.wfq_write_ru_ceiling;
    limits.rule3_enabled = p.rule3_enabled;
    limits.rule3_fraction = p.rule3_fraction;
    limits.backlog_limit = static_cast<std::size_t>(p.queue_limit);
    for (auto& n : nodes_) {
        n.cpu = std::make_unique<wfq::CpuScheduler>(limits, cfg_.toggles.wfq);
        n.io = std::make_unique<wfq::IoScheduler>(static_cast<int>(p.io_basic_threads),
                                                  static_cast<int>(p.io_extra_threads),
                                                  cfg_.toggles.wfq);
        if (cfg_.toggles.node_cache) n.cache = std::make_unique<cache::SaLruCache>(p.node_cache_bytes);
        n.idle_workers = static_cast<int>(p.cpu_workers);
    }

    cache::AuLruCache::Config pc;
    pc.capacity_bytes = p.proxy_cache_bytes;
    pc.refresh_window = us_from_seconds(p.refresh_window_s);
    pc.hot_threshold = p.refresh_hot_threshold;

    tenants_.resize(world_.tenants.size());
    for (std::uint32_t t = 0; t < world_.tenants.size(); ++t) {
        const domain::Tenant& wt = world_.tenants[t];
        TenantRt& tr = tenants_[t];
        tr.ru_cfg.unit_size = 2048;
        tr.ru_cfg.replica_count = wt.replication;
        tr.ru_cfg.window_k = p.window_k;
        tr.stats = ru::ReadStats(p.window_k);
        tr.router = std::make_unique<cache::FanoutRouter>(wt.proxy_count, wt.fanout_groups,
                                                          hash64(t, world_.hash_seed));
        tr.monitor = std::make_unique<admission::MetaMonitor>(wt.quota_ru,
                                                              us_from_seconds(p.meta_poll_s));
        tr.scaling.tenant_id = t;
        tr.scaling.q_t = wt.quota_ru;
        tr.scaling.n = static_cast<std::uint32_t>(wt.partitions.size());
        tr.scaling.q_p = world_.partitions[wt.partitions.front()].quota_ru;
        tr.scaling.up = p.autoscale_upper;
        tr.scaling.lower = p.autoscale_lower;
        tr.history = scenario::materialize_history(cfg_.tenants[t].history);
        tr.route_rng = master.derive(5000 + t);
        tr.proxy_begin = static_cast<std::uint32_t>(proxies_.size());
        tr.proxy_count = wt.proxy_count;
        for (std::uint32_t i = 0; i < wt.proxy_count; ++i) {
            ProxyRt px;
            px.adm = admission::make_proxy_state(tr.proxy_begin + i, t, wt.quota_ru,
                                                 wt.proxy_count, true, 0);
            if (cfg_.toggles.proxy_cache) px.cache = std::make_unique<cache::AuLruCache>(pc);
            px.tenant = t;
            proxies_.push_back(std::move(px));
        }
    }

    auto profs = scenario::profiles_of(cfg_);
    workloads_.resize(profs.size());
    for (std::uint32_t w = 0; w < profs.size(); ++w) {
        WorkloadRt& wr = workloads_[w];
        wr.profile = profs[w];
        wr.gen = std::make_unique<workload::ArrivalGen>(wr.profile.arrival, duration_,
                                                        master.derive(1000 + w));
        wr.sampler = std::make_unique<workload::KeySampler>(wr.profile.keys);
        wr.kind_rng = master.derive(3000 + w);
        wr.key_rng = master.derive(2000 + w);
    }

    gates_.reserve(world_.partitions.size());
    for (std::uint32_t pid = 0; pid < world_.partitions.size(); ++pid) {
        gates_.push_back(admission::make_partition_gate(pid, world_.partitions[pid].quota_ru, 0));
    }
    part_hour_ru_.assign(world_.partitions.size(), 0.0);
    part_hours_.resize(world_.partitions.size());
    part_migrating_.assign(world_.partitions.size(), 0);

    counters_.max_cpu_wait_us.assign(world_.tenants.size(), 0);
    counters_.proxy_requests.assign(proxies_.size(), 0);
    counters_.admitted_ru.assign(world_.tenants.size(), 0.0);

    recompute_qp_sums();
}

Simulation::~Simulation() = default;

void Simulation::push_event(SimTime t, Ev kind, std::int64_t a, std::int64_t b, std::int64_t c) {
    events_.push(Event{t, next_event_seq_++, kind, a, b, c});
}

std::uint32_t Simulation::alloc_req() {
    if (!free_slots_.empty()) {
        std::uint32_t s = free_slots_.back();
        free_slots_.pop_back();
        reqs_[s] = Req{};
        return s;
    }
    reqs_.push_back(Req{});
    return static_cast<std::uint32_t>(reqs_.size() - 1);
}

void Simulation::free_req(std::uint32_t slot) { free_slots_.push_back(slot); }

bool Simulation::proxy_quota_active(SimTime now) const {
    return cfg_.toggles.proxy_quota && now >= us_from_seconds(cfg_.params.proxy_quota_start_s);
}

void Simulation::advance_hours(SimTime now) {
    std::int64_t hour = now / kUsPerHour;
    while (current_hour_ < hour) {
        close_hour();
        ++current_hour_;
    }
}

void Simulation::close_hour() {
    for (auto& tr : tenants_) {
        tr.observed_hours.push_back(tr.hour_ru / 3600.0);
        tr.hour_ru = 0.0;
    }
    for (std::size_t pid = 0; pid < part_hour_ru_.size(); ++pid) {
        part_hours_[pid].push_back(part_hour_ru_[pid] / 3600.0);
        part_hour_ru_[pid] = 0.0;
    }
}

void Simulation::finish(std::uint32_t slot, SimTime now, metrics::Terminal t,
                        std::int64_t charged) {
    Req& r = reqs_[slot];
    sink_.on_terminal(r.tenant, now, t, now - r.arrival, charged);
    tenants_[r.tenant].live--;
    live_total_--;
    free_req(slot);
}

void Simulation::run() {
    if (ran_) throw std::logic_error("simulation already ran");
    ran_ = true;

    for (std::uint32_t w = 0; w < workloads_.size(); ++w) {
        if (auto t0 = workloads_[w].gen->next()) push_event(*t0, Ev::kArrival, w);
    }
    if (cfg_.toggles.proxy_quota) {
        SimTime poll = us_from_seconds(cfg_.params.meta_poll_s);
        for (std::uint32_t t = 0; t < tenants_.size(); ++t) {
            if (poll < duration_) push_event(poll, Ev::kMetaTick, t);
        }
    }
    if (cfg_.toggles.autoscaler) {
        SimTime first = us_from_seconds(cfg_.params.autoscale_first_s);
        if (first < duration_) push_event(first, Ev::kAutoscaleTick);
    }
    if (cfg_.toggles.rescheduler && world_.nodes.size() > 1) {
        SimTime first = us_from_seconds(cfg_.params.reschedule_period_s);
        if (first < duration_) push_event(first, Ev::kRescheduleTick);
    }

    while (!events_.empty()) {
        Event e = events_.top();
        events_.pop();
        concurrency_area_ +=
            static_cast<double>(live_total_) * static_cast<double>(e.t - last_event_time_);
        last_event_time_ = e.t;
        advance_hours(e.t);
        switch (e.kind) {
            case Ev::kArrival:
                handle_arrival(e.a, e.t);
                break;
            case Ev::kProxyDone:
                finish(static_cast<std::uint32_t>(e.a), e.t, metrics::Terminal::kProxyCacheHit, 0);
                break;
            case Ev::kCpuDone:
                handle_cpu_done(static_cast<std::uint32_t>(e.a), e.b, e.t);
                break;
            case Ev::kIoDone:
                handle_io_done(static_cast<std::uint32_t>(e.a), static_cast<int>(e.b),
                               static_cast<std::uint32_t>(e.c), e.t);
                break;
            case Ev::kMetaTick:
                handle_meta_tick(static_cast<std::uint32_t>(e.a), e.t);
                break;
            case Ev::kDirective: {
                TenantRt& tr = tenants_[static_cast<std::uint32_t>(e.a)];
                for (std::uint32_t i = 0; i < tr.proxy_count; ++i) {
                    admission::set_burst_mode(proxies_[tr.proxy_begin + i].adm, e.b != 0, e.t);
                }
                break;
            }
            case Ev::kAutoscaleTick:
                handle_autoscale_tick(e.t);
                break;
            case Ev::kRescheduleTick:
                handle_reschedule_tick(e.t);
                break;
            case Ev::kMigrationDone:
                handle_migration_done(static_cast<std::uint32_t>(e.a),
                                      static_cast<std::uint32_t>(e.b), e.t);
                break;
        }
    }

    for (std::uint32_t t = 0; t < tenants_.size(); ++t) sink_.set_in_flight(t, tenants_[t].live);
    SimTime span = std::max(duration_, last_event_time_);
    counters_.mean_concurrency = concurrency_area_ / static_cast<double>(span);
    for (auto& n : nodes_) counters_.extra_io_activations += n.io->extra_activations();
}

void Simulation::handle_arrival(std::int64_t workload_idx, SimTime now) {
    WorkloadRt& wr = workloads_[static_cast<std::uint32_t>(workload_idx)];
    std::uint32_t t = wr.profile.tenant;
    TenantRt& tr = tenants_[t];

    std::uint32_t slot = alloc_req();
    Req& r = reqs_[slot];
    r.tenant = t;
    r.workload = static_cast<std::uint32_t>(workload_idx);
    bool is_read = wr.kind_rng.uniform01() < wr.profile.read_ratio;
    r.kind = is_read ? domain::RequestKind::kGet : domain::RequestKind::kPut;
    r.is_write = !is_read;
    r.key = wr.sampler->sample(wr.key_rng);
    r.actual_size = workload::size_of_key(wr.profile.value_size, r.key, world_.hash_seed);
    r.arrival = now;
    r.proxy = tr.proxy_begin + tr.router->route(r.key, tr.route_rng);

    sink_.on_arrival(t, now);
    tr.live++;
    live_total_++;
    counters_.proxy_requests[r.proxy]++;

    at_proxy(slot, now);

    if (auto tn = wr.gen->next()) push_event(*tn, Ev::kArrival, workload_idx);
}

void Simulation::at_proxy(std::uint32_t slot, SimTime now) {
    Req r = reqs_[slot];  // by value: refresh spawn may reallocate the slab
    TenantRt& tr = tenants_[r.tenant];
    ProxyRt& px = proxies_[r.proxy];

    if (!r.is_write && px.cache) {
        auto res = px.cache->get(r.key, now);
        if (res.hit) {
            tr.stats.update(res.size, true);
            SimTime done = now + static_cast<SimTime>(std::llround(cfg_.params.proxy_hit_us));
            push_event(done, Ev::kProxyDone, slot);
            if (res.schedule_refresh) {
                counters_.refreshes_scheduled++;
                spawn_refresh(r, now);
            }
            return;
        }
    }

    double est = r.is_write ? static_cast<double>(ru::ru_write(r.actual_size, tr.ru_cfg))
                            : ru::estimate_read_ru(tr.stats, tr.ru_cfg);
    reqs_[slot].est_ru = est;

    if (proxy_quota_active(now)) {
        if (admission::proxy_admit(px.adm, est, now) == admission::Decision::kReject) {
            finish(slot, now, metrics::Terminal::kRejectProxyQuota, 0);
            return;
        }
    }
    counters_.admitted_ru[r.tenant] += est;
    to_node(slot, now);
}

void Simulation::spawn_refresh(const Req& origin, SimTime now) {
    std::uint32_t slot = alloc_req();
    Req& r = reqs_[slot];
    r.tenant = origin.tenant;
    r.workload = origin.workload;
    r.kind = domain::RequestKind::kGet;
    r.key = origin.key;
    r.actual_size = origin.actual_size;
    r.arrival = now;
    r.proxy = origin.proxy;
    r.is_refresh = true;
    r.est_ru = ru::estimate_read_ru(tenants_[r.tenant].stats, tenants_[r.tenant].ru_cfg);
    to_node(slot, now);
}

void Simulation::to_node(std::uint32_t slot, SimTime now) {
    Req& r = reqs_[slot];
    TenantRt& tr = tenants_[r.tenant];
    const workload::WorkloadProfile& prof = workloads_[r.workload].profile;

    std::uint32_t pid;
    if (prof.target_partition) {
        const auto& parts = world_.tenants[r.tenant].partitions;
        pid = parts[std::min<std::size_t>(*prof.target_partition, parts.size() - 1)];
    } else {
        pid = domain::partition_of(world_, r.tenant, r.key);
    }
    r.partition = pid;
    std::uint32_t node = world_.partitions[pid].replicas.front();
    r.node = node;

    if (cfg_.toggles.partition_quota &&
        admission::partition_admit(gates_[pid], r.est_ru, now) == admission::Decision::kReject) {
        double est = r.est_ru;
        bool refresh = r.is_refresh;
        std::uint64_t key = r.key;
        std::uint32_t proxy = r.proxy;
        if (refresh) {
            if (proxies_[proxy].cache) proxies_[proxy].cache->refresh_failed(key);
            counters_.refreshes_failed++;
            free_req(slot);
        } else {
            finish(slot, now, metrics::Terminal::kRejectPartitionQuota, 0);
        }
        add_debt(node, est, now);
        return;
    }

    double est_bytes = r.is_write ? static_cast<double>(r.actual_size)
                                  : (tr.stats.empty() ? static_cast<double>(tr.ru_cfg.unit_size)
                                                      : tr.stats.mean_size());
    r.cls = wfq::classify(r.kind, est_bytes, static_cast<double>(cfg_.params.large_threshold_bytes));
    r.cpu_enqueue = now;

    NodeRt& n = nodes_[node];
    bool ok = n.cpu->enqueue(r.cls, slot, r.tenant, r.est_ru, partition_qp(pid), n.qp_sum, now);
    if (!ok) {
        if (r.is_refresh) {
            if (proxies_[r.proxy].cache) proxies_[r.proxy].cache->refresh_failed(r.key);
            counters_.refreshes_failed++;
            free_req(slot);
        } else {
            finish(slot, now, metrics::Terminal::kDropQueueOverflow, 0);
        }
        return;
    }
    cpu_dispatch(node, now);
}

void Simulation::add_debt(std::uint32_t node, double ru, SimTime now) {
    double amount = cfg_.params.reject_cost_factor * cfg_.params.t_cpu_us_per_ru * ru;
    if (amount <= 0.0) return;
    NodeRt& n = nodes_[node];
    double cap = cfg_.params.reject_debt_cap_s * 1e6;
    n.debt_us = std::min(n.debt_us + amount, cap);
    counters_.reject_debt_total_us += amount;
    cpu_dispatch(node, now);
}

void Simulation::cpu_dispatch(std::uint32_t node, SimTime now) {
    NodeRt& n = nodes_[node];
    while (n.idle_workers > 0) {
        if (n.debt_us >= 1.0) {
            double chunk = std::min(n.debt_us, kDebtChunkUs);
            n.debt_us -= chunk;
            n.idle_workers--;
            push_event(now + std::max<SimTime>(1, static_cast<SimTime>(std::llround(chunk))),
                       Ev::kCpuDone, node, -1);
            continue;
        }
        auto d = n.cpu->dequeue(now);
        if (!d) break;
        std::uint32_t slot = static_cast<std::uint32_t>(d->entry.payload);
        Req& r = reqs_[slot];
        SimTime wait = now - r.cpu_enqueue;
        if (!r.is_refresh && wait > counters_.max_cpu_wait_us[r.tenant]) {
            counters_.max_cpu_wait_us[r.tenant] = wait;
        }
        n.idle_workers--;
        push_event(now + service_cpu_us(cfg_.params.t_cpu_us_per_ru, d->entry.cost), Ev::kCpuDone,
                   node, slot);
    }
}

void Simulation::handle_cpu_done(std::uint32_t node, std::int64_t slot, SimTime now) {
    NodeRt& n = nodes_[node];
    n.idle_workers++;
    if (slot < 0) {
        cpu_dispatch(node, now);
        return;
    }
    Req& r = reqs_[static_cast<std::uint32_t>(slot)];
    if (!r.is_write && n.cache) {
        auto res = n.cache->get(r.key, now);
        if (res.hit) {
            r.node_cache_hit = true;
            complete_at_node(static_cast<std::uint32_t>(slot), now);
            cpu_dispatch(node, now);
            return;
        }
    }
    r.io_cost = static_cast<double>(wfq::iops_cost(r.actual_size, cfg_.params.io_block_bytes));
    n.io->enqueue(r.cls, static_cast<std::uint64_t>(slot), r.tenant, r.io_cost,
                  partition_qp(r.partition), n.qp_sum, now);
    io_dispatch(node, now);
    cpu_dispatch(node, now);
}

void Simulation::io_dispatch(std::uint32_t node, SimTime now) {
    NodeRt& n = nodes_[node];
    for (const auto& a : n.io->dispatch(now)) {
        push_event(now + service_io_us(cfg_.params.t_io_us_per_iops, a.entry.cost), Ev::kIoDone,
                   node, a.thread, static_cast<std::int64_t>(a.entry.payload));
    }
}

void Simulation::handle_io_done(std::uint32_t node, int thread, std::uint32_t slot, SimTime now) {
    NodeRt& n = nodes_[node];
    n.io->complete(thread);
    Req& r = reqs_[slot];
    if (n.cache) n.cache->put(r.key, r.actual_size, now);
    complete_at_node(slot, now);
    io_dispatch(node, now);
}

void Simulation::complete_at_node(std::uint32_t slot, SimTime now) {
    Req r = reqs_[slot];  // by value: proxy-cache fill below must not dangle
    NodeRt& n = nodes_[r.node];
    TenantRt& tr = tenants_[r.tenant];
    n.cpu->complete(r.cls, r.tenant, r.est_ru);

    const workload::WorkloadProfile& prof = workloads_[r.workload].profile;
    if (r.is_refresh) {
        if (proxies_[r.proxy].cache && prof.ttl_s) {
            proxies_[r.proxy].cache->refresh_complete(r.key, r.actual_size,
                                                      now + us_from_seconds(*prof.ttl_s));
        }
        counters_.refreshes_completed++;
        free_req(slot);
        cpu_dispatch(r.node, now);
        return;
    }

    std::int64_t charged;
    metrics::Terminal term;
    if (r.is_write) {
        charged = ru::ru_write(r.actual_size, tr.ru_cfg);
        term = metrics::Terminal::kDisk;
    } else {
        charged = ru::settle_read(r.actual_size,
                                  r.node_cache_hit ? ru::ServedFrom::kNodeCache
                                                   : ru::ServedFrom::kDisk,
                                  tr.ru_cfg);
        term = r.node_cache_hit ? metrics::Terminal::kNodeCacheHit : metrics::Terminal::kDisk;
        tr.stats.update(r.actual_size, false);
    }
    tr.hour_ru += static_cast<double>(charged);
    part_hour_ru_[r.partition] += static_cast<double>(charged);

    ProxyRt& px = proxies_[r.proxy];
    if (px.cache) {
        if (r.is_write) {
            px.cache->invalidate(r.key);
        } else if (prof.ttl_s) {
            px.cache->put(r.key, r.actual_size, now + us_from_seconds(*prof.ttl_s), now);
        }
    }

    finish(slot, now, term, charged);
    cpu_dispatch(r.node, now);
}

void Simulation::handle_meta_tick(std::uint32_t tenant, SimTime now) {
    TenantRt& tr = tenants_[tenant];
    if (proxy_quota_active(now)) {
        std::vector<admission::ProxyState*> states;
        states.reserve(tr.proxy_count);
        for (std::uint32_t i = 0; i < tr.proxy_count; ++i) {
            states.push_back(&proxies_[tr.proxy_begin + i].adm);
        }
        auto dirs = tr.monitor->tick(tenant, states, now);
        counters_.directives_issued += dirs.size();
        SimTime delay = us_from_seconds(cfg_.params.meta_directive_delay_s);
        for (const auto& d : dirs) push_event(now + delay, Ev::kDirective, tenant, d.burst ? 1 : 0);
    }
    SimTime next = now + tr.monitor->poll_period();
    if (next < duration_) push_event(next, Ev::kMetaTick, tenant);
}

void Simulation::handle_autoscale_tick(SimTime now) {
    for (std::uint32_t t = 0; t < tenants_.size(); ++t) {
        TenantRt& tr = tenants_[t];
        forecast::MetricSeries series = tr.history;
        series.values.insert(series.values.end(), tr.observed_hours.begin(),
                             tr.observed_hours.end());
        if (series.values.size() < 24) continue;

        auto fc = forecast::forecast(series, forecast::MetricSeries{}, forecast_cfg_);
        auto decision = autoscale::decide(tr.scaling, fc.u_max, now);
        if (decision.action == autoscale::ScaleAction::kNone) continue;

        std::uint32_t before_parts = static_cast<std::uint32_t>(world_.tenants[t].partitions.size());
        autoscale::commit(tr.scaling, decision, now);
        autoscale::apply(world_, t, decision);

        while (gates_.size() < world_.partitions.size()) {
            std::uint32_t pid = static_cast<std::uint32_t>(gates_.size());
            gates_.push_back(
                admission::make_partition_gate(pid, world_.partitions[pid].quota_ru, now));
            part_hour_ru_.push_back(0.0);
            part_hours_.emplace_back();
            part_migrating_.push_back(0);
        }
        for (std::uint32_t pid : world_.tenants[t].partitions) {
            admission::reset_gate_quota(gates_[pid], world_.partitions[pid].quota_ru, now);
        }
        for (std::uint32_t i = 0; i < tr.proxy_count; ++i) {
            admission::ProxyState& ps = proxies_[tr.proxy_begin + i].adm;
            ps.proxy_quota = decision.new_q_t / static_cast<double>(tr.proxy_count);
            ps.bucket.reset_rate(ps.ceiling(), ps.ceiling(), now);
        }
        tr.monitor->set_tenant_quota(decision.new_q_t);
        recompute_qp_sums();

        if (decision.action == autoscale::ScaleAction::kScaleUp) counters_.autoscale_ups++;
        if (decision.action == autoscale::ScaleAction::kScaleDown) counters_.autoscale_downs++;
        counters_.partition_splits += decision.new_partition_count - before_parts;

        json rec;
        rec["type"] = "autoscale";
        rec["time_s"] = seconds_from_us(now);
        rec["tenant"] = world_.tenants[t].name;
        rec["action"] =
            decision.action == autoscale::ScaleAction::kScaleUp ? "scale_up" : "scale_down";
        rec["u_max"] = fc.u_max;
        rec["new_q_t"] = decision.new_q_t;
        rec["new_q_p"] = decision.new_q_p;
        rec["partitions"] = decision.new_partition_count;
        rec["split"] = decision.split_triggered;
        decision_log_.push_back(rec.dump());
    }
    SimTime next = now + us_from_seconds(cfg_.params.autoscale_period_s);
    if (next < duration_) push_event(next, Ev::kAutoscaleTick);
}

void Simulation::handle_reschedule_tick(SimTime now) {
    SimTime next = now + us_from_seconds(cfg_.params.reschedule_period_s);
    bool busy = std::any_of(part_migrating_.begin(), part_migrating_.end(),
                            [](std::uint8_t f) { return f != 0; });
    if (!busy) {
        double elapsed_in_hour = seconds_from_us(now - current_hour_ * kUsPerHour);
        for (const auto& pool : world_.pools) {
            if (pool.nodes.size() < 2) continue;
            reschedule::PoolState ps;
            ps.name = pool.name;
            for (domain::NodeId nid : pool.nodes) {
                reschedule::NodeState ns;
                ns.id = nid;
                ns.ru_capacity = world_.nodes[nid].ru_capacity;
                ns.storage_capacity = world_.nodes[nid].storage_capacity_bytes;
                ps.nodes.push_back(std::move(ns));
            }
            for (std::uint32_t pid = 0; pid < world_.partitions.size(); ++pid) {
                const domain::Partition& part = world_.partitions[pid];
                std::uint32_t primary = part.replicas.front();
                auto it = std::find(pool.nodes.begin(), pool.nodes.end(), primary);
                if (it == pool.nodes.end()) continue;
                reschedule::ReplicaState re;
                re.id = pid;
                re.tenant = part.tenant;
                std::vector<double> samples = part_hours_[pid];
                if (elapsed_in_hour >= 1.0) {
                    samples.push_back(part_hour_ru_[pid] / elapsed_in_hour);
                }
                re.ru = reschedule::replica_load(samples);
                re.storage.fill(part.data_bytes);
                ps.nodes[static_cast<std::size_t>(it - pool.nodes.begin())].replicas.push_back(
                    std::move(re));
            }
            auto plan = reschedule::intra_pool_reschedule(ps, planner_cfg_);
            for (const auto& m : plan) {
                std::uint32_t pid = static_cast<std::uint32_t>(m.replica_id);
                part_migrating_[pid] = 1;
                double bytes = world_.partitions[pid].data_bytes;
                SimTime delay = std::max<SimTime>(
                    1, static_cast<SimTime>(std::llround(bytes / cfg_.params.migration_mb_s)));
                push_event(now + delay, Ev::kMigrationDone, pid, m.dst_node);
                counters_.migrations_planned++;

                json rec;
                rec["type"] = "migration";
                rec["time_s"] = seconds_from_us(now);
                rec["pool"] = pool.name;
                rec["partition"] = pid;
                rec["tenant"] = world_.tenants[m.tenant].name;
                rec["from"] = m.src_node;
                rec["to"] = m.dst_node;
                rec["gain"] = m.gain;
                rec["dimension"] = m.dimension == reschedule::Dimension::kRu ? "ru" : "storage";
                decision_log_.push_back(rec.dump());
            }
        }
    }
    if (next < duration_) push_event(next, Ev::kRescheduleTick);
}

void Simulation::handle_migration_done(std::uint32_t partition, std::uint32_t dst, SimTime now) {
    (void)now;
    domain::Partition& part = world_.partitions[partition];
    auto it = std::find(part.replicas.begin(), part.replicas.end(), dst);
    if (it != part.replicas.end()) {
        std::swap(*part.replicas.begin(), *it);
    } else {
        part.replicas.front() = dst;
    }
    part_migrating_[partition] = 0;
    counters_.migrations_applied++;
    recompute_qp_sums();
}

void Simulation::recompute_qp_sums() {
    for (auto& n : nodes_) n.qp_sum = 0.0;
    for (const auto& part : world_.partitions) {
        nodes_[part.replicas.front()].qp_sum += part.quota_ru;
    }
}

std::string Simulation::summary_json() const {
    json root;
    root["scenario"] = cfg_.name;
    root["seed"] = cfg_.seed;
    root["duration_s"] = cfg_.duration_s;

    std::string audit_msg;
    root["audit_ok"] = sink_.audit(&audit_msg);
    root["audit_detail"] = audit_msg;

    json tenants = json::array();
    for (std::uint32_t t = 0; t < tenants_.size(); ++t) {
        const auto& tot = sink_.totals(t);
        json jt;
        jt["name"] = world_.tenants[t].name;
        jt["arrivals"] = tot.arrivals;
        jt["success"] = tot.success();
        jt["proxy_cache_hits"] = tot.terminals[0];
        jt["node_cache_hits"] = tot.terminals[1];
        jt["disk_served"] = tot.terminals[2];
        jt["rejected_proxy_quota"] = tot.terminals[3];
        jt["rejected_partition_quota"] = tot.terminals[4];
        jt["dropped_queue_overflow"] = tot.terminals[5];
        jt["charged_ru"] = tot.charged_ru;
        jt["in_flight_at_end"] = tot.in_flight_at_end;
        jt["max_cpu_wait_us"] = counters_.max_cpu_wait_us[t];
        tenants.push_back(jt);
    }
    root["tenants"] = tenants;

    json c;
    c["refreshes_scheduled"] = counters_.refreshes_scheduled;
    c["refreshes_completed"] = counters_.refreshes_completed;
    c["refreshes_failed"] = counters_.refreshes_failed;
    c["directives_issued"] = counters_.directives_issued;
    c["extra_io_activations"] = counters_.extra_io_activations;
    c["autoscale_ups"] = counters_.autoscale_ups;
    c["autoscale_downs"] = counters_.autoscale_downs;
    c["partition_splits"] = counters_.partition_splits;
    c["migrations_planned"] = counters_.migrations_planned;
    c["migrations_applied"] = counters_.migrations_applied;
    c["reject_debt_total_us"] = counters_.reject_debt_total_us;
    c["mean_concurrency"] = counters_.mean_concurrency;
    root["counters"] = c;

    return root.dump(2) + "\n";
}

}  // namespace abase::sim
