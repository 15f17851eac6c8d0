#include "abase/reschedule.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "abase/rng.hpp"

namespace abase::reschedule {

namespace {

constexpr double kGainEps = 1e-9;

std::size_t find_node(const PoolState& pool, std::uint32_t node_id) {
    for (std::size_t i = 0; i < pool.nodes.size(); ++i)
        if (pool.nodes[i].id == node_id) return i;
    throw std::invalid_argument("reschedule: unknown node id " + std::to_string(node_id));
}

// Per-node slot sums kept separately so gain evaluation is O(slots), not
// O(replicas).
struct SlotSums {
    std::array<double, kSlots> ru{};
    std::array<double, kSlots> storage{};

    static SlotSums of(const NodeState& n) {
        SlotSums s;
        for (const ReplicaState& re : n.replicas)
            for (int i = 0; i < kSlots; ++i) {
                s.ru[i] += re.ru[i];
                s.storage[i] += re.storage[i];
            }
        return s;
    }

    NodeLoad load() const {
        NodeLoad l;
        for (int i = 0; i < kSlots; ++i) {
            l.ru = std::max(l.ru, ru[i]);
            l.storage = std::max(l.storage, storage[i]);
        }
        return l;
    }

    NodeLoad load_minus(const ReplicaState& re) const {
        NodeLoad l;
        for (int i = 0; i < kSlots; ++i) {
            l.ru = std::max(l.ru, ru[i] - re.ru[i]);
            l.storage = std::max(l.storage, storage[i] - re.storage[i]);
        }
        return l;
    }

    NodeLoad load_plus(const ReplicaState& re) const {
        NodeLoad l;
        for (int i = 0; i < kSlots; ++i) {
            l.ru = std::max(l.ru, ru[i] + re.ru[i]);
            l.storage = std::max(l.storage, storage[i] + re.storage[i]);
        }
        return l;
    }
};

double loss_of(const NodeLoad& load, const NodeState& node, const OptimalLoad& target) {
    double du = load.ru / node.ru_capacity - target.r;
    double ds = load.storage / node.storage_capacity - target.s;
    return std::sqrt(du * du + ds * ds);
}

std::vector<int> tenant_counts(const NodeState& n, std::uint32_t tenant_span) {
    std::vector<int> counts(tenant_span, 0);
    for (const ReplicaState& re : n.replicas) ++counts[re.tenant];
    return counts;
}

std::uint32_t tenant_span_of(const PoolState& pool) {
    std::uint32_t span = 0;
    for (const NodeState& n : pool.nodes)
        for (const ReplicaState& re : n.replicas) span = std::max(span, re.tenant + 1);
    return span;
}

}  // namespace

LoadVector replica_load(const std::vector<double>& hourly_samples) {
    LoadVector v{};
    const std::size_t n = std::min<std::size_t>(hourly_samples.size(), 7 * kSlots);
    // Align so the newest sample lands on the newest hour slot; surplus old
    // samples beyond 7 days are dropped.
    const std::size_t start = hourly_samples.size() - n;
    for (std::size_t i = 0; i < n; ++i) {
        int slot = static_cast<int>((start + i) % kSlots);
        v[slot] = std::max(v[slot], hourly_samples[start + i]);
    }
    return v;
}

NodeLoad node_load(const NodeState& node) { return SlotSums::of(node).load(); }

OptimalLoad pool_target(const PoolState& pool) {
    double load_ru = 0.0, load_sto = 0.0, cap_ru = 0.0, cap_sto = 0.0;
    for (const NodeState& n : pool.nodes) {
        NodeLoad l = node_load(n);
        load_ru += l.ru;
        load_sto += l.storage;
        cap_ru += n.ru_capacity;
        cap_sto += n.storage_capacity;
    }
    OptimalLoad t;
    t.r = cap_ru > 0.0 ? load_ru / cap_ru : 0.0;
    t.s = cap_sto > 0.0 ? load_sto / cap_sto : 0.0;
    return t;
}

double node_loss(const NodeState& node, const OptimalLoad& target) {
    return loss_of(node_load(node), node, target);
}

double migration_gain(const ReplicaState& re, const NodeState& src, const NodeState& dst,
                      const OptimalLoad& target) {
    SlotSums ss = SlotSums::of(src);
    SlotSums ds = SlotSums::of(dst);
    double before = std::max(loss_of(ss.load(), src, target), loss_of(ds.load(), dst, target));
    double after =
        std::max(loss_of(ss.load_minus(re), src, target), loss_of(ds.load_plus(re), dst, target));
    return before - after;
}

Division divide_nodes(const PoolState& pool, Dimension dim, double theta) {
    OptimalLoad target = pool_target(pool);
    double bar = dim == Dimension::kRu ? target.r : target.s;
    Division d;
    for (std::size_t i = 0; i < pool.nodes.size(); ++i) {
        const NodeState& n = pool.nodes[i];
        NodeLoad l = node_load(n);
        double util = dim == Dimension::kRu ? l.ru / n.ru_capacity : l.storage / n.storage_capacity;
        if (util <= bar - theta)
            d.low.push_back(i);
        else if (util <= bar)
            d.medium.push_back(i);
        else
            d.high.push_back(i);
    }
    return d;
}

bool can_place(const ReplicaState& re, const NodeState& src, const NodeState& dst,
               Dimension dim, const OptimalLoad& target, double theta) {
    (void)theta;
    SlotSums ds = SlotSums::of(dst);
    NodeLoad after = ds.load_plus(re);
    double bar = dim == Dimension::kRu ? target.r : target.s;
    double util_after = dim == Dimension::kRu ? after.ru / dst.ru_capacity
                                              : after.storage / dst.storage_capacity;
    if (util_after > bar) return false;  // destination must stay out of S_H
    if (after.storage > dst.storage_capacity) return false;

    std::uint32_t span = re.tenant + 1;
    for (const ReplicaState& r : src.replicas) span = std::max(span, r.tenant + 1);
    for (const ReplicaState& r : dst.replicas) span = std::max(span, r.tenant + 1);
    std::vector<int> cs = tenant_counts(src, span);
    std::vector<int> cd = tenant_counts(dst, span);
    return cd[re.tenant] + 1 <= cs[re.tenant];
}

MigrationPlan intra_pool_reschedule(PoolState& pool, const PlannerConfig& cfg) {
    MigrationPlan plan;
    const std::size_t n = pool.nodes.size();
    if (n < 2) return plan;

    const std::uint32_t span = tenant_span_of(pool);
    const OptimalLoad target = pool_target(pool);

    // Snapshot sums and counts once; migrations are deferred to the caller,
    // so in-round state changes are only the is_migrating marks.
    std::vector<SlotSums> sums;
    std::vector<std::vector<int>> counts;
    sums.reserve(n);
    counts.reserve(n);
    for (const NodeState& node : pool.nodes) {
        sums.push_back(SlotSums::of(node));
        counts.push_back(tenant_counts(node, span));
    }

    for (Dimension dim : {Dimension::kRu, Dimension::kStorage}) {
        Division div = divide_nodes(pool, dim, cfg.theta);

        // Hottest first keeps the pass deterministic and attacks the worst
        // offender while fresh low nodes are still unmarked.
        std::sort(div.high.begin(), div.high.end(), [&](std::size_t a, std::size_t b) {
            auto util = [&](std::size_t i) {
                NodeLoad l = sums[i].load();
                return dim == Dimension::kRu ? l.ru / pool.nodes[i].ru_capacity
                                             : l.storage / pool.nodes[i].storage_capacity;
            };
            double ua = util(a), ub = util(b);
            if (ua != ub) return ua > ub;
            return pool.nodes[a].id < pool.nodes[b].id;
        });

        for (std::size_t src_i : div.high) {
            NodeState& src = pool.nodes[src_i];
            if (src.is_migrating) continue;

            double best_gain = 0.0;
            double best_dst_util = 0.0;
            std::size_t best_dst = 0;
            const ReplicaState* best_re = nullptr;

            double src_loss_before = loss_of(sums[src_i].load(), src, target);
            for (const ReplicaState& re : src.replicas) {
                NodeLoad src_after = sums[src_i].load_minus(re);
                double src_loss_after = loss_of(src_after, src, target);
                for (std::size_t dst_i : div.low) {
                    NodeState& dst = pool.nodes[dst_i];
                    if (dst_i == src_i || dst.is_migrating) continue;

                    NodeLoad dst_after = sums[dst_i].load_plus(re);
                    double bar = dim == Dimension::kRu ? target.r : target.s;
                    double util_after = dim == Dimension::kRu
                                            ? dst_after.ru / dst.ru_capacity
                                            : dst_after.storage / dst.storage_capacity;
                    if (util_after > bar) continue;
                    if (dst_after.storage > dst.storage_capacity) continue;
                    if (counts[dst_i][re.tenant] + 1 > counts[src_i][re.tenant]) continue;

                    double dst_loss_before = loss_of(sums[dst_i].load(), dst, target);
                    double dst_loss_after = loss_of(dst_after, dst, target);
                    double gain = std::max(src_loss_before, dst_loss_before) -
                                  std::max(src_loss_after, dst_loss_after);
                    if (gain <= kGainEps) continue;

                    NodeLoad dl = sums[dst_i].load();
                    double dst_util = dim == Dimension::kRu
                                          ? dl.ru / dst.ru_capacity
                                          : dl.storage / dst.storage_capacity;
                    bool take = false;
                    if (best_re == nullptr || gain > best_gain + kGainEps) {
                        take = true;
                    } else if (gain >= best_gain - kGainEps) {
                        // Tie on gain: emptier destination, then lower node
                        // id; a same-node tie keeps the earlier (lower-id)
                        // replica by iteration order.
                        if (dst_util < best_dst_util - 1e-15)
                            take = true;
                        else if (std::abs(dst_util - best_dst_util) <= 1e-15 &&
                                 dst.id < pool.nodes[best_dst].id)
                            take = true;
                    }
                    if (take) {
                        best_gain = gain;
                        best_dst_util = dst_util;
                        best_dst = dst_i;
                        best_re = &re;
                    }
                }
            }

            if (best_re != nullptr && best_gain > kGainEps) {
                Migration m;
                m.replica_id = best_re->id;
                m.tenant = best_re->tenant;
                m.src_node = src.id;
                m.dst_node = pool.nodes[best_dst].id;
                m.gain = best_gain;
                m.dimension = dim;
                plan.push_back(m);
                src.is_migrating = true;
                pool.nodes[best_dst].is_migrating = true;
            }
        }
    }
    return plan;
}

MigrationPlan phase1_replica_balance(PoolState& pool) {
    MigrationPlan plan;
    const std::size_t n = pool.nodes.size();
    if (n < 2) return plan;
    const std::uint32_t span = tenant_span_of(pool);

    for (std::uint32_t t = 0; t < span; ++t) {
        while (true) {
            std::size_t max_i = 0, min_i = 0;
            int max_c = -1, min_c = 1 << 30;
            for (std::size_t i = 0; i < n; ++i) {
                int c = 0;
                for (const ReplicaState& re : pool.nodes[i].replicas)
                    if (re.tenant == t) ++c;
                if (c > max_c || (c == max_c && pool.nodes[i].id < pool.nodes[max_i].id)) {
                    max_c = c;
                    max_i = i;
                }
                if (c < min_c || (c == min_c && pool.nodes[i].id < pool.nodes[min_i].id)) {
                    min_c = c;
                    min_i = i;
                }
            }
            if (max_c - min_c <= 1) break;

            // Move this tenant's lowest-id replica off the fullest node.
            NodeState& src = pool.nodes[max_i];
            auto it = src.replicas.end();
            for (auto r = src.replicas.begin(); r != src.replicas.end(); ++r)
                if (r->tenant == t && (it == src.replicas.end() || r->id < it->id)) it = r;

            Migration m;
            m.replica_id = it->id;
            m.tenant = t;
            m.src_node = src.id;
            m.dst_node = pool.nodes[min_i].id;
            m.gain = 0.0;
            m.dimension = Dimension::kRu;
            plan.push_back(m);

            pool.nodes[min_i].replicas.push_back(*it);
            src.replicas.erase(it);
        }
    }
    return plan;
}

void apply_migration(PoolState& pool, const Migration& m) {
    NodeState& src = pool.nodes[find_node(pool, m.src_node)];
    NodeState& dst = pool.nodes[find_node(pool, m.dst_node)];
    for (auto it = src.replicas.begin(); it != src.replicas.end(); ++it) {
        if (it->id == m.replica_id) {
            dst.replicas.push_back(*it);
            src.replicas.erase(it);
            return;
        }
    }
    throw std::invalid_argument("reschedule: replica not on source node");
}

void clear_migration_flags(PoolState& pool) {
    for (NodeState& n : pool.nodes) n.is_migrating = false;
}

PoolStats pool_stats(const PoolState& pool) {
    PoolStats s;
    const std::size_t n = pool.nodes.size();
    if (n == 0) return s;
    OptimalLoad target = pool_target(pool);
    double sum_u = 0.0, sum_u2 = 0.0, sum_v = 0.0, sum_v2 = 0.0;
    for (const NodeState& node : pool.nodes) {
        NodeLoad l = node_load(node);
        double u = l.ru / node.ru_capacity;
        double v = l.storage / node.storage_capacity;
        sum_u += u;
        sum_u2 += u * u;
        sum_v += v;
        sum_v2 += v * v;
        s.max_loss = std::max(s.max_loss, loss_of(l, node, target));
    }
    double mean_u = sum_u / static_cast<double>(n);
    double mean_v = sum_v / static_cast<double>(n);
    s.mean_ru_util = mean_u;
    s.ru_util_stddev = std::sqrt(std::max(0.0, sum_u2 / static_cast<double>(n) - mean_u * mean_u));
    s.storage_util_variance = std::max(0.0, sum_v2 / static_cast<double>(n) - mean_v * mean_v);
    return s;
}

RoundsReport run_rounds(PoolState& pool, int max_rounds, const PlannerConfig& cfg,
                        bool balance_counts_first) {
    RoundsReport rep;
    rep.before = pool_stats(pool);
    if (balance_counts_first) {
        MigrationPlan p1 = phase1_replica_balance(pool);
        rep.moves.insert(rep.moves.end(), p1.begin(), p1.end());
    }
    for (int round = 0; round < max_rounds; ++round) {
        MigrationPlan plan = intra_pool_reschedule(pool, cfg);
        if (plan.empty()) break;
        for (const Migration& m : plan) apply_migration(pool, m);
        clear_migration_flags(pool);
        rep.moves.insert(rep.moves.end(), plan.begin(), plan.end());
        rep.rounds = round + 1;
        rep.max_loss_per_round.push_back(pool_stats(pool).max_loss);
    }
    rep.after = pool_stats(pool);
    return rep;
}

InterPoolReport inter_pool_reschedule(std::vector<PoolState>& pools, const PlannerConfig& cfg) {
    InterPoolReport rep;
    if (pools.size() < 2) return rep;

    std::size_t hi = 0, lo = 0;
    double r_hi = -1.0, r_lo = 2.0;
    for (std::size_t i = 0; i < pools.size(); ++i) {
        double r = pool_target(pools[i]).r;
        if (r > r_hi) {
            r_hi = r;
            hi = i;
        }
        if (r < r_lo) {
            r_lo = r;
            lo = i;
        }
    }
    double gap = r_hi - r_lo;
    if (gap < cfg.inter_pool_trigger || hi == lo) return rep;

    rep.triggered = true;
    rep.from_pool = pools[lo].name;
    rep.to_pool = pools[hi].name;
    PoolState& low = pools[lo];
    PoolState& high = pools[hi];

    // Candidate donors: least RU-utilized first.
    std::vector<std::size_t> order(low.nodes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        double ua = node_load(low.nodes[a]).ru / low.nodes[a].ru_capacity;
        double ub = node_load(low.nodes[b]).ru / low.nodes[b].ru_capacity;
        if (ua != ub) return ua < ub;
        return low.nodes[a].id < low.nodes[b].id;
    });

    // Smallest k that closes at least half the gap, assuming clean drains.
    auto gap_after = [&](std::size_t k) {
        double load_lo = 0.0, cap_lo = 0.0;
        for (const NodeState& n : low.nodes) {
            load_lo += node_load(n).ru;
            cap_lo += n.ru_capacity;
        }
        double load_hi = 0.0, cap_hi = 0.0;
        for (const NodeState& n : high.nodes) {
            load_hi += node_load(n).ru;
            cap_hi += n.ru_capacity;
        }
        for (std::size_t i = 0; i < k; ++i) cap_lo -= low.nodes[order[i]].ru_capacity;
        for (std::size_t i = 0; i < k; ++i) cap_hi += low.nodes[order[i]].ru_capacity;
        if (cap_lo <= 0.0) return 2.0;
        return load_hi / cap_hi - load_lo / cap_lo;
    };
    std::size_t k = 0;
    double best_gap = gap;
    std::size_t best_k = 0;
    for (std::size_t cand = 1; cand + 1 < low.nodes.size() + 1 && cand < low.nodes.size(); ++cand) {
        double g = gap_after(cand);
        if (g < best_gap) {
            best_gap = g;
            best_k = cand;
        }
        if (g <= gap / 2.0) {
            k = cand;
            break;
        }
    }
    if (k == 0) k = best_k;
    if (k == 0) return rep;

    // Drain each donor into the rest of the low pool; a node that cannot be
    // fully drained is skipped and its moves rolled back.
    std::vector<std::uint32_t> drained_ids;
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t src_i = order[i];
        NodeState& src = low.nodes[src_i];
        std::vector<Migration> local;
        bool ok = true;
        std::vector<ReplicaState> replicas = src.replicas;  // iterate a copy, moves mutate
        std::sort(replicas.begin(), replicas.end(),
                  [](const ReplicaState& a, const ReplicaState& b) { return a.id < b.id; });
        for (const ReplicaState& re : replicas) {
            std::size_t best_dst = low.nodes.size();
            double best_util = 2.0;
            for (std::size_t j = 0; j < low.nodes.size(); ++j) {
                if (j == src_i) continue;
                bool donor = false;
                for (std::size_t d = 0; d < k; ++d)
                    if (order[d] == j) donor = true;
                if (donor) continue;
                NodeState& dst = low.nodes[j];
                SlotSums ds = SlotSums::of(dst);
                NodeLoad after = ds.load_plus(re);
                if (after.storage > dst.storage_capacity) continue;
                if (after.ru > dst.ru_capacity) continue;
                double util = after.ru / dst.ru_capacity;
                if (util < best_util ||
                    (util == best_util && best_dst < low.nodes.size() &&
                     dst.id < low.nodes[best_dst].id)) {
                    best_util = util;
                    best_dst = j;
                }
            }
            if (best_dst >= low.nodes.size()) {
                ok = false;
                break;
            }
            Migration m;
            m.replica_id = re.id;
            m.tenant = re.tenant;
            m.src_node = src.id;
            m.dst_node = low.nodes[best_dst].id;
            m.gain = 0.0;
            m.dimension = Dimension::kRu;
            apply_migration(low, m);
            local.push_back(m);
        }
        if (!ok) {
            for (auto it = local.rbegin(); it != local.rend(); ++it) {
                Migration undo = *it;
                std::swap(undo.src_node, undo.dst_node);
                apply_migration(low, undo);
            }
            rep.warnings.push_back("drain infeasible for node " + std::to_string(src.id) +
                                   " in pool " + low.name);
            continue;
        }
        rep.drain_moves.insert(rep.drain_moves.end(), local.begin(), local.end());
        drained_ids.push_back(src.id);
    }

    // Hand the emptied nodes to the hot pool.
    for (std::uint32_t id : drained_ids) {
        std::size_t idx = find_node(low, id);
        high.nodes.push_back(low.nodes[idx]);
        low.nodes.erase(low.nodes.begin() + static_cast<std::ptrdiff_t>(idx));
        rep.moved_nodes.push_back(id);
    }

    if (!rep.moved_nodes.empty()) {
        RoundsReport rl = run_rounds(low, 50, cfg, false);
        RoundsReport rh = run_rounds(high, 50, cfg, false);
        rep.follow_up.insert(rep.follow_up.end(), rl.moves.begin(), rl.moves.end());
        rep.follow_up.insert(rep.follow_up.end(), rh.moves.begin(), rh.moves.end());
    }
    return rep;
}

PoolState make_skewed_pool(const SkewedPoolSpec& spec) {
    PoolState pool;
    pool.name = "pool0";
    Rng rng(spec.seed);
    pool.nodes.resize(spec.nodes);
    for (std::uint32_t i = 0; i < spec.nodes; ++i) {
        pool.nodes[i].id = i;
        pool.nodes[i].ru_capacity = spec.node_ru_capacity;
        pool.nodes[i].storage_capacity = spec.node_storage_capacity;
    }
    std::uint64_t next_id = 0;
    for (std::uint32_t t = 0; t < spec.tenants; ++t) {
        int peak = static_cast<int>(rng.uniform_int(24));
        for (std::uint32_t j = 0; j < spec.replicas_per_tenant; ++j) {
            ReplicaState re;
            re.id = next_id++;
            re.tenant = t;
            double base = rng.lognormal(std::log(spec.replica_ru_base), spec.ru_sigma);
            for (int s = 0; s < kSlots; ++s) {
                double phase = 6.283185307179586 * static_cast<double>(s - peak) / 24.0;
                re.ru[s] = base * (0.65 + 0.35 * std::sin(phase));
            }
            double sto = rng.lognormal(std::log(spec.replica_storage_base), spec.storage_sigma);
            for (int s = 0; s < kSlots; ++s) re.storage[s] = sto;
            double u = rng.uniform01();
            auto idx = static_cast<std::size_t>(static_cast<double>(spec.nodes) *
                                                std::pow(u, spec.placement_skew));
            if (idx >= spec.nodes) idx = spec.nodes - 1;
            pool.nodes[idx].replicas.push_back(re);
        }
    }
    return pool;
}

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& j, std::initializer_list<const char*> known,
                         const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            if (it.key() == k) ok = true;
        if (!ok)
            throw std::invalid_argument("unknown key '" + it.key() + "' in " + where);
    }
}

LoadVector vector_from_json(const json& j) {
    LoadVector v{};
    if (j.is_number()) {
        v.fill(j.get<double>());
        return v;
    }
    if (!j.is_array() || j.size() != kSlots)
        throw std::invalid_argument("load vector must be a scalar or 24 numbers");
    for (int i = 0; i < kSlots; ++i) v[i] = j[i].get<double>();
    return v;
}

PoolState pool_from_json(const json& j) {
    reject_unknown_keys(j, {"name", "nodes"}, "pool");
    PoolState p;
    p.name = j.value("name", "pool");
    for (const json& nj : j.at("nodes")) {
        reject_unknown_keys(nj, {"id", "ru_capacity", "storage_capacity", "replicas"}, "node");
        NodeState n;
        n.id = nj.at("id").get<std::uint32_t>();
        n.ru_capacity = nj.at("ru_capacity").get<double>();
        n.storage_capacity = nj.at("storage_capacity").get<double>();
        if (nj.contains("replicas")) {
            for (const json& rj : nj.at("replicas")) {
                reject_unknown_keys(rj, {"id", "tenant", "ru", "storage"}, "replica");
                ReplicaState re;
                re.id = rj.at("id").get<std::uint64_t>();
                re.tenant = rj.at("tenant").get<std::uint32_t>();
                re.ru = vector_from_json(rj.at("ru"));
                re.storage = vector_from_json(rj.at("storage"));
                n.replicas.push_back(re);
            }
        }
        p.nodes.push_back(std::move(n));
    }
    return p;
}

}  // namespace

std::vector<PoolState> load_pool_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open pool state file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return pools_from_json(buf.str());
}

std::vector<PoolState> pools_from_json(const std::string& text) {
    json j = json::parse(text);

    std::vector<PoolState> pools;
    if (j.contains("generate")) {
        reject_unknown_keys(j, {"generate"}, "pool file");
        const json& g = j.at("generate");
        reject_unknown_keys(g,
                            {"seed", "nodes", "tenants", "replicas_per_tenant",
                             "node_ru_capacity", "node_storage_capacity", "replica_ru_base",
                             "ru_sigma", "replica_storage_base", "storage_sigma",
                             "placement_skew"},
                            "generate");
        SkewedPoolSpec spec;
        spec.seed = g.value("seed", spec.seed);
        spec.nodes = g.value("nodes", spec.nodes);
        spec.tenants = g.value("tenants", spec.tenants);
        spec.replicas_per_tenant = g.value("replicas_per_tenant", spec.replicas_per_tenant);
        spec.node_ru_capacity = g.value("node_ru_capacity", spec.node_ru_capacity);
        spec.node_storage_capacity = g.value("node_storage_capacity", spec.node_storage_capacity);
        spec.replica_ru_base = g.value("replica_ru_base", spec.replica_ru_base);
        spec.ru_sigma = g.value("ru_sigma", spec.ru_sigma);
        spec.replica_storage_base = g.value("replica_storage_base", spec.replica_storage_base);
        spec.storage_sigma = g.value("storage_sigma", spec.storage_sigma);
        spec.placement_skew = g.value("placement_skew", spec.placement_skew);
        pools.push_back(make_skewed_pool(spec));
        return pools;
    }
    if (j.contains("pools")) {
        reject_unknown_keys(j, {"pools"}, "pool file");
        for (const json& pj : j.at("pools")) pools.push_back(pool_from_json(pj));
        return pools;
    }
    pools.push_back(pool_from_json(j));
    return pools;
}

std::string pools_to_json(const std::vector<PoolState>& pools) {
    json out;
    out["pools"] = json::array();
    for (const PoolState& p : pools) {
        json pj;
        pj["name"] = p.name;
        pj["nodes"] = json::array();
        for (const NodeState& n : p.nodes) {
            json nj;
            nj["id"] = n.id;
            nj["ru_capacity"] = n.ru_capacity;
            nj["storage_capacity"] = n.storage_capacity;
            nj["replicas"] = json::array();
            for (const ReplicaState& re : n.replicas) {
                json rj;
                rj["id"] = re.id;
                rj["tenant"] = re.tenant;
                rj["ru"] = re.ru;
                rj["storage"] = re.storage;
                nj["replicas"].push_back(rj);
            }
            pj["nodes"].push_back(nj);
        }
        out["pools"].push_back(pj);
    }
    return out.dump(2);
}

}  // namespace abase::reschedule
