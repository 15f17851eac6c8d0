#include "abase/domain.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "abase/hash.hpp"

namespace abase::domain {

namespace {

[[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("topology: " + what);
}

}  // namespace

World build_topology(const TopologySpec& spec) {
    World world;
    world.hash_seed = spec.hash_seed;
    if (spec.pools.empty()) fail("at least one pool required");

    for (const PoolSpec& ps : spec.pools) {
        if (ps.node_count == 0) fail("pool '" + ps.name + "' has zero nodes");
        if (ps.node_ru_capacity <= 0.0) fail("pool '" + ps.name + "' node_ru_capacity must be positive");
        if (ps.node_storage_bytes <= 0.0) fail("pool '" + ps.name + "' node_storage_bytes must be positive");
        ResourcePool pool;
        pool.id = static_cast<PoolId>(world.pools.size());
        pool.name = ps.name;
        for (std::uint32_t i = 0; i < ps.node_count; ++i) {
            DataNode node;
            node.id = static_cast<NodeId>(world.nodes.size());
            node.pool = pool.id;
            node.ru_capacity = ps.node_ru_capacity;
            node.storage_capacity_bytes = ps.node_storage_bytes;
            pool.nodes.push_back(node.id);
            world.nodes.push_back(node);
        }
        world.pools.push_back(std::move(pool));
    }

    for (const TenantSpec& ts : spec.tenants) {
        if (ts.quota_ru <= 0.0) fail("tenant '" + ts.name + "' quota_ru must be positive");
        if (ts.storage_quota_bytes <= 0.0) fail("tenant '" + ts.name + "' storage_quota must be positive");
        if (ts.partition_count == 0) fail("tenant '" + ts.name + "' needs at least one partition");
        if (ts.replication == 0) fail("tenant '" + ts.name + "' replication must be at least 1");
        if (ts.proxy_count == 0) fail("tenant '" + ts.name + "' needs at least one proxy");
        if (ts.fanout_groups == 0 || ts.fanout_groups > ts.proxy_count)
            fail("tenant '" + ts.name + "' fanout_groups must be in [1, proxy_count]");
        if (ts.proxy_count % ts.fanout_groups != 0)
            fail("tenant '" + ts.name + "' fanout_groups must divide proxy_count");

        const ResourcePool* pool = nullptr;
        for (const ResourcePool& p : world.pools)
            if (p.name == ts.pool) pool = &p;
        if (pool == nullptr) fail("tenant '" + ts.name + "' references unknown pool '" + ts.pool + "'");
        if (ts.replication > pool->nodes.size())
            fail("tenant '" + ts.name + "' replication exceeds pool size");

        Tenant tenant;
        tenant.id = static_cast<TenantId>(world.tenants.size());
        tenant.name = ts.name;
        tenant.quota_ru = ts.quota_ru;
        tenant.storage_quota_bytes = ts.storage_quota_bytes;
        tenant.proxy_count = ts.proxy_count;
        tenant.fanout_groups = ts.fanout_groups;
        tenant.replication = ts.replication;

        const std::uint32_t n = ts.partition_count;
        // Equal slot ranges: partition i owns [i * 2^64 / n, (i+1) * 2^64 / n).
        const unsigned __int128 ring = (static_cast<unsigned __int128>(1) << 64);
        for (std::uint32_t i = 0; i < n; ++i) {
            Partition part;
            part.id = static_cast<PartitionId>(world.partitions.size());
            part.tenant = tenant.id;
            part.quota_ru = ts.quota_ru / static_cast<double>(n);
            part.slot_start = static_cast<std::uint64_t>(ring * i / n);
            part.data_bytes = ts.storage_quota_bytes * ts.initial_fill / static_cast<double>(n);
            for (std::uint32_t j = 0; j < ts.replication; ++j) {
                std::size_t idx = (static_cast<std::size_t>(tenant.id) + i * ts.replication + j) % pool->nodes.size();
                part.replicas.push_back(pool->nodes[idx]);
            }
            tenant.partitions.push_back(part.id);
            world.partitions.push_back(std::move(part));
        }
        world.tenants.push_back(std::move(tenant));
    }
    return world;
}

PartitionId partition_of(const World& world, TenantId tenant_id, std::uint64_t key) {
    const Tenant& tenant = world.tenants.at(tenant_id);
    const std::uint64_t slot = hash64(key, world.hash_seed);
    // Partitions are kept sorted by slot_start; find the last start <= slot.
    const auto& parts = tenant.partitions;
    std::size_t lo = 0, hi = parts.size();
    while (hi - lo > 1) {
        std::size_t mid = lo + (hi - lo) / 2;
        if (world.partitions[parts[mid]].slot_start <= slot)
            lo = mid;
        else
            hi = mid;
    }
    return parts[lo];
}

PartitionId split_partition(World& world, PartitionId pid) {
    Partition& old_part = world.partitions.at(pid);
    Tenant& tenant = world.tenants.at(old_part.tenant);

    // Upper end of the old range: next sibling's start, or ring wrap.
    auto it = std::find(tenant.partitions.begin(), tenant.partitions.end(), pid);
    std::uint64_t start = old_part.slot_start;
    unsigned __int128 end;
    if (std::next(it) != tenant.partitions.end())
        end = world.partitions[*std::next(it)].slot_start;
    else
        end = (static_cast<unsigned __int128>(1) << 64);
    std::uint64_t mid = static_cast<std::uint64_t>((static_cast<unsigned __int128>(start) + end) / 2);

    Partition sibling;
    sibling.id = static_cast<PartitionId>(world.partitions.size());
    sibling.tenant = old_part.tenant;
    sibling.quota_ru = old_part.quota_ru / 2.0;
    sibling.slot_start = mid;
    sibling.replicas = old_part.replicas;
    sibling.data_bytes = old_part.data_bytes / 2.0;

    old_part.quota_ru /= 2.0;
    old_part.data_bytes /= 2.0;

    tenant.partitions.insert(std::next(it), sibling.id);
    world.partitions.push_back(std::move(sibling));
    return static_cast<PartitionId>(world.partitions.size() - 1);
}

double partition_quota_sum(const World& world, TenantId tenant_id) {
    double sum = 0.0;
    for (PartitionId pid : world.tenants.at(tenant_id).partitions)
        sum += world.partitions[pid].quota_ru;
    return sum;
}

}  // namespace abase::domain
