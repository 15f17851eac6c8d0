#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "abase/time.hpp"

namespace abase::domain {

using TenantId = std::uint32_t;
using PartitionId = std::uint32_t;
using NodeId = std::uint32_t;
using PoolId = std::uint32_t;

enum class RequestKind { kGet, kPut, kHLen, kHGetAll };

struct Request {
    std::uint64_t id = 0;
    TenantId tenant = 0;
    RequestKind kind = RequestKind::kGet;
    std::uint64_t key = 0;
    // Payload size: value size for writes, field-map size for hash scans.
    // Reads discover the stored size at the node.
    std::int64_t size_bytes = 0;
    SimTime arrival = 0;
};

struct Partition {
    PartitionId id = 0;
    TenantId tenant = 0;
    double quota_ru = 0.0;           // Q_P, RU per second
    std::uint64_t slot_start = 0;    // first owned slot of the 64-bit hash ring
    std::vector<NodeId> replicas;    // replicas[0] serves reads and writes
    double data_bytes = 0.0;
};

struct Tenant {
    TenantId id = 0;
    std::string name;
    double quota_ru = 0.0;  // Q_T, RU per second
    double storage_quota_bytes = 0.0;
    std::uint32_t proxy_count = 1;
    std::uint32_t fanout_groups = 1;  // hash groups for proxy-cache routing
    std::uint32_t replication = 1;
    std::vector<PartitionId> partitions;  // sorted by slot_start
};

struct DataNode {
    NodeId id = 0;
    PoolId pool = 0;
    double ru_capacity = 0.0;  // RU per second the node can serve
    double storage_capacity_bytes = 0.0;
};

struct ResourcePool {
    PoolId id = 0;
    std::string name;
    std::vector<NodeId> nodes;
};

struct PoolSpec {
    std::string name;
    std::uint32_t node_count = 1;
    double node_ru_capacity = 10'000.0;
    double node_storage_bytes = 1e12;
};

struct TenantSpec {
    std::string name;
    double quota_ru = 100.0;
    double storage_quota_bytes = 1e9;
    std::uint32_t partition_count = 1;
    std::uint32_t replication = 1;
    std::uint32_t proxy_count = 1;
    std::uint32_t fanout_groups = 1;
    std::string pool;                 // pool name the partitions live in
    double initial_fill = 0.5;        // fraction of storage quota already used
};

struct TopologySpec {
    std::vector<PoolSpec> pools;
    std::vector<TenantSpec> tenants;
    std::uint64_t hash_seed = 0x5eedULL;
};

struct World {
    std::vector<Tenant> tenants;
    std::vector<Partition> partitions;
    std::vector<DataNode> nodes;
    std::vector<ResourcePool> pools;
    std::uint64_t hash_seed = 0;

    const Tenant& tenant(TenantId id) const { return tenants[id]; }
    Tenant& tenant(TenantId id) { return tenants[id]; }
    const Partition& partition(PartitionId id) const { return partitions[id]; }
    Partition& partition(PartitionId id) { return partitions[id]; }
};

// Builds the world from a validated spec. Throws std::invalid_argument with
// the offending field on bad input (non-positive quotas, empty pools,
// replication above pool size, unknown pool names, groups above proxies).
World build_topology(const TopologySpec& spec);

// Maps a key to the tenant partition owning its hash slot.
PartitionId partition_of(const World& world, TenantId tenant, std::uint64_t key);

// Splits one partition in half by hash range; the new sibling inherits the
// replica set and half the data. Returns the new partition id.
PartitionId split_partition(World& world, PartitionId pid);

// Sum of partition quotas for a tenant (should track Q_T modulo rounding).
double partition_quota_sum(const World& world, TenantId tenant);

}  // namespace abase::domain
