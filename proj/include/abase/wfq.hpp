#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "abase/domain.hpp"
#include "abase/time.hpp"

namespace abase::wfq {

enum class QueueClass : std::uint8_t {
    kReadSmall = 0,
    kReadLarge = 1,
    kWriteSmall = 2,
    kWriteLarge = 3,
};
constexpr int kClassCount = 4;

inline bool is_write_class(QueueClass c) {
    return c == QueueClass::kWriteSmall || c == QueueClass::kWriteLarge;
}

// Read/write from the request kind, large/small from the (estimated) payload
// against the size threshold.
QueueClass classify(domain::RequestKind kind, double est_bytes, double large_threshold);

// Disk cost in IOPS: one operation per block touched.
std::int64_t iops_cost(std::int64_t bytes, std::int64_t io_block_bytes);

struct VftEntry {
    std::uint64_t payload = 0;  // opaque request handle owned by the caller
    std::uint32_t tenant = 0;
    double cost = 0.0;  // RU at the CPU layer, IOPS at the I/O layer
    double vft = 0.0;
    std::uint64_t seq = 0;  // FIFO tie-break for equal vft
    SimTime enqueue_time = 0;
};

// One class queue: min-heap on (vft, seq) plus the per-tenant cumulative
// preVFT map. preVFT advances at insertion, so a tenant's entries carry
// strictly non-decreasing finish times.
class WfqQueue {
  public:
    // vft = preVFT(tenant) + cost × sum_quota / partition_quota.
    // Throws std::invalid_argument when partition_quota is 0.
    VftEntry& push(std::uint64_t payload, std::uint32_t tenant, double cost,
                   double partition_quota, double sum_quota, std::uint64_t seq,
                   SimTime now);

    // FIFO insertion used when fair queueing is disabled: vft := seq.
    VftEntry& push_fifo(std::uint64_t payload, std::uint32_t tenant, double cost,
                        std::uint64_t seq, SimTime now);

    bool empty() const { return heap_.empty(); }
    std::size_t size() const { return heap_.size(); }
    const VftEntry& top() const { return heap_.front(); }
    VftEntry pop();

    // Removal of non-head entries; needed by the Rule 4 bypass which skips
    // past the monopolizing tenant.
    const VftEntry& entry_at(std::size_t i) const { return heap_[i]; }
    void remove_at(std::size_t i);
    std::optional<std::size_t> min_index_excluding(std::int64_t exclude_tenant) const;

    std::size_t tenant_backlog(std::uint32_t tenant) const;
    double pre_vft(std::uint32_t tenant) const;

  private:
    void sift_up(std::size_t i);
    void sift_down(std::size_t i);
    bool before(const VftEntry& a, const VftEntry& b) const;
    void rebase_if_needed();

    std::vector<VftEntry> heap_;
    std::vector<double> pre_vft_;           // indexed by tenant id
    std::vector<std::size_t> backlog_;      // entries queued per tenant
};

struct CpuLimits {
    int max_reads = 64;
    int max_writes = 32;
    double write_ru_ceiling = 256.0;
    bool rule3_enabled = true;
    double rule3_fraction = 0.9;
    // Queue memory: entries per (tenant, class) in fair mode, total in FIFO
    // mode. 0 disables the bound.
    std::size_t backlog_limit = 256;
};

// In-flight work between CPU dispatch and request completion at the node.
struct Inflight {
    int reads = 0;
    int writes = 0;
    double write_ru = 0.0;
    std::vector<int> tenant_reads;
    std::vector<int> tenant_writes;

    void ensure(std::uint32_t tenant);
    int tenant_total(std::uint32_t tenant) const;
};

struct Dispatched {
    VftEntry entry;
    QueueClass queue_class = QueueClass::kReadSmall;
};

// Upper scheduling layer: four class queues ordered by virtual finish time,
// concurrency limits (Rule 2), and the per-tenant 90% occupancy cap
// (Rule 3). A FIFO mode replaces fair ordering with arrival order for
// ablation runs.
class CpuScheduler {
  public:
    CpuScheduler(CpuLimits limits, bool fair) : limits_(limits), fair_(fair) {}

    // False when the backlog bound rejects the entry (caller drops the
    // request without consuming CPU).
    bool enqueue(QueueClass c, std::uint64_t payload, std::uint32_t tenant, double cost,
                 double partition_quota, double sum_quota, SimTime now);

    // Smallest-vft eligible head across classes, or nothing. Updates
    // in-flight accounting as if the request started service.
    std::optional<Dispatched> dequeue(SimTime now);

    // Releases in-flight slots when the request finishes at the node.
    void complete(QueueClass c, std::uint32_t tenant, double cost);

    bool queues_empty() const;
    std::size_t depth(QueueClass c) const { return queues_[static_cast<int>(c)].size(); }
    std::size_t total_depth() const;
    const Inflight& inflight() const { return infl_; }
    const CpuLimits& limits() const { return limits_; }
    const WfqQueue& queue(QueueClass c) const { return queues_[static_cast<int>(c)]; }

  private:
    bool eligible(const VftEntry& e, QueueClass c) const;

    CpuLimits limits_;
    bool fair_;
    WfqQueue queues_[kClassCount];
    Inflight infl_;
    std::uint64_t next_seq_ = 0;
};

struct IoAssignment {
    VftEntry entry;
    QueueClass queue_class = QueueClass::kReadSmall;
    int thread = 0;
    bool extra = false;
};

// Lower layer: same four-class fair queues costed in IOPS, served by a pool
// of basic threads plus reserve threads that activate only when one tenant
// holds every basic thread while another tenant waits (Rule 4).
class IoScheduler {
  public:
    IoScheduler(int basic_threads, int extra_threads, bool fair)
        : fair_(fair), busy_tenant_(static_cast<std::size_t>(basic_threads + extra_threads), kIdle),
          basic_(basic_threads) {}

    void enqueue(QueueClass c, std::uint64_t payload, std::uint32_t tenant, double iops,
                 double partition_quota, double sum_quota, SimTime now);

    // Assigns queued entries to idle threads; call after enqueue or
    // completion. Deterministic: lowest idle thread id first.
    std::vector<IoAssignment> dispatch(SimTime now);

    void complete(int thread);

    bool idle() const;
    std::size_t backlog() const;
    std::uint64_t extra_activations() const { return extra_activations_; }
    int basic_threads() const { return basic_; }
    int extra_threads() const { return static_cast<int>(busy_tenant_.size()) - basic_; }

  private:
    static constexpr std::int64_t kIdle = -1;

    struct Pick {
        int queue;
        std::size_t index;
        double vft;
        std::uint64_t seq;
    };

    // Best entry across the four queues; `exclude_tenant` filters for
    // Rule 4 assignments (-1 = no filter).
    std::optional<Pick> pick_entry(std::int64_t exclude_tenant) const;

    bool fair_;
    WfqQueue queues_[kClassCount];
    std::vector<std::int64_t> busy_tenant_;  // kIdle or tenant id, [0, basic) are basic
    int basic_;
    std::uint64_t next_seq_ = 0;
    std::uint64_t extra_activations_ = 0;
};

}  // namespace abase::wfq
