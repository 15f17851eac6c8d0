#include "abase/wfq.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace abase::wfq {

namespace {
// Rebase threshold: past 2^53 doubles lose integer resolution and vft
// comparisons would start to tie spuriously.
constexpr double kRebaseLimit = 9.0e15;
}  // namespace

QueueClass classify(domain::RequestKind kind, double est_bytes, double large_threshold) {
    bool write = kind == domain::RequestKind::kPut;
    bool large = est_bytes >= large_threshold;
    if (write) return large ? QueueClass::kWriteLarge : QueueClass::kWriteSmall;
    return large ? QueueClass::kReadLarge : QueueClass::kReadSmall;
}

std::int64_t iops_cost(std::int64_t bytes, std::int64_t io_block_bytes) {
    if (bytes <= 0) return 1;
    return (bytes + io_block_bytes - 1) / io_block_bytes;
}

bool WfqQueue::before(const VftEntry& a, const VftEntry& b) const {
    if (a.vft != b.vft) return a.vft < b.vft;
    return a.seq < b.seq;
}

void WfqQueue::sift_up(std::size_t i) {
    while (i > 0) {
        std::size_t parent = (i - 1) / 2;
        if (!before(heap_[i], heap_[parent])) break;
        std::swap(heap_[i], heap_[parent]);
        i = parent;
    }
}

void WfqQueue::sift_down(std::size_t i) {
    const std::size_t n = heap_.size();
    while (true) {
        std::size_t l = 2 * i + 1, r = 2 * i + 2, best = i;
        if (l < n && before(heap_[l], heap_[best])) best = l;
        if (r < n && before(heap_[r], heap_[best])) best = r;
        if (best == i) break;
        std::swap(heap_[i], heap_[best]);
        i = best;
    }
}

VftEntry& WfqQueue::push(std::uint64_t payload, std::uint32_t tenant, double cost,
                         double partition_quota, double sum_quota, std::uint64_t seq,
                         SimTime now) {
    if (partition_quota <= 0.0)
        throw std::invalid_argument("wfq: partition quota must be positive");
    if (pre_vft_.size() <= tenant) pre_vft_.resize(tenant + 1, 0.0);
    if (backlog_.size() <= tenant) backlog_.resize(tenant + 1, 0);

    VftEntry e;
    e.payload = payload;
    e.tenant = tenant;
    e.cost = cost;
    e.vft = pre_vft_[tenant] + cost * sum_quota / partition_quota;
    e.seq = seq;
    e.enqueue_time = now;
    pre_vft_[tenant] = e.vft;

    heap_.push_back(e);
    sift_up(heap_.size() - 1);
    ++backlog_[tenant];
    rebase_if_needed();
    return heap_[0];
}

VftEntry& WfqQueue::push_fifo(std::uint64_t payload, std::uint32_t tenant, double cost,
                              std::uint64_t seq, SimTime now) {
    if (backlog_.size() <= tenant) backlog_.resize(tenant + 1, 0);
    VftEntry e;
    e.payload = payload;
    e.tenant = tenant;
    e.cost = cost;
    e.vft = static_cast<double>(seq);
    e.seq = seq;
    e.enqueue_time = now;
    heap_.push_back(e);
    sift_up(heap_.size() - 1);
    ++backlog_[tenant];
    return heap_[0];
}

VftEntry WfqQueue::pop() {
    VftEntry top = heap_.front();
    remove_at(0);
    return top;
}

void WfqQueue::remove_at(std::size_t i) {
    --backlog_[heap_[i].tenant];
    heap_[i] = heap_.back();
    heap_.pop_back();
    if (i < heap_.size()) {
        sift_down(i);
        sift_up(i);
    }
}

std::optional<std::size_t> WfqQueue::min_index_excluding(std::int64_t exclude_tenant) const {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < heap_.size(); ++i) {
        if (static_cast<std::int64_t>(heap_[i].tenant) == exclude_tenant) continue;
        if (!best || before(heap_[i], heap_[*best])) best = i;
    }
    return best;
}

std::size_t WfqQueue::tenant_backlog(std::uint32_t tenant) const {
    return tenant < backlog_.size() ? backlog_[tenant] : 0;
}

double WfqQueue::pre_vft(std::uint32_t tenant) const {
    return tenant < pre_vft_.size() ? pre_vft_[tenant] : 0.0;
}

void WfqQueue::rebase_if_needed() {
    double max_pre = 0.0;
    for (double v : pre_vft_) max_pre = std::max(max_pre, v);
    if (max_pre < kRebaseLimit) return;

    // Shift every live virtual time down by the smallest value still in
    // play; idle tenants floor at zero which keeps them no better off than
    // they already were.
    double base = max_pre;
    for (const VftEntry& e : heap_) base = std::min(base, e.vft);
    for (std::uint32_t t = 0; t < backlog_.size(); ++t)
        if (backlog_[t] > 0 && t < pre_vft_.size()) base = std::min(base, pre_vft_[t]);
    for (VftEntry& e : heap_) e.vft -= base;
    for (double& v : pre_vft_) v = std::max(0.0, v - base);
}

void Inflight::ensure(std::uint32_t tenant) {
    if (tenant_reads.size() <= tenant) {
        tenant_reads.resize(tenant + 1, 0);
        tenant_writes.resize(tenant + 1, 0);
    }
}

int Inflight::tenant_total(std::uint32_t tenant) const {
    if (tenant >= tenant_reads.size()) return 0;
    return tenant_reads[tenant] + tenant_writes[tenant];
}

bool CpuScheduler::enqueue(QueueClass c, std::uint64_t payload, std::uint32_t tenant,
                           double cost, double partition_quota, double sum_quota,
                           SimTime now) {
    WfqQueue& q = queues_[static_cast<int>(c)];
    if (limits_.backlog_limit > 0) {
        // Fair mode bounds each tenant's slice of queue memory so a slow
        // tenant cannot squeeze others out; FIFO mode models one shared
        // legacy queue.
        if (fair_) {
            if (q.tenant_backlog(tenant) >= limits_.backlog_limit) return false;
        } else {
            if (total_depth() >= limits_.backlog_limit) return false;
        }
    }
    if (fair_)
        q.push(payload, tenant, cost, partition_quota, sum_quota, next_seq_++, now);
    else
        q.push_fifo(payload, tenant, cost, next_seq_++, now);
    return true;
}

bool CpuScheduler::eligible(const VftEntry& e, QueueClass c) const {
    const bool write = is_write_class(c);
    if (write) {
        if (infl_.writes >= limits_.max_writes) return false;
        // The RU ceiling bounds in-flight write work, but a single oversized
        // write must still run when nothing else is in flight.
        if (infl_.writes > 0 && infl_.write_ru + e.cost > limits_.write_ru_ceiling)
            return false;
    } else {
        if (infl_.reads >= limits_.max_reads) return false;
    }
    if (fair_ && limits_.rule3_enabled) {
        const int kind_limit = write ? limits_.max_writes : limits_.max_reads;
        const int kind_cap =
            std::max(1, static_cast<int>(limits_.rule3_fraction * kind_limit));
        const int total_cap = std::max(
            1, static_cast<int>(limits_.rule3_fraction * (limits_.max_reads + limits_.max_writes)));
        const int kind_held = e.tenant < infl_.tenant_reads.size()
                                  ? (write ? infl_.tenant_writes[e.tenant]
                                           : infl_.tenant_reads[e.tenant])
                                  : 0;
        if (kind_held + 1 > kind_cap) return false;
        if (infl_.tenant_total(e.tenant) + 1 > total_cap) return false;
    }
    return true;
}

std::optional<Dispatched> CpuScheduler::dequeue(SimTime now) {
    (void)now;
    int best_q = -1;
    for (int i = 0; i < kClassCount; ++i) {
        if (queues_[i].empty()) continue;
        const VftEntry& head = queues_[i].top();
        if (!eligible(head, static_cast<QueueClass>(i))) continue;
        if (best_q < 0 || head.vft < queues_[best_q].top().vft ||
            (head.vft == queues_[best_q].top().vft && head.seq < queues_[best_q].top().seq))
            best_q = i;
    }
    if (best_q < 0) return std::nullopt;

    Dispatched d;
    d.queue_class = static_cast<QueueClass>(best_q);
    d.entry = queues_[best_q].pop();

    infl_.ensure(d.entry.tenant);
    if (is_write_class(d.queue_class)) {
        ++infl_.writes;
        ++infl_.tenant_writes[d.entry.tenant];
        infl_.write_ru += d.entry.cost;
    } else {
        ++infl_.reads;
        ++infl_.tenant_reads[d.entry.tenant];
    }
    return d;
}

void CpuScheduler::complete(QueueClass c, std::uint32_t tenant, double cost) {
    infl_.ensure(tenant);
    if (is_write_class(c)) {
        --infl_.writes;
        --infl_.tenant_writes[tenant];
        infl_.write_ru -= cost;
        if (infl_.write_ru < 1e-9) infl_.write_ru = 0.0;
    } else {
        --infl_.reads;
        --infl_.tenant_reads[tenant];
    }
}

bool CpuScheduler::queues_empty() const {
    for (const WfqQueue& q : queues_)
        if (!q.empty()) return false;
    return true;
}

std::size_t CpuScheduler::total_depth() const {
    std::size_t n = 0;
    for (const WfqQueue& q : queues_) n += q.size();
    return n;
}

void IoScheduler::enqueue(QueueClass c, std::uint64_t payload, std::uint32_t tenant,
                          double iops, double partition_quota, double sum_quota,
                          SimTime now) {
    WfqQueue& q = queues_[static_cast<int>(c)];
    if (fair_)
        q.push(payload, tenant, iops, partition_quota, sum_quota, next_seq_++, now);
    else
        q.push_fifo(payload, tenant, iops, next_seq_++, now);
}

std::optional<IoScheduler::Pick> IoScheduler::pick_entry(std::int64_t exclude_tenant) const {
    std::optional<Pick> best;
    for (int i = 0; i < kClassCount; ++i) {
        auto idx = queues_[i].min_index_excluding(exclude_tenant);
        if (!idx) continue;
        const VftEntry& e = queues_[i].entry_at(*idx);
        if (!best) {
            best = Pick{i, *idx, e.vft, e.seq};
        } else if (e.vft < best->vft || (e.vft == best->vft && e.seq < best->seq)) {
            best = Pick{i, *idx, e.vft, e.seq};
        }
    }
    return best;
}

std::vector<IoAssignment> IoScheduler::dispatch(SimTime now) {
    (void)now;
    std::vector<IoAssignment> out;
    while (true) {
        int idle_basic = -1;
        for (int t = 0; t < basic_; ++t)
            if (busy_tenant_[t] == kIdle) {
                idle_basic = t;
                break;
            }

        if (idle_basic >= 0) {
            auto pick = pick_entry(-1);
            if (!pick) break;
            VftEntry e = queues_[pick->queue].entry_at(pick->index);
            queues_[pick->queue].remove_at(pick->index);
            busy_tenant_[idle_basic] = e.tenant;
            out.push_back(IoAssignment{e, static_cast<QueueClass>(pick->queue), idle_basic, false});
            continue;
        }

        // Rule 4: every basic thread held by one tenant while another
        // tenant's work waits; burn a reserve thread for the waiter.
        std::int64_t mono = basic_ > 0 ? busy_tenant_[0] : kIdle;
        bool monopolized = basic_ > 0;
        for (int t = 1; t < basic_; ++t)
            if (busy_tenant_[t] != mono) monopolized = false;
        if (!monopolized || mono == kIdle) break;

        int idle_extra = -1;
        for (int t = basic_; t < static_cast<int>(busy_tenant_.size()); ++t)
            if (busy_tenant_[t] == kIdle) {
                idle_extra = t;
                break;
            }
        if (idle_extra < 0) break;

        auto pick = pick_entry(mono);
        if (!pick) break;
        VftEntry e = queues_[pick->queue].entry_at(pick->index);
        queues_[pick->queue].remove_at(pick->index);
        busy_tenant_[idle_extra] = e.tenant;
        ++extra_activations_;
        out.push_back(IoAssignment{e, static_cast<QueueClass>(pick->queue), idle_extra, true});
    }
    return out;
}

void IoScheduler::complete(int thread) { busy_tenant_[thread] = kIdle; }

bool IoScheduler::idle() const {
    for (std::int64_t t : busy_tenant_)
        if (t != kIdle) return false;
    return backlog() == 0;
}

std::size_t IoScheduler::backlog() const {
    std::size_t n = 0;
    for (const WfqQueue& q : queues_) n += q.size();
    return n;
}

}  // namespace abase::wfq
