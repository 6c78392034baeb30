#pragma once

#include <algorithm>
#include <chrono>
#include <stdexcept>
#include <string>
#include <vector>

#include "schedule.hpp"

namespace vrprpd {

struct OracleLimits {
    int max_customers = 6;  // hard ceiling 8
    long max_nodes = 50'000'000;
    double max_seconds = 60.0;
};

struct OracleResult {
    Solution solution;
    double makespan = kInfinity;
    bool optimal = false;
    long nodes = 0;
};

class InstanceTooLarge : public std::invalid_argument {
public:
    InstanceTooLarge(int n, int limit)
        : std::invalid_argument("oracle: " + std::to_string(n) + " customers exceeds the limit of " +
                                std::to_string(limit)) {}
};

// Budget exhausted; carries the best solution found so far.
class LimitExceeded : public std::runtime_error {
public:
    explicit LimitExceeded(OracleResult partial)
        : std::runtime_error("oracle: search budget exhausted"), result(std::move(partial)) {}
    OracleResult result;
};

namespace detail {

class ExactSearch {
public:
    ExactSearch(const Instance& inst, const OracleLimits& limits)
        : inst_(inst), limits_(limits), n_(inst.n), m_(inst.m()) {
        const auto size = static_cast<std::size_t>(n_ + 1);
        sp_.assign(size * size, 0.0);
        for (int i = 0; i <= n_; ++i)
            for (int j = 0; j <= n_; ++j) sp_[idx(i, j)] = inst.d(i, j);
        for (int k = 0; k <= n_; ++k)
            for (int i = 0; i <= n_; ++i)
                for (int j = 0; j <= n_; ++j) sp_[idx(i, j)] = std::min(sp_[idx(i, j)], sp_[idx(i, k)] + sp_[idx(k, j)]);

        const auto vehicles = static_cast<std::size_t>(m_);
        t_.assign(vehicles, 0.0);
        at_.assign(vehicles, 0);
        load_.assign(vehicles, LoadTracker{});
        dropped_.assign(size, 0);
        picked_.assign(size, 0);
        t_drop_.assign(size, 0.0);
        tours_.assign(vehicles, {});
    }

    OracleResult run(Solution initial, double initial_makespan) {
        best_ = std::move(initial);
        best_z_ = initial_makespan;
        start_ = std::chrono::steady_clock::now();
        dfs(0, -1, Op{});
        OracleResult r{best_, best_z_, !aborted_, nodes_};
        if (aborted_) throw LimitExceeded(r);
        return r;
    }

private:
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i * (n_ + 1) + j); }
    double sp(int i, int j) const { return sp_[idx(i, j)]; }

    double lower_bound() const {
        double lb = 0.0;
        for (int v = 0; v < m_; ++v) {
            const auto vi = static_cast<std::size_t>(v);
            if (!tours_[vi].empty()) lb = std::max(lb, t_[vi] + sp(at_[vi], 0));
        }
        for (int c = 1; c <= n_; ++c) {
            const auto ci = static_cast<std::size_t>(c);
            if (picked_[ci]) continue;
            double reach = kInfinity;
            for (int v = 0; v < m_; ++v) {
                const auto vi = static_cast<std::size_t>(v);
                reach = std::min(reach, t_[vi] + sp(at_[vi], c));
            }
            const double pickup = dropped_[ci] ? std::max(reach, t_drop_[ci] + inst_.p(c)) : reach + inst_.p(c);
            lb = std::max(lb, pickup + sp(c, 0));
        }
        return lb;
    }

    bool out_of_budget() {
        if (nodes_ >= limits_.max_nodes) return true;
        if ((nodes_ & 1023) == 0) {
            const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start_;
            if (elapsed.count() > limits_.max_seconds) return true;
        }
        return false;
    }

    struct Branch {
        double finish;
        int vehicle;
        Op op;
    };

    // Enumerates global operation sequences. Vehicles are identical, so a
    // new vehicle is only opened in index order; and a step onto a lower
    // vehicle than the previous one is allowed only for the pickup whose
    // dropoff was just made (any schedule has such a canonical order).
    void dfs(int scheduled, int last_vehicle, Op last_op) {
        if (aborted_) return;
        ++nodes_;
        if (out_of_budget()) {
            aborted_ = true;
            return;
        }
        if (scheduled == 2 * n_) {
            double z = 0.0;
            for (int v = 0; v < m_; ++v) {
                const auto vi = static_cast<std::size_t>(v);
                if (!tours_[vi].empty()) z = std::max(z, t_[vi] + inst_.d(at_[vi], 0));
            }
            if (z < best_z_ - 1e-9) {
                best_z_ = z;
                best_ = Solution(tours_);
            }
            return;
        }
        if (lower_bound() >= best_z_ - 1e-9) return;

        int opened = 0;
        while (opened < m_ && !tours_[static_cast<std::size_t>(opened)].empty()) ++opened;
        const int usable = std::min(m_, opened + 1);

        std::vector<Branch> branches;
        for (int v = 0; v < usable; ++v) {
            const auto vi = static_cast<std::size_t>(v);
            for (int c = 1; c <= n_; ++c) {
                const auto ci = static_cast<std::size_t>(c);
                const double arrive = t_[vi] + inst_.d(at_[vi], c);
                if (!dropped_[ci] && load_[vi].admits(OpKind::Dropoff, inst_.k())) {
                    if (v < last_vehicle) continue;
                    branches.push_back({arrive, v, drop(c)});
                } else if (dropped_[ci] && !picked_[ci] && load_[vi].admits(OpKind::Pickup, inst_.k())) {
                    if (v < last_vehicle && !(last_op.kind == OpKind::Dropoff && last_op.customer == c)) continue;
                    branches.push_back({std::max(arrive, t_drop_[ci] + inst_.p(c)), v, pick(c)});
                }
            }
        }
        std::stable_sort(branches.begin(), branches.end(),
                         [](const Branch& a, const Branch& b) { return a.finish < b.finish; });

        for (const Branch& b : branches) {
            const auto vi = static_cast<std::size_t>(b.vehicle);
            const auto ci = static_cast<std::size_t>(b.op.customer);
            const double t_saved = t_[vi];
            const int at_saved = at_[vi];
            const LoadTracker load_saved = load_[vi];
            t_[vi] = b.finish;
            at_[vi] = b.op.customer;
            tours_[vi].push_back(b.op);
            if (b.op.kind == OpKind::Dropoff) {
                dropped_[ci] = 1;
                t_drop_[ci] = b.finish;
            } else {
                picked_[ci] = 1;
            }
            load_[vi].apply(b.op.kind);
            dfs(scheduled + 1, b.vehicle, b.op);
            if (b.op.kind == OpKind::Dropoff) {
                dropped_[ci] = 0;
            } else {
                picked_[ci] = 0;
            }
            load_[vi] = load_saved;
            tours_[vi].pop_back();
            t_[vi] = t_saved;
            at_[vi] = at_saved;
            if (aborted_) return;
        }
    }

    const Instance& inst_;
    OracleLimits limits_;
    int n_, m_;
    std::vector<double> sp_;
    std::vector<double> t_;
    std::vector<int> at_;
    std::vector<LoadTracker> load_;
    std::vector<char> dropped_, picked_;
    std::vector<double> t_drop_;
    std::vector<std::vector<Op>> tours_;
    Solution best_;
    double best_z_ = kInfinity;
    long nodes_ = 0;
    bool aborted_ = false;
    std::chrono::steady_clock::time_point start_;
};

}  // namespace detail

/// Exact minimum makespan by depth-first branch and bound over global
/// operation sequences (pickups may wait on site). The serial schedule on
/// vehicle 0 seeds the incumbent.
inline OracleResult exact_solve(const Instance& inst, const OracleLimits& limits = {}) {
    const int limit = std::min(limits.max_customers, 8);
    if (inst.n > limit) throw InstanceTooLarge(inst.n, limit);
    Solution serial(inst.m());
    for (int c = 1; c <= inst.n; ++c) {
        serial.tours[0].push_back(drop(c));
        serial.tours[0].push_back(pick(c));
    }
    const double z = inst.n == 0 ? 0.0 : evaluate(inst, serial).makespan;
    return detail::ExactSearch(inst, limits).run(std::move(serial), z);
}

}  // namespace vrprpd
