#pragma once

#include <algorithm>
#include <functional>
#include <vector>

#include "vrprpd/vrprpd.hpp"

namespace vrprpd::testing {

// d(0,1)=10, d(0,2)=12, d(1,2)=5, p=20 for both customers.
inline Instance toy2(int m, int k) {
    return make_instance({{0, 10, 12}, {10, 0, 5}, {12, 5, 0}}, {20, 20}, {m, k}, "toy2");
}

inline Instance single(int m = 1, int k = 1) { return make_instance({{0, 10}, {10, 0}}, {20}, {m, k}, "single"); }

/// Symmetric integer matrix of points on a grid (Manhattan metric) with
/// integer processing times.
inline Instance random_instance(int n, int m, int k, Rng& rng, int span = 30, int pmax = 60) {
    std::vector<std::pair<int, int>> pts;
    for (int i = 0; i <= n; ++i)
        pts.emplace_back(static_cast<int>(rng.uniform_int(0, span)), static_cast<int>(rng.uniform_int(0, span)));
    std::vector<std::vector<double>> d(static_cast<std::size_t>(n + 1), std::vector<double>(static_cast<std::size_t>(n + 1)));
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
            const auto& a = pts[static_cast<std::size_t>(i)];
            const auto& b = pts[static_cast<std::size_t>(j)];
            d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = std::abs(a.first - b.first) + std::abs(a.second - b.second);
        }
    std::vector<double> p;
    for (int c = 1; c <= n; ++c) p.push_back(static_cast<double>(rng.uniform_int(0, pmax)));
    return make_instance(d, p, {m, k}, "random");
}

/// Every permutation of the 2n operations cut into m consecutive tours,
/// each passed to `visit`.
inline void for_each_solution(int n, int m, const std::function<void(const Solution&)>& visit) {
    std::vector<Op> ops;
    for (int c = 1; c <= n; ++c) {
        ops.push_back(drop(c));
        ops.push_back(pick(c));
    }
    auto less = [](const Op& a, const Op& b) {
        return std::make_pair(a.customer, a.kind) < std::make_pair(b.customer, b.kind);
    };
    std::sort(ops.begin(), ops.end(), less);
    const int total = static_cast<int>(ops.size());
    std::vector<int> cuts(static_cast<std::size_t>(m - 1), 0);
    std::function<void(std::size_t, int)> split = [&](std::size_t i, int from) {
        if (i == cuts.size()) {
            Solution sol(m);
            int start = 0;
            for (int v = 0; v < m; ++v) {
                const int end = v + 1 < m ? cuts[static_cast<std::size_t>(v)] : total;
                for (int j = start; j < end; ++j) sol.tours[static_cast<std::size_t>(v)].push_back(ops[static_cast<std::size_t>(j)]);
                start = end;
            }
            visit(sol);
            return;
        }
        for (int c = from; c <= total; ++c) {
            cuts[i] = c;
            split(i + 1, c);
        }
    };
    do {
        split(0, 0);
    } while (std::next_permutation(ops.begin(), ops.end(), less));
}

struct Reference {
    ScheduleStatus status = ScheduleStatus::Ok;
    std::vector<double> t_drop, t_pickup;
    double makespan = 0.0;
};

/// Independent timing oracle: load check per route over every depot load, then one
/// operation at a time on the lowest-index vehicle that can move.
inline Reference reference_evaluate(const Instance& inst, const Solution& sol) {
    Reference r;
    const int m = sol.vehicles();
    // Some depot load 0..k must keep the route within [0, k].
    for (const auto& tour : sol.tours) {
        bool fits = false;
        for (int start = 0; start <= inst.k() && !fits; ++start) {
            int q = start;
            fits = true;
            for (const Op& op : tour) {
                q += op.kind == OpKind::Dropoff ? -1 : 1;
                fits = fits && q >= 0 && q <= inst.k();
            }
        }
        if (!fits) {
            r.status = ScheduleStatus::CapacityViolation;
            return r;
        }
    }
    r.t_drop.assign(static_cast<std::size_t>(inst.n + 1), -1);
    r.t_pickup.assign(static_cast<std::size_t>(inst.n + 1), -1);
    std::vector<std::size_t> pos(static_cast<std::size_t>(m), 0);
    std::vector<double> clock(static_cast<std::size_t>(m), 0);
    std::vector<int> at(static_cast<std::size_t>(m), 0);
    for (;;) {
        int mover = -1;
        bool pending = false;
        for (int v = 0; v < m && mover < 0; ++v) {
            const auto& tour = sol.tours[static_cast<std::size_t>(v)];
            const auto vi = static_cast<std::size_t>(v);
            if (pos[vi] == tour.size()) continue;
            pending = true;
            const Op op = tour[pos[vi]];
            if (op.kind == OpKind::Dropoff || r.t_drop[static_cast<std::size_t>(op.customer)] >= 0) mover = v;
        }
        if (mover < 0) {
            if (pending) r.status = ScheduleStatus::Deadlock;
            break;
        }
        const auto vi = static_cast<std::size_t>(mover);
        const Op op = sol.tours[vi][pos[vi]++];
        const auto c = static_cast<std::size_t>(op.customer);
        double t = clock[vi] + inst.d(at[vi], op.customer);
        if (op.kind == OpKind::Dropoff) {
            r.t_drop[c] = t;
        } else {
            t = std::max(t, r.t_drop[c] + inst.p(op.customer));
            r.t_pickup[c] = t;
        }
        clock[vi] = t;
        at[vi] = op.customer;
    }
    if (r.status != ScheduleStatus::Ok) return r;
    for (int v = 0; v < m; ++v) {
        const auto vi = static_cast<std::size_t>(v);
        if (!sol.tours[vi].empty()) r.makespan = std::max(r.makespan, clock[vi] + inst.d(at[vi], 0));
    }
    return r;
}

struct BruteForce {
    double makespan = kInfinity;
    Solution best;
    long feasible = 0;
};

/// Minimum makespan over every solution, by full enumeration.
inline BruteForce brute_force(const Instance& inst) {
    BruteForce out;
    Schedule scratch;
    for_each_solution(inst.n, inst.m(), [&](const Solution& sol) {
        if (simulate(inst, sol, scratch) != ScheduleStatus::Ok) return;
        ++out.feasible;
        if (scratch.makespan < out.makespan) {
            out.makespan = scratch.makespan;
            out.best = sol;
        }
    });
    return out;
}

/// Random operation lists: each customer's D and P are placed on uniformly
/// chosen vehicles in a uniformly shuffled order.
inline Solution random_solution(const Instance& inst, Rng& rng) {
    std::vector<Op> ops;
    for (int c = 1; c <= inst.n; ++c) {
        ops.push_back(drop(c));
        ops.push_back(pick(c));
    }
    rng.shuffle(ops);
    Solution sol(inst.m());
    for (const Op& op : ops) sol.tours[rng.index(static_cast<std::size_t>(inst.m()))].push_back(op);
    return sol;
}

}  // namespace vrprpd::testing
