#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "local_search.hpp"
#include "repair.hpp"
#include "schedule.hpp"

namespace vrprpd {

/// ALNS hyperparameters. Defaults are the published configuration except
/// max_iter (unpublished) and the insertion settings.
struct AlnsParams {
    double t0 = 0.30;  // initial temperature = t0 * z_init
    double alpha = 0.9998;
    double reheat_factor = 0.50;
    int stagnation_threshold = 2000;
    double reheat_gate = 0.01;  // reheat only below this fraction of T_init
    int weight_interval = 100;
    double reaction = 0.1;
    double sigma1 = 33.0;
    double sigma2 = 9.0;
    double sigma3 = 13.0;
    double min_weight = 0.1;
    int max_iter = 20000;
    int workers_per_pool = 32;
    int pools = 1;
    int pickup_reposition_interval = 200;
    int cross_agent_interval = 500;
    int best_check_interval = 1000;
    int pool_sync_interval = 100;

    double shaw_phi = 9.0;
    double shaw_chi = 3.0;
    double shaw_omega = 5.0;
    double worst_power = 6.0;

    int dropoff_candidates = 8;
    double noise = 0.025;
    double noise_probability = 0.5;

    void validate() const {
        if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alns: alpha must lie in (0, 1)");
        if (!(sigma1 > sigma3 && sigma3 > sigma2 && sigma2 > 0.0))
            throw std::invalid_argument("alns: scores must satisfy sigma1 > sigma3 > sigma2 > 0");
        if (!(t0 > 0.0)) throw std::invalid_argument("alns: t0 must be positive");
        if (weight_interval < 1 || pickup_reposition_interval < 1 || cross_agent_interval < 1 ||
            best_check_interval < 1 || pool_sync_interval < 1 || stagnation_threshold < 1)
            throw std::invalid_argument("alns: intervals must be at least 1");
        if (max_iter < 0 || workers_per_pool < 1 || pools < 1) throw std::invalid_argument("alns: bad run sizes");
        if (min_weight <= 0.0 || reaction < 0.0 || reaction > 1.0) throw std::invalid_argument("alns: bad weight settings");
    }
};

// ---------------------------------------------------------------------------
// Operator bookkeeping
// ---------------------------------------------------------------------------

enum class DestroyOp { Random, Worst, Shaw, Cluster, Route, CriticalPath };

inline constexpr std::array<DestroyOp, 6> kDestroyOps{DestroyOp::Random, DestroyOp::Worst, DestroyOp::Shaw,
                                                       DestroyOp::Cluster, DestroyOp::Route, DestroyOp::CriticalPath};

inline const char* to_string(DestroyOp op) {
    switch (op) {
        case DestroyOp::Random: return "random";
        case DestroyOp::Worst: return "worst";
        case DestroyOp::Shaw: return "shaw";
        case DestroyOp::Cluster: return "cluster";
        case DestroyOp::Route: return "route";
        case DestroyOp::CriticalPath: return "critical-path";
    }
    return "?";
}

struct OperatorStats {
    std::vector<double> weights, scores, attempts;

    explicit OperatorStats(std::size_t count = 0) : weights(count, 1.0), scores(count, 0.0), attempts(count, 0.0) {}
};

struct OperatorBank {
    OperatorStats destroy{kDestroyOps.size()};
    OperatorStats repair{kRepairOps.size()};
};

/// w <- max(min_weight, (1 - r) w + r s / a), with s / a taken as 0 when the
/// operator was never attempted; scores and attempts reset afterwards.
inline void update_weights(OperatorStats& ops, double reaction, double min_weight = 0.1) {
    for (std::size_t i = 0; i < ops.weights.size(); ++i) {
        const double rate = ops.attempts[i] > 0.0 ? ops.scores[i] / ops.attempts[i] : 0.0;
        ops.weights[i] = std::max(min_weight, (1.0 - reaction) * ops.weights[i] + reaction * rate);
        ops.scores[i] = 0.0;
        ops.attempts[i] = 0.0;
    }
}

inline void update_weights(OperatorBank& bank, double reaction, double min_weight = 0.1) {
    update_weights(bank.destroy, reaction, min_weight);
    update_weights(bank.repair, reaction, min_weight);
}

// Roulette wheel: index i with probability w_i / sum(w).
inline std::size_t roulette_select(const std::vector<double>& weights, Rng& rng) {
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    double u = rng.uniform01() * total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (u < weights[i]) return i;
        u -= weights[i];
    }
    return weights.size() - 1;
}

/// q_max = max(4, floor(0.05 n)), q_min = max(4, floor(q_max / 2)).
inline std::pair<int, int> removal_bounds(int n) {
    const int q_max = std::max(4, static_cast<int>(std::floor(0.05 * n)));
    const int q_min = std::max(4, q_max / 2);
    return {q_min, q_max};
}

/// Simulated-annealing acceptance; draws one uniform only for non-improving
/// candidates.
inline bool sa_accept(double z_candidate, double z_current, double temperature, Rng& rng) {
    if (z_candidate < z_current) return true;
    return rng.uniform01() < std::exp(-(z_candidate - z_current) / temperature);
}

// ---------------------------------------------------------------------------
// Destroy operators
// ---------------------------------------------------------------------------

inline double shaw_relatedness(const Instance& inst, const Schedule& s, int a, int b, double phi, double chi,
                               double omega) {
    const auto ai = static_cast<std::size_t>(a), bi = static_cast<std::size_t>(b);
    double r = phi * inst.d(a, b) + chi * std::abs(s.t_drop[ai] - s.t_drop[bi]);
    if (s.drop_vehicle[ai] != s.drop_vehicle[bi]) r += omega / 2.0;
    if (s.pickup_vehicle[ai] != s.pickup_vehicle[bi]) r += omega / 2.0;
    return r;
}

struct DestroyResult {
    Solution partial;
    std::vector<int> removed;
};

class EmptySolution : public std::runtime_error {
public:
    EmptySolution() : std::runtime_error("destroy on a solution without customers") {}
};

namespace detail {

// Estimated makespan drop from taking each customer out, indexed by id.
inline std::vector<double> removal_gains(const Instance& inst, const Solution& sol, const std::vector<int>& customers) {
    TwoPassEstimator estimator(inst);
    const double z = estimator(sol).makespan;
    std::vector<double> gain(static_cast<std::size_t>(inst.n + 1), 0.0);
    std::vector<char> mask(static_cast<std::size_t>(inst.n + 1), 0);
    for (int c : customers) {
        Solution without = sol;
        mask[static_cast<std::size_t>(c)] = 1;
        remove_customers(without, mask);
        mask[static_cast<std::size_t>(c)] = 0;
        gain[static_cast<std::size_t>(c)] = z - estimator(without).makespan;
    }
    return gain;
}

inline std::vector<int> customers_on(const Solution& sol, int v) {
    std::vector<int> out;
    for (const auto& op : sol.tours[static_cast<std::size_t>(v)]) out.push_back(op.customer);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace detail

/// Removes both operations of the selected customers. `schedule` must be the
/// evaluation of `sol` (Shaw and CriticalPath read event times from it).
inline DestroyResult destroy(const Instance& inst, const Solution& sol, const Schedule& schedule, DestroyOp op, int q,
                             Rng& rng, const AlnsParams& params = {}) {
    const int n = inst.n;
    if (n == 0 || sol.operation_count() == 0) throw EmptySolution();
    q = std::clamp(q, 1, n);
    const int q_min = std::min(removal_bounds(n).first, n);

    std::vector<char> chosen(static_cast<std::size_t>(n + 1), 0);
    std::vector<int> removed;
    auto take = [&](int c) {
        if (chosen[static_cast<std::size_t>(c)]) return;
        chosen[static_cast<std::size_t>(c)] = 1;
        removed.push_back(c);
    };
    std::vector<int> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), 1);

    // Adds the unremoved customers closest to the removed set until `target`.
    auto top_up_nearest = [&](int target) {
        while (static_cast<int>(removed.size()) < target) {
            int best = -1;
            double best_d = kInfinity;
            for (int c : all) {
                if (chosen[static_cast<std::size_t>(c)]) continue;
                for (int r : removed) {
                    if (inst.d(r, c) < best_d) {
                        best_d = inst.d(r, c);
                        best = c;
                    }
                }
            }
            if (best < 0) break;
            take(best);
        }
    };

    switch (op) {
        case DestroyOp::Random: {
            rng.shuffle(all);
            for (int i = 0; i < q; ++i) take(all[static_cast<std::size_t>(i)]);
            break;
        }
        case DestroyOp::Worst: {
            const auto gain = detail::removal_gains(inst, sol, all);
            std::vector<int> ranked = all;
            std::stable_sort(ranked.begin(), ranked.end(), [&](int a, int b) {
                return gain[static_cast<std::size_t>(a)] > gain[static_cast<std::size_t>(b)];
            });
            while (static_cast<int>(removed.size()) < q) {
                const double y = rng.uniform01();
                auto idx = static_cast<std::size_t>(std::pow(y, params.worst_power) * static_cast<double>(ranked.size()));
                idx = std::min(idx, ranked.size() - 1);
                take(ranked[idx]);
                ranked.erase(ranked.begin() + static_cast<std::ptrdiff_t>(idx));
            }
            break;
        }
        case DestroyOp::Shaw: {
            take(all[rng.index(all.size())]);
            while (static_cast<int>(removed.size()) < q) {
                const int ref = removed[rng.index(removed.size())];
                int best = -1;
                double best_r = kInfinity;
                for (int c : all) {
                    if (chosen[static_cast<std::size_t>(c)]) continue;
                    const double r =
                        shaw_relatedness(inst, schedule, ref, c, params.shaw_phi, params.shaw_chi, params.shaw_omega);
                    if (r < best_r) {
                        best_r = r;
                        best = c;
                    }
                }
                take(best);
            }
            break;
        }
        case DestroyOp::Cluster: {
            const int center = all[rng.index(all.size())];
            std::vector<int> order = all;
            std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
                if (a == center || b == center) return a == center && b != center;
                return inst.d(center, a) < inst.d(center, b);
            });
            for (int i = 0; i < q; ++i) take(order[static_cast<std::size_t>(i)]);
            break;
        }
        case DestroyOp::Route: {
            std::vector<int> nonempty;
            for (int v = 0; v < sol.vehicles(); ++v)
                if (!sol.tours[static_cast<std::size_t>(v)].empty()) nonempty.push_back(v);
            const int v = nonempty[rng.index(nonempty.size())];
            for (int c : detail::customers_on(sol, v)) take(c);
            top_up_nearest(q_min);
            break;
        }
        case DestroyOp::CriticalPath: {
            const int b = bottleneck_vehicle(schedule);
            auto on_route = detail::customers_on(sol, b);
            rng.shuffle(on_route);
            for (std::size_t i = 0; i < on_route.size() && static_cast<int>(removed.size()) < q; ++i) take(on_route[i]);
            if (static_cast<int>(removed.size()) < q_min) {
                std::vector<int> others;
                for (int c : all)
                    if (!chosen[static_cast<std::size_t>(c)]) others.push_back(c);
                const auto gain = detail::removal_gains(inst, sol, others);
                std::stable_sort(others.begin(), others.end(), [&](int a, int c) {
                    return gain[static_cast<std::size_t>(a)] > gain[static_cast<std::size_t>(c)];
                });
                for (std::size_t i = 0; i < others.size() && static_cast<int>(removed.size()) < q_min; ++i)
                    take(others[i]);
            }
            break;
        }
    }

    DestroyResult result{sol, std::move(removed)};
    remove_customers(result.partial, chosen);
    return result;
}

// ---------------------------------------------------------------------------
// Initial solution
// ---------------------------------------------------------------------------

inline double workload(const Instance& inst, int c) { return 2.0 * inst.d(0, c) + inst.p(c); }

/// Coordinate-free sweep: anchors a = argmax d(0, c), b = argmax d(a, c);
/// customers sorted by (d(a, c) - d(b, c), d(0, c), c).
inline std::vector<int> sweep_order(const Instance& inst) {
    int a = 1;
    for (int c = 2; c <= inst.n; ++c)
        if (inst.d(0, c) > inst.d(0, a)) a = c;
    int b = a;
    for (int c = 1; c <= inst.n; ++c)
        if (c != a && (b == a || inst.d(a, c) > inst.d(a, b))) b = c;
    std::vector<int> order(static_cast<std::size_t>(inst.n));
    std::iota(order.begin(), order.end(), 1);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
        const double kx = inst.d(a, x) - inst.d(b, x), ky = inst.d(a, y) - inst.d(b, y);
        if (kx != ky) return kx < ky;
        return inst.d(0, x) < inst.d(0, y);
    });
    return order;
}

/// Sweep sectors, then workload transfers from the heaviest to the lightest
/// sector while that narrows the spread and the spread is at least 10% of
/// the mean load.
inline std::vector<std::vector<int>> balanced_sectors(const Instance& inst) {
    const auto order = sweep_order(inst);
    const int m = inst.m(), n = inst.n;
    std::vector<std::vector<int>> sectors(static_cast<std::size_t>(m));
    for (int i = 0; i < n; ++i) sectors[static_cast<std::size_t>(static_cast<long>(i) * m / n)].push_back(order[static_cast<std::size_t>(i)]);

    auto load = [&](const std::vector<int>& s) {
        double total = 0.0;
        for (int c : s) total += workload(inst, c);
        return total;
    };
    for (int round = 0; round < n * m; ++round) {
        std::vector<double> loads;
        for (const auto& s : sectors) loads.push_back(load(s));
        const auto hi = static_cast<std::size_t>(std::max_element(loads.begin(), loads.end()) - loads.begin());
        const auto lo = static_cast<std::size_t>(std::min_element(loads.begin(), loads.end()) - loads.begin());
        const double mean = std::accumulate(loads.begin(), loads.end(), 0.0) / m;
        if (hi == lo || loads[hi] - loads[lo] < 0.1 * mean) break;
        std::size_t pick_idx = sectors[hi].size();
        double best_peak = loads[hi];
        for (std::size_t i = 0; i < sectors[hi].size(); ++i) {
            const double w = workload(inst, sectors[hi][i]);
            const double peak = std::max(loads[hi] - w, loads[lo] + w);
            if (peak < best_peak - 1e-9) {
                best_peak = peak;
                pick_idx = i;
            }
        }
        if (pick_idx == sectors[hi].size()) break;
        sectors[lo].push_back(sectors[hi][pick_idx]);
        sectors[hi].erase(sectors[hi].begin() + static_cast<std::ptrdiff_t>(pick_idx));
    }
    return sectors;
}

/// One vehicle serving `customers`: at each step the operation (pending
/// dropoff, or pickup of a resource it deployed) with the earliest completion
/// time, dropoffs first on ties.
inline std::vector<Op> nearest_feasible_route(const Instance& inst, const std::vector<int>& customers) {
    std::vector<Op> route;
    std::vector<int> pending = customers;
    std::sort(pending.begin(), pending.end());
    std::vector<std::pair<int, double>> deployed;  // (customer, ready time)
    double t = 0.0;
    int at = 0, q = inst.k();
    while (!pending.empty() || !deployed.empty()) {
        double best_t = kInfinity;
        int best_i = -1;
        bool best_drop = true;
        if (q > 0) {
            for (std::size_t i = 0; i < pending.size(); ++i) {
                const double done = t + inst.d(at, pending[i]);
                if (done < best_t) {
                    best_t = done;
                    best_i = static_cast<int>(i);
                }
            }
        }
        for (std::size_t i = 0; i < deployed.size(); ++i) {
            const double done = std::max(t + inst.d(at, deployed[i].first), deployed[i].second);
            if (done < best_t) {
                best_t = done;
                best_i = static_cast<int>(i);
                best_drop = false;
            }
        }
        const auto idx = static_cast<std::size_t>(best_i);
        if (best_drop) {
            const int c = pending[idx];
            route.push_back(drop(c));
            deployed.emplace_back(c, best_t + inst.p(c));
            pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(idx));
            --q;
            at = c;
        } else {
            const int c = deployed[idx].first;
            route.push_back(pick(c));
            deployed.erase(deployed.begin() + static_cast<std::ptrdiff_t>(idx));
            ++q;
            at = c;
        }
        t = best_t;
    }
    return route;
}

// D1 P1 D2 P2 ... on vehicle 0.
inline Solution serial_solution(const Instance& inst) {
    Solution sol(inst.m());
    for (int c = 1; c <= inst.n; ++c) {
        sol.tours[0].push_back(drop(c));
        sol.tours[0].push_back(pick(c));
    }
    return sol;
}

/// Sweep clustering, workload balancing and per-vehicle nearest-feasible
/// routing, refined by cross-vehicle customer relocation and pickup
/// reassignment until neither improves the makespan.
inline Solution construct_initial(const Instance& inst, std::uint64_t /*seed*/ = 0) {
    Solution sol(inst.m());
    const auto sectors = balanced_sectors(inst);
    for (int v = 0; v < inst.m(); ++v)
        sol.tours[static_cast<std::size_t>(v)] = nearest_feasible_route(inst, sectors[static_cast<std::size_t>(v)]);

    Schedule scratch;
    double z = makespan_or_inf(inst, sol, scratch);
    if (z == kInfinity) return serial_solution(inst);
    for (int round = 0; round < 50; ++round) {
        Solution next = pickup_repositioning(inst, cross_agent_relocation(inst, sol));
        const double nz = makespan_or_inf(inst, next, scratch);
        if (!(nz < z - 1e-9)) break;
        sol = std::move(next);
        z = nz;
    }
    return sol;
}

// ---------------------------------------------------------------------------
// Search
// ---------------------------------------------------------------------------

struct AlnsTraceRow {
    int iteration = 0;
    double best_makespan = 0.0;
    double temperature = 0.0;
    std::vector<double> destroy_weights;
    std::vector<double> repair_weights;
};

struct AlnsStats {
    int iterations = 0;
    double initial_makespan = 0.0;
    std::vector<std::pair<int, double>> best_trace;  // (iteration, best makespan) on every improvement
    std::array<long, 6> destroy_usage{};
    std::array<long, 4> repair_usage{};
    long rejected_candidates = 0;  // repair failures and deadlocked candidates
    int reheats = 0;
    int imports = 0;
    std::vector<AlnsTraceRow> rows;  // one per weight update
    OperatorBank final_bank;
};

struct AlnsResult {
    Solution best;
    double best_makespan = kInfinity;
    AlnsStats stats;
};

/// One ALNS search (the per-instance loop). Single threaded and
/// deterministic for a fixed seed; run_pool drives several of them.
class AlnsWorker {
public:
    AlnsWorker(const Instance& inst, const AlnsParams& params, std::uint64_t seed)
        : inst_(&inst),
          params_(params),
          rng_(seed),
          engine_(inst, InsertionSettings{params.dropoff_candidates, 0.0}) {
        params_.validate();
        current_ = construct_initial(inst, seed);
        z_ = evaluate(inst, current_).makespan;
        best_ = current_;
        z_best_ = z_;
        t_init_ = params_.t0 * z_;
        temperature_ = t_init_;
        stats_.initial_makespan = z_;
        stats_.best_trace.emplace_back(0, z_best_);
    }

    const Solution& best() const { return best_; }
    double best_makespan() const { return z_best_; }
    const Solution& current() const { return current_; }
    double current_makespan() const { return z_; }
    double temperature() const { return temperature_; }
    double initial_temperature() const { return t_init_; }
    const OperatorBank& bank() const { return bank_; }
    const AlnsStats& stats() const { return stats_; }

    // Adopts an incumbent found elsewhere when it beats this worker's best.
    bool import(const Solution& sol, double z) {
        if (!(z < z_best_)) return false;
        current_ = sol;
        z_ = z;
        best_ = sol;
        z_best_ = z;
        stagnation_ = 0;
        ++stats_.imports;
        stats_.best_trace.emplace_back(stats_.iterations, z_best_);
        return true;
    }

    void iterate(int iter) {
        const Instance& inst = *inst_;
        ++stats_.iterations;

        const std::size_t di = roulette_select(bank_.destroy.weights, rng_);
        const std::size_t ri = roulette_select(bank_.repair.weights, rng_);
        bank_.destroy.attempts[di] += 1.0;
        bank_.repair.attempts[ri] += 1.0;
        ++stats_.destroy_usage[di];
        ++stats_.repair_usage[ri];

        const auto [q_min, q_max] = removal_bounds(inst.n);
        const int q = static_cast<int>(rng_.uniform_int(q_min, q_max));

        if (simulate(inst, current_, sched_) == ScheduleStatus::Ok) {
            DestroyResult d = destroy(inst, current_, sched_, kDestroyOps[di], q, rng_, params_);
            engine_.set_noise(rng_.bernoulli(params_.noise_probability) ? params_.noise : 0.0);
            bool ok = true;
            try {
                repair(inst, d.partial, d.removed, kRepairOps[ri], rng_, engine_);
            } catch (const RepairFailed&) {
                ok = false;
            }
            const double z_new = ok ? makespan_or_inf(inst, d.partial, sched_) : kInfinity;
            if (z_new == kInfinity) {
                ++stats_.rejected_candidates;
            } else if (z_new < z_) {
                current_ = std::move(d.partial);
                z_ = z_new;
                credit(di, ri, params_.sigma2);
                if (z_new < z_best_) {
                    record_best();
                    credit(di, ri, params_.sigma1 - params_.sigma2);
                }
            } else if (rng_.uniform01() < std::exp(-(z_new - z_) / temperature_)) {
                current_ = std::move(d.partial);
                z_ = z_new;
                credit(di, ri, params_.sigma3);
            }
        }

        temperature_ *= params_.alpha;
        ++stagnation_;
        if (stagnation_ >= params_.stagnation_threshold && temperature_ < params_.reheat_gate * t_init_) {
            temperature_ = params_.reheat_factor * params_.t0 * z_best_;
            stagnation_ = 0;
            ++stats_.reheats;
        }

        if (iter % params_.weight_interval == 0) {
            update_weights(bank_, params_.reaction, params_.min_weight);
            stats_.rows.push_back({iter, z_best_, temperature_, bank_.destroy.weights, bank_.repair.weights});
        }
        if (iter % params_.pickup_reposition_interval == 0) local_step(pickup_repositioning(inst, current_));
        if (iter % params_.cross_agent_interval == 0) local_step(cross_agent_relocation(inst, current_));
    }

    AlnsResult result() const {
        AlnsResult r{best_, z_best_, stats_};
        r.stats.final_bank = bank_;
        return r;
    }

private:
    void credit(std::size_t di, std::size_t ri, double score) {
        bank_.destroy.scores[di] += score;
        bank_.repair.scores[ri] += score;
    }

    void record_best() {
        best_ = current_;
        z_best_ = z_;
        stagnation_ = 0;
        stats_.best_trace.emplace_back(stats_.iterations, z_best_);
    }

    void local_step(Solution improved) {
        const double z = makespan_or_inf(*inst_, improved, sched_);
        if (!(z < z_)) return;
        current_ = std::move(improved);
        z_ = z;
        if (z_ < z_best_) record_best();
    }

    const Instance* inst_;
    AlnsParams params_;
    Rng rng_;
    InsertionEngine engine_;
    Schedule sched_;
    OperatorBank bank_;
    Solution current_, best_;
    double z_ = 0.0, z_best_ = 0.0;
    double temperature_ = 0.0, t_init_ = 0.0;
    int stagnation_ = 0;
    AlnsStats stats_;
};

inline AlnsResult run_alns(const Instance& inst, const AlnsParams& params, std::uint64_t seed) {
    AlnsWorker worker(inst, params, seed);
    for (int iter = 1; iter <= params.max_iter; ++iter) worker.iterate(iter);
    return worker.result();
}

// ---------------------------------------------------------------------------
// Parallel pool
// ---------------------------------------------------------------------------

/// Lock-protected best solution shared between workers.
class SharedIncumbent {
public:
    // Replaces the stored solution if `z` is strictly better.
    bool offer(const Solution& sol, double z) {
        std::lock_guard lock(mutex_);
        if (!(z < z_)) return false;
        sol_ = sol;
        z_ = z;
        return true;
    }

    std::pair<Solution, double> snapshot() const {
        std::lock_guard lock(mutex_);
        return {sol_, z_};
    }

    double makespan() const {
        std::lock_guard lock(mutex_);
        return z_;
    }

private:
    mutable std::mutex mutex_;
    Solution sol_;
    double z_ = kInfinity;
};

struct PoolStats {
    int workers = 0;
    int pools = 0;
    std::vector<double> worker_best;  // each worker's own best makespan
    std::vector<AlnsStats> worker_stats;
};

struct PoolResult {
    Solution best;
    double best_makespan = kInfinity;
    PoolStats stats;
};

/// `params.pools` pools of `pool_size` workers each, one thread per worker,
/// worker w seeded with derive_seed(seed, w). Workers publish improvements
/// to their pool's incumbent and, every best_check_interval iterations,
/// import it when it beats their own best. Every pool_sync_interval
/// iterations each worker reconciles its pool's incumbent with the global
/// one. With a single worker the run equals run_alns(derive_seed(seed, 0)).
inline PoolResult run_pool(const Instance& inst, const AlnsParams& params, int pool_size, std::uint64_t seed) {
    if (pool_size < 1) throw std::invalid_argument("run_pool: pool_size must be at least 1");
    params.validate();
    const int pools = params.pools;
    const int total = pools * pool_size;

    std::vector<SharedIncumbent> pool_best(static_cast<std::size_t>(pools));
    SharedIncumbent global;
    std::vector<AlnsResult> results(static_cast<std::size_t>(total));

    auto work = [&](int w) {
        const auto pool = static_cast<std::size_t>(w / pool_size);
        AlnsWorker worker(inst, params, derive_seed(seed, static_cast<std::uint64_t>(w)));
        pool_best[pool].offer(worker.best(), worker.best_makespan());
        double published = worker.best_makespan();
        for (int iter = 1; iter <= params.max_iter; ++iter) {
            worker.iterate(iter);
            if (worker.best_makespan() < published) {
                published = worker.best_makespan();
                pool_best[pool].offer(worker.best(), published);
            }
            if (pools > 1 && iter % params.pool_sync_interval == 0) {
                auto [pool_sol, pool_z] = pool_best[pool].snapshot();
                global.offer(pool_sol, pool_z);
                auto [global_sol, global_z] = global.snapshot();
                pool_best[pool].offer(global_sol, global_z);
            }
            if (iter % params.best_check_interval == 0) {
                auto [sol, z] = pool_best[pool].snapshot();
                if (worker.import(sol, z)) published = z;
            }
        }
        results[static_cast<std::size_t>(w)] = worker.result();
    };

    if (total == 1) {
        work(0);
    } else {
        std::vector<std::jthread> threads;
        threads.reserve(static_cast<std::size_t>(total));
        for (int w = 0; w < total; ++w) threads.emplace_back(work, w);
    }

    PoolResult out;
    out.stats.workers = total;
    out.stats.pools = pools;
    for (const auto& r : results) {
        out.stats.worker_best.push_back(r.best_makespan);
        out.stats.worker_stats.push_back(r.stats);
        if (r.best_makespan < out.best_makespan) {
            out.best_makespan = r.best_makespan;
            out.best = r.best;
        }
    }
    return out;
}

}  // namespace vrprpd
