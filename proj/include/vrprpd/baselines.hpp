#pragma once

#include <algorithm>
#include <array>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "local_search.hpp"
#include "repair.hpp"
#include "schedule.hpp"

namespace vrprpd {

enum class BaselineKind { NearestNeighbor, MaxRegret, ClarkeWright, GreedyDefer };

inline const char* to_string(BaselineKind k) {
    switch (k) {
        case BaselineKind::NearestNeighbor: return "nearest-neighbor";
        case BaselineKind::MaxRegret: return "max-regret";
        case BaselineKind::ClarkeWright: return "clarke-wright";
        case BaselineKind::GreedyDefer: return "greedy-defer";
    }
    return "?";
}

struct BaselineParams {
    double lambda = 10.0;  // GreedyDefer deferral multiplier, in [5, 15]
    InsertionSettings insertion{};
};

class InstanceInfeasible : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// One GreedyDefer choice: the cheapest raw dropoff cost available to the
// vehicle (inf if none) and the raw cost of its cheapest pickup (inf if none).
struct DeferDecision {
    int vehicle = 0;
    Op op;
    double min_dropoff_cost = kInfinity;
    double min_pickup_cost = kInfinity;
};

namespace detail {

// Event-driven constructor shared by NearestNeighbor and GreedyDefer. The
// vehicle with the smallest clock that still has a feasible action moves
// next; `choose` picks its operation.
struct DispatchState {
    const Instance* inst;
    std::vector<double> clock;
    std::vector<int> at;
    std::vector<LoadTracker> load;
    std::vector<char> dropped, picked;
    std::vector<double> ready;
    Solution sol;

    explicit DispatchState(const Instance& i)
        : inst(&i),
          clock(static_cast<std::size_t>(i.m()), 0.0),
          at(static_cast<std::size_t>(i.m()), 0),
          load(static_cast<std::size_t>(i.m())),
          dropped(static_cast<std::size_t>(i.n + 1), 0),
          picked(static_cast<std::size_t>(i.n + 1), 0),
          ready(static_cast<std::size_t>(i.n + 1), 0.0),
          sol(i.m()) {}

    bool can_drop(int v) const {
        if (!load[static_cast<std::size_t>(v)].admits(OpKind::Dropoff, inst->k())) return false;
        for (int c = 1; c <= inst->n; ++c)
            if (!dropped[static_cast<std::size_t>(c)]) return true;
        return false;
    }
    bool can_pick(int v) const {
        if (!load[static_cast<std::size_t>(v)].admits(OpKind::Pickup, inst->k())) return false;
        for (int c = 1; c <= inst->n; ++c)
            if (dropped[static_cast<std::size_t>(c)] && !picked[static_cast<std::size_t>(c)]) return true;
        return false;
    }
    double pickup_completion(int v, int c) const {
        const auto vi = static_cast<std::size_t>(v);
        return std::max(clock[vi] + inst->d(at[vi], c), ready[static_cast<std::size_t>(c)]);
    }
    void execute(int v, Op op) {
        const auto vi = static_cast<std::size_t>(v);
        const auto c = static_cast<std::size_t>(op.customer);
        if (op.kind == OpKind::Dropoff) {
            clock[vi] += inst->d(at[vi], op.customer);
            dropped[c] = 1;
            ready[c] = clock[vi] + inst->p(op.customer);
        } else {
            clock[vi] = pickup_completion(v, op.customer);
            picked[c] = 1;
        }
        load[vi].apply(op.kind);
        at[vi] = op.customer;
        sol.tours[vi].push_back(op);
    }
};

template <typename Choose>
Solution dispatch(const Instance& inst, Choose&& choose) {
    DispatchState state(inst);
    for (int step = 0; step < 2 * inst.n; ++step) {
        int vehicle = -1;
        for (int v = 0; v < inst.m(); ++v) {
            if (!state.can_drop(v) && !state.can_pick(v)) continue;
            if (vehicle < 0 || state.clock[static_cast<std::size_t>(v)] < state.clock[static_cast<std::size_t>(vehicle)])
                vehicle = v;
        }
        if (vehicle < 0) throw InstanceInfeasible("dispatch construction stalled");
        state.execute(vehicle, choose(state, vehicle));
    }
    return state.sol;
}

inline int nearest_undropped(const DispatchState& s, int v) {
    int best = -1;
    for (int c = 1; c <= s.inst->n; ++c) {
        if (s.dropped[static_cast<std::size_t>(c)]) continue;
        if (best < 0 || s.inst->d(s.at[static_cast<std::size_t>(v)], c) < s.inst->d(s.at[static_cast<std::size_t>(v)], best))
            best = c;
    }
    return best;
}

inline int soonest_pickup(const DispatchState& s, int v) {
    int best = -1;
    double best_t = kInfinity;
    for (int c = 1; c <= s.inst->n; ++c) {
        if (!s.dropped[static_cast<std::size_t>(c)] || s.picked[static_cast<std::size_t>(c)]) continue;
        const double t = s.pickup_completion(v, c);
        if (t < best_t) {
            best_t = t;
            best = c;
        }
    }
    return best;
}

}  // namespace detail

/// Nearest neighbour: the earliest vehicle drops at the closest undropped
/// customer while it carries resources; once empty (or nothing is left to
/// drop) it collects the pickup that completes soonest.
inline Solution nearest_neighbor(const Instance& inst) {
    return detail::dispatch(inst, [](const detail::DispatchState& s, int v) {
        if (s.can_drop(v)) return drop(detail::nearest_undropped(s, v));
        return pick(detail::soonest_pickup(s, v));
    });
}

/// Greedy defer: pickups are priced at lambda times their raw cost (travel
/// plus waiting until ready), dropoffs at their raw travel time; the cheaper
/// perceived option wins, dropoffs on ties.
inline Solution greedy_defer(const Instance& inst, double lambda, std::vector<DeferDecision>* log = nullptr) {
    return detail::dispatch(inst, [&](const detail::DispatchState& s, int v) {
        DeferDecision d;
        d.vehicle = v;
        int dc = -1, pc = -1;
        if (s.can_drop(v)) {
            dc = detail::nearest_undropped(s, v);
            d.min_dropoff_cost = inst.d(s.at[static_cast<std::size_t>(v)], dc);
        }
        if (s.can_pick(v)) {
            pc = detail::soonest_pickup(s, v);
            d.min_pickup_cost = s.pickup_completion(v, pc) - s.clock[static_cast<std::size_t>(v)];
        }
        const bool take_drop = dc >= 0 && (pc < 0 || d.min_dropoff_cost <= lambda * d.min_pickup_cost);
        d.op = take_drop ? drop(dc) : pick(pc);
        if (log) log->push_back(d);
        return d.op;
    });
}

/// Regret-2 insertion from an empty solution.
inline Solution max_regret(const Instance& inst, std::uint64_t seed, InsertionSettings settings = {}) {
    Solution sol(inst.m());
    std::vector<int> all(static_cast<std::size_t>(inst.n));
    std::iota(all.begin(), all.end(), 1);
    Rng rng(seed);
    settings.noise = 0.0;
    repair(inst, sol, all, RepairOp::Regret2, rng, settings);
    return sol;
}

struct Saving {
    int i = 0, j = 0;
    double value = 0.0;
};

inline double clarke_wright_saving(const Instance& inst, int i, int j) {
    return inst.d(0, i) + inst.d(0, j) - inst.d(i, j);
}

/// Savings construction on dropoff-only routes of at most k customers. Each
/// merged route becomes a trip (its dropoffs, then its pickups in the same
/// order); trips go to the least-loaded vehicle, longest first. Finally each
/// pickup is moved to its cheapest feasible position by the two-pass
/// estimate, keeping it where it is when nothing better simulates.
inline Solution clarke_wright(const Instance& inst) {
    const int n = inst.n;
    std::vector<std::vector<int>> routes(static_cast<std::size_t>(n + 1));
    std::vector<int> route_of(static_cast<std::size_t>(n + 1));
    for (int c = 1; c <= n; ++c) {
        routes[static_cast<std::size_t>(c)] = {c};
        route_of[static_cast<std::size_t>(c)] = c;
    }

    std::vector<Saving> savings;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) savings.push_back({i, j, clarke_wright_saving(inst, i, j)});
    std::stable_sort(savings.begin(), savings.end(), [](const Saving& a, const Saving& b) { return a.value > b.value; });

    for (const auto& s : savings) {
        if (s.value <= 0.0) break;
        const int ri = route_of[static_cast<std::size_t>(s.i)], rj = route_of[static_cast<std::size_t>(s.j)];
        if (ri == rj) continue;
        auto& a = routes[static_cast<std::size_t>(ri)];
        auto& b = routes[static_cast<std::size_t>(rj)];
        if (static_cast<int>(a.size() + b.size()) > inst.k()) continue;
        // i must end route a, j must start route b (routes may be reversed).
        if (a.back() != s.i) {
            if (a.front() != s.i) continue;
            std::reverse(a.begin(), a.end());
        }
        if (b.front() != s.j) {
            if (b.back() != s.j) continue;
            std::reverse(b.begin(), b.end());
        }
        for (int c : b) {
            a.push_back(c);
            route_of[static_cast<std::size_t>(c)] = ri;
        }
        b.clear();
    }

    struct Trip {
        std::vector<Op> ops;
        double duration = 0.0;
    };
    std::vector<Trip> trips;
    for (const auto& r : routes) {
        if (r.empty()) continue;
        Trip t;
        for (int c : r) t.ops.push_back(drop(c));
        for (int c : r) t.ops.push_back(pick(c));
        double clock = 0.0;
        int at = 0;
        std::vector<double> ready(static_cast<std::size_t>(n + 1), 0.0);
        for (const Op& op : t.ops) {
            clock += inst.d(at, op.customer);
            if (op.kind == OpKind::Dropoff) {
                ready[static_cast<std::size_t>(op.customer)] = clock + inst.p(op.customer);
            } else {
                clock = std::max(clock, ready[static_cast<std::size_t>(op.customer)]);
            }
            at = op.customer;
        }
        t.duration = clock + inst.d(at, 0);
        trips.push_back(std::move(t));
    }
    std::stable_sort(trips.begin(), trips.end(), [](const Trip& a, const Trip& b) { return a.duration > b.duration; });

    Solution sol(inst.m());
    std::vector<double> workload(static_cast<std::size_t>(inst.m()), 0.0);
    for (const auto& t : trips) {
        const auto v = static_cast<std::size_t>(std::min_element(workload.begin(), workload.end()) - workload.begin());
        sol.tours[v].insert(sol.tours[v].end(), t.ops.begin(), t.ops.end());
        workload[v] += t.duration;
    }

    TwoPassEstimator estimator(inst);
    Schedule scratch;
    for (int c = 1; c <= n; ++c) {
        Solution without = sol;
        for (auto& tour : without.tours) std::erase_if(tour, [c](const Op& op) { return op == pick(c); });
        std::vector<InsertionOption> options;
        for (int w = 0; w < inst.m(); ++w) {
            const int size = static_cast<int>(without.tours[static_cast<std::size_t>(w)].size());
            for (int pos = 0; pos <= size; ++pos) {
                Insertion ins{c, -1, 0, w, pos};
                const Estimate e = estimator(without, &ins);
                if (e.feasible()) options.push_back({ins, e.makespan + kTieWeight * e.total});
            }
        }
        std::stable_sort(options.begin(), options.end(),
                         [](const InsertionOption& a, const InsertionOption& b) { return a.cost < b.cost; });
        for (const auto& o : options) {
            Solution trial = without;
            apply_insertion(trial, o.ins);
            if (simulate(inst, trial, scratch) == ScheduleStatus::Ok) {
                sol = std::move(trial);
                break;
            }
        }
    }
    return sol;
}

inline Solution run_baseline(const Instance& inst, BaselineKind kind, const BaselineParams& params, std::uint64_t seed) {
    Solution sol;
    switch (kind) {
        case BaselineKind::NearestNeighbor: sol = nearest_neighbor(inst); break;
        case BaselineKind::MaxRegret: sol = max_regret(inst, seed, params.insertion); break;
        case BaselineKind::ClarkeWright: sol = clarke_wright(inst); break;
        case BaselineKind::GreedyDefer:
            if (params.lambda < 5.0 || params.lambda > 15.0)
                throw std::invalid_argument("greedy defer lambda must lie in [5, 15]");
            sol = greedy_defer(inst, params.lambda);
            break;
    }
    Schedule scratch;
    std::string why;
    if (simulate(inst, sol, scratch, &why) != ScheduleStatus::Ok)
        throw InstanceInfeasible(std::string(to_string(kind)) + " produced an infeasible solution: " + why);
    return sol;
}

/// First-improvement local search over intra-route 2-opt reversals,
/// single-operation relocation (intra and inter route) and pairwise swaps.
/// A move is kept when it lowers (makespan, total return time)
/// lexicographically; moves that break capacity or precedence fail to
/// simulate and are skipped. `move_budget` <= 0 means 50 * n.
inline Solution two_opt_improve(const Instance& inst, const Solution& input, long move_budget = 0) {
    if (move_budget <= 0) move_budget = 50L * inst.n;
    Solution current = input;
    Schedule sched;
    if (simulate(inst, current, sched) != ScheduleStatus::Ok) return current;
    double z = sched.makespan, total = total_return_time(sched);
    long evaluated = 0;

    auto try_move = [&](Solution& trial) {
        ++evaluated;
        if (simulate(inst, trial, sched) != ScheduleStatus::Ok) return false;
        const double tz = sched.makespan, tt = total_return_time(sched);
        if (!detail::better(tz, tt, z, total)) return false;
        current = std::move(trial);
        z = tz;
        total = tt;
        return true;
    };

    bool improved = true;
    while (improved && evaluated < move_budget) {
        improved = false;
        const int m = inst.m();
        // 2-opt: reverse tour[i..j].
        for (int v = 0; v < m && !improved && evaluated < move_budget; ++v) {
            const auto size = current.tours[static_cast<std::size_t>(v)].size();
            for (std::size_t i = 0; i + 1 < size && !improved && evaluated < move_budget; ++i) {
                for (std::size_t j = i + 1; j < size && !improved && evaluated < move_budget; ++j) {
                    Solution trial = current;
                    auto& t = trial.tours[static_cast<std::size_t>(v)];
                    std::reverse(t.begin() + static_cast<std::ptrdiff_t>(i), t.begin() + static_cast<std::ptrdiff_t>(j) + 1);
                    improved = try_move(trial);
                }
            }
        }
        // Relocate one operation.
        for (int v = 0; v < m && !improved && evaluated < move_budget; ++v) {
            const auto size = current.tours[static_cast<std::size_t>(v)].size();
            for (std::size_t i = 0; i < size && !improved && evaluated < move_budget; ++i) {
                for (int w = 0; w < m && !improved && evaluated < move_budget; ++w) {
                    const auto target_size = current.tours[static_cast<std::size_t>(w)].size() - (w == v ? 1 : 0);
                    for (std::size_t pos = 0; pos <= target_size && !improved && evaluated < move_budget; ++pos) {
                        if (w == v && pos == i) continue;
                        Solution trial = current;
                        auto& src = trial.tours[static_cast<std::size_t>(v)];
                        const Op op = src[i];
                        src.erase(src.begin() + static_cast<std::ptrdiff_t>(i));
                        auto& dst = trial.tours[static_cast<std::size_t>(w)];
                        dst.insert(dst.begin() + static_cast<std::ptrdiff_t>(pos), op);
                        improved = try_move(trial);
                    }
                }
            }
        }
        // Swap two operations.
        for (int v = 0; v < m && !improved && evaluated < move_budget; ++v) {
            const auto size_v = current.tours[static_cast<std::size_t>(v)].size();
            for (std::size_t i = 0; i < size_v && !improved && evaluated < move_budget; ++i) {
                for (int w = v; w < m && !improved && evaluated < move_budget; ++w) {
                    const auto size_w = current.tours[static_cast<std::size_t>(w)].size();
                    for (std::size_t j = (w == v ? i + 1 : 0); j < size_w && !improved && evaluated < move_budget; ++j) {
                        Solution trial = current;
                        std::swap(trial.tours[static_cast<std::size_t>(v)][i], trial.tours[static_cast<std::size_t>(w)][j]);
                        improved = try_move(trial);
                    }
                }
            }
        }
    }
    return current;
}

struct PortfolioEntry {
    std::string name;
    Solution solution;
    double makespan = kInfinity;
};

/// Every constructor (GreedyDefer at lambda 5, 10, 15), each followed by
/// two_opt_improve. The first entry with the lowest makespan wins.
inline std::vector<PortfolioEntry> heuristic_portfolio(const Instance& inst, std::uint64_t seed) {
    std::vector<PortfolioEntry> out;
    auto add = [&](std::string name, BaselineKind kind, double lambda) {
        BaselineParams params;
        params.lambda = lambda;
        Solution sol = two_opt_improve(inst, run_baseline(inst, kind, params, seed));
        const double z = evaluate(inst, sol).makespan;
        out.push_back({std::move(name), std::move(sol), z});
    };
    add("nearest-neighbor", BaselineKind::NearestNeighbor, 10.0);
    add("max-regret", BaselineKind::MaxRegret, 10.0);
    add("clarke-wright", BaselineKind::ClarkeWright, 10.0);
    for (double lambda : {5.0, 10.0, 15.0})
        add("greedy-defer-" + std::to_string(static_cast<int>(lambda)), BaselineKind::GreedyDefer, lambda);
    return out;
}

inline std::size_t best_entry(const std::vector<PortfolioEntry>& entries) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < entries.size(); ++i)
        if (entries[i].makespan < entries[best].makespan) best = i;
    return best;
}

inline Solution best_heuristic(const Instance& inst, std::uint64_t seed) {
    auto entries = heuristic_portfolio(inst, seed);
    return std::move(entries[best_entry(entries)].solution);
}

}  // namespace vrprpd
