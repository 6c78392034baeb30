#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "instance.hpp"
#include "solution.hpp"

namespace vrprpd {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class ScheduleStatus { Ok, CapacityViolation, Deadlock, Malformed };

inline const char* to_string(ScheduleStatus s) {
    switch (s) {
        case ScheduleStatus::Ok: return "ok";
        case ScheduleStatus::CapacityViolation: return "capacity violation";
        case ScheduleStatus::Deadlock: return "deadlock";
        case ScheduleStatus::Malformed: return "malformed solution";
    }
    return "unknown";
}

class ScheduleError : public std::runtime_error {
public:
    ScheduleError(ScheduleStatus status, const std::string& detail)
        : std::runtime_error(std::string(to_string(status)) + ": " + detail), status_(status) {}
    ScheduleStatus status() const noexcept { return status_; }

private:
    ScheduleStatus status_;
};

struct Event {
    int customer = 0;
    OpKind kind = OpKind::Dropoff;
    double arrival = 0.0;
    double departure = 0.0;  // equals arrival for dropoffs; pickup time for pickups
    int load_after = 0;

    double time() const { return kind == OpKind::Dropoff ? arrival : departure; }
};

/// Realized event times of a solution.
///
/// Indexing: t_drop / t_pickup / drop_vehicle / pickup_vehicle by customer
/// id (entry 0 unused), events / return_time by vehicle.
struct Schedule {
    std::vector<std::vector<Event>> events;
    std::vector<double> t_drop;
    std::vector<double> t_pickup;
    std::vector<int> drop_vehicle;
    std::vector<int> pickup_vehicle;
    std::vector<double> return_time;
    double makespan = 0.0;
};

namespace detail {

inline ScheduleStatus check_structure(const Instance& inst, const Solution& sol, std::string* why) {
    if (sol.vehicles() != inst.m()) {
        if (why) *why = "expected " + std::to_string(inst.m()) + " tours, got " + std::to_string(sol.vehicles());
        return ScheduleStatus::Malformed;
    }
    std::vector<unsigned char> seen(static_cast<std::size_t>(inst.n + 1), 0);
    for (const auto& tour : sol.tours) {
        for (const auto& op : tour) {
            if (op.customer < 1 || op.customer > inst.n) {
                if (why) *why = "customer id " + std::to_string(op.customer) + " out of range";
                return ScheduleStatus::Malformed;
            }
            const unsigned char bit = op.kind == OpKind::Dropoff ? 1 : 2;
            auto& s = seen[static_cast<std::size_t>(op.customer)];
            if (s & bit) {
                if (why) *why = "customer " + std::to_string(op.customer) + " has a duplicated operation";
                return ScheduleStatus::Malformed;
            }
            s |= bit;
        }
    }
    for (int c = 1; c <= inst.n; ++c) {
        if (seen[static_cast<std::size_t>(c)] != 3) {
            if (why) *why = "customer " + std::to_string(c) + " lacks a dropoff or a pickup";
            return ScheduleStatus::Malformed;
        }
    }
    return ScheduleStatus::Ok;
}

// The load sequence of a route is fixed by its order, so capacity can be
// checked before any timing.
inline ScheduleStatus check_capacity(const Instance& inst, const Solution& sol, std::string* why) {
    for (std::size_t v = 0; v < sol.tours.size(); ++v) {
        LoadTracker load;
        for (const auto& op : sol.tours[v]) {
            if (!load.admits(op.kind, inst.k())) {
                if (why)
                    *why = "vehicle " + std::to_string(v) + (op.kind == OpKind::Dropoff ? " has no resource left for D" : " has no room for P") +
                           std::to_string(op.customer);
                return ScheduleStatus::CapacityViolation;
            }
            load.apply(op.kind);
        }
    }
    return ScheduleStatus::Ok;
}

inline int start_load(const std::vector<Op>& tour) {
    LoadTracker load;
    for (const auto& op : tour) load.apply(op.kind);
    return load.start_load();
}

}  // namespace detail

/// Event-driven simulation without exceptions; `out` buffers are reused.
///
/// Vehicles start at the depot at t = 0 carrying the resources their tour
/// deploys before it retrieves any, never more than k. A dropoff
/// happens on arrival. A pickup departs at max(arrival, T_drop + p), waiting
/// on site if needed, and blocks until its dropoff has been executed by some
/// vehicle. Vehicles advance round-robin; a round without progress while
/// operations remain is a deadlock.
inline ScheduleStatus simulate(const Instance& inst, const Solution& sol, Schedule& out, std::string* why = nullptr) {
    if (auto s = detail::check_structure(inst, sol, why); s != ScheduleStatus::Ok) return s;
    if (auto s = detail::check_capacity(inst, sol, why); s != ScheduleStatus::Ok) return s;

    const auto m = static_cast<std::size_t>(inst.m());
    const auto locs = static_cast<std::size_t>(inst.n + 1);
    out.events.resize(m);
    for (auto& e : out.events) e.clear();
    out.t_drop.assign(locs, -1.0);
    out.t_pickup.assign(locs, -1.0);
    out.drop_vehicle.assign(locs, -1);
    out.pickup_vehicle.assign(locs, -1);
    out.return_time.assign(m, 0.0);
    out.makespan = 0.0;

    std::vector<std::size_t> next(m, 0);
    std::vector<double> clock(m, 0.0);
    std::vector<int> where(m, 0), load(m, 0);
    for (std::size_t v = 0; v < m; ++v) load[v] = detail::start_load(sol.tours[v]);
    std::size_t remaining = sol.operation_count();

    while (remaining > 0) {
        bool progress = false;
        for (std::size_t v = 0; v < m; ++v) {
            const auto& tour = sol.tours[v];
            while (next[v] < tour.size()) {
                const Op op = tour[next[v]];
                const auto c = static_cast<std::size_t>(op.customer);
                const double arrival = clock[v] + inst.d(where[v], op.customer);
                double departure = arrival;
                if (op.kind == OpKind::Dropoff) {
                    out.t_drop[c] = arrival;
                    out.drop_vehicle[c] = static_cast<int>(v);
                    --load[v];
                } else {
                    if (out.drop_vehicle[c] < 0) break;  // resource not deployed yet
                    departure = std::max(arrival, out.t_drop[c] + inst.p(op.customer));
                    out.t_pickup[c] = departure;
                    out.pickup_vehicle[c] = static_cast<int>(v);
                    ++load[v];
                }
                out.events[v].push_back({op.customer, op.kind, arrival, departure, load[v]});
                clock[v] = departure;
                where[v] = op.customer;
                ++next[v];
                --remaining;
                progress = true;
            }
        }
        if (!progress) {
            if (why) *why = "circular wait between pickups and dropoffs";
            return ScheduleStatus::Deadlock;
        }
    }

    for (std::size_t v = 0; v < m; ++v) {
        if (!sol.tours[v].empty()) out.return_time[v] = clock[v] + inst.d(where[v], 0);
        out.makespan = std::max(out.makespan, out.return_time[v]);
    }
    return ScheduleStatus::Ok;
}

inline Schedule evaluate(const Instance& inst, const Solution& sol) {
    Schedule schedule;
    std::string why;
    if (auto s = simulate(inst, sol, schedule, &why); s != ScheduleStatus::Ok) throw ScheduleError(s, why);
    return schedule;
}

inline double makespan(const Schedule& schedule) {
    double t = 0.0;
    for (double r : schedule.return_time) t = std::max(t, r);
    return t;
}

// Makespan or +inf when the solution does not simulate.
inline double makespan_or_inf(const Instance& inst, const Solution& sol, Schedule& scratch) {
    return simulate(inst, sol, scratch) == ScheduleStatus::Ok ? scratch.makespan : kInfinity;
}

inline double makespan_or_inf(const Instance& inst, const Solution& sol) {
    Schedule scratch;
    return makespan_or_inf(inst, sol, scratch);
}

inline double total_return_time(const Schedule& s) {
    double total = 0.0;
    for (double r : s.return_time) total += r;
    return total;
}

// Index of the vehicle whose return time equals the makespan (lowest index
// on ties).
inline int bottleneck_vehicle(const Schedule& s) {
    int best = 0;
    for (std::size_t v = 1; v < s.return_time.size(); ++v)
        if (s.return_time[v] > s.return_time[static_cast<std::size_t>(best)]) best = static_cast<int>(v);
    return best;
}

struct CoordinationMetrics {
    double cross_agent_pct = 0.0;
    double interleaved_pct = 0.0;
};

/// Cross-agent: dropoff and pickup by different vehicles. Interleaved: the
/// dropoff vehicle or the pickup vehicle executes an operation for another
/// customer at a time strictly inside (T_drop[c], T_pickup[c]).
inline CoordinationMetrics coordination_metrics(const Instance& inst, const Solution& /*sol*/, const Schedule& s) {
    CoordinationMetrics m;
    if (inst.n == 0) return m;
    int cross = 0, interleaved = 0;
    for (int c = 1; c <= inst.n; ++c) {
        const auto ci = static_cast<std::size_t>(c);
        const int dv = s.drop_vehicle[ci], pv = s.pickup_vehicle[ci];
        if (dv != pv) ++cross;
        const double lo = s.t_drop[ci], hi = s.t_pickup[ci];
        auto busy_inside = [&](int v) {
            for (const auto& e : s.events[static_cast<std::size_t>(v)]) {
                if (e.customer == c) continue;
                const double t = e.time();
                if (t > lo && t < hi) return true;
            }
            return false;
        };
        if (busy_inside(dv) || (pv != dv && busy_inside(pv))) ++interleaved;
    }
    m.cross_agent_pct = 100.0 * cross / inst.n;
    m.interleaved_pct = 100.0 * interleaved / inst.n;
    return m;
}

// ---------------------------------------------------------------------------
// Two-pass timing estimate
// ---------------------------------------------------------------------------

/// A customer's dropoff and/or pickup placed into existing tours.
/// Positions index the unmodified tours: the new operation goes in front of
/// the operation currently at that index (index == size appends). When both
/// land on the same vehicle, pick_pos >= drop_pos and the dropoff comes first.
struct Insertion {
    int customer = 0;
    int drop_vehicle = -1;  // -1: dropoff not inserted
    int drop_pos = 0;
    int pick_vehicle = -1;  // -1: pickup not inserted
    int pick_pos = 0;
};

struct Estimate {
    double makespan = kInfinity;
    double total = kInfinity;  // sum of return times
    ScheduleStatus status = ScheduleStatus::Ok;

    bool feasible() const { return status == ScheduleStatus::Ok; }
};

/// Two-pass approximate timing.
///
/// Pass 1 walks every route assuming pickups never wait and records dropoff
/// times; pass 2 rewalks them with pickups departing at
/// max(arrival, T_drop_pass1 + p). Works on partial solutions (customers
/// missing entirely) and on virtual insertions, so it is the cost model of
/// the insertion heuristics. Buffers are reused across calls.
class TwoPassEstimator {
public:
    explicit TwoPassEstimator(const Instance& inst)
        : inst_(&inst),
          drop_time_(static_cast<std::size_t>(inst.n + 1), 0.0),
          drop_route_(static_cast<std::size_t>(inst.n + 1), -1),
          drop_index_(static_cast<std::size_t>(inst.n + 1), 0),
          stamp_(static_cast<std::size_t>(inst.n + 1), 0) {}

    Estimate operator()(const Solution& sol, const Insertion* ins = nullptr) {
        const Instance& inst = *inst_;
        ++generation_;
        Estimate est;

        // Pass 1: dropoff times with no pickup waits; capacity check.
        for (int v = 0; v < sol.vehicles(); ++v) {
            double t = 0.0;
            int at = 0, idx = 0;
            LoadTracker load;
            bool ok = true;
            for_each_op(sol, ins, v, [&](Op op) {
                if (!ok) return;
                t += inst.d(at, op.customer);
                at = op.customer;
                const auto c = static_cast<std::size_t>(op.customer);
                if (!load.admits(op.kind, inst.k())) { ok = false; return; }
                load.apply(op.kind);
                if (op.kind == OpKind::Dropoff) {
                    drop_time_[c] = t;
                    drop_route_[c] = v;
                    drop_index_[c] = idx;
                    stamp_[c] = generation_;
                }
                ++idx;
            });
            if (!ok) {
                est.status = ScheduleStatus::CapacityViolation;
                return est;
            }
        }

        // Pass 2: apply pickup waits against pass-1 ready times.
        est.makespan = 0.0;
        est.total = 0.0;
        for (int v = 0; v < sol.vehicles(); ++v) {
            double t = 0.0;
            int at = 0, idx = 0;
            bool ok = true;
            for_each_op(sol, ins, v, [&](Op op) {
                if (!ok) return;
                t += inst.d(at, op.customer);
                at = op.customer;
                const auto c = static_cast<std::size_t>(op.customer);
                if (op.kind == OpKind::Pickup) {
                    if (stamp_[c] != generation_ || (drop_route_[c] == v && drop_index_[c] > idx)) {
                        ok = false;
                        return;
                    }
                    t = std::max(t, drop_time_[c] + inst.p(op.customer));
                }
                ++idx;
            });
            if (!ok) {
                est.status = ScheduleStatus::Deadlock;
                est.makespan = est.total = kInfinity;
                return est;
            }
            if (idx > 0) {
                t += inst.d(at, 0);
                est.makespan = std::max(est.makespan, t);
                est.total += t;
            }
        }
        return est;
    }

private:
    template <typename F>
    static void for_each_op(const Solution& sol, const Insertion* ins, int v, F&& f) {
        const auto& tour = sol.tours[static_cast<std::size_t>(v)];
        if (ins == nullptr || (ins->drop_vehicle != v && ins->pick_vehicle != v)) {
            for (const Op& op : tour) f(op);
            return;
        }
        const int size = static_cast<int>(tour.size());
        for (int i = 0; i <= size; ++i) {
            if (ins->drop_vehicle == v && ins->drop_pos == i) f(Op{ins->customer, OpKind::Dropoff});
            if (ins->pick_vehicle == v && ins->pick_pos == i) f(Op{ins->customer, OpKind::Pickup});
            if (i < size) f(tour[static_cast<std::size_t>(i)]);
        }
    }

    const Instance* inst_;
    std::vector<double> drop_time_;
    std::vector<int> drop_route_;
    std::vector<int> drop_index_;
    std::vector<unsigned> stamp_;
    unsigned generation_ = 0;
};

/// Two-pass makespan estimate of a complete solution. Structural and
/// capacity errors are raised as in evaluate; a pickup placed before its own
/// dropoff on the same route is reported as a deadlock. Circular waits across
/// routes are not analysed here.
inline double two_pass_estimate(const Instance& inst, const Solution& sol) {
    std::string why;
    if (auto s = detail::check_structure(inst, sol, &why); s != ScheduleStatus::Ok) throw ScheduleError(s, why);
    TwoPassEstimator estimator(inst);
    const Estimate e = estimator(sol);
    if (!e.feasible()) throw ScheduleError(e.status, "two-pass estimate");
    return e.makespan;
}

/// Applies an insertion to real tours.
inline void apply_insertion(Solution& sol, const Insertion& ins) {
    if (ins.pick_vehicle >= 0) {
        auto& pt = sol.tours[static_cast<std::size_t>(ins.pick_vehicle)];
        pt.insert(pt.begin() + ins.pick_pos, pick(ins.customer));
    }
    if (ins.drop_vehicle >= 0) {
        auto& dt = sol.tours[static_cast<std::size_t>(ins.drop_vehicle)];
        dt.insert(dt.begin() + ins.drop_pos, drop(ins.customer));
    }
}

}  // namespace vrprpd
