#pragma once

#include <algorithm>
#include <vector>

#include "schedule.hpp"

namespace vrprpd {

namespace detail {

// Lexicographic (makespan, total return time) comparison of two schedules;
// returns true when `a` is strictly better.
inline bool better(double a_makespan, double a_total, double b_makespan, double b_total) {
    constexpr double eps = 1e-9;
    if (a_makespan < b_makespan - eps) return true;
    if (a_makespan > b_makespan + eps) return false;
    return a_total < b_total - eps;
}

}  // namespace detail

/// Moves single pickups living on bottleneck or near-bottleneck vehicles
/// (return time >= near_ratio * makespan) to their best position on any
/// vehicle. Only strict makespan reductions are applied; up to `passes`
/// passes, each applying the single best move.
inline Solution pickup_repositioning(const Instance& inst, const Solution& input, int passes = 3,
                                     double near_ratio = 0.9) {
    Solution current = input;
    Schedule sched, trial_sched;
    if (simulate(inst, current, sched) != ScheduleStatus::Ok) return current;

    for (int pass = 0; pass < passes; ++pass) {
        const double z = sched.makespan;
        double best_z = z;
        Solution best;
        bool found = false;

        for (int v = 0; v < inst.m(); ++v) {
            if (sched.return_time[static_cast<std::size_t>(v)] < near_ratio * z) continue;
            const auto& tour = current.tours[static_cast<std::size_t>(v)];
            for (std::size_t i = 0; i < tour.size(); ++i) {
                if (tour[i].kind != OpKind::Pickup) continue;
                Solution trial = current;
                const Op moved = tour[i];
                auto& src = trial.tours[static_cast<std::size_t>(v)];
                src.erase(src.begin() + static_cast<std::ptrdiff_t>(i));
                for (int w = 0; w < inst.m(); ++w) {
                    auto& dst = trial.tours[static_cast<std::size_t>(w)];
                    for (std::size_t pos = 0; pos <= dst.size(); ++pos) {
                        if (w == v && pos == i) continue;  // original position
                        dst.insert(dst.begin() + static_cast<std::ptrdiff_t>(pos), moved);
                        const double tz = makespan_or_inf(inst, trial, trial_sched);
                        if (tz < best_z - 1e-9) {
                            best_z = tz;
                            best = trial;
                            found = true;
                        }
                        dst.erase(dst.begin() + static_cast<std::ptrdiff_t>(pos));
                    }
                }
            }
        }
        if (!found) break;
        current = std::move(best);
        simulate(inst, current, sched);
    }
    return current;
}

/// Relocates whole customers (dropoff and pickup) that touch the bottleneck
/// route onto another vehicle, trying every (vehicle, dropoff position,
/// pickup position) triple. The best strictly improving move is applied per
/// pass; the bottleneck is re-identified each pass.
inline Solution cross_agent_relocation(const Instance& inst, const Solution& input, int passes = 3) {
    Solution current = input;
    if (inst.m() < 2) return current;
    Schedule sched, trial_sched;
    if (simulate(inst, current, sched) != ScheduleStatus::Ok) return current;

    for (int pass = 0; pass < passes; ++pass) {
        const int bottleneck = bottleneck_vehicle(sched);
        const double z = sched.makespan;
        double best_z = z;
        Solution best;
        bool found = false;

        std::vector<int> candidates;
        for (const auto& op : current.tours[static_cast<std::size_t>(bottleneck)]) candidates.push_back(op.customer);
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

        for (int c : candidates) {
            Solution base = current;
            for (auto& tour : base.tours) std::erase_if(tour, [c](const Op& op) { return op.customer == c; });
            for (int w = 0; w < inst.m(); ++w) {
                if (w == bottleneck) continue;
                const auto size = base.tours[static_cast<std::size_t>(w)].size();
                for (std::size_t dp = 0; dp <= size; ++dp) {
                    for (std::size_t pp = dp; pp <= size; ++pp) {
                        Solution trial = base;
                        auto& dst = trial.tours[static_cast<std::size_t>(w)];
                        dst.insert(dst.begin() + static_cast<std::ptrdiff_t>(pp), pick(c));
                        dst.insert(dst.begin() + static_cast<std::ptrdiff_t>(dp), drop(c));
                        const double tz = makespan_or_inf(inst, trial, trial_sched);
                        if (tz < best_z - 1e-9) {
                            best_z = tz;
                            best = std::move(trial);
                            found = true;
                        }
                    }
                }
            }
        }
        if (!found) break;
        current = std::move(best);
        simulate(inst, current, sched);
    }
    return current;
}

}  // namespace vrprpd
