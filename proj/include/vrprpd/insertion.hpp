#pragma once

#include <algorithm>
#include <limits>
#include <vector>

#include "random.hpp"
#include "schedule.hpp"

namespace vrprpd {

// Return-time sum enters insertion costs with this weight, so it only breaks
// ties between options of equal makespan (times are integral on TSPLIB data).
inline constexpr double kTieWeight = 1e-6;

struct InsertionOption {
    Insertion ins;
    double cost = kInfinity;  // estimated makespan + kTieWeight * return-time sum
};

struct InsertionSettings {
    // Dropoff placements kept for the full pickup scan; <= 0 scans every one.
    int dropoff_candidates = 8;
    // Relative cost noise (fraction of the longest edge); 0 disables.
    double noise = 0.0;
};

/// Enumerates (dropoff vehicle, position, pickup vehicle, position) options
/// for one customer, scored by the two-pass estimate. Dropoff placements are
/// ranked first; the best `dropoff_candidates` are expanded against every
/// pickup placement on every vehicle (cross-vehicle included).
class InsertionEngine {
public:
    InsertionEngine(const Instance& inst, InsertionSettings settings)
        : inst_(&inst), settings_(settings), estimator_(inst) {
        for (double w : inst.travel) max_edge_ = std::max(max_edge_, w);
    }

    const InsertionSettings& settings() const { return settings_; }
    void set_noise(double noise) { settings_.noise = noise; }

    double score(const Solution& sol, const Insertion* ins) {
        const Estimate e = estimator_(sol, ins);
        return e.feasible() ? e.makespan + kTieWeight * e.total : kInfinity;
    }

    // Appends every evaluated feasible option for customer c to `out`.
    void options_for(const Solution& sol, int c, std::vector<InsertionOption>& out, Rng* rng = nullptr) {
        drops_.clear();
        for (int v = 0; v < sol.vehicles(); ++v) {
            const int size = static_cast<int>(sol.tours[static_cast<std::size_t>(v)].size());
            for (int pos = 0; pos <= size; ++pos) {
                Insertion ins{c, v, pos, -1, 0};
                double s = score(sol, &ins);
                if (s == kInfinity) {
                    // The dropoff alone may exhaust this vehicle; rank it by
                    // the paired placement with the pickup right behind.
                    Insertion paired{c, v, pos, v, pos};
                    s = score(sol, &paired);
                }
                if (s < kInfinity) drops_.push_back({ins, s});
            }
        }
        std::size_t keep = drops_.size();
        if (settings_.dropoff_candidates > 0) keep = std::min(keep, static_cast<std::size_t>(settings_.dropoff_candidates));
        std::partial_sort(drops_.begin(), drops_.begin() + static_cast<std::ptrdiff_t>(keep), drops_.end(),
                          [](const InsertionOption& a, const InsertionOption& b) { return a.cost < b.cost; });

        const double amplitude = settings_.noise * max_edge_;
        for (std::size_t i = 0; i < keep; ++i) {
            const Insertion base = drops_[i].ins;
            for (int w = 0; w < sol.vehicles(); ++w) {
                const int size = static_cast<int>(sol.tours[static_cast<std::size_t>(w)].size());
                const int first = w == base.drop_vehicle ? base.drop_pos : 0;
                for (int pos = first; pos <= size; ++pos) {
                    Insertion ins{c, base.drop_vehicle, base.drop_pos, w, pos};
                    double s = score(sol, &ins);
                    if (s == kInfinity) continue;
                    if (amplitude > 0.0 && rng != nullptr) s += rng->uniform(-amplitude, amplitude);
                    out.push_back({ins, s});
                }
            }
        }
    }

private:
    const Instance* inst_;
    InsertionSettings settings_;
    TwoPassEstimator estimator_;
    std::vector<InsertionOption> drops_;
    double max_edge_ = 0.0;
};

/// Regret of a customer given its option costs sorted ascending: the sum of
/// (c_i - c_1) over the next `depth - 1` options. Missing options count as a
/// large penalty so that hard-to-place customers go first.
inline double regret_value(const std::vector<double>& sorted_costs, int depth) {
    constexpr double kMissing = 1e12;
    if (sorted_costs.empty()) return 0.0;
    double r = 0.0;
    for (int i = 1; i < depth; ++i) {
        r += i < static_cast<int>(sorted_costs.size()) ? sorted_costs[static_cast<std::size_t>(i)] - sorted_costs[0]
                                                        : kMissing;
    }
    return r;
}

}  // namespace vrprpd
