#pragma once

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "insertion.hpp"

namespace vrprpd {

enum class RepairOp { Greedy, Regret2, Regret3, RegretM };

inline constexpr std::array<RepairOp, 4> kRepairOps{RepairOp::Greedy, RepairOp::Regret2, RepairOp::Regret3,
                                                     RepairOp::RegretM};

inline const char* to_string(RepairOp op) {
    switch (op) {
        case RepairOp::Greedy: return "greedy";
        case RepairOp::Regret2: return "regret2";
        case RepairOp::Regret3: return "regret3";
        case RepairOp::RegretM: return "regretm";
    }
    return "?";
}

class RepairFailed : public std::runtime_error {
public:
    explicit RepairFailed(int customer)
        : std::runtime_error("no feasible insertion for customer " + std::to_string(customer)), customer_(customer) {}
    int customer() const noexcept { return customer_; }

private:
    int customer_;
};

/// Chooses which pending customer to insert next. `option_costs[i]` holds the
/// ascending option costs of customer i (for RegretM: the best cost per
/// dropoff vehicle, ascending). Greedy takes the lowest best cost; the regret
/// rules take the largest regret, ties to the lower best cost, then the lower
/// index.
inline std::size_t select_next(RepairOp op, const std::vector<std::vector<double>>& option_costs, int fleet_size) {
    std::size_t chosen = 0;
    double best_key = kInfinity, best_cost = kInfinity;
    for (std::size_t i = 0; i < option_costs.size(); ++i) {
        const auto& costs = option_costs[i];
        const double c1 = costs.front();
        double key = c1;
        switch (op) {
            case RepairOp::Greedy: key = c1; break;
            case RepairOp::Regret2: key = -regret_value(costs, 2); break;
            case RepairOp::Regret3: key = -regret_value(costs, 3); break;
            case RepairOp::RegretM: key = -regret_value(costs, fleet_size); break;
        }
        if (key < best_key || (key == best_key && c1 < best_cost)) {
            best_key = key;
            best_cost = c1;
            chosen = i;
        }
    }
    return chosen;
}

/// Reinserts every customer in `removed` (dropoff and pickup) into `sol`.
/// Each round scores all options of every pending customer with the two-pass
/// estimate, picks a customer by the operator's rule and commits its best
/// option. Throws RepairFailed when some customer has no feasible option.
inline void repair(const Instance& inst, Solution& sol, std::vector<int> removed, RepairOp op, Rng& rng,
                   InsertionEngine& engine) {
    std::vector<InsertionOption> options;
    std::vector<std::vector<double>> costs;
    std::vector<InsertionOption> best;
    std::vector<double> per_vehicle;

    while (!removed.empty()) {
        costs.assign(removed.size(), {});
        best.assign(removed.size(), {});
        for (std::size_t i = 0; i < removed.size(); ++i) {
            options.clear();
            engine.options_for(sol, removed[i], options, &rng);
            if (options.empty()) throw RepairFailed(removed[i]);
            std::sort(options.begin(), options.end(),
                      [](const InsertionOption& a, const InsertionOption& b) { return a.cost < b.cost; });
            best[i] = options.front();
            if (op == RepairOp::RegretM) {
                per_vehicle.assign(static_cast<std::size_t>(inst.m()), kInfinity);
                for (const auto& o : options) {
                    auto& slot = per_vehicle[static_cast<std::size_t>(o.ins.drop_vehicle)];
                    slot = std::min(slot, o.cost);
                }
                std::sort(per_vehicle.begin(), per_vehicle.end());
                while (!per_vehicle.empty() && per_vehicle.back() == kInfinity) per_vehicle.pop_back();
                costs[i] = per_vehicle;
            } else {
                const std::size_t depth = op == RepairOp::Regret3 ? 3 : 2;
                for (std::size_t j = 0; j < options.size() && j < depth; ++j) costs[i].push_back(options[j].cost);
            }
        }
        const std::size_t pick = select_next(op, costs, inst.m());
        apply_insertion(sol, best[pick].ins);
        removed.erase(removed.begin() + static_cast<std::ptrdiff_t>(pick));
    }
}

inline void repair(const Instance& inst, Solution& sol, const std::vector<int>& removed, RepairOp op, Rng& rng,
                   InsertionSettings settings = {}) {
    InsertionEngine engine(inst, settings);
    repair(inst, sol, removed, op, rng, engine);
}

}  // namespace vrprpd
