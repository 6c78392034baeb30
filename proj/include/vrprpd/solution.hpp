#pragma once

#include <algorithm>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "instance.hpp"

namespace vrprpd {

enum class OpKind : unsigned char { Dropoff, Pickup };

struct Op {
    int customer = 0;
    OpKind kind = OpKind::Dropoff;

    friend bool operator==(const Op&, const Op&) = default;
};

inline Op drop(int c) { return {c, OpKind::Dropoff}; }
inline Op pick(int c) { return {c, OpKind::Pickup}; }

/// Running load of one route. A vehicle leaves the depot with the resources
/// its tour needs, at most k, so a route fits when its running
/// dropoff-minus-pickup count spans at most k.
struct LoadTracker {
    int net = 0;
    int low = 0;
    int high = 0;

    bool admits(OpKind kind, int k) const {
        return kind == OpKind::Dropoff ? std::max(high, net + 1) - low <= k : high - std::min(low, net - 1) <= k;
    }
    void apply(OpKind kind) {
        net += kind == OpKind::Dropoff ? 1 : -1;
        high = std::max(high, net);
        low = std::min(low, net);
    }
    // Smallest depot load that never runs dry.
    int start_load() const { return high; }
};

/// Per-vehicle ordered tours of (customer, operation) pairs.
struct Solution {
    std::vector<std::vector<Op>> tours;

    Solution() = default;
    explicit Solution(int vehicles) : tours(static_cast<std::size_t>(vehicles)) {}
    explicit Solution(std::vector<std::vector<Op>> t) : tours(std::move(t)) {}

    int vehicles() const { return static_cast<int>(tours.size()); }

    std::size_t operation_count() const {
        std::size_t total = 0;
        for (const auto& t : tours) total += t.size();
        return total;
    }

    friend bool operator==(const Solution&, const Solution&) = default;
};

// Removes both operations of every customer flagged in `removed` (indexed by
// customer id).
inline void remove_customers(Solution& sol, const std::vector<char>& removed) {
    for (auto& tour : sol.tours) {
        std::erase_if(tour, [&](const Op& op) { return removed[static_cast<std::size_t>(op.customer)] != 0; });
    }
}

inline std::string describe(const Solution& sol) {
    std::string out;
    for (std::size_t v = 0; v < sol.tours.size(); ++v) {
        out += "v" + std::to_string(v) + ":";
        for (const auto& op : sol.tours[v]) {
            out += ' ';
            out += op.kind == OpKind::Dropoff ? 'D' : 'P';
            out += std::to_string(op.customer);
        }
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// Solution documents: {instance_label, tours: [[[c, "D"|"P"], ...], ...]}
// ---------------------------------------------------------------------------

inline nlohmann::json solution_to_json(const Solution& sol, const std::string& instance_label) {
    nlohmann::json tours = nlohmann::json::array();
    for (const auto& tour : sol.tours) {
        nlohmann::json t = nlohmann::json::array();
        for (const auto& op : tour) t.push_back({op.customer, op.kind == OpKind::Dropoff ? "D" : "P"});
        tours.push_back(std::move(t));
    }
    return {{"instance_label", instance_label}, {"tours", tours}};
}

inline Solution solution_from_json(const nlohmann::json& j) {
    Solution sol;
    for (const auto& t : j.at("tours")) {
        std::vector<Op> tour;
        for (const auto& entry : t) {
            if (!entry.is_array() || entry.size() != 2) throw std::invalid_argument("solution entry must be [customer, kind]");
            const auto kind = entry.at(1).get<std::string>();
            if (kind != "D" && kind != "P") throw std::invalid_argument("operation kind must be \"D\" or \"P\"");
            tour.push_back({entry.at(0).get<int>(), kind == "D" ? OpKind::Dropoff : OpKind::Pickup});
        }
        sol.tours.push_back(std::move(tour));
    }
    return sol;
}

inline Solution load_solution(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open solution file: " + path);
    return solution_from_json(nlohmann::json::parse(in));
}

}  // namespace vrprpd
