#pragma once

#include <cstdint>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "alns.hpp"
#include "baselines.hpp"
#include "brkga.hpp"

namespace vrprpd {

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(AlnsParams, t0, alpha, reheat_factor, stagnation_threshold, reheat_gate,
                                                weight_interval, reaction, sigma1, sigma2, sigma3, min_weight, max_iter,
                                                workers_per_pool, pools, pickup_reposition_interval,
                                                cross_agent_interval, best_check_interval, pool_sync_interval,
                                                shaw_phi, shaw_chi, shaw_omega, worst_power, dropoff_candidates, noise,
                                                noise_probability)

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(BrkgaParams, population, elite_fraction, mutant_fraction, elite_bias,
                                                generations, warm_fraction, warm_seeds, perturb_amplitude, penalty,
                                                wait_relaxation, hint_preferred)

/// Everything a solve or bench run reads from the config file. Missing keys
/// keep their defaults; unknown keys are rejected.
struct SolverConfig {
    AlnsParams alns;
    BrkgaParams brkga;
    double defer_lambda = 10.0;
    int pool_size = 1;
};

// Paper-scale budgets: 20000 ALNS iterations per worker, 32 workers, and a
// 30000 x 20000 BRKGA.
inline SolverConfig paper_scale_config() {
    SolverConfig c;
    c.pool_size = c.alns.workers_per_pool;
    c.brkga.population = 30000;
    c.brkga.generations = 20000;
    return c;
}

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& given, const nlohmann::json& known, const std::string& where) {
    if (!given.is_object()) throw std::invalid_argument("config: " + where + " must be an object");
    for (const auto& item : given.items())
        if (!known.contains(item.key())) throw std::invalid_argument("config: unknown key '" + item.key() + "' in " + where);
}

}  // namespace detail

inline nlohmann::json config_to_json(const SolverConfig& c) {
    return {{"alns", c.alns}, {"brkga", c.brkga}, {"defer_lambda", c.defer_lambda}, {"pool_size", c.pool_size}};
}

inline SolverConfig config_from_json(const nlohmann::json& j) {
    SolverConfig c;
    detail::reject_unknown_keys(j, config_to_json(c), "top level");
    if (j.contains("alns")) {
        detail::reject_unknown_keys(j.at("alns"), nlohmann::json(c.alns), "alns");
        c.alns = j.at("alns").get<AlnsParams>();
    }
    if (j.contains("brkga")) {
        detail::reject_unknown_keys(j.at("brkga"), nlohmann::json(c.brkga), "brkga");
        c.brkga = j.at("brkga").get<BrkgaParams>();
    }
    c.defer_lambda = j.value("defer_lambda", c.defer_lambda);
    c.pool_size = j.value("pool_size", c.pool_size);
    c.alns.validate();
    c.brkga.validate();
    if (c.pool_size < 1) throw std::invalid_argument("config: pool_size must be at least 1");
    return c;
}

inline nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return nlohmann::json::parse(in);
}

inline SolverConfig load_config(const std::string& path) { return config_from_json(read_json_file(path)); }

}  // namespace vrprpd
