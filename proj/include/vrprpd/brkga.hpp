#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "alns.hpp"
#include "baselines.hpp"
#include "schedule.hpp"

namespace vrprpd {

/// Random-key chromosome. Both vectors hold 2n genes in operation order
/// (D_1, P_1, ..., D_n, P_n).
struct Chromosome {
    std::vector<double> pi;     // priority
    std::vector<double> alpha;  // vehicle hint, vehicle floor(m * alpha)

    std::size_t size() const { return pi.size() + alpha.size(); }
    friend bool operator==(const Chromosome&, const Chromosome&) = default;
};

inline std::size_t gene_index(const Op& op) {
    return 2 * static_cast<std::size_t>(op.customer - 1) + (op.kind == OpKind::Pickup ? 1 : 0);
}

inline Op gene_op(std::size_t g) {
    const int c = static_cast<int>(g / 2) + 1;
    return g % 2 == 0 ? drop(c) : pick(c);
}

struct BrkgaParams {
    int population = 500;  // 30000 at paper scale
    double elite_fraction = 0.15;
    double mutant_fraction = 0.15;
    double elite_bias = 0.7;
    int generations = 200;  // 20000 at paper scale
    double warm_fraction = 0.15;
    int warm_seeds = 20;
    double perturb_amplitude = 0.03;
    double penalty = 1e6;
    bool wait_relaxation = true;
    // Use vehicle floor(m * alpha) whenever it can execute the operation;
    // otherwise (and always when false) the minimum completion time decides
    // and the hint only breaks ties.
    bool hint_preferred = true;

    void validate() const {
        if (!(elite_fraction > 0.0 && mutant_fraction >= 0.0 && elite_fraction + mutant_fraction < 1.0))
            throw std::invalid_argument("brkga: elite + mutant fractions must stay below 1");
        if (!(elite_bias > 0.5 && elite_bias <= 1.0)) throw std::invalid_argument("brkga: elite bias must lie in (0.5, 1]");
        if (population < 1 || generations < 0 || warm_seeds < 1) throw std::invalid_argument("brkga: bad sizes");
        if (warm_fraction < 0.0 || warm_fraction > 1.0) throw std::invalid_argument("brkga: warm fraction outside [0, 1]");
    }
};

class PopulationTooSmall : public std::invalid_argument {
public:
    PopulationTooSmall() : std::invalid_argument("population too small for the elite/non-elite split") {}
};

inline Chromosome random_chromosome(int n, Rng& rng) {
    Chromosome ch{std::vector<double>(2 * static_cast<std::size_t>(n)), std::vector<double>(2 * static_cast<std::size_t>(n))};
    for (auto& g : ch.pi) g = rng.uniform01();
    for (auto& g : ch.alpha) g = rng.uniform01();
    return ch;
}

// ---------------------------------------------------------------------------
// Decoder
// ---------------------------------------------------------------------------

struct DecodedResult {
    Solution solution;
    double makespan = 0.0;
    double fitness = 0.0;
    int scheduled_count = 0;
    int passes = 0;
    long operation_visits = 0;

    bool complete(int n) const { return scheduled_count == 2 * n; }
};

/// Multi-pass decoder. Operations are visited in ascending priority; an
/// operation that no vehicle can execute yet is deferred to the next pass.
/// The hinted vehicle executes it when able (hint_preferred); otherwise the
/// vehicle with the earliest completion time (pickups may wait on site when
/// wait_relaxation is set), near-ties going to the vehicle closest to the
/// hint, then the lowest index.
inline DecodedResult decode(const Chromosome& ch, const Instance& inst, const BrkgaParams& params) {
    const int n = inst.n, m = inst.m(), k = inst.k();
    const std::size_t ops = 2 * static_cast<std::size_t>(n);
    if (ch.pi.size() != ops || ch.alpha.size() != ops) throw std::invalid_argument("decode: chromosome length must be 4n");

    std::vector<std::size_t> order(ops);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ch.pi[a] < ch.pi[b]; });

    std::vector<double> t(static_cast<std::size_t>(m), 0.0);
    std::vector<LoadTracker> load(static_cast<std::size_t>(m));
    std::vector<int> at(static_cast<std::size_t>(m), 0);
    std::vector<char> done(ops, 0);
    std::vector<double> t_drop(static_cast<std::size_t>(n + 1), 0.0);

    DecodedResult r;
    r.solution = Solution(m);
    for (int pass = 1; pass <= 2 * n && r.scheduled_count < 2 * n; ++pass) {
        r.passes = pass;
        for (std::size_t g : order) {
            if (done[g]) continue;
            ++r.operation_visits;
            const Op op = gene_op(g);
            const int c = op.customer;
            const bool is_drop = op.kind == OpKind::Dropoff;
            if (!is_drop && !done[g - 1]) continue;
            const double ready = is_drop ? 0.0 : t_drop[static_cast<std::size_t>(c)] + inst.p(c);
            const int hint = std::min(m - 1, static_cast<int>(std::floor(m * ch.alpha[g])));

            int best = -1;
            double best_t = kInfinity;
            const auto hi = static_cast<std::size_t>(hint);
            const bool hint_ok = load[hi].admits(op.kind, k) &&
                                 (is_drop || params.wait_relaxation || t[hi] >= ready);
            if (params.hint_preferred && hint_ok) best = hint;
            for (int v = 0; v < m && !(params.hint_preferred && hint_ok); ++v) {
                const auto vi = static_cast<std::size_t>(v);
                if (!load[vi].admits(op.kind, k)) continue;
                if (!is_drop && !params.wait_relaxation && t[vi] < ready) continue;
                const double arrive = t[vi] + inst.d(at[vi], c);
                const double finish = is_drop ? arrive : std::max(arrive, ready);
                if (best < 0 || finish < best_t - 1e-9) {
                    best = v;
                    best_t = finish;
                } else if (finish <= best_t + 1e-9 && std::abs(v - hint) < std::abs(best - hint)) {
                    best = v;
                    best_t = std::min(best_t, finish);
                }
            }
            if (best < 0) continue;
            const auto bi = static_cast<std::size_t>(best);
            // The clock records the actual completion of this operation.
            const double arrive = t[bi] + inst.d(at[bi], c);
            t[bi] = is_drop ? arrive : std::max(arrive, ready);
            at[bi] = c;
            load[bi].apply(op.kind);
            if (is_drop) t_drop[static_cast<std::size_t>(c)] = t[bi];
            r.solution.tours[bi].push_back(op);
            done[g] = 1;
            ++r.scheduled_count;
        }
    }
    if (r.operation_visits > static_cast<long>(ops * ops) && n > 0)
        throw std::logic_error("decode: operation visits exceeded (2n)^2");

    for (int v = 0; v < m; ++v) {
        const auto vi = static_cast<std::size_t>(v);
        if (!r.solution.tours[vi].empty()) r.makespan = std::max(r.makespan, t[vi] + inst.d(at[vi], 0));
    }
    r.fitness = r.makespan + params.penalty * static_cast<double>(2 * n - r.scheduled_count);
    return r;
}

/// pi_o = (r - 1) / L_v for the operation at 1-based position r of vehicle
/// v's tour of length L_v, alpha_o = v / m.
inline Chromosome encode(const Instance& inst, const Solution& sol) {
    const std::size_t ops = 2 * static_cast<std::size_t>(inst.n);
    Chromosome ch{std::vector<double>(ops, 0.0), std::vector<double>(ops, 0.0)};
    const int m = sol.vehicles();
    for (int v = 0; v < m; ++v) {
        const auto& tour = sol.tours[static_cast<std::size_t>(v)];
        const double len = static_cast<double>(tour.size());
        for (std::size_t r = 0; r < tour.size(); ++r) {
            const std::size_t g = gene_index(tour[r]);
            ch.pi[g] = static_cast<double>(r) / len;
            ch.alpha[g] = static_cast<double>(v) / m;
        }
    }
    return ch;
}

inline double clamp_gene(double g) { return std::clamp(g, 0.0, std::nextafter(1.0, 0.0)); }

/// Adds U(-amplitude, amplitude) to every gene and clamps into [0, 1).
inline Chromosome perturb(const Chromosome& ch, Rng& rng, double amplitude = 0.03) {
    Chromosome out = ch;
    for (auto& g : out.pi) g = clamp_gene(g + rng.uniform(-amplitude, amplitude));
    for (auto& g : out.alpha) g = clamp_gene(g + rng.uniform(-amplitude, amplitude));
    return out;
}

// ---------------------------------------------------------------------------
// Evolution
// ---------------------------------------------------------------------------

struct PopulationSplit {
    int elites = 0;
    int mutants = 0;
    int offspring = 0;
};

inline PopulationSplit population_split(int size, const BrkgaParams& params) {
    PopulationSplit s;
    s.elites = static_cast<int>(std::floor(params.elite_fraction * size));
    s.mutants = static_cast<int>(std::floor(params.mutant_fraction * size));
    s.offspring = size - s.elites - s.mutants;
    return s;
}

// Feasible before penalized, then by fitness; stable on the input order.
inline std::vector<std::size_t> rank_population(const std::vector<double>& fitness, double penalty) {
    std::vector<std::size_t> idx(fitness.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const bool pa = fitness[a] >= penalty, pb = fitness[b] >= penalty;
        if (pa != pb) return !pa;
        return fitness[a] < fitness[b];
    });
    return idx;
}

/// One generation: elites copied, fresh mutants, then biased uniform
/// crossover of one elite and one non-elite parent per offspring.
inline std::vector<Chromosome> evolve(const std::vector<Chromosome>& population, const std::vector<double>& fitness,
                                      const BrkgaParams& params, Rng& rng) {
    const int size = static_cast<int>(population.size());
    const PopulationSplit split = population_split(size, params);
    if (split.elites < 1 || split.elites >= size) throw PopulationTooSmall();
    const auto ranked = rank_population(fitness, params.penalty);
    const int n = static_cast<int>(population.front().pi.size() / 2);

    std::vector<Chromosome> next;
    next.reserve(population.size());
    for (int i = 0; i < split.elites; ++i) next.push_back(population[ranked[static_cast<std::size_t>(i)]]);
    for (int i = 0; i < split.mutants; ++i) next.push_back(random_chromosome(n, rng));
    const auto non_elite = static_cast<std::size_t>(size - split.elites);
    for (int i = 0; i < split.offspring; ++i) {
        const Chromosome& elite = population[ranked[rng.index(static_cast<std::size_t>(split.elites))]];
        const Chromosome& other =
            population[ranked[static_cast<std::size_t>(split.elites) + rng.index(non_elite)]];
        Chromosome child = elite;
        for (std::size_t g = 0; g < child.pi.size(); ++g)
            if (!rng.bernoulli(params.elite_bias)) child.pi[g] = other.pi[g];
        for (std::size_t g = 0; g < child.alpha.size(); ++g)
            if (!rng.bernoulli(params.elite_bias)) child.alpha[g] = other.alpha[g];
        next.push_back(std::move(child));
    }
    return next;
}

// ---------------------------------------------------------------------------
// Warm start
// ---------------------------------------------------------------------------

/// Customers spread over vehicles by longest-workload-first onto the least
/// loaded vehicle, each vehicle then routed nearest-feasible.
inline Solution load_balanced_construction(const Instance& inst) {
    std::vector<int> customers(static_cast<std::size_t>(inst.n));
    std::iota(customers.begin(), customers.end(), 1);
    std::stable_sort(customers.begin(), customers.end(),
                     [&](int a, int b) { return workload(inst, a) > workload(inst, b); });
    std::vector<std::vector<int>> groups(static_cast<std::size_t>(inst.m()));
    std::vector<double> load(static_cast<std::size_t>(inst.m()), 0.0);
    for (int c : customers) {
        const auto v = static_cast<std::size_t>(std::min_element(load.begin(), load.end()) - load.begin());
        groups[v].push_back(c);
        load[v] += workload(inst, c);
    }
    Solution sol(inst.m());
    for (int v = 0; v < inst.m(); ++v)
        sol.tours[static_cast<std::size_t>(v)] = nearest_feasible_route(inst, groups[static_cast<std::size_t>(v)]);
    return sol;
}

/// Dropoffs released in ascending processing time: the next dropoff goes to
/// the vehicle that reaches it first; a vehicle without resources first
/// collects the deployed resource it can complete soonest.
inline Solution spt_construction(const Instance& inst) {
    const int m = inst.m(), k = inst.k();
    std::vector<int> order(static_cast<std::size_t>(inst.n));
    std::iota(order.begin(), order.end(), 1);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return inst.p(a) < inst.p(b); });

    Solution sol(m);
    std::vector<double> t(static_cast<std::size_t>(m), 0.0), ready(static_cast<std::size_t>(inst.n + 1), 0.0);
    std::vector<int> q(static_cast<std::size_t>(m), k), at(static_cast<std::size_t>(m), 0);
    std::vector<char> collected(static_cast<std::size_t>(inst.n + 1), 0);
    std::vector<int> deployed;

    auto collect = [&](int v) {
        const auto vi = static_cast<std::size_t>(v);
        std::size_t best = 0;
        double best_t = kInfinity;
        for (std::size_t i = 0; i < deployed.size(); ++i) {
            const int c = deployed[i];
            const double done = std::max(t[vi] + inst.d(at[vi], c), ready[static_cast<std::size_t>(c)]);
            if (done < best_t) {
                best_t = done;
                best = i;
            }
        }
        const int c = deployed[best];
        deployed.erase(deployed.begin() + static_cast<std::ptrdiff_t>(best));
        sol.tours[vi].push_back(pick(c));
        t[vi] = best_t;
        at[vi] = c;
        ++q[vi];
    };

    for (int c : order) {
        int best = -1;
        double best_t = kInfinity;
        for (int v = 0; v < m; ++v) {
            const auto vi = static_cast<std::size_t>(v);
            if (q[vi] == 0 && deployed.empty()) continue;
            const double arrive = t[vi] + inst.d(at[vi], c);
            if (arrive < best_t) {
                best_t = arrive;
                best = v;
            }
        }
        const auto bi = static_cast<std::size_t>(best);
        if (q[bi] == 0) collect(best);
        t[bi] += inst.d(at[bi], c);
        at[bi] = c;
        --q[bi];
        ready[static_cast<std::size_t>(c)] = t[bi] + inst.p(c);
        sol.tours[bi].push_back(drop(c));
        deployed.push_back(c);
    }
    while (!deployed.empty()) {
        int best = -1;
        for (int v = 0; v < m; ++v) {
            const auto vi = static_cast<std::size_t>(v);
            if (q[vi] < k && (best < 0 || t[vi] < t[static_cast<std::size_t>(best)])) best = v;
        }
        collect(best);
    }
    return sol;
}

/// The warm seeds: encoded ALNS incumbent, nearest-neighbour, load-balanced
/// and SPT constructions verbatim, then perturbations of the ALNS encoding.
inline std::vector<Chromosome> warm_seeds(const Instance& inst, const Solution& alns_solution, const BrkgaParams& params,
                                          Rng& rng) {
    const Chromosome base = encode(inst, alns_solution);
    std::vector<Chromosome> seeds{base};
    for (const Solution& s : {nearest_neighbor(inst), load_balanced_construction(inst), spt_construction(inst)}) {
        if (static_cast<int>(seeds.size()) >= params.warm_seeds) break;
        seeds.push_back(encode(inst, s));
    }
    while (static_cast<int>(seeds.size()) < params.warm_seeds) seeds.push_back(perturb(base, rng, params.perturb_amplitude));
    return seeds;
}

/// ceil(warm_fraction * N_p) slots from the warm seeds (cycling through them
/// with fresh perturbations once exhausted), the rest uniform random.
inline std::vector<Chromosome> warm_start_population(const Instance& inst, const Solution& alns_solution,
                                                     const BrkgaParams& params, Rng& rng) {
    const auto seeds = warm_seeds(inst, alns_solution, params, rng);
    const int warm = std::min(params.population,
                              static_cast<int>(std::ceil(params.warm_fraction * params.population - 1e-9)));
    std::vector<Chromosome> pop;
    pop.reserve(static_cast<std::size_t>(params.population));
    for (int i = 0; i < warm; ++i) {
        const auto s = static_cast<std::size_t>(i);
        pop.push_back(s < seeds.size() ? seeds[s] : perturb(seeds[s % seeds.size()], rng, params.perturb_amplitude));
    }
    while (static_cast<int>(pop.size()) < params.population) pop.push_back(random_chromosome(inst.n, rng));
    return pop;
}

inline std::vector<Chromosome> random_population(const Instance& inst, const BrkgaParams& params, Rng& rng) {
    std::vector<Chromosome> pop;
    for (int i = 0; i < params.population; ++i) pop.push_back(random_chromosome(inst.n, rng));
    return pop;
}

// ---------------------------------------------------------------------------
// Runs
// ---------------------------------------------------------------------------

struct BrkgaStats {
    std::vector<double> best_fitness;  // index 0 is the initial population
    long decodes = 0;
};

struct BrkgaResult {
    Solution best;
    double best_fitness = kInfinity;
    bool complete = false;
    BrkgaStats stats;
};

/// Evolves `population` for params.generations generations. An empty
/// population is replaced by a random one.
inline BrkgaResult run_brkga(const Instance& inst, const BrkgaParams& params, std::vector<Chromosome> population,
                             std::uint64_t seed) {
    params.validate();
    Rng rng(seed);
    if (population.empty()) population = random_population(inst, params, rng);

    BrkgaResult result;
    std::vector<double> fitness(population.size());
    auto score = [&](std::size_t from) {
        for (std::size_t i = from; i < population.size(); ++i) {
            DecodedResult d = decode(population[i], inst, params);
            ++result.stats.decodes;
            fitness[i] = d.fitness;
            if (d.fitness < result.best_fitness) {
                result.best_fitness = d.fitness;
                result.best = std::move(d.solution);
                result.complete = d.complete(inst.n);
            }
        }
        result.stats.best_fitness.push_back(result.best_fitness);
    };

    score(0);
    const PopulationSplit split = population_split(static_cast<int>(population.size()), params);
    for (int gen = 0; gen < params.generations; ++gen) {
        population = evolve(population, fitness, params, rng);
        // Elites keep their fitness; only newcomers are decoded.
        const auto ranked = rank_population(fitness, params.penalty);
        std::vector<double> elite_fit;
        for (int i = 0; i < split.elites; ++i) elite_fit.push_back(fitness[ranked[static_cast<std::size_t>(i)]]);
        std::copy(elite_fit.begin(), elite_fit.end(), fitness.begin());
        score(static_cast<std::size_t>(split.elites));
    }
    return result;
}

struct PipelineResult {
    AlnsResult alns;
    BrkgaResult brkga;
    Solution best;
    double best_makespan = kInfinity;
};

/// ALNS (a pool of `pool_size` workers) followed by a BRKGA warm-started
/// from the ALNS incumbent; the better of the two is returned.
inline PipelineResult run_pipeline(const Instance& inst, const AlnsParams& alns_params, const BrkgaParams& brkga_params,
                                   std::uint64_t seed, int pool_size = 1) {
    PipelineResult out;
    if (pool_size == 1) {
        out.alns = run_alns(inst, alns_params, derive_seed(seed, 0));
    } else {
        PoolResult pool = run_pool(inst, alns_params, pool_size, seed);
        out.alns.best = pool.best;
        out.alns.best_makespan = pool.best_makespan;
        if (!pool.stats.worker_stats.empty()) out.alns.stats = pool.stats.worker_stats.front();
    }
    Rng rng(derive_seed(seed, 0xB4C6A));
    auto population = warm_start_population(inst, out.alns.best, brkga_params, rng);
    out.brkga = run_brkga(inst, brkga_params, std::move(population), derive_seed(seed, 0xB4C6B));

    out.best = out.alns.best;
    out.best_makespan = out.alns.best_makespan;
    if (out.brkga.complete && out.brkga.best_fitness < out.best_makespan) {
        out.best = out.brkga.best;
        out.best_makespan = evaluate(inst, out.best).makespan;
    }
    return out;
}

}  // namespace vrprpd
