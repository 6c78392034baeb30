#pragma once

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "baselines.hpp"
#include "brkga.hpp"
#include "config.hpp"
#include "stats.hpp"

namespace vrprpd {

enum class Method { Heuristics, Alns, Pipeline };

inline const char* to_string(Method m) {
    switch (m) {
        case Method::Heuristics: return "heuristics";
        case Method::Alns: return "alns";
        case Method::Pipeline: return "pipeline";
    }
    return "?";
}

inline Method parse_method(const std::string& s) {
    if (s == "heuristics") return Method::Heuristics;
    if (s == "alns") return Method::Alns;
    if (s == "pipeline") return Method::Pipeline;
    throw std::invalid_argument("unknown method: " + s);
}

struct ResultRow {
    std::string dataset;   // source file name, e.g. gr17
    std::string instance;  // variant label
    std::string variant;
    int replicate = 0;
    std::string method;
    std::uint64_t seed = 0;
    double makespan = 0.0;
    double runtime = 0.0;  // seconds
    double cross_agent_pct = 0.0;
    double interleaved_pct = 0.0;
    std::string error;  // empty on success

    bool ok() const { return error.empty(); }
    friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

struct ExperimentConfig {
    std::vector<std::string> instances;  // TSPLIB files
    std::vector<VariantKind> kinds{VariantKind::Base, VariantKind::Double, VariantKind::Quintuple,
                                   VariantKind::Random10, VariantKind::Random20};
    int stochastic_replicates = 10;  // replicates of 1R10 / 1R20; the others use one
    std::vector<Method> methods{Method::Heuristics, Method::Alns, Method::Pipeline};
    std::vector<std::uint64_t> seeds{1};
    std::uint64_t instance_seed = 42;  // processing-time draws
    SolverConfig solver;
    std::string output_dir = "results";
};

inline ExperimentConfig experiment_from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    const nlohmann::json known{{"instances", 0}, {"kinds", 0},  {"stochastic_replicates", 0}, {"methods", 0},
                               {"seeds", 0},     {"instance_seed", 0}, {"solver", 0},         {"output_dir", 0}};
    detail::reject_unknown_keys(j, known, "experiment");
    c.instances = j.at("instances").get<std::vector<std::string>>();
    if (j.contains("kinds")) {
        c.kinds.clear();
        for (const auto& k : j.at("kinds")) c.kinds.push_back(parse_variant_kind(k.get<std::string>()));
    }
    if (j.contains("methods")) {
        c.methods.clear();
        for (const auto& m : j.at("methods")) c.methods.push_back(parse_method(m.get<std::string>()));
    }
    c.stochastic_replicates = j.value("stochastic_replicates", c.stochastic_replicates);
    if (j.contains("seeds")) c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    c.instance_seed = j.value("instance_seed", c.instance_seed);
    if (j.contains("solver")) c.solver = config_from_json(j.at("solver"));
    c.output_dir = j.value("output_dir", c.output_dir);
    if (c.stochastic_replicates < 1) throw std::invalid_argument("experiment: stochastic_replicates must be >= 1");
    if (c.seeds.empty()) throw std::invalid_argument("experiment: at least one seed is required");
    return c;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline const char* kCsvHeader =
    "dataset,instance,variant,replicate,method,seed,makespan,runtime_s,cross_agent_pct,interleaved_pct,error";

namespace detail {

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(std::move(cur));
    return out;
}

template <typename T>
T parse_number(const std::string& s) {
    T value{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw std::invalid_argument("csv: bad number '" + s + "'");
    return value;
}

}  // namespace detail

inline std::string rows_to_csv(const std::vector<ResultRow>& rows) {
    std::ostringstream out;
    out << kCsvHeader << '\n';
    for (const auto& r : rows) {
        out << detail::csv_field(r.dataset) << ',' << detail::csv_field(r.instance) << ',' << r.variant << ','
            << r.replicate << ',' << r.method << ',' << r.seed << ',' << format_number(r.makespan) << ','
            << format_number(r.runtime) << ',' << format_number(r.cross_agent_pct) << ','
            << format_number(r.interleaved_pct) << ',' << detail::csv_field(r.error) << '\n';
    }
    return out.str();
}

inline std::vector<ResultRow> rows_from_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || detail::trim(line) != kCsvHeader) throw std::invalid_argument("csv: unexpected header");
    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (detail::trim(line).empty()) continue;
        // A quoted field may span lines.
        std::string more;
        while (std::count(line.begin(), line.end(), '"') % 2 == 1 && std::getline(in, more)) line += "\n" + more;
        const auto f = detail::split_csv_line(line);
        if (f.size() != 11) throw std::invalid_argument("csv: expected 11 fields, got " + std::to_string(f.size()));
        ResultRow r;
        r.dataset = f[0];
        r.instance = f[1];
        r.variant = f[2];
        r.replicate = detail::parse_number<int>(f[3]);
        r.method = f[4];
        r.seed = detail::parse_number<std::uint64_t>(f[5]);
        r.makespan = detail::parse_number<double>(f[6]);
        r.runtime = detail::parse_number<double>(f[7]);
        r.cross_agent_pct = detail::parse_number<double>(f[8]);
        r.interleaved_pct = detail::parse_number<double>(f[9]);
        r.error = f[10];
        rows.push_back(std::move(r));
    }
    return rows;
}

inline std::vector<ResultRow> rows_from_csv(const std::string& text) {
    std::istringstream in(text);
    return rows_from_csv(in);
}

inline std::vector<ResultRow> load_rows(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return rows_from_csv(in);
}

inline void sort_rows(std::vector<ResultRow>& rows) {
    std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        return std::tie(a.dataset, a.variant, a.replicate, a.seed, a.method) <
               std::tie(b.dataset, b.variant, b.replicate, b.seed, b.method);
    });
}

// ---------------------------------------------------------------------------
// Running
// ---------------------------------------------------------------------------

inline ResultRow make_row(const Instance& inst, const std::string& dataset, Method method, std::uint64_t seed,
                          const Solution& sol, double seconds) {
    ResultRow r;
    r.dataset = dataset;
    r.instance = inst.label;
    r.variant = to_string(inst.variant.kind);
    r.replicate = inst.variant.replicate;
    r.method = to_string(method);
    r.seed = seed;
    r.runtime = seconds;
    const Schedule s = evaluate(inst, sol);
    r.makespan = s.makespan;
    const auto metrics = coordination_metrics(inst, sol, s);
    r.cross_agent_pct = metrics.cross_agent_pct;
    r.interleaved_pct = metrics.interleaved_pct;
    return r;
}

/// Runs the requested methods on one instance. The pipeline reuses the ALNS
/// incumbent when ALNS was also requested.
inline std::vector<ResultRow> run_cell(const Instance& inst, const std::string& dataset,
                                       const std::vector<Method>& methods, const SolverConfig& cfg,
                                       std::uint64_t seed) {
    using clock = std::chrono::steady_clock;
    auto wants = [&](Method m) { return std::find(methods.begin(), methods.end(), m) != methods.end(); };
    auto failed = [&](Method m, const std::string& what) {
        ResultRow r;
        r.dataset = dataset;
        r.instance = inst.label;
        r.variant = to_string(inst.variant.kind);
        r.replicate = inst.variant.replicate;
        r.method = to_string(m);
        r.seed = seed;
        r.error = what.empty() ? "failed" : what;
        return r;
    };

    std::vector<ResultRow> rows;
    if (wants(Method::Heuristics)) {
        try {
            const auto t0 = clock::now();
            const Solution sol = best_heuristic(inst, seed);
            rows.push_back(make_row(inst, dataset, Method::Heuristics, seed, sol,
                                    std::chrono::duration<double>(clock::now() - t0).count()));
        } catch (const std::exception& e) {
            rows.push_back(failed(Method::Heuristics, e.what()));
        }
    }
    if (wants(Method::Alns) || wants(Method::Pipeline)) {
        try {
            const auto t0 = clock::now();
            AlnsResult alns;
            if (cfg.pool_size == 1) {
                alns = run_alns(inst, cfg.alns, derive_seed(seed, 0));
            } else {
                PoolResult pool = run_pool(inst, cfg.alns, cfg.pool_size, seed);
                alns.best = pool.best;
                alns.best_makespan = pool.best_makespan;
            }
            const double alns_seconds = std::chrono::duration<double>(clock::now() - t0).count();
            if (wants(Method::Alns)) rows.push_back(make_row(inst, dataset, Method::Alns, seed, alns.best, alns_seconds));
            if (wants(Method::Pipeline)) {
                const auto t1 = clock::now();
                Rng rng(derive_seed(seed, 0xB4C6A));
                auto population = warm_start_population(inst, alns.best, cfg.brkga, rng);
                const BrkgaResult ga = run_brkga(inst, cfg.brkga, std::move(population), derive_seed(seed, 0xB4C6B));
                const Solution& best =
                    ga.complete && ga.best_fitness < alns.best_makespan ? ga.best : alns.best;
                rows.push_back(make_row(inst, dataset, Method::Pipeline, seed, best,
                                        alns_seconds + std::chrono::duration<double>(clock::now() - t1).count()));
            }
        } catch (const std::exception& e) {
            if (wants(Method::Alns)) rows.push_back(failed(Method::Alns, e.what()));
            if (wants(Method::Pipeline)) rows.push_back(failed(Method::Pipeline, e.what()));
        }
    }
    return rows;
}

inline std::string dataset_name(const RawTsplib& raw, const std::string& path) {
    if (!raw.name.empty()) return raw.name;
    return std::filesystem::path(path).stem().string();
}

/// Every (instance file, variant, replicate, seed) cell. A file that fails
/// to load produces one error row per method.
inline std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
    std::vector<ResultRow> rows;
    for (const auto& path : cfg.instances) {
        RawTsplib raw;
        try {
            raw = load_tsplib(path);
        } catch (const std::exception& e) {
            for (Method m : cfg.methods) {
                ResultRow r;
                r.dataset = std::filesystem::path(path).stem().string();
                r.instance = path;
                r.method = to_string(m);
                r.error = e.what();
                rows.push_back(r);
            }
            continue;
        }
        const std::string dataset = dataset_name(raw, path);
        for (VariantKind kind : cfg.kinds) {
            const int replicates = is_stochastic(kind) ? cfg.stochastic_replicates : 1;
            for (int rep = 0; rep < replicates; ++rep) {
                const Instance inst = build_instance(raw, {kind, cfg.instance_seed, rep});
                for (std::uint64_t seed : cfg.seeds) {
                    auto cell = run_cell(inst, dataset, cfg.methods, cfg.solver, seed);
                    rows.insert(rows.end(), cell.begin(), cell.end());
                }
            }
        }
    }
    sort_rows(rows);
    return rows;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline double improvement_pct(double before, double after) { return 100.0 * (before - after) / before; }

/// Mean makespan per (dataset, variant, method) over replicates and seeds.
inline std::map<std::tuple<std::string, std::string, std::string>, double> mean_makespans(
    const std::vector<ResultRow>& rows) {
    std::map<std::tuple<std::string, std::string, std::string>, std::pair<double, int>> acc;
    for (const auto& r : rows) {
        if (!r.ok()) continue;
        auto& [sum, count] = acc[{r.dataset, r.variant, r.method}];
        sum += r.makespan;
        ++count;
    }
    std::map<std::tuple<std::string, std::string, std::string>, double> out;
    for (const auto& [key, v] : acc) out[key] = v.first / v.second;
    return out;
}

namespace detail {

inline std::string fixed(double v, int digits) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
}

}  // namespace detail

/// Text table with one block per dataset: heuristics, ALNS, pipeline and the
/// two improvement rows, one column per variant.
inline std::string render_results_table(const std::vector<ResultRow>& rows) {
    const auto mean = mean_makespans(rows);
    std::vector<std::string> datasets;
    std::vector<std::string> variants;
    for (const char* v : {"base", "2x", "5x", "1r10", "1r20"}) {
        if (std::any_of(rows.begin(), rows.end(), [&](const ResultRow& r) { return r.variant == v; }))
            variants.emplace_back(v);
    }
    for (const auto& r : rows)
        if (std::find(datasets.begin(), datasets.end(), r.dataset) == datasets.end()) datasets.push_back(r.dataset);

    auto cell = [&](const std::string& ds, const std::string& variant, const char* method) -> std::optional<double> {
        auto it = mean.find({ds, variant, method});
        if (it == mean.end()) return std::nullopt;
        return it->second;
    };

    std::ostringstream out;
    out << std::left << std::setw(12) << "Instance" << std::setw(20) << "Approach";
    for (const auto& v : variants) out << std::right << std::setw(11) << v;
    out << '\n';
    for (const auto& ds : datasets) {
        const std::vector<std::pair<std::string, const char*>> lines{
            {"(0) Heuristics", "heuristics"}, {"(1) ALNS", "alns"}, {"(2) ALNS+BRKGA", "pipeline"}};
        bool first = true;
        for (const auto& [label, method] : lines) {
            out << std::left << std::setw(12) << (first ? ds : "") << std::setw(20) << label;
            for (const auto& v : variants) {
                const auto z = cell(ds, v, method);
                out << std::right << std::setw(11) << (z ? detail::fixed(*z, 1) : "-");
            }
            out << '\n';
            first = false;
        }
        auto impr_line = [&](const char* label, const char* before, const char* after) {
            out << std::left << std::setw(12) << "" << std::setw(20) << label;
            for (const auto& v : variants) {
                const auto a = cell(ds, v, before), b = cell(ds, v, after);
                out << std::right << std::setw(11) << (a && b ? detail::fixed(improvement_pct(*a, *b), 2) : "-");
            }
            out << '\n';
        };
        impr_line("1 Impr. %", "heuristics", "alns");
        impr_line("2 vs 1 Impr. %", "alns", "pipeline");
    }
    return out.str();
}

struct HypothesisRow {
    std::string metric;   // cross_agent_pct or interleaved_pct
    std::string variant;  // compared against base
    std::size_t pairs = 0;
    double mean_base = 0.0;
    double mean_variant = 0.0;
    std::optional<WilcoxonResult> wilcoxon;
    std::optional<double> cohens_d;
    std::string note;
};

/// Paired (base, variant) metric means per dataset for one method; datasets
/// missing either side are skipped.
inline std::vector<std::pair<double, double>> metric_pairs(const std::vector<ResultRow>& rows, const std::string& method,
                                                           const std::string& variant, bool cross_agent) {
    std::map<std::string, std::pair<double, int>> base, other;
    for (const auto& r : rows) {
        if (!r.ok() || r.method != method) continue;
        const double v = cross_agent ? r.cross_agent_pct : r.interleaved_pct;
        if (r.variant == "base") {
            base[r.dataset].first += v;
            ++base[r.dataset].second;
        } else if (r.variant == variant) {
            other[r.dataset].first += v;
            ++other[r.dataset].second;
        }
    }
    std::vector<std::pair<double, double>> pairs;
    for (const auto& [ds, b] : base) {
        auto it = other.find(ds);
        if (it == other.end()) continue;
        pairs.emplace_back(b.first / b.second, it->second.first / it->second.second);
    }
    return pairs;
}

/// Paired one-sided tests of each coordination metric, variant > base,
/// using the best available method (pipeline, else ALNS, else heuristics).
inline std::vector<HypothesisRow> hypothesis_table(const std::vector<ResultRow>& rows) {
    std::string method = "heuristics";
    for (const char* m : {"alns", "pipeline"})
        if (std::any_of(rows.begin(), rows.end(), [&](const ResultRow& r) { return r.method == m && r.ok(); }))
            method = m;

    std::vector<HypothesisRow> out;
    for (bool cross : {true, false}) {
        for (const char* variant : {"2x", "5x", "1r10", "1r20"}) {
            const auto pairs = metric_pairs(rows, method, variant, cross);
            if (pairs.empty()) continue;
            HypothesisRow h;
            h.metric = cross ? "cross_agent_pct" : "interleaved_pct";
            h.variant = variant;
            h.pairs = pairs.size();
            for (const auto& [b, v] : pairs) {
                h.mean_base += b / static_cast<double>(pairs.size());
                h.mean_variant += v / static_cast<double>(pairs.size());
            }
            try {
                h.wilcoxon = wilcoxon_signed_rank(pairs, Alternative::Greater);
            } catch (const std::exception& e) {
                h.note = e.what();
            }
            try {
                h.cohens_d = cohens_d_paired(pairs);
            } catch (const std::exception& e) {
                if (h.note.empty()) h.note = e.what();
            }
            out.push_back(std::move(h));
        }
    }
    return out;
}

inline std::string render_hypothesis_table(const std::vector<HypothesisRow>& table) {
    std::ostringstream out;
    out << std::left << std::setw(17) << "metric" << std::setw(9) << "variant" << std::right << std::setw(6) << "n"
        << std::setw(10) << "base" << std::setw(10) << "variant" << std::setw(9) << "delta" << std::setw(9) << "W"
        << std::setw(11) << "p" << std::setw(9) << "d" << "  note\n";
    for (const auto& h : table) {
        out << std::left << std::setw(17) << h.metric << std::setw(9) << h.variant << std::right << std::setw(6)
            << h.pairs << std::setw(10) << detail::fixed(h.mean_base, 2) << std::setw(10)
            << detail::fixed(h.mean_variant, 2) << std::setw(9) << detail::fixed(h.mean_variant - h.mean_base, 2)
            << std::setw(9) << (h.wilcoxon ? detail::fixed(h.wilcoxon->w, 1) : "-") << std::setw(11)
            << (h.wilcoxon ? detail::fixed(h.wilcoxon->p, 4) : "-") << std::setw(9)
            << (h.cohens_d ? detail::fixed(*h.cohens_d, 3) : "-") << "  " << h.note << '\n';
    }
    return out.str();
}

}  // namespace vrprpd
