#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "vrprpd/vrprpd.hpp"

using namespace vrprpd;
namespace fs = std::filesystem;

namespace {

// JSON instance documents load as-is; anything else is read as TSPLIB and
// turned into the base variant.
Instance read_instance(const std::string& path, std::uint64_t instance_seed) {
    if (fs::path(path).extension() == ".json") return load_instance(path);
    return build_instance(load_tsplib(path), {VariantKind::Base, instance_seed, 0});
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    if (fs::path(path).has_parent_path()) fs::create_directories(fs::path(path).parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::string alns_trace_csv(const AlnsStats& stats) {
    std::ostringstream out;
    out << "iteration,best_makespan,temperature";
    for (auto op : kDestroyOps) out << ",w_" << to_string(op);
    for (auto op : kRepairOps) out << ",w_" << to_string(op);
    out << '\n';
    for (const auto& r : stats.rows) {
        out << r.iteration << ',' << r.best_makespan << ',' << r.temperature;
        for (double w : r.destroy_weights) out << ',' << w;
        for (double w : r.repair_weights) out << ',' << w;
        out << '\n';
    }
    return out.str();
}

int cmd_solve(const std::string& path, const std::string& method, std::uint64_t seed, const std::string& params,
              const std::string& out, const std::string& trace, std::uint64_t instance_seed) {
    const Instance inst = read_instance(path, instance_seed);
    const SolverConfig cfg = params.empty() ? SolverConfig{} : load_config(params);
    const auto t0 = std::chrono::steady_clock::now();
    Solution best;
    const Method m = parse_method(method);
    if (m == Method::Heuristics) {
        best = best_heuristic(inst, seed);
    } else if (m == Method::Alns) {
        if (cfg.pool_size == 1) {
            AlnsResult r = run_alns(inst, cfg.alns, derive_seed(seed, 0));
            if (!trace.empty()) write_text(trace, alns_trace_csv(r.stats));
            best = std::move(r.best);
        } else {
            best = run_pool(inst, cfg.alns, cfg.pool_size, seed).best;
        }
    } else {
        PipelineResult r = run_pipeline(inst, cfg.alns, cfg.brkga, seed, cfg.pool_size);
        if (!trace.empty()) {
            std::ostringstream ga;
            ga << "generation,best_fitness\n";
            for (std::size_t g = 0; g < r.brkga.stats.best_fitness.size(); ++g)
                ga << g << ',' << r.brkga.stats.best_fitness[g] << '\n';
            write_text(trace, ga.str());
        }
        best = std::move(r.best);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const Schedule s = evaluate(inst, best);
    const auto metrics = coordination_metrics(inst, best, s);
    std::cerr << inst.label << " " << method << " makespan " << s.makespan << " cross_agent " << metrics.cross_agent_pct
              << "% interleaved " << metrics.interleaved_pct << "% (" << std::fixed << std::setprecision(2) << secs
              << " s)\n";
    write_text(out, solution_to_json(best, inst.label).dump() + "\n");
    return 0;
}

int cmd_variants(const std::string& path, const std::string& kinds, std::uint64_t seed, int replicates,
                 const std::string& out) {
    const RawTsplib raw = load_tsplib(path);
    fs::create_directories(out);
    for (const auto& k : split_list(kinds)) {
        const VariantKind kind = parse_variant_kind(k);
        const int reps = is_stochastic(kind) ? replicates : 1;
        for (int r = 0; r < reps; ++r) {
            const Instance inst = build_instance(raw, {kind, seed, r});
            const fs::path file = fs::path(out) / (inst.label + ".json");
            write_text(file.string(), instance_to_json(inst).dump() + "\n");
            std::cout << file.string() << '\n';
        }
    }
    return 0;
}

int cmd_bench(const std::string& config, const std::string& out) {
    ExperimentConfig cfg = experiment_from_json(read_json_file(config));
    if (!out.empty()) cfg.output_dir = out;
    const auto rows = run_experiment(cfg);
    fs::create_directories(cfg.output_dir);
    const fs::path dir(cfg.output_dir);
    write_text((dir / "results.csv").string(), rows_to_csv(rows));
    const std::string table = render_results_table(rows);
    const std::string hyp = render_hypothesis_table(hypothesis_table(rows));
    write_text((dir / "table.txt").string(), table);
    write_text((dir / "hypotheses.txt").string(), hyp);
    std::cout << table << '\n' << hyp;
    int errors = 0;
    for (const auto& r : rows) errors += !r.ok();
    if (errors) std::cerr << errors << " cell(s) failed; see the error column\n";
    return 0;
}

int cmd_verify(const std::string& instance_path, const std::string& solution_path, std::uint64_t instance_seed) {
    const Instance inst = read_instance(instance_path, instance_seed);
    const Solution sol = load_solution(solution_path);
    Schedule s;
    std::string why;
    const ScheduleStatus status = simulate(inst, sol, s, &why);
    if (status != ScheduleStatus::Ok) {
        std::cout << "status: " << to_string(status) << "\n" << why << '\n';
        return 1;
    }
    const auto metrics = coordination_metrics(inst, sol, s);
    int precedence = 0, capacity = 0;
    for (int c = 1; c <= inst.n; ++c) {
        const auto ci = static_cast<std::size_t>(c);
        precedence += s.t_pickup[ci] - s.t_drop[ci] < inst.p(c);
    }
    std::cout << "status: ok\n"
              << "makespan: " << s.makespan << '\n'
              << "cross_agent_pct: " << metrics.cross_agent_pct << '\n'
              << "interleaved_pct: " << metrics.interleaved_pct << '\n'
              << "vehicle,customer,op,arrival,departure,load_after\n";
    for (std::size_t v = 0; v < s.events.size(); ++v)
        for (const auto& e : s.events[v]) {
            capacity += e.load_after < 0 || e.load_after > inst.k();
            std::cout << v << ',' << e.customer << ',' << (e.kind == OpKind::Dropoff ? 'D' : 'P') << ',' << e.arrival
                      << ',' << e.departure << ',' << e.load_after << '\n';
        }
    for (std::size_t v = 0; v < s.return_time.size(); ++v)
        std::cout << "return " << v << ": " << s.return_time[v] << '\n';
    std::cout << "precedence violations: " << precedence << "\ncapacity violations: " << capacity << '\n';
    return precedence + capacity == 0 ? 0 : 1;
}

int cmd_oracle(const std::string& path, const std::string& out, double max_seconds, std::uint64_t instance_seed) {
    const Instance inst = read_instance(path, instance_seed);
    OracleLimits limits;
    limits.max_seconds = max_seconds;
    OracleResult r;
    try {
        r = exact_solve(inst, limits);
    } catch (const LimitExceeded& e) {
        r = e.result;
        std::cerr << "search budget exhausted; best found is not proven optimal\n";
    }
    std::cerr << "makespan " << r.makespan << (r.optimal ? " (optimal)" : "") << ", " << r.nodes << " nodes\n";
    write_text(out, solution_to_json(r.solution, inst.label).dump() + "\n");
    return 0;
}

int cmd_stats(const std::string& rows_path) {
    const auto rows = load_rows(rows_path);
    std::cout << render_results_table(rows) << '\n' << render_hypothesis_table(hypothesis_table(rows));
    return 0;
}

int cmd_export_milp(const std::string& path, const std::string& out, double big_m, std::uint64_t instance_seed) {
    const Instance inst = read_instance(path, instance_seed);
    const MilpModel model = big_m > 0 ? export_milp(inst, big_m) : export_milp(inst);
    write_text(out, model.text);
    std::cerr << model.rows << " constraint rows\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Vehicle routing with resource-constrained pickup and delivery"};
    app.require_subcommand(1);
    std::uint64_t instance_seed = 42;
    app.add_option("--instance-seed", instance_seed, "Processing-time seed when an instance is read from TSPLIB")
        ->capture_default_str();

    std::string instance, solution, method = "pipeline", params, out, trace, kinds = "base,2x,5x,1r10,1r20",
                config, rows;
    std::uint64_t seed = 1;
    int replicates = 10;
    double max_seconds = 600, big_m = 0;

    auto* solve = app.add_subcommand("solve", "Solve an instance");
    solve->add_option("instance", instance, "Instance (.json document or TSPLIB file)")->required();
    solve->add_option("--method", method)->check(CLI::IsMember({"heuristics", "alns", "pipeline"}))->capture_default_str();
    solve->add_option("--seed", seed)->capture_default_str();
    solve->add_option("--params", params, "Solver config (JSON)");
    solve->add_option("--out", out, "Solution file (default stdout)");
    solve->add_option("--trace", trace, "Convergence rows (CSV)");

    auto* variants = app.add_subcommand("variants", "Write processing-time variants of a TSPLIB file");
    variants->add_option("tsp", instance)->required();
    variants->add_option("--kinds", kinds)->capture_default_str();
    std::uint64_t variant_seed = 42;
    variants->add_option("--seed", variant_seed, "Processing-time seed")->capture_default_str();
    variants->add_option("--replicates", replicates, "Replicates of 1r10/1r20")->capture_default_str();
    variants->add_option("--out", out)->required();

    auto* bench = app.add_subcommand("bench", "Run an experiment grid");
    bench->add_option("--config", config)->required();
    bench->add_option("--out", out, "Output directory (overrides the config)");

    auto* verify = app.add_subcommand("verify", "Replay a solution and report its schedule");
    verify->add_option("instance", instance)->required();
    verify->add_option("solution", solution)->required();

    auto* oracle = app.add_subcommand("oracle", "Exact search for tiny instances");
    oracle->add_option("instance", instance)->required();
    oracle->add_option("--out", out);
    oracle->add_option("--max-seconds", max_seconds)->capture_default_str();

    auto* stats = app.add_subcommand("stats", "Tables and tests from result rows");
    stats->add_option("--rows", rows)->required();

    auto* milp = app.add_subcommand("export-milp", "Write the MILP model in LP format");
    milp->add_option("instance", instance)->required();
    milp->add_option("--out", out);
    milp->add_option("--big-m", big_m, "Big-M constant (default: derived bound)");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*solve) return cmd_solve(instance, method, seed, params, out, trace, instance_seed);
        if (*variants) return cmd_variants(instance, kinds, variant_seed, replicates, out);
        if (*bench) return cmd_bench(config, out);
        if (*verify) return cmd_verify(instance, solution, instance_seed);
        if (*oracle) return cmd_oracle(instance, out, max_seconds, instance_seed);
        if (*stats) return cmd_stats(rows);
        if (*milp) return cmd_export_milp(instance, out, big_m, instance_seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
