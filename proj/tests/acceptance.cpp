// Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "dxnn/experiments.hpp"
#include "oracles.hpp"

using namespace dxnn;
using testing::Check;
namespace fs = std::filesystem;

namespace {

fs::path out_dir(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / "dxnn_acceptance" / name;
    fs::remove_all(dir);
    return dir;
}

std::string fmt(double v, int precision = 2)
{
    std::ostringstream s;
    s.precision(precision);
    s << std::fixed << v;
    return s.str();
}

ExperimentConfig bench(const std::string& variant, std::size_t runs, std::size_t bmm, const std::string& dir)
{
    ExperimentConfig c = default_config(ExperimentKind::bench);
    c.variant = variant;
    c.repetitions = runs;
    c.population_limit = 10;
    c.base_max_mistakes = bmm;
    c.wall_time = false;
    c.output_dir = out_dir(dir);
    return c;
}

std::size_t max_neurons(const ExperimentOutput& out)
{
    std::size_t m = 0;
    for (const RunRecord& r : out.runs)
        if (r.result.solved)
            m = std::max(m, r.result.neurons);
    return m;
}

std::size_t min_neurons(const ExperimentOutput& out)
{
    std::size_t m = SIZE_MAX;
    for (const RunRecord& r : out.runs)
        if (r.result.solved)
            m = std::min(m, r.result.neurons);
    return m;
}

Check xor_criterion()
{
    const ExperimentOutput out = run_experiment(bench("xor", 100, 10, "xor"));
    const SummaryRow& s = out.summary[0];
    const bool sizes = s.solved > 0 && min_neurons(out) >= 2 && max_neurons(out) <= 3;
    return {s.solved == s.runs && sizes,
            "solved " + std::to_string(s.solved) + "/" + std::to_string(s.runs) + ", solver sizes " +
                (s.solved > 0 ? std::to_string(min_neurons(out)) + ".." + std::to_string(max_neurons(out)) : "-") +
                ", mean " + fmt(s.mean_neurons)};
}

Check dpb_velocities()
{
    const ExperimentOutput out = run_experiment(bench("dpb-vel", 50, 10, "dpb_vel"));
    const SummaryRow& s = out.summary[0];
    return {s.solved == s.runs && s.mean_evaluations <= 3.0 * 725.0 && s.median_neurons <= 2.0,
            "solved " + std::to_string(s.solved) + "/50, mean evaluations " + fmt(s.mean_evaluations, 1) +
                " (limit 2175), median size " + fmt(s.median_neurons, 1)};
}

Check dpb_damped()
{
    const ExperimentOutput out = run_experiment(bench("dpb-novel-damped", 50, 20, "dpb_damped"));
    const SummaryRow& s = out.summary[0];
    return {static_cast<double>(s.solved) >= 0.9 * 50.0 && s.mean_evaluations <= 3.0 * 2313.0 && s.median_neurons <= 3.0,
            "solved " + std::to_string(s.solved) + "/50, mean evaluations " + fmt(s.mean_evaluations, 1) +
                " (limit 6939), median size " + fmt(s.median_neurons, 1)};
}

Check bmm_trend()
{
    ExperimentConfig c = bench("dpb-novel-damped", 100, 10, "trend");
    c.kind = ExperimentKind::ablate;
    c.sweep = SweepKind::base_max_mistakes;
    c.sweep_values = {10, 30, 100};
    const ExperimentOutput out = run_experiment(c);
    bool pass = true;
    std::string detail = "size/evaluations:";
    for (std::size_t i = 0; i < out.summary.size(); ++i) {
        const SummaryRow& s = out.summary[i];
        detail += " BMM " + fmt(s.sweep_value, 0) + " " + fmt(s.mean_neurons) + "/" + fmt(s.mean_evaluations, 0);
        if (i > 0) {
            pass = pass && s.mean_neurons <= out.summary[i - 1].mean_neurons;
            pass = pass && s.mean_evaluations >= out.summary[i - 1].mean_evaluations;
        }
    }
    return {pass, detail};
}

Check rim()
{
    ExperimentConfig c = bench("dpb-novel-damped", 20, 50, "rim");
    c.kind = ExperimentKind::ablate;
    c.sweep = SweepKind::weight_rim;
    c.sweep_values = {0.1, std::numbers::pi};
    const ExperimentOutput out = run_experiment(c);
    const SummaryRow& narrow = out.summary[0];
    const SummaryRow& wide = out.summary[1];
    return {narrow.failure_rate >= 0.9 && wide.failure_rate <= 0.1,
            "failure at +-0.1 " + fmt(100.0 * narrow.failure_rate, 0) + "%, at +-pi " +
                fmt(100.0 * wide.failure_rate, 0) + "%"};
}

Check diversity()
{
    ExperimentConfig c = default_config(ExperimentKind::diversity);
    c.repetitions = 20;
    c.generations = 20;
    c.output_dir = out_dir("diversity");
    const std::vector<DiversityPoint> points = run_diversity_profile(c);
    bool pass = points.size() > 5 && points[5].avg_diversity >= 25.0;
    double worst = 0.0;
    for (std::size_t g = 1; g < points.size(); ++g) {
        const double drop = 1.0 - points[g].avg_diversity / points[g - 1].avg_diversity;
        worst = std::max(worst, drop);
    }
    pass = pass && worst <= 0.2;
    return {pass, "generation 5 " + fmt(points[5].avg_diversity) + ", generation 20 " +
                      fmt(points.back().avg_diversity) + ", worst drop " + fmt(100.0 * worst, 1) + "%"};
}

Check physics()
{
    const Check step = testing::physics_step_oracle();
    const Check energy = testing::physics_energy_drift(1000);
    return {step.pass && energy.pass, step.detail + "; " + energy.detail};
}

Check mutation()
{
    const Check closure = testing::mutation_closure(10000);
    const Check chi = testing::mutation_count_uniformity(10000);
    return {closure.pass && chi.pass, closure.detail + "; " + chi.detail};
}

const TraceRow* trace_at(const FlatlandResult& r, std::size_t evaluation, EntityKind species)
{
    for (const TraceRow& row : r.trace)
        if (row.evaluation == evaluation && row.species == species)
            return &row;
    return nullptr;
}

const TraceRow* last_trace(const FlatlandResult& r, EntityKind species)
{
    const TraceRow* last = nullptr;
    for (const TraceRow& row : r.trace)
        if (row.species == species)
            last = &row;
    return last;
}

Check flatland()
{
    ExperimentConfig c = default_config(ExperimentKind::alife);
    c.repetitions = 3;
    c.scenario = Scenario::food;
    c.version = 1;
    c.output_dir = out_dir("food_v1");
    bool improved = true;
    std::string detail = "v1 end/eval-500:";
    for (const AlifeRun& run : run_alife(c)) {
        const TraceRow* early = trace_at(run.result, 500, EntityKind::prey);
        const TraceRow* end = last_trace(run.result, EntityKind::prey);
        if (early == nullptr || end == nullptr) {
            improved = false;
            continue;
        }
        const double ratio = end->avg_fitness / early->avg_fitness;
        improved = improved && ratio >= 20.0;
        detail += " " + fmt(end->avg_fitness, 1) + "/" + fmt(early->avg_fitness, 1) + "=" + fmt(ratio, 1) + "x";
    }

    c.version = 2;
    c.output_dir = out_dir("food_v2");
    std::size_t acquired = 0;
    detail += "; v2 color-connected genotypes:";
    for (const AlifeRun& run : run_alife(c)) {
        const SpeciesSummary& prey = run.result.species.front();
        acquired += prey.color_connected > 0 ? 1 : 0;
        detail += " " + std::to_string(prey.color_connected) + "/" + std::to_string(prey.population);
    }

    c.version = 1;
    c.repetitions = 1;
    c.scenario = Scenario::predator_prey;
    c.output_dir = out_dir("predator_prey");
    const FlatlandResult pp = run_alife(c).front().result;
    bool pools = pp.evaluations == resolve(flatland_config(c, 0)).evaluation_cap && pp.species.size() == 2;
    detail += "; predator-prey " + std::to_string(pp.evaluations) + " evaluations, pool/baseline:";
    for (const SpeciesSummary& s : pp.species) {
        pools = pools && s.pool_mean_fitness > s.baseline_fitness;
        detail += " " + std::string(to_string(s.species)) + " " + fmt(s.pool_mean_fitness) + "/" + fmt(s.baseline_fitness);
    }
    return {improved && acquired >= 2 && pools, detail};
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Check()>>> criteria{
        {"xor", xor_criterion},
        {"dpb-velocities", dpb_velocities},
        {"dpb-damped", dpb_damped},
        {"ablation-trend", bmm_trend},
        {"weight-rim", rim},
        {"diversity", diversity},
        {"physics-oracle", physics},
        {"selection-oracle", testing::selection_oracle},
        {"tuning-properties", [] { return testing::tuning_properties(1000); }},
        {"mutation-closure", mutation},
        {"flatland", flatland},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Check result;
        try {
            result = check();
        } catch (const std::exception& e) {
            result = {false, std::string("exception: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += result.pass ? 0 : 1;
        std::printf("%s %s: %s [%.1fs]\n", result.pass ? "PASS" : "FAIL", name.c_str(), result.detail.c_str(), seconds);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
