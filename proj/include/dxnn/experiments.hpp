#pragma once

// Experiment harness: benchmark repetitions, parameter sweeps, diversity
// profiles and flatland runs, configured by flat key=value files and written
// out as CSV.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "dxnn/benchmarks.hpp"
#include "dxnn/flatland.hpp"

namespace dxnn {

enum class ExperimentKind { bench, ablate, diversity, alife };
enum class SweepKind { base_max_mistakes, pop_size, weight_rim };

std::string_view to_string(ExperimentKind kind);
std::string_view to_string(SweepKind kind);

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::bench;
    std::string variant = "dpb-vel"; // xor, dpb-vel, dpb-novel-undamped, dpb-novel-damped
    std::size_t repetitions = 100;
    std::size_t population_limit = 10;
    std::size_t base_max_mistakes = 10;
    double weight_rim = 1.5707963267948966; // perturbations and new weights drawn from U(-rim, rim)
    double weight_saturation = 0.0;          // 0 = unbounded weights
    std::vector<std::string> activations{"tanh"};
    std::vector<std::string> learning_methods{"none"};
    std::size_t max_evaluations = 50000;
    std::size_t max_generations = 100;
    std::size_t horizon = 100000;
    std::uint64_t seed = 1;
    std::filesystem::path output_dir = "out";
    std::size_t workers = 1;
    bool wall_time = true; // off makes the CSVs byte-reproducible

    // ablate
    SweepKind sweep = SweepKind::base_max_mistakes;
    std::vector<double> sweep_values;

    // diversity
    std::size_t generations = 20;
    bool af_as_set = false;

    // alife
    Scenario scenario = Scenario::food;
    int version = 1;
    std::size_t evaluation_cap = 0;
    std::size_t alife_population = 0;
    bool replay = false;
};

// Defaults per kind (repetitions, variant, sweep values, activations).
ExperimentConfig default_config(ExperimentKind kind);
// Applies one key=value setting. Throws ConfigError on unknown keys or bad values.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);
// Reads a key=value file ('#' starts a comment) on top of `config`.
void apply_file(ExperimentConfig& config, const std::filesystem::path& path);
void apply_text(ExperimentConfig& config, std::istream& in, const std::string& source);
void validate(const ExperimentConfig& config);

// Sweep values in the order they are run (the configured list or the default).
std::vector<double> sweep_values(const ExperimentConfig& config);

struct RunRecord {
    std::size_t run_id = 0;
    std::string variant;
    double sweep_value = 0.0;
    RunResult result;
    double wall_seconds = 0.0;
};

struct SummaryRow {
    std::string variant;
    double sweep_value = 0.0;
    std::size_t runs = 0;
    std::size_t solved = 0;
    double failure_rate = 0.0;
    double mean_evaluations = 0.0; // over solved runs
    double mean_neurons = 0.0;     // over solved runs
    double median_neurons = 0.0;   // over solved runs
    std::size_t evaluation_cap_failures = 0;
    std::size_t generation_cap_failures = 0;
};

SummaryRow summarize(const std::vector<RunRecord>& runs);

struct ExperimentOutput {
    std::vector<RunRecord> runs;
    std::vector<SummaryRow> summary;
};

// Tuning/mutation/run settings a config implies for one repetition.
RunConfig run_config(const ExperimentConfig& config);
Task make_task(const ExperimentConfig& config);

// bench and ablate: runs every repetition (of every sweep value) and writes
// runs.csv and summary.csv into the output directory.
ExperimentOutput run_experiment(const ExperimentConfig& config);

struct DiversityPoint {
    std::size_t generation = 0;
    double avg_diversity = 0.0;
};

// Writes diversity.csv.
std::vector<DiversityPoint> run_diversity_profile(const ExperimentConfig& config);

struct AlifeRun {
    std::size_t run_id = 0;
    FlatlandResult result;
};

FlatlandConfig flatland_config(const ExperimentConfig& config, std::size_t run_index);
// Writes trace.csv, summary.csv and, with replay on, replay_<run>.log.
std::vector<AlifeRun> run_alife(const ExperimentConfig& config);

void write_runs_csv(std::ostream& out, const std::vector<RunRecord>& runs, bool wall_time);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

} // namespace dxnn
