#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "dxnn/errors.hpp"
#include "dxnn/experiments.hpp"

using namespace dxnn;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("dxnn_test_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& path)
{
    std::ifstream in(path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

} // namespace

TEST_CASE("settings parse reals, lists and booleans")
{
    ExperimentConfig c = default_config(ExperimentKind::ablate);
    apply_setting(c, "weight_rim", "pi");
    CHECK(c.weight_rim == std::numbers::pi);
    apply_setting(c, "weight_rim", " pi/4 ");
    CHECK(c.weight_rim == doctest::Approx(std::numbers::pi / 4));
    apply_setting(c, "weight_rim", "2*pi");
    CHECK(c.weight_rim == doctest::Approx(2 * std::numbers::pi));
    apply_setting(c, "activations", "tanh, sin,gauss");
    CHECK(c.activations == std::vector<std::string>{"tanh", "sin", "gauss"});
    apply_setting(c, "wall_time", "off");
    CHECK_FALSE(c.wall_time);
    apply_setting(c, "sweep", "weight-rim");
    CHECK(c.sweep == SweepKind::weight_rim);
    apply_setting(c, "sweep_values", "pi, 0.1");
    CHECK(c.sweep_values == std::vector<double>{std::numbers::pi, 0.1});

    CHECK_THROWS_AS(apply_setting(c, "colour", "blue"), ConfigError);
    CHECK_THROWS_AS(apply_setting(c, "repetitions", "-3"), ConfigError);
    CHECK_THROWS_AS(apply_setting(c, "weight_rim", "big"), ConfigError);
    CHECK_THROWS_AS(apply_setting(c, "wall_time", "maybe"), ConfigError);
}

TEST_CASE("config text carries comments and reports line numbers")
{
    ExperimentConfig c;
    std::istringstream in("# bench\nvariant = xor\n\nrepetitions=7 # inline\n");
    apply_text(c, in, "cfg");
    CHECK(c.variant == "xor");
    CHECK(c.repetitions == 7);

    std::istringstream bad("variant = xor\nnonsense\n");
    try {
        apply_text(c, bad, "cfg");
        FAIL("expected a ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("cfg:2") != std::string::npos);
    }
}

TEST_CASE("validation rejects unusable configs")
{
    ExperimentConfig c;
    c.repetitions = 0;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = ExperimentConfig{};
    c.variant = "cartpole";
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = ExperimentConfig{};
    c.activations = {"mexican_hat"};
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = ExperimentConfig{};
    c.weight_rim = 0.0;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = default_config(ExperimentKind::ablate);
    c.sweep = SweepKind::pop_size;
    c.sweep_values = {2.5};
    CHECK_THROWS_AS(validate(c), ConfigError);
    CHECK_NOTHROW(validate(default_config(ExperimentKind::alife)));
}

TEST_CASE("default sweeps")
{
    ExperimentConfig c = default_config(ExperimentKind::ablate);
    CHECK(sweep_values(c) == std::vector<double>{1, 5, 10, 20, 30, 50, 100});
    c.sweep = SweepKind::pop_size;
    CHECK(sweep_values(c).size() == 6);
    c.sweep = SweepKind::weight_rim;
    CHECK(sweep_values(c).front() == std::numbers::pi);
    CHECK(sweep_values(c).back() == 0.1);
}

TEST_CASE("run config follows the rim")
{
    ExperimentConfig c;
    c.weight_rim = 0.25;
    c.base_max_mistakes = 30;
    const RunConfig rc = run_config(c);
    CHECK(rc.tuning.weight_limit == 0.5);
    CHECK(rc.mutation.initial_weight_range == 0.25);
    CHECK(rc.tuning.base_max_mistakes == 30);
}

TEST_CASE("summary statistics over solved runs")
{
    std::vector<RunRecord> runs(4);
    runs[0].result.solved = true;
    runs[0].result.evaluations = 100;
    runs[0].result.neurons = 1;
    runs[1].result.solved = true;
    runs[1].result.evaluations = 300;
    runs[1].result.neurons = 4;
    runs[2].result.failure = FailureCause::evaluation_cap;
    runs[3].result.failure = FailureCause::generation_cap;
    const SummaryRow row = summarize(runs);
    CHECK(row.runs == 4);
    CHECK(row.solved == 2);
    CHECK(row.failure_rate == 0.5);
    CHECK(row.mean_evaluations == 200.0);
    CHECK(row.median_neurons == 2.5);
    CHECK(row.evaluation_cap_failures == 1);
    CHECK(row.generation_cap_failures == 1);
}

TEST_CASE("bench CSVs are byte-reproducible without wall time")
{
    ExperimentConfig c = default_config(ExperimentKind::bench);
    c.variant = "dpb-vel";
    c.repetitions = 3;
    c.horizon = 1000;
    c.max_evaluations = 3000;
    c.wall_time = false;
    c.output_dir = scratch_dir("bench_a");
    const ExperimentOutput a = run_experiment(c);
    const std::string runs_a = slurp(c.output_dir / "runs.csv");
    const std::string summary_a = slurp(c.output_dir / "summary.csv");

    c.output_dir = scratch_dir("bench_b");
    c.workers = 2;
    run_experiment(c);
    CHECK(slurp(c.output_dir / "runs.csv") == runs_a);
    CHECK(slurp(c.output_dir / "summary.csv") == summary_a);

    CHECK(first_line(runs_a) == "run_id,variant,sweep_value,evaluations,solved,neurons,failure,generations,wall_seconds");
    CHECK(first_line(summary_a).rfind("variant,sweep_value,runs,solved,failure_rate", 0) == 0);
    CHECK(a.runs.size() == 3);
    REQUIRE(a.summary.size() == 1);
    CHECK(a.summary[0].runs == 3);
}

TEST_CASE("ablation writes one summary row per sweep value")
{
    ExperimentConfig c = default_config(ExperimentKind::ablate);
    c.variant = "dpb-vel";
    c.repetitions = 2;
    c.horizon = 500;
    c.max_evaluations = 1500;
    c.sweep_values = {5, 20};
    c.output_dir = scratch_dir("ablate");
    const ExperimentOutput out = run_experiment(c);
    REQUIRE(out.summary.size() == 2);
    CHECK(out.summary[0].sweep_value == 5.0);
    CHECK(out.summary[1].sweep_value == 20.0);
    CHECK(out.runs.size() == 4);
}

TEST_CASE("diversity profile covers every generation")
{
    ExperimentConfig c = default_config(ExperimentKind::diversity);
    c.repetitions = 2;
    c.population_limit = 10;
    c.generations = 3;
    c.output_dir = scratch_dir("diversity");
    const std::vector<DiversityPoint> points = run_diversity_profile(c);
    REQUIRE(points.size() == 4);
    for (const DiversityPoint& p : points) {
        CHECK(p.avg_diversity >= 1.0);
        CHECK(p.avg_diversity <= 10.0);
    }
    CHECK(first_line(slurp(c.output_dir / "diversity.csv")) == "generation,avg_diversity");
}

TEST_CASE("alife harness writes trace and summary")
{
    ExperimentConfig c = default_config(ExperimentKind::alife);
    c.repetitions = 1;
    c.evaluation_cap = 100;
    c.replay = true;
    c.output_dir = scratch_dir("alife");
    const std::vector<AlifeRun> runs = run_alife(c);
    REQUIRE(runs.size() == 1);
    CHECK(runs[0].result.evaluations == 100);
    CHECK(first_line(slurp(c.output_dir / "trace.csv")) == "run_id,evaluation,species,avg_fitness,avg_neurons,diversity,deaths");
    CHECK(fs::exists(c.output_dir / "summary.csv"));
    CHECK(fs::file_size(c.output_dir / "replay_0.log") > 0);

    const FlatlandConfig fc = flatland_config(c, 0);
    CHECK(fc.population == 10);
    CHECK(fc.tuning.base_max_mistakes == 20);
    CHECK(fc.mutation.activations.size() == 7);
}
