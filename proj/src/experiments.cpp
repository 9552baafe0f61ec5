#include "dxnn/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "dxnn/activation.hpp"
#include "dxnn/diversity.hpp"
#include "dxnn/errors.hpp"
#include "dxnn/persistence.hpp"

namespace dxnn {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return parts;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected)
{
    throw ConfigError("setting '" + std::string(key) + "': '" + std::string(value) + "' is not " +
                      std::string(expected));
}

std::size_t parse_count(std::string_view key, std::string_view value)
{
    std::size_t out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size() || value.empty())
        bad_value(key, value, "a non-negative integer");
    return out;
}

// Reals also accept pi, pi/N and N*pi.
double parse_real(std::string_view key, std::string_view value)
{
    auto number = [&](std::string_view text) {
        if (text == "pi")
            return std::numbers::pi;
        double out = 0.0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
        if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
            bad_value(key, value, "a real number");
        return out;
    };
    if (const auto slash = value.find('/'); slash != std::string_view::npos)
        return number(trim(value.substr(0, slash))) / number(trim(value.substr(slash + 1)));
    if (const auto star = value.find('*'); star != std::string_view::npos)
        return number(trim(value.substr(0, star))) * number(trim(value.substr(star + 1)));
    return number(value);
}

bool parse_bool(std::string_view key, std::string_view value)
{
    if (value == "true" || value == "on" || value == "1" || value == "yes")
        return true;
    if (value == "false" || value == "off" || value == "0" || value == "no")
        return false;
    bad_value(key, value, "a boolean");
}

// Runs fn(i) for i in [0, n) on up to `workers` threads.
template <class Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn fn)
{
    workers = std::max<std::size_t>(1, std::min(workers, n));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w)
        threads.emplace_back([&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n)
                    return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                    next = n;
                }
            }
        });
    for (std::thread& t : threads)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

std::ofstream open_output(const ExperimentConfig& config, const std::string& name)
{
    std::filesystem::create_directories(config.output_dir);
    const std::filesystem::path path = config.output_dir / name;
    std::ofstream out(path);
    if (!out)
        throw ConfigError("cannot write " + path.string());
    return out;
}

} // namespace

std::string_view to_string(ExperimentKind kind)
{
    switch (kind) {
    case ExperimentKind::bench: return "bench";
    case ExperimentKind::ablate: return "ablate";
    case ExperimentKind::diversity: return "diversity";
    case ExperimentKind::alife: return "alife";
    }
    return "?";
}

std::string_view to_string(SweepKind kind)
{
    switch (kind) {
    case SweepKind::base_max_mistakes: return "base-max-mistakes";
    case SweepKind::pop_size: return "pop-size";
    case SweepKind::weight_rim: return "weight-rim";
    }
    return "?";
}

ExperimentConfig default_config(ExperimentKind kind)
{
    ExperimentConfig c;
    c.kind = kind;
    switch (kind) {
    case ExperimentKind::bench:
        c.repetitions = 100;
        break;
    case ExperimentKind::ablate:
        c.repetitions = 100;
        c.variant = "dpb-novel-damped";
        break;
    case ExperimentKind::diversity:
        c.repetitions = 50;
        c.variant = "dpb-novel-damped";
        c.activations = {"sigmoid"};
        c.population_limit = 100;
        c.horizon = 1000;
        break;
    case ExperimentKind::alife:
        c.repetitions = 10;
        c.base_max_mistakes = 20;
        c.activations = {"tanh", "sin", "linear", "gauss", "sqrt", "abs", "log"};
        break;
    }
    return c;
}

void apply_setting(ExperimentConfig& c, std::string_view key, std::string_view value)
{
    key = trim(key);
    value = trim(value);
    if (key == "variant") {
        c.variant = std::string(value);
    } else if (key == "repetitions" || key == "runs") {
        c.repetitions = parse_count(key, value);
    } else if (key == "population" || key == "population_limit") {
        c.population_limit = parse_count(key, value);
    } else if (key == "base_max_mistakes") {
        c.base_max_mistakes = parse_count(key, value);
    } else if (key == "weight_rim") {
        c.weight_rim = parse_real(key, value);
    } else if (key == "weight_saturation") {
        c.weight_saturation = parse_real(key, value);
    } else if (key == "activations" || key == "learning_methods") {
        std::vector<std::string> tags;
        for (std::string_view t : split(value, ','))
            if (!t.empty())
                tags.emplace_back(t);
        (key == "activations" ? c.activations : c.learning_methods) = std::move(tags);
    } else if (key == "max_evaluations") {
        c.max_evaluations = parse_count(key, value);
    } else if (key == "max_generations") {
        c.max_generations = parse_count(key, value);
    } else if (key == "horizon") {
        c.horizon = parse_count(key, value);
    } else if (key == "seed") {
        c.seed = parse_count(key, value);
    } else if (key == "out" || key == "output_dir") {
        c.output_dir = std::filesystem::path(std::string(value));
    } else if (key == "workers") {
        c.workers = parse_count(key, value);
    } else if (key == "wall_time") {
        c.wall_time = parse_bool(key, value);
    } else if (key == "sweep") {
        if (value == "base-max-mistakes")
            c.sweep = SweepKind::base_max_mistakes;
        else if (value == "pop-size")
            c.sweep = SweepKind::pop_size;
        else if (value == "weight-rim")
            c.sweep = SweepKind::weight_rim;
        else
            bad_value(key, value, "one of base-max-mistakes, pop-size, weight-rim");
    } else if (key == "sweep_values") {
        c.sweep_values.clear();
        for (std::string_view t : split(value, ','))
            c.sweep_values.push_back(parse_real(key, t));
    } else if (key == "generations") {
        c.generations = parse_count(key, value);
    } else if (key == "af_as_set") {
        c.af_as_set = parse_bool(key, value);
    } else if (key == "scenario") {
        if (value == "food")
            c.scenario = Scenario::food;
        else if (value == "poison" || value == "food-poison")
            c.scenario = Scenario::food_poison;
        else if (value == "predprey" || value == "predator-prey")
            c.scenario = Scenario::predator_prey;
        else
            bad_value(key, value, "one of food, poison, predprey");
    } else if (key == "version") {
        c.version = static_cast<int>(parse_count(key, value));
    } else if (key == "evaluation_cap") {
        c.evaluation_cap = parse_count(key, value);
    } else if (key == "alife_population") {
        c.alife_population = parse_count(key, value);
    } else if (key == "replay") {
        c.replay = parse_bool(key, value);
    } else {
        throw ConfigError("unknown setting '" + std::string(key) + "'");
    }
}

void apply_text(ExperimentConfig& config, std::istream& in, const std::string& source)
{
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        std::string_view view = line;
        if (const auto hash = view.find('#'); hash != std::string_view::npos)
            view = view.substr(0, hash);
        view = trim(view);
        if (view.empty())
            continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(source + ":" + std::to_string(number) + ": expected key=value");
        try {
            apply_setting(config, view.substr(0, eq), view.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(source + ":" + std::to_string(number) + ": " + e.what());
        }
    }
}

void apply_file(ExperimentConfig& config, const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config file " + path.string());
    apply_text(config, in, path.string());
}

void validate(const ExperimentConfig& c)
{
    if (c.repetitions == 0)
        throw ConfigError("repetitions must be at least 1");
    if (c.population_limit == 0)
        throw ConfigError("population limit must be at least 1");
    if (!(c.weight_rim > 0.0) || !std::isfinite(c.weight_rim))
        throw ConfigError("weight_rim must be a positive real");
    if (!(c.weight_saturation >= 0.0) || !std::isfinite(c.weight_saturation))
        throw ConfigError("weight_saturation must be a non-negative real");
    if (c.activations.empty())
        throw ConfigError("at least one activation function is required");
    for (const std::string& af : c.activations)
        if (find_activation(af) == nullptr)
            throw ConfigError("unknown activation function '" + af + "'");
    if (c.learning_methods.empty())
        throw ConfigError("at least one learning method is required");
    for (const std::string& lm : c.learning_methods)
        if (lm != "none" && find_learning(lm) == nullptr)
            throw ConfigError("unknown learning method '" + lm + "'");
    if (c.max_evaluations == 0)
        throw ConfigError("max_evaluations must be at least 1");
    if (c.workers == 0)
        throw ConfigError("workers must be at least 1");
    if (c.horizon == 0)
        throw ConfigError("horizon must be at least 1");
    if (c.output_dir.empty())
        throw ConfigError("output directory must be set");
    if (c.kind == ExperimentKind::bench || c.kind == ExperimentKind::ablate || c.kind == ExperimentKind::diversity)
        if (c.variant != "xor" && !parse_dpb_variant(c.variant))
            throw ConfigError("unknown variant '" + c.variant + "'");
    if (c.kind == ExperimentKind::ablate)
        for (double v : sweep_values(c)) {
            if (!(v > 0.0) || !std::isfinite(v))
                throw ConfigError("sweep values must be positive");
            if (c.sweep != SweepKind::weight_rim && v != std::floor(v))
                throw ConfigError("sweep values for " + std::string(to_string(c.sweep)) + " must be integers");
        }
    if (c.kind == ExperimentKind::diversity && c.generations == 0)
        throw ConfigError("generations must be at least 1");
    if (c.kind == ExperimentKind::alife)
        validate(flatland_config(c, 0));
}

std::vector<double> sweep_values(const ExperimentConfig& c)
{
    if (!c.sweep_values.empty())
        return c.sweep_values;
    constexpr double pi = std::numbers::pi;
    switch (c.sweep) {
    case SweepKind::base_max_mistakes: return {1, 5, 10, 20, 30, 50, 100};
    case SweepKind::pop_size: return {5, 10, 20, 30, 50, 100};
    case SweepKind::weight_rim: return {pi, pi / 2, 1.0, 0.5, 0.3, 0.2, 0.1};
    }
    return {};
}

RunConfig run_config(const ExperimentConfig& c)
{
    RunConfig rc;
    rc.population_limit = c.population_limit;
    rc.tuning.base_max_mistakes = c.base_max_mistakes;
    rc.tuning.weight_limit = 2.0 * c.weight_rim;
    rc.tuning.weight_saturation = c.weight_saturation;
    rc.mutation.activations = c.activations;
    rc.mutation.initial_weight_range = c.weight_rim;
    rc.mutation.learning_methods = c.learning_methods;
    rc.max_evaluations = c.max_evaluations;
    rc.max_generations = c.max_generations;
    rc.seed = c.seed;
    return rc;
}

Task make_task(const ExperimentConfig& c)
{
    if (c.variant == "xor")
        return xor_task();
    const auto variant = parse_dpb_variant(c.variant);
    if (!variant)
        throw ConfigError("unknown variant '" + c.variant + "'");
    DpbConfig dpb;
    dpb.horizon = c.horizon;
    return dpb_task(*variant, dpb);
}

SummaryRow summarize(const std::vector<RunRecord>& runs)
{
    SummaryRow row;
    if (!runs.empty()) {
        row.variant = runs.front().variant;
        row.sweep_value = runs.front().sweep_value;
    }
    row.runs = runs.size();
    double evals = 0.0;
    double neurons = 0.0;
    std::vector<std::size_t> sizes;
    for (const RunRecord& r : runs) {
        if (r.result.solved) {
            ++row.solved;
            evals += static_cast<double>(r.result.evaluations);
            neurons += static_cast<double>(r.result.neurons);
            sizes.push_back(r.result.neurons);
        } else if (r.result.failure == FailureCause::evaluation_cap) {
            ++row.evaluation_cap_failures;
        } else if (r.result.failure == FailureCause::generation_cap) {
            ++row.generation_cap_failures;
        }
    }
    if (row.runs > 0)
        row.failure_rate = static_cast<double>(row.runs - row.solved) / static_cast<double>(row.runs);
    if (row.solved > 0) {
        row.mean_evaluations = evals / static_cast<double>(row.solved);
        row.mean_neurons = neurons / static_cast<double>(row.solved);
        std::sort(sizes.begin(), sizes.end());
        const std::size_t m = sizes.size() / 2;
        row.median_neurons = sizes.size() % 2 == 1 ? static_cast<double>(sizes[m])
                                                   : (static_cast<double>(sizes[m - 1]) + static_cast<double>(sizes[m])) / 2.0;
    }
    return row;
}

void write_runs_csv(std::ostream& out, const std::vector<RunRecord>& runs, bool wall_time)
{
    out << "run_id,variant,sweep_value,evaluations,solved,neurons,failure,generations,wall_seconds\n";
    for (const RunRecord& r : runs) {
        out << r.run_id << ',' << r.variant << ',' << format_real(r.sweep_value) << ',' << r.result.evaluations << ','
            << (r.result.solved ? 1 : 0) << ',' << r.result.neurons << ',' << to_string(r.result.failure) << ','
            << r.result.generations << ',';
        if (wall_time)
            out << format_real(r.wall_seconds);
        out << '\n';
    }
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows)
{
    out << "variant,sweep_value,runs,solved,failure_rate,mean_evaluations,mean_neurons,median_neurons,"
           "evaluation_cap_failures,generation_cap_failures\n";
    for (const SummaryRow& r : rows)
        out << r.variant << ',' << format_real(r.sweep_value) << ',' << r.runs << ',' << r.solved << ','
            << format_real(r.failure_rate) << ',' << format_real(r.mean_evaluations) << ','
            << format_real(r.mean_neurons) << ',' << format_real(r.median_neurons) << ','
            << r.evaluation_cap_failures << ',' << r.generation_cap_failures << '\n';
}

ExperimentOutput run_experiment(const ExperimentConfig& config)
{
    validate(config);
    std::vector<ExperimentConfig> groups;
    if (config.kind == ExperimentKind::ablate) {
        for (double v : sweep_values(config)) {
            ExperimentConfig g = config;
            switch (config.sweep) {
            case SweepKind::base_max_mistakes: g.base_max_mistakes = static_cast<std::size_t>(v); break;
            case SweepKind::pop_size: g.population_limit = static_cast<std::size_t>(v); break;
            case SweepKind::weight_rim: g.weight_rim = v; break;
            }
            g.sweep_values = {v};
            groups.push_back(std::move(g));
        }
    } else {
        groups.push_back(config);
    }

    const std::size_t reps = config.repetitions;
    std::vector<RunRecord> runs(groups.size() * reps);
    std::vector<Task> tasks;
    for (const ExperimentConfig& g : groups)
        tasks.push_back(make_task(g));

    parallel_for(runs.size(), config.workers, [&](std::size_t i) {
        const std::size_t group = i / reps;
        const std::size_t run_index = i % reps;
        const ExperimentConfig& g = groups[group];
        RunConfig rc = run_config(g);
        rc.seed = derive_seed(config.seed, run_index);
        const auto start = std::chrono::steady_clock::now();
        RunRecord& rec = runs[i];
        rec.run_id = run_index;
        rec.variant = g.variant;
        rec.sweep_value = config.kind == ExperimentKind::ablate ? g.sweep_values.front() : 0.0;
        rec.result = run_evolution(tasks[group], rc);
        rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    });

    ExperimentOutput output;
    for (std::size_t group = 0; group < groups.size(); ++group) {
        std::vector<RunRecord> slice(runs.begin() + static_cast<std::ptrdiff_t>(group * reps),
                                     runs.begin() + static_cast<std::ptrdiff_t>((group + 1) * reps));
        output.summary.push_back(summarize(slice));
    }
    output.runs = std::move(runs);

    std::ofstream runs_csv = open_output(config, "runs.csv");
    write_runs_csv(runs_csv, output.runs, config.wall_time);
    std::ofstream summary_csv = open_output(config, "summary.csv");
    write_summary_csv(summary_csv, output.summary);
    return output;
}

std::vector<DiversityPoint> run_diversity_profile(const ExperimentConfig& config)
{
    validate(config);
    const Task task = make_task(config);
    const std::size_t generations = config.generations;
    // per[run][generation]
    std::vector<std::vector<std::size_t>> per(config.repetitions, std::vector<std::size_t>(generations + 1, 0));

    parallel_for(config.repetitions, config.workers, [&](std::size_t run_index) {
        RunConfig rc = run_config(config);
        rc.seed = derive_seed(config.seed, run_index);
        rc.stop_when_solved = false;
        rc.max_generations = generations;
        rc.max_evaluations = std::numeric_limits<std::size_t>::max();
        run_evolution(task, rc, [&](std::size_t generation, const std::vector<DxnnGenotype>& population) {
            if (generation <= generations)
                per[run_index][generation] = minimum_diversity(population, config.af_as_set);
        });
    });

    std::vector<DiversityPoint> points;
    for (std::size_t gen = 0; gen <= generations; ++gen) {
        double sum = 0.0;
        for (const auto& run : per)
            sum += static_cast<double>(run[gen]);
        points.push_back(DiversityPoint{gen, sum / static_cast<double>(config.repetitions)});
    }

    std::ofstream out = open_output(config, "diversity.csv");
    out << "generation,avg_diversity\n";
    for (const DiversityPoint& p : points)
        out << p.generation << ',' << format_real(p.avg_diversity) << '\n';
    return points;
}

FlatlandConfig flatland_config(const ExperimentConfig& c, std::size_t run_index)
{
    FlatlandConfig fc;
    fc.scenario = c.scenario;
    fc.version = c.version;
    fc.population = c.alife_population;
    fc.evaluation_cap = c.evaluation_cap;
    fc.tuning.base_max_mistakes = c.base_max_mistakes;
    fc.tuning.weight_limit = 2.0 * c.weight_rim;
    fc.tuning.weight_saturation = c.weight_saturation;
    fc.mutation.activations = c.activations;
    fc.mutation.initial_weight_range = c.weight_rim;
    fc.mutation.learning_methods = c.learning_methods;
    fc.seed = derive_seed(c.seed, run_index);
    return resolve(fc);
}

std::vector<AlifeRun> run_alife(const ExperimentConfig& config)
{
    validate(config);
    std::vector<AlifeRun> runs(config.repetitions);
    if (config.replay)
        std::filesystem::create_directories(config.output_dir);
    parallel_for(config.repetitions, config.workers, [&](std::size_t run_index) {
        std::ofstream replay;
        if (config.replay)
            replay.open(config.output_dir / ("replay_" + std::to_string(run_index) + ".log"));
        Flatland world(flatland_config(config, run_index), config.replay ? &replay : nullptr);
        runs[run_index].run_id = run_index;
        runs[run_index].result = world.run();
    });

    std::ofstream trace = open_output(config, "trace.csv");
    trace << "run_id,evaluation,species,avg_fitness,avg_neurons,diversity,deaths\n";
    for (const AlifeRun& run : runs)
        for (const TraceRow& row : run.result.trace)
            trace << run.run_id << ',' << row.evaluation << ',' << to_string(row.species) << ','
                  << format_real(row.avg_fitness) << ',' << format_real(row.avg_neurons) << ',' << row.diversity << ','
                  << row.deaths << '\n';
    std::ofstream summary = open_output(config, "summary.csv");
    summary << "run_id,species,baseline_fitness,final_fitness,pool_mean_fitness,color_connected,population\n";
    for (const AlifeRun& run : runs)
        for (const SpeciesSummary& s : run.result.species)
            summary << run.run_id << ',' << to_string(s.species) << ',' << format_real(s.baseline_fitness) << ','
                    << format_real(s.final_fitness) << ',' << format_real(s.pool_mean_fitness) << ','
                    << s.color_connected << ',' << s.population << '\n';
    return runs;
}

} // namespace dxnn
