#include "dxnn/benchmarks.hpp"

#include <algorithm>
#include <cmath>

#include "dxnn/errors.hpp"
#include "dxnn/selection.hpp"

namespace dxnn {

std::string_view to_string(DpbVariant v)
{
    switch (v) {
    case DpbVariant::with_velocities: return "dpb-vel";
    case DpbVariant::no_velocities_undamped: return "dpb-novel-undamped";
    case DpbVariant::no_velocities_damped: return "dpb-novel-damped";
    }
    return "?";
}

std::optional<DpbVariant> parse_dpb_variant(std::string_view text)
{
    for (DpbVariant v : {DpbVariant::with_velocities, DpbVariant::no_velocities_undamped,
                         DpbVariant::no_velocities_damped})
        if (text == to_string(v))
            return v;
    return std::nullopt;
}

void validate(const DpbConfig& c)
{
    if (!(c.dt > 0.0) || c.substeps == 0)
        throw ConfigError("integration step and substeps must be positive");
    if (!(c.max_force > 0.0) || c.min_force < 0.0 || c.min_force > c.max_force)
        throw ConfigError("force range is invalid");
    if (c.horizon == 0 || c.damped_window < 100)
        throw ConfigError("horizon must be positive and the damped window at least 100 steps");
    if (!(c.scale.x > 0.0 && c.scale.x_dot > 0.0 && c.scale.theta > 0.0 && c.scale.theta_dot > 0.0))
        throw ConfigError("observation scales must be positive");
}

std::size_t dpb_input_width(DpbVariant v)
{
    return v == DpbVariant::with_velocities ? 6 : 3;
}

double dpb_force(double output, const DpbConfig& config)
{
    const double force = config.max_force * std::clamp(output, -1.0, 1.0);
    if (force != 0.0 && std::fabs(force) < config.min_force)
        return std::copysign(config.min_force, force);
    return force;
}

std::vector<double> dpb_observation(const CartPoleState& s, DpbVariant v, const DpbConfig& config)
{
    const DpbScale& k = config.scale;
    if (v == DpbVariant::with_velocities)
        return {s.x / k.x,           s.x_dot / k.x_dot,         s.theta1 / k.theta,
                s.theta1_dot / k.theta_dot, s.theta2 / k.theta, s.theta2_dot / k.theta_dot};
    return {s.x / k.x, s.theta1 / k.theta, s.theta2 / k.theta};
}

double damped_fitness(const std::vector<CartPoleState>& trajectory, std::size_t window)
{
    const std::size_t t = std::min(trajectory.size(), window);
    const double f1 = static_cast<double>(t) / static_cast<double>(window);
    double f2 = 0.0;
    if (t >= 100) {
        double sum = 0.0;
        for (std::size_t i = t - 100; i < t; ++i) {
            const CartPoleState& s = trajectory[i];
            sum += std::fabs(s.x) + std::fabs(s.x_dot) + std::fabs(s.theta1) + std::fabs(s.theta1_dot);
        }
        f2 = 0.75 / std::max(sum, 1e-12);
    }
    return 0.1 * f1 + 0.9 * f2;
}

DpbEpisode run_dpb_episode(Phenotype& phenotype, const DpbConfig& config, DpbVariant variant)
{
    const std::size_t width = dpb_input_width(variant);
    if (phenotype.sensor_width() != width)
        throw ConfigError("network reads " + std::to_string(phenotype.sensor_width()) + " inputs, " +
                          std::string(to_string(variant)) + " provides " + std::to_string(width));
    phenotype.reset();

    CartPoleState state;
    state.theta1 = config.initial_theta1;
    const bool damped = variant == DpbVariant::no_velocities_damped;
    std::vector<CartPoleState> trajectory;
    if (damped)
        trajectory.reserve(config.damped_window);

    DpbEpisode ep;
    std::vector<double> obs;
    for (std::size_t t = 0; t < config.horizon; ++t) {
        obs = dpb_observation(state, variant, config);
        const auto& out = phenotype.step_flat(obs);
        const double action = out.empty() || out.front().empty() ? 0.0 : out.front().front();
        const double force = dpb_force(action, config);
        for (std::size_t k = 0; k < config.substeps; ++k)
            state = rk4_step(state, force, config.dt, config.constants);
        if (out_of_bounds(state))
            break;
        ep.steps = t + 1;
        if (damped && trajectory.size() < config.damped_window)
            trajectory.push_back(state);
    }
    ep.solved = ep.steps == config.horizon;
    ep.fitness = damped ? damped_fitness(trajectory, config.damped_window) : static_cast<double>(ep.steps);
    return ep;
}

// ---------------------------------------------------------------------------

XorResult xor_fitness(Phenotype& phenotype)
{
    static constexpr double inputs[4][2] = {{-1, -1}, {-1, 1}, {1, -1}, {1, 1}};
    static constexpr double targets[4] = {-1, 1, 1, -1};
    if (phenotype.sensor_width() != 2)
        throw ConfigError("xor needs a network with 2 inputs");
    XorResult r;
    r.solved = true;
    double sse = 0.0;
    for (int i = 0; i < 4; ++i) {
        phenotype.reset();
        const auto& out = phenotype.step_flat(inputs[i]);
        const double y = out.empty() || out.front().empty() ? 0.0 : out.front().front();
        const double err = y - targets[i];
        sse += err * err;
        if (std::fabs(err) >= 0.1 || (y > 0.0) != (targets[i] > 0.0))
            r.solved = false;
        r.outputs.push_back(y);
    }
    r.fitness = 1.0 / (kXorEpsilon + sse);
    return r;
}

Task xor_task()
{
    Task t;
    t.name = "xor";
    t.sensors = {SensorTemplate{"xor_input", 2, true}};
    t.actuators = {ActuatorTemplate{"xor_output", 1, true}};
    t.evaluate = [](const DxnnGenotype& g) {
        Phenotype p = compile(g);
        const XorResult r = xor_fitness(p);
        return Evaluation{r.fitness, r.solved};
    };
    return t;
}

Task dpb_task(DpbVariant variant, const DpbConfig& config)
{
    validate(config);
    Task t;
    t.name = std::string(to_string(variant));
    t.sensors = {SensorTemplate{"cart_pole_state", dpb_input_width(variant), true}};
    t.actuators = {ActuatorTemplate{"force", 1, true}};
    t.evaluate = [variant, config](const DxnnGenotype& g) {
        Phenotype p = compile(g);
        const DpbEpisode ep = run_dpb_episode(p, config, variant);
        return Evaluation{ep.fitness, ep.solved};
    };
    return t;
}

// ---------------------------------------------------------------------------

std::string_view to_string(FailureCause cause)
{
    switch (cause) {
    case FailureCause::none: return "none";
    case FailureCause::evaluation_cap: return "evaluation_cap";
    case FailureCause::generation_cap: return "generation_cap";
    }
    return "?";
}

void validate(const RunConfig& c)
{
    if (c.population_limit == 0)
        throw ConfigError("population limit must be positive");
    if (c.max_evaluations == 0)
        throw ConfigError("evaluation cap must be positive");
    validate(c.tuning);
    validate(c.mutation);
}

RunResult run_evolution(const Task& task, const RunConfig& config, const GenerationHook& hook)
{
    validate(config);
    SeedOptions seed_options{config.mutation.activations, config.mutation.learning_methods,
                             config.mutation.initial_weight_range};
    Population pop = create_seed(task.sensors, task.actuators, config.population_limit, seed_options, config.seed);
    Rng rng(derive_seed(config.seed, 1));

    RunResult result;
    bool have_best = false;
    auto consider = [&](const DxnnGenotype& g, double fitness) {
        if (!have_best || fitness > result.best_fitness ||
            (fitness == result.best_fitness && g.size() < result.champion.size())) {
            have_best = true;
            result.best_fitness = fitness;
            result.champion = g;
            result.neurons = g.size();
        }
    };

    while (true) {
        for (DxnnGenotype& member : pop.members) {
            TuningConfig tc = config.tuning;
            tc.stop_when_solved = config.stop_when_solved;
            tc.max_evaluations = config.max_evaluations - result.evaluations;
            TuningResult tuned = tune(std::move(member), task.evaluate, tc, rng);
            result.evaluations += tuned.evaluations;
            member = std::move(tuned.genotype);
            if (tuned.solved && config.stop_when_solved) {
                result.solved = true;
                result.best_fitness = tuned.best_fitness;
                result.champion = member;
                result.neurons = member.size();
                return result;
            }
            consider(member, tuned.best_fitness);
            if (result.evaluations >= config.max_evaluations) {
                result.failure = FailureCause::evaluation_cap;
                return result;
            }
        }
        if (hook)
            hook(result.generations, pop.members);
        if (result.generations >= config.max_generations) {
            result.failure = config.stop_when_solved ? FailureCause::generation_cap : FailureCause::none;
            return result;
        }

        std::vector<Survivor> survivors;
        if (pop.members.size() == 1) {
            survivors.push_back(Survivor{pop.members.front().id, config.population_limit});
        } else {
            std::vector<Scored> scored;
            for (const DxnnGenotype& g : pop.members)
                scored.push_back(Scored{g.id, std::max(0.0, g.fitness.value_or(0.0)), std::max<std::size_t>(1, g.size())});
            survivors = competition_select(scored, config.population_limit).survivors;
        }

        std::vector<DxnnGenotype> next;
        for (const Survivor& s : survivors) {
            auto it = std::find_if(pop.members.begin(), pop.members.end(),
                                   [&](const DxnnGenotype& g) { return g.id == s.id; });
            for (std::size_t k = 1; k < s.nao; ++k)
                next.push_back(mutate_offspring(*it, config.mutation, pop.ids, rng));
            next.push_back(std::move(*it));
        }
        pop.members = std::move(next);
        ++result.generations;
    }
}

} // namespace dxnn
