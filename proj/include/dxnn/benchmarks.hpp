#pragma once

// XOR and double pole balancing tasks, and the generational
// tune -> select -> mutate loop that runs them.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dxnn/cartpole.hpp"
#include "dxnn/genotype.hpp"
#include "dxnn/mutation.hpp"
#include "dxnn/phenotype.hpp"
#include "dxnn/tuning.hpp"

namespace dxnn {

// ---------------------------------------------------------------------------
// Double pole balancing

enum class DpbVariant { with_velocities, no_velocities_undamped, no_velocities_damped };

std::string_view to_string(DpbVariant v);
std::optional<DpbVariant> parse_dpb_variant(std::string_view text);

struct DpbScale {
    double x = 2.4;
    double x_dot = 10.0;
    double theta = 0.524;
    double theta_dot = 5.0;
};

struct DpbConfig {
    CartPoleConstants constants;
    double dt = 0.01;
    std::size_t substeps = 2; // integration steps per control step
    double max_force = 10.0;
    double min_force = 10.0 / 256.0;
    std::size_t horizon = 100000; // control steps needed to count as solved
    double initial_theta1 = 4.0 * 3.14159265358979323846 / 180.0;
    DpbScale scale;
    // Damped fitness is measured over this many control steps.
    std::size_t damped_window = 1000;
};

void validate(const DpbConfig& config);

std::size_t dpb_input_width(DpbVariant v);

struct DpbEpisode {
    double fitness = 0.0;
    std::size_t steps = 0;
    bool solved = false;
};

// Controller output in [-1, 1] -> applied force. Nonzero forces are pushed up
// to the minimum magnitude with their sign kept.
double dpb_force(double output, const DpbConfig& config);

// Scaled observation fed to the network for the variant.
std::vector<double> dpb_observation(const CartPoleState& s, DpbVariant v, const DpbConfig& config);

// Damped fitness of a trajectory of control-step states (state after each
// control step): 0.1 * t/window + 0.9 * f2, f2 = 0 below 100 steps, else
// 0.75 / sum over the last 100 states of |x| + |x'| + |th1| + |th1'|.
double damped_fitness(const std::vector<CartPoleState>& trajectory, std::size_t window);

DpbEpisode run_dpb_episode(Phenotype& phenotype, const DpbConfig& config, DpbVariant variant);

// ---------------------------------------------------------------------------
// XOR

inline constexpr double kXorEpsilon = 1e-6;

struct XorResult {
    double fitness = 0.0;
    bool solved = false;
    std::vector<double> outputs;
};

XorResult xor_fitness(Phenotype& phenotype);

// ---------------------------------------------------------------------------
// Generational loop

struct Task {
    std::string name;
    std::vector<SensorTemplate> sensors;
    std::vector<ActuatorTemplate> actuators;
    std::function<Evaluation(const DxnnGenotype&)> evaluate;
};

Task xor_task();
Task dpb_task(DpbVariant variant, const DpbConfig& config = {});

enum class FailureCause { none, evaluation_cap, generation_cap };
std::string_view to_string(FailureCause cause);

struct RunConfig {
    std::size_t population_limit = 10;
    TuningConfig tuning;
    MutationConfig mutation;
    std::size_t max_evaluations = 50000;
    std::size_t max_generations = 100;
    bool stop_when_solved = true;
    std::uint64_t seed = 1;
};

void validate(const RunConfig& config);

struct RunResult {
    bool solved = false;
    FailureCause failure = FailureCause::none;
    std::size_t evaluations = 0;
    std::size_t generations = 0; // topological mutation phases completed
    std::size_t neurons = 0;     // size of the solver, or of the best individual
    double best_fitness = 0.0;
    DxnnGenotype champion;
};

// Called after every tuning phase with the tuned population.
using GenerationHook = std::function<void(std::size_t generation, const std::vector<DxnnGenotype>& population)>;

RunResult run_evolution(const Task& task, const RunConfig& config, const GenerationHook& hook = {});

} // namespace dxnn
