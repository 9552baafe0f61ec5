#pragma once

// Tuning phase: stochastic hill climbing over the weights of the most recently
// created or modified neurons.

#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "dxnn/genotype.hpp"

namespace dxnn {

struct Evaluation {
    double fitness = 0.0;
    bool solved = false;
};

using Evaluator = std::function<Evaluation(const DxnnGenotype&)>;
using FitnessFn = std::function<double(const DxnnGenotype&)>;

struct TuningConfig {
    std::size_t base_max_mistakes = 10;
    // Perturbations are drawn from U(-weight_limit/2, weight_limit/2).
    double weight_limit = std::numbers::pi;
    // When positive, perturbed weights are clamped to [-saturation, saturation].
    double weight_saturation = 0.0;
    // Stop as soon as an evaluation reports solved, or when this many
    // evaluations have been spent in the call.
    bool stop_when_solved = true;
    std::size_t max_evaluations = std::numeric_limits<std::size_t>::max();
};

void validate(const TuningConfig& config);

struct TuningAttempt {
    double fitness = 0.0;
    bool committed = false;
};

struct TuningResult {
    DxnnGenotype genotype;
    double best_fitness = 0.0;
    std::size_t evaluations = 0;
    std::size_t max_mistakes = 0;
    bool solved = false;
    std::vector<TuningAttempt> attempts; // one per perturbation, initial evaluation excluded
};

std::vector<ElementId> select_ngn(const DxnnGenotype& genotype);

std::size_t compute_max_mistakes(const TuningConfig& config, const DxnnGenotype& genotype,
                                 std::span<const ElementId> ngn);

struct WeightChange {
    std::size_t neuron = 0;   // index into genotype.neurons
    std::size_t position = 0; // index into weights; weights.size() means the bias
    double previous = 0.0;
};
using WeightUndo = std::vector<WeightChange>;

WeightUndo perturb(DxnnGenotype& genotype, std::span<const ElementId> ngn, const TuningConfig& config, Rng& rng);
void restore(DxnnGenotype& genotype, const WeightUndo& undo);

TuningResult tune(DxnnGenotype genotype, const Evaluator& evaluator, const TuningConfig& config, Rng& rng);
TuningResult tune(DxnnGenotype genotype, const FitnessFn& fitness, const TuningConfig& config, Rng& rng);

} // namespace dxnn
