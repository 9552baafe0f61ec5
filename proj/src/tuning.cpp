#include "dxnn/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dxnn/errors.hpp"

namespace dxnn {

void validate(const TuningConfig& config)
{
    if (config.base_max_mistakes < 1)
        throw ConfigError("base_max_mistakes must be at least 1");
    if (!(config.weight_limit > 0.0) || !std::isfinite(config.weight_limit))
        throw ConfigError("weight_limit must be a positive real");
    if (!(config.weight_saturation >= 0.0))
        throw ConfigError("weight_saturation must be non-negative");
    if (config.max_evaluations < 1)
        throw ConfigError("tuning evaluation budget must be at least 1");
}

std::vector<ElementId> select_ngn(const DxnnGenotype& g)
{
    std::vector<const NeuronElement*> sorted;
    for (const NeuronElement& n : g.neurons)
        sorted.push_back(&n);
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const NeuronElement* a, const NeuronElement* b) { return a->generation > b->generation; });

    std::vector<ElementId> ngn;
    std::size_t distinct = 0;
    std::size_t i = 0;
    for (; i < sorted.size(); ++i) {
        if (i == 0 || sorted[i]->generation != sorted[i - 1]->generation) {
            if (++distinct > 3)
                break;
        }
        ngn.push_back(sorted[i]->id);
    }
    const std::size_t remaining = sorted.size() - i;
    const auto recent = static_cast<std::size_t>(std::round(std::sqrt(static_cast<double>(remaining))));
    for (std::size_t k = 0; k < recent; ++k)
        ngn.push_back(sorted[i + k]->id);
    return ngn;
}

std::size_t compute_max_mistakes(const TuningConfig& config, const DxnnGenotype& g, std::span<const ElementId> ngn)
{
    std::size_t total = 0;
    for (ElementId id : ngn)
        if (const NeuronElement* n = g.find_neuron(id))
            total += n->weight_count();
    return config.base_max_mistakes + static_cast<std::size_t>(std::round(std::sqrt(static_cast<double>(total))));
}

WeightUndo perturb(DxnnGenotype& g, std::span<const ElementId> ngn, const TuningConfig& config, Rng& rng)
{
    std::vector<std::size_t> candidates;
    for (ElementId id : ngn)
        if (auto idx = g.neuron_index(id); idx && g.neurons[*idx].weight_count() > 0)
            candidates.push_back(*idx);
    WeightUndo undo;
    if (candidates.empty())
        return undo;

    const double p = 1.0 / std::sqrt(static_cast<double>(ngn.size()));
    std::vector<std::size_t> chosen;
    while (chosen.empty())
        for (std::size_t idx : candidates)
            if (bernoulli(rng, p))
                chosen.push_back(idx);

    const double half = config.weight_limit / 2.0;
    std::vector<std::size_t> positions;
    for (std::size_t idx : chosen) {
        NeuronElement& n = g.neurons[idx];
        const std::size_t w = n.weight_count();
        const auto cap = std::max<std::size_t>(1, static_cast<std::size_t>(std::round(std::sqrt(static_cast<double>(w)))));
        const std::size_t k = uniform_int(rng, 1, cap);
        positions.resize(w);
        std::iota(positions.begin(), positions.end(), 0);
        for (std::size_t j = 0; j < k; ++j) {
            std::swap(positions[j], positions[uniform_int(rng, j, w - 1)]);
            const std::size_t pos = positions[j];
            double& weight = pos < n.weights.size() ? n.weights[pos] : *n.bias;
            undo.push_back(WeightChange{idx, pos, weight});
            weight += uniform_real(rng, -half, half);
            if (config.weight_saturation > 0.0)
                weight = std::clamp(weight, -config.weight_saturation, config.weight_saturation);
        }
    }
    return undo;
}

void restore(DxnnGenotype& g, const WeightUndo& undo)
{
    for (auto it = undo.rbegin(); it != undo.rend(); ++it) {
        NeuronElement& n = g.neurons[it->neuron];
        if (it->position < n.weights.size())
            n.weights[it->position] = it->previous;
        else
            *n.bias = it->previous;
    }
}

TuningResult tune(DxnnGenotype genotype, const Evaluator& evaluator, const TuningConfig& config, Rng& rng)
{
    validate(config);
    auto evaluate = [&](const DxnnGenotype& g) {
        try {
            return evaluator(g);
        } catch (const Error& e) {
            throw EvaluationError("evaluating " + to_string(g.id) + ": " + e.what());
        } catch (const std::exception& e) {
            throw EvaluationError("evaluating " + to_string(g.id) + ": " + e.what());
        }
    };

    TuningResult result;
    const std::vector<ElementId> ngn = select_ngn(genotype);
    result.max_mistakes = compute_max_mistakes(config, genotype, ngn);

    const Evaluation first = evaluate(genotype);
    result.evaluations = 1;
    result.best_fitness = first.fitness;
    result.solved = first.solved;

    std::size_t mistakes = 0;
    while (mistakes < result.max_mistakes && result.evaluations < config.max_evaluations &&
           !(config.stop_when_solved && result.solved)) {
        const WeightUndo undo = perturb(genotype, ngn, config, rng);
        const Evaluation e = evaluate(genotype);
        ++result.evaluations;
        if (e.fitness > result.best_fitness) {
            result.best_fitness = e.fitness;
            result.solved = e.solved;
            result.attempts.push_back(TuningAttempt{e.fitness, true});
            mistakes = 0;
        } else {
            restore(genotype, undo);
            result.attempts.push_back(TuningAttempt{e.fitness, false});
            ++mistakes;
        }
    }
    genotype.fitness = result.best_fitness;
    result.genotype = std::move(genotype);
    return result;
}

TuningResult tune(DxnnGenotype genotype, const FitnessFn& fitness, const TuningConfig& config, Rng& rng)
{
    return tune(
        std::move(genotype), Evaluator([&](const DxnnGenotype& g) { return Evaluation{fitness(g), false}; }), config,
        rng);
}

} // namespace dxnn
