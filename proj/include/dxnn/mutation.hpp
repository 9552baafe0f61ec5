#pragma once

// Topological mutation phase. An offspring is a clone of its parent with
// between 1 and round(sqrt(size)) operators applied.

#include <array>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dxnn/genotype.hpp"

namespace dxnn {

enum class MutationOp : std::uint8_t {
    add_neuron,
    add_link,
    splice_neuron,
    change_af,
    change_lm,
    add_bias,
    add_sensor_tag,
    add_actuator_tag,
};

inline constexpr std::array<MutationOp, 6> kCoreOperators{MutationOp::add_neuron, MutationOp::add_link,
                                                          MutationOp::splice_neuron, MutationOp::change_af,
                                                          MutationOp::change_lm, MutationOp::add_bias};

std::string_view to_string(MutationOp op);

struct MutationConfig {
    double sensor_tag_probability = 0.0;   // X
    double actuator_tag_probability = 0.0; // Y
    std::vector<std::string> activations{"tanh"};
    std::vector<std::string> learning_methods{"none"};
    std::size_t max_redraws = 20;
    double initial_weight_range = kDefaultInitialWeightRange; // new weights and biases
};

void validate(const MutationConfig& config);

// M uniform in {1, ..., max(1, round(sqrt(neurons)))}.
std::size_t draw_mutation_count(std::size_t neurons, Rng& rng);
MutationOp draw_operator(const MutationConfig& config, Rng& rng);

// Applies one operator in place. Returns false, leaving the genotype
// untouched, when the operator has no legal application site. Neurons whose
// structure changed are added to `touched`; a history entry is appended.
bool apply_operator(DxnnGenotype& g, MutationOp op, const MutationConfig& config, IdAllocator& ids, Rng& rng,
                    std::set<ElementId>& touched);

struct MutationReport {
    std::size_t drawn_count = 0; // M
    std::vector<MutationOp> applied;
    std::size_t redraws = 0;
};

DxnnGenotype mutate_offspring(const DxnnGenotype& parent, const MutationConfig& config, IdAllocator& ids, Rng& rng,
                              MutationReport* report = nullptr);

} // namespace dxnn
