#pragma once

// Executable form of a genotype.
//
// All signals live in one array: the sensor scalars (SensorList order, each
// sensor's vector contiguous) followed by one output slot per neuron. Neurons
// are evaluated in eval_order and write their slot in place, so an input whose
// source comes at or after the reader in eval_order still holds the previous
// cycle's value. That is exactly the one-cycle delay of a recurrent link.

#include <cstddef>
#include <span>
#include <vector>

#include "dxnn/activation.hpp"
#include "dxnn/genotype.hpp"

namespace dxnn {

struct CompiledNeuron {
    ElementId id;
    ActivationFn activation = nullptr;
    LearningFn learning = nullptr; // nullptr for "none"
    std::size_t gather_begin = 0;  // into Phenotype::gather_
    std::size_t gather_count = 0;
    std::size_t weight_begin = 0;  // into Phenotype::weights_; bias (if any) is last
    bool has_bias = false;
    std::size_t slot = 0;          // output slot in the signal array
};

struct CompiledEdge {
    ElementId from;
    ElementId to;
    bool recurrent = false;
};

class Phenotype {
public:
    Phenotype() = default;

    // One vector per entry of the SensorList. Returns one vector per entry of
    // the ActuatorList; inactive actuators yield zeros.
    const std::vector<std::vector<double>>& step(std::span<const std::vector<double>> sensors);
    // Same, with all sensor vectors concatenated in SensorList order.
    const std::vector<std::vector<double>>& step_flat(std::span<const double> sensor_scalars);

    void reset();

    const std::vector<ElementId>& eval_order() const { return order_; }
    const std::vector<CompiledEdge>& edges() const { return edges_; }
    std::size_t recurrent_edge_count() const;
    std::size_t sensor_width() const { return sensor_width_; }
    const std::vector<std::size_t>& sensor_lengths() const { return sensor_lengths_; }
    std::size_t neuron_count() const { return neurons_.size(); }

    // Current weights of a neuron (changes under learning), bias last.
    std::span<const double> weights(ElementId neuron) const;
    double output(ElementId neuron) const;

private:
    friend Phenotype compile(const DxnnGenotype& genotype);

    void think();

    std::vector<CompiledNeuron> neurons_; // in eval order
    std::vector<std::size_t> gather_;
    std::vector<double> weights_;
    std::vector<double> initial_weights_;
    std::vector<double> signal_;
    std::vector<double> scratch_;
    std::vector<std::size_t> sensor_lengths_;
    std::size_t sensor_width_ = 0;
    std::vector<std::vector<std::size_t>> actuator_slots_; // empty for inactive actuators
    std::vector<std::vector<double>> outputs_;
    std::vector<ElementId> order_;
    std::vector<CompiledEdge> edges_;
};

// Throws CompileError on unknown activation/learning tags or dangling links.
Phenotype compile(const DxnnGenotype& genotype);

} // namespace dxnn
