#include "dxnn/diversity.hpp"

#include <algorithm>
#include <set>

namespace dxnn {

TopologySignature signature(const DxnnGenotype& g, bool af_as_set)
{
    TopologySignature sig;
    sig.neurons = g.neurons.size();
    for (const NeuronElement& n : g.neurons) {
        for (const InputLink& in : n.inputs)
            sig.input_connections += in.vector_length;
        sig.output_connections += n.outputs.size();
        sig.activations.push_back(n.activation);
    }
    std::sort(sig.activations.begin(), sig.activations.end());
    if (af_as_set)
        sig.activations.erase(std::unique(sig.activations.begin(), sig.activations.end()), sig.activations.end());
    return sig;
}

std::size_t minimum_diversity(std::span<const DxnnGenotype> population, bool af_as_set)
{
    std::set<TopologySignature> groups;
    for (const DxnnGenotype& g : population)
        groups.insert(signature(g, af_as_set));
    return groups.size();
}

} // namespace dxnn
