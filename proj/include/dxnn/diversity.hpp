#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dxnn/genotype.hpp"

namespace dxnn {

// Two networks with different signatures are certainly different species;
// equal signatures may still hide different wiring, so counts are lower bounds.
struct TopologySignature {
    std::size_t input_connections = 0;  // scalar inputs over all neurons, bias excluded
    std::size_t output_connections = 0; // output-list entries over all neurons
    std::size_t neurons = 0;
    std::vector<std::string> activations; // sorted multiset

    friend auto operator<=>(const TopologySignature&, const TopologySignature&) = default;
};

// With `af_as_set` the activation list is deduplicated.
TopologySignature signature(const DxnnGenotype& g, bool af_as_set = false);
std::size_t minimum_diversity(std::span<const DxnnGenotype> population, bool af_as_set = false);

} // namespace dxnn
