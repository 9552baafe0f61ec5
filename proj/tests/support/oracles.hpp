#pragma once

// Deterministic checks shared by the unit suite and the acceptance binary.
// Each returns pass/fail plus a one-line detail.

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dxnn/cartpole.hpp"
#include "dxnn/genotype.hpp"

namespace dxnn::testing {

struct Check {
    bool pass = false;
    std::string detail;
};

// Cart-pole equations coded from scratch (no library calls), integrated with
// explicit Euler at step h.
CartPoleState euler_reference(const CartPoleState& s, double force, double dt, double h,
                              const CartPoleConstants& c);
// Richardson extrapolation of two Euler runs (h and h/2).
CartPoleState euler_extrapolated(const CartPoleState& s, double force, double dt, double h,
                                 const CartPoleConstants& c);
double reference_energy(const CartPoleState& s, const CartPoleConstants& c);

Check physics_step_oracle();
Check physics_step_convergence();
Check physics_energy_drift(std::size_t steps = 1000);

struct SelectionTable {
    std::string name;
    std::size_t limit = 0;
    std::vector<std::pair<double, std::size_t>> scored;            // (fitness, neurons), id = row index
    std::vector<std::pair<std::size_t, std::size_t>> survivors;    // (row, NAO) in rank order
    std::vector<std::size_t> deleted;                              // rows, any order
};

const std::vector<SelectionTable>& selection_tables();
Check selection_oracle();

// Random well-formed genotype: random sensor/actuator shapes, then a few
// topological mutations with rising generations.
DxnnGenotype random_genotype(Rng& rng, IdAllocator& ids);

Check tuning_properties(std::size_t cases = 1000, std::uint64_t seed = 20240601);
Check mutation_closure(std::size_t phases = 10000, std::uint64_t seed = 7);
// Chi-square of M over `draws` parents of 100 neurons; passes below the 1%
// critical value for 9 degrees of freedom.
Check mutation_count_uniformity(std::size_t draws = 10000, std::uint64_t seed = 11);

} // namespace dxnn::testing
