#pragma once

// Competition selection: offspring budgets priced by network size, and the
// fixed-capacity dead pool used by the steady-state ALife loop.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "dxnn/genotype.hpp"

namespace dxnn {

struct Scored {
    ElementId id;
    double fitness = 0.0;
    std::size_t neurons = 1;
};

struct Survivor {
    ElementId id;
    std::size_t nao = 0; // 1 = survives childless, k > 1 = survives with k-1 offspring
};

struct SelectionOutcome {
    std::vector<Survivor> survivors; // in rank order
    std::vector<ElementId> deleted;
};

// Rounding used wherever counts are derived from reals: half away from zero.
long long round_half_away(double x);

SelectionOutcome competition_select(std::span<const Scored> scored, std::size_t population_limit);

struct DeadPoolEntry {
    DxnnGenotype genotype;
    double fitness = 0.0;
};

class DeadPool {
public:
    explicit DeadPool(std::size_t capacity);

    // Returns false when the newcomer itself was evicted.
    bool insert(DxnnGenotype genotype, double fitness);
    // Re-evaluated entry: replaces the stored fitness of the entry with the
    // same network id, or inserts it if it has been evicted in the meantime.
    bool reinsert(DxnnGenotype genotype, double fitness);

    struct Pick {
        std::size_t index = 0;
        bool reentry = false;
    };
    // Parent drawn with probability proportional to fitness/(avg_cost*size);
    // reentry is true with probability reentry_probability.
    Pick sample_parent(Rng& rng, double reentry_probability = 0.10) const;
    std::vector<double> sampling_weights() const;

    const std::vector<DeadPoolEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    std::size_t capacity() const { return capacity_; }
    bool empty() const { return entries_.empty(); }
    double mean_fitness() const;

private:
    void sort_and_trim();

    std::size_t capacity_;
    std::vector<DeadPoolEntry> entries_; // fitness descending
};

} // namespace dxnn
