#include "dxnn/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dxnn/errors.hpp"

namespace dxnn {

long long round_half_away(double x)
{
    return std::llround(x);
}

SelectionOutcome competition_select(std::span<const Scored> scored, std::size_t population_limit)
{
    if (scored.size() < 2)
        throw ConfigError("competition selection needs at least 2 individuals");
    if (population_limit == 0)
        throw ConfigError("population limit must be positive");

    double total_energy = 0.0;
    double total_neurons = 0.0;
    for (const Scored& s : scored) {
        if (!(s.fitness >= 0.0) || !std::isfinite(s.fitness))
            throw ConfigError("competition selection needs finite non-negative fitness");
        if (s.neurons == 0)
            throw ConfigError("competition selection needs positive network sizes");
        total_energy += s.fitness;
        total_neurons += static_cast<double>(s.neurons);
    }
    const double avg_cost = total_energy / total_neurons;

    std::vector<std::size_t> rank(scored.size());
    std::iota(rank.begin(), rank.end(), 0);
    std::stable_sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) {
        if (scored[a].fitness != scored[b].fitness)
            return scored[a].fitness > scored[b].fitness;
        return scored[a].neurons < scored[b].neurons;
    });

    SelectionOutcome out;
    const std::size_t keep = scored.size() - scored.size() / 2;
    for (std::size_t k = keep; k < rank.size(); ++k)
        out.deleted.push_back(scored[rank[k]].id);

    std::vector<long long> alloted(keep, 0);
    long long total_offspring = 0;
    if (total_energy > 0.0) {
        for (std::size_t k = 0; k < keep; ++k) {
            const Scored& s = scored[rank[k]];
            const double alloted_neurons = s.fitness / avg_cost;
            alloted[k] = round_half_away(alloted_neurons / static_cast<double>(s.neurons));
            total_offspring += alloted[k];
        }
    }

    if (total_offspring == 0) {
        // Nothing has scored: everyone in the top half survives, spare
        // capacity goes round-robin in rank order.
        std::vector<std::size_t> nao(keep, 1);
        for (std::size_t extra = 0; keep + extra < population_limit; ++extra)
            ++nao[extra % keep];
        for (std::size_t k = 0; k < keep; ++k)
            out.survivors.push_back(Survivor{scored[rank[k]].id, nao[k]});
        return out;
    }

    const double normalizer = static_cast<double>(total_offspring) / static_cast<double>(population_limit);
    for (std::size_t k = 0; k < keep; ++k) {
        const long long nao = round_half_away(static_cast<double>(alloted[k]) / normalizer);
        if (nao <= 0)
            out.deleted.push_back(scored[rank[k]].id);
        else
            out.survivors.push_back(Survivor{scored[rank[k]].id, static_cast<std::size_t>(nao)});
    }
    return out;
}

// ---------------------------------------------------------------------------

DeadPool::DeadPool(std::size_t capacity) : capacity_(capacity)
{
    if (capacity == 0)
        throw ConfigError("dead pool capacity must be positive");
}

void DeadPool::sort_and_trim()
{
    std::stable_sort(entries_.begin(), entries_.end(),
                     [](const DeadPoolEntry& a, const DeadPoolEntry& b) { return a.fitness > b.fitness; });
    if (entries_.size() > capacity_)
        entries_.resize(capacity_);
}

bool DeadPool::insert(DxnnGenotype genotype, double fitness)
{
    const ElementId id = genotype.id;
    genotype.fitness = fitness;
    entries_.push_back(DeadPoolEntry{std::move(genotype), fitness});
    sort_and_trim();
    return std::any_of(entries_.begin(), entries_.end(), [&](const DeadPoolEntry& e) { return e.genotype.id == id; });
}

bool DeadPool::reinsert(DxnnGenotype genotype, double fitness)
{
    auto it = std::find_if(entries_.begin(), entries_.end(),
                           [&](const DeadPoolEntry& e) { return e.genotype.id == genotype.id; });
    if (it == entries_.end())
        return insert(std::move(genotype), fitness);
    it->fitness = fitness;
    it->genotype.fitness = fitness;
    sort_and_trim();
    return true;
}

std::vector<double> DeadPool::sampling_weights() const
{
    double total_energy = 0.0;
    double total_neurons = 0.0;
    for (const DeadPoolEntry& e : entries_) {
        total_energy += std::max(0.0, e.fitness);
        total_neurons += static_cast<double>(std::max<std::size_t>(1, e.genotype.size()));
    }
    std::vector<double> w(entries_.size(), 1.0);
    if (total_energy <= 0.0)
        return w;
    const double avg_cost = total_energy / total_neurons;
    for (std::size_t i = 0; i < entries_.size(); ++i)
        w[i] = std::max(0.0, entries_[i].fitness) / avg_cost /
               static_cast<double>(std::max<std::size_t>(1, entries_[i].genotype.size()));
    return w;
}

DeadPool::Pick DeadPool::sample_parent(Rng& rng, double reentry_probability) const
{
    if (entries_.empty())
        throw RuntimeError("cannot sample a parent from an empty dead pool");
    const std::vector<double> w = sampling_weights();
    std::discrete_distribution<std::size_t> dist(w.begin(), w.end());
    Pick pick;
    pick.index = dist(rng);
    pick.reentry = bernoulli(rng, reentry_probability);
    return pick;
}

double DeadPool::mean_fitness() const
{
    if (entries_.empty())
        return 0.0;
    double sum = 0.0;
    for (const DeadPoolEntry& e : entries_)
        sum += e.fitness;
    return sum / static_cast<double>(entries_.size());
}

} // namespace dxnn
