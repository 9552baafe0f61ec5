#include "dxnn/flatland.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "dxnn/diversity.hpp"
#include "dxnn/errors.hpp"
#include "dxnn/persistence.hpp"

namespace dxnn {

namespace {

constexpr std::size_t kRangeSensor = 0;
constexpr std::size_t kColorSensor = 1;

double wrap_angle(double a)
{
    a = std::remainder(a, 2.0 * std::numbers::pi);
    return a;
}

} // namespace

std::string_view to_string(EntityKind kind)
{
    switch (kind) {
    case EntityKind::prey: return "prey";
    case EntityKind::predator: return "predator";
    case EntityKind::plant: return "plant";
    case EntityKind::poison: return "poison";
    }
    return "?";
}

std::string_view to_string(Scenario scenario)
{
    switch (scenario) {
    case Scenario::food: return "food";
    case Scenario::food_poison: return "food-poison";
    case Scenario::predator_prey: return "predator-prey";
    }
    return "?";
}

std::optional<Scenario> parse_scenario(std::string_view text)
{
    for (Scenario s : {Scenario::food, Scenario::food_poison, Scenario::predator_prey})
        if (to_string(s) == text)
            return s;
    return std::nullopt;
}

double alife_fitness(std::size_t steps, std::size_t eaten)
{
    return static_cast<double>(std::min<std::size_t>(steps, 1000)) / 1000.0 + static_cast<double>(eaten);
}

FlatlandConfig resolve(FlatlandConfig config)
{
    if (config.population == 0)
        config.population = (config.version >= 3) ? 20 : 10;
    if (config.evaluation_cap == 0) {
        switch (config.scenario) {
        case Scenario::food: config.evaluation_cap = 25000; break;
        case Scenario::food_poison: config.evaluation_cap = 50000; break;
        case Scenario::predator_prey: config.evaluation_cap = 100000; break;
        }
    }
    validate(config);
    return config;
}

void validate(const FlatlandConfig& c)
{
    if (c.version < 1 || c.version > 4)
        throw ConfigError("flatland version must be 1..4, got " + std::to_string(c.version));
    if (c.population == 0)
        throw ConfigError("flatland population must be positive");
    if (c.rays < 2)
        throw ConfigError("flatland needs at least 2 rays per sensor");
    if (!(c.robot_radius > 0.0) || !(c.plant_radius > 0.0) || !(c.ray_length > 0.0))
        throw ConfigError("flatland radii and ray length must be positive");
    if (!(c.max_speed > 0.0) || !(c.axle > 0.0))
        throw ConfigError("flatland max speed and axle must be positive");
    if (!(c.start_energy > 0.0))
        throw ConfigError("flatland start energy must be positive");
    if (c.max_age == 0)
        throw ConfigError("flatland max age must be positive");
    if (c.trace_interval == 0)
        throw ConfigError("flatland trace interval must be positive");
    if (c.reentry_probability < 0.0 || c.reentry_probability > 1.0)
        throw ConfigError("reentry probability must lie in [0, 1]");
    for (const Region* r : {&c.plant_region, &c.prey_region, &c.predator_region})
        if (!(r->x1 > r->x0) || !(r->y1 > r->y0))
            throw ConfigError("flatland spawn regions must have positive extent");
    validate(c.tuning);
    validate(c.mutation);
}

Flatland::Flatland(FlatlandConfig config, std::ostream* replay)
    : config_(resolve(std::move(config))),
      replay_(replay),
      rng_(derive_seed(config_.seed, 7)),
      kernels_(kernels::active_kernels())
{
    pools_.assign(2, DeadPool(config_.population));
    windows_.assign(2, Window{});
    summaries_.resize(2);
    summaries_[0].species = EntityKind::prey;
    summaries_[1].species = EntityKind::predator;
}

// ---------------------------------------------------------------------------
// World primitives

void Flatland::sync(std::size_t slot)
{
    xs_[slot] = entities_[slot].x;
    ys_[slot] = entities_[slot].y;
    rs_[slot] = entities_[slot].radius;
}

std::size_t Flatland::add_entity(EntityKind kind, double x, double y, double heading)
{
    Entity e;
    e.id = next_entity_id_++;
    e.kind = kind;
    e.x = x;
    e.y = y;
    e.heading = heading;
    e.radius = (kind == EntityKind::prey || kind == EntityKind::predator) ? config_.robot_radius : config_.plant_radius;
    e.energy = e.is_robot() ? config_.start_energy : 0.0;
    entities_.push_back(e);
    xs_.push_back(x);
    ys_.push_back(y);
    rs_.push_back(e.radius);
    agents_.emplace_back();
    const std::size_t slot = entities_.size() - 1;
    if (e.is_robot())
        robots_.push_back(slot);
    return slot;
}

void Flatland::clear_entities()
{
    entities_.clear();
    xs_.clear();
    ys_.clear();
    rs_.clear();
    agents_.clear();
    robots_.clear();
}

void Flatland::move_entity(std::size_t slot, double x, double y)
{
    entities_[slot].x = x;
    entities_[slot].y = y;
    sync(slot);
}

double Flatland::color_of(EntityKind kind) const
{
    switch (kind) {
    case EntityKind::prey: return config_.colors.prey;
    case EntityKind::predator: return config_.colors.predator;
    case EntityKind::plant: return config_.colors.plant;
    case EntityKind::poison: return config_.colors.poison;
    }
    return config_.colors.background;
}

void Flatland::cast(std::size_t robot, std::vector<double>* range, std::vector<double>* color) const
{
    const Entity& e = entities_[robot];
    const kernels::Circles circles{xs_.data(), ys_.data(), rs_.data(), xs_.size()};
    const double first = e.heading - config_.arc / 2.0;
    const double spacing = config_.arc / static_cast<double>(config_.rays - 1);
    if (range != nullptr)
        range->resize(config_.rays);
    if (color != nullptr)
        color->resize(config_.rays);
    for (std::size_t k = 0; k < config_.rays; ++k) {
        const double angle = first + spacing * static_cast<double>(k);
        kernels::Ray ray;
        ray.ox = e.x;
        ray.oy = e.y;
        ray.dx = std::cos(angle);
        ray.dy = std::sin(angle);
        ray.max_t = config_.ray_length;
        ray.skip = robot;
        const kernels::RayHit hit = kernels_.nearest_hit(circles, ray);
        const bool seen = hit.index != kernels::kNoHit;
        if (range != nullptr)
            (*range)[k] = seen ? hit.t / config_.ray_length : 1.0;
        if (color != nullptr)
            (*color)[k] = seen ? color_of(entities_[hit.index].kind) : config_.colors.background;
    }
}

std::vector<double> Flatland::ray_cast_range(std::size_t robot) const
{
    std::vector<double> out;
    cast(robot, &out, nullptr);
    return out;
}

std::vector<double> Flatland::ray_cast_color(std::size_t robot) const
{
    std::vector<double> out;
    cast(robot, nullptr, &out);
    return out;
}

void Flatland::differential_drive(std::size_t robot, double left, double right, EnergyLedger& ledger)
{
    Entity& e = entities_[robot];
    const double l = std::clamp(left, -1.0, 1.0) * config_.max_speed;
    const double r = std::clamp(right, -1.0, 1.0) * config_.max_speed;
    const double v = (l + r) / 2.0;
    const double w = (r - l) / config_.axle;
    const double mid = e.heading + w / 2.0;
    e.x += v * std::cos(mid);
    e.y += v * std::sin(mid);
    e.heading = wrap_angle(e.heading + w);
    const double move_cost = std::abs(v) + std::abs(w) / (std::numbers::pi / 2.0);
    e.energy -= move_cost + config_.idle_cost;
    e.age += 1;
    ledger.movement += move_cost;
    ledger.idle += config_.idle_cost;
    sync(robot);
}

namespace {

// Moves (bx, by) away from (ax, ay) until the two discs just touch.
void separate(double ax, double ay, double& bx, double& by, double distance, double fallback_heading)
{
    double dx = bx - ax;
    double dy = by - ay;
    double d = std::hypot(dx, dy);
    if (d == 0.0) {
        dx = std::cos(fallback_heading);
        dy = std::sin(fallback_heading);
        d = 1.0;
    }
    bx = ax + dx / d * distance;
    by = ay + dy / d * distance;
}

} // namespace

void Flatland::respawn_food(std::size_t slot)
{
    Entity& e = entities_[slot];
    const Region& r = config_.plant_region;
    e.x = uniform_real(rng_, r.x0, r.x1);
    e.y = uniform_real(rng_, r.y0, r.y1);
    sync(slot);
    if (replay_ != nullptr)
        *replay_ << "SPAWN " << e.id << ' ' << to_string(e.kind) << ' ' << format_real(e.x) << ' '
                 << format_real(e.y) << '\n';
}

std::vector<std::size_t> Flatland::resolve_interactions(std::size_t robot, EnergyLedger& ledger)
{
    std::vector<std::size_t> killed;
    const kernels::Circles circles{xs_.data(), ys_.data(), rs_.data(), xs_.size()};
    Entity& me = entities_[robot];

    // Food first.
    scratch_.clear();
    kernels_.overlaps(circles, me.x, me.y, me.radius, robot, scratch_);
    for (std::size_t other : scratch_) {
        Entity& o = entities_[other];
        if (o.is_robot())
            continue;
        if (me.kind == EntityKind::prey) {
            const double gain = (o.kind == EntityKind::plant) ? config_.plant_energy : config_.poison_energy;
            me.energy += gain;
            (o.kind == EntityKind::plant ? ledger.plants : ledger.poison) += gain;
            if (o.kind == EntityKind::plant)
                me.eaten += 1;
            if (replay_ != nullptr)
                *replay_ << "EAT " << me.id << ' ' << o.id << '\n';
            respawn_food(other);
        } else {
            separate(me.x, me.y, o.x, o.y, me.radius + o.radius, me.heading);
            sync(other);
        }
    }

    // Robots: predation, then pushes, propagated through pushed robots.
    std::vector<std::size_t> queue{robot};
    std::size_t budget = 4 * robots_.size() + 4;
    while (!queue.empty() && budget-- > 0) {
        const std::size_t a = queue.back();
        queue.pop_back();
        scratch_.clear();
        kernels_.overlaps(circles, entities_[a].x, entities_[a].y, entities_[a].radius, a, scratch_);
        for (std::size_t b : scratch_) {
            Entity& ea = entities_[a];
            Entity& eb = entities_[b];
            if (!eb.is_robot())
                continue;
            if (ea.kind != eb.kind) {
                Entity& predator = (ea.kind == EntityKind::predator) ? ea : eb;
                const std::size_t prey_slot = (ea.kind == EntityKind::prey) ? a : b;
                Entity& prey = entities_[prey_slot];
                if (std::find(killed.begin(), killed.end(), prey_slot) != killed.end())
                    continue;
                predator.energy += prey.energy;
                predator.eaten += 1;
                ledger.predation += prey.energy;
                if (replay_ != nullptr)
                    *replay_ << "EAT " << predator.id << ' ' << prey.id << '\n';
                killed.push_back(prey_slot);
                continue;
            }
            // Lower energy gives way; on ties the later-born robot does.
            const bool a_yields = ea.energy < eb.energy || (ea.energy == eb.energy && ea.id > eb.id);
            if (a_yields) {
                separate(eb.x, eb.y, ea.x, ea.y, ea.radius + eb.radius, eb.heading + std::numbers::pi);
                sync(a);
                queue.push_back(a);
                break; // a moved; rescan it
            }
            separate(ea.x, ea.y, eb.x, eb.y, ea.radius + eb.radius, ea.heading);
            sync(b);
            queue.push_back(b);
        }
    }
    return killed;
}

double Flatland::robot_energy_total() const
{
    double total = 0.0;
    for (std::size_t slot : robots_)
        total += entities_[slot].energy;
    return total;
}

const DeadPool& Flatland::dead_pool(EntityKind species) const
{
    return pools_[species_index(species)];
}

std::vector<DxnnGenotype> Flatland::active_genotypes(EntityKind species) const
{
    std::vector<DxnnGenotype> out;
    for (std::size_t slot : robots_)
        if (entities_[slot].kind == species)
            out.push_back(agents_[slot].genotype);
    return out;
}

// ---------------------------------------------------------------------------
// Evolution

DxnnGenotype Flatland::new_seed(EntityKind species)
{
    (void)species;
    const bool color = (config_.version == 1 || config_.version == 3);
    const std::vector<SensorTemplate> sensors{{"range", config_.rays, true}, {"color", config_.rays, color}};
    const std::vector<ActuatorTemplate> actuators{{"differential_drive", 2, true}};
    SeedOptions options;
    options.activations = config_.mutation.activations;
    options.learning_methods = config_.mutation.learning_methods;
    options.initial_weight_range = config_.mutation.initial_weight_range;
    return create_seed_genotype(sensors, actuators, options, ids_, rng_);
}

void Flatland::begin_tuning(Agent& agent)
{
    agent.reentry = false;
    agent.evaluated = false;
    agent.best = 0.0;
    agent.mistakes = 0;
    agent.undo.clear();
    agent.ngn = select_ngn(agent.genotype);
    agent.max_mistakes = compute_max_mistakes(config_.tuning, agent.genotype, agent.ngn);
}

void Flatland::start_individual(std::size_t slot)
{
    Agent& agent = agents_[slot];
    DeadPool& pool = pools_[species_index(entities_[slot].kind)];
    if (pool.empty()) {
        agent.genotype = new_seed(entities_[slot].kind);
        begin_tuning(agent);
        return;
    }
    const DeadPool::Pick pick = pool.sample_parent(rng_, config_.reentry_probability);
    if (pick.reentry) {
        agent.genotype = pool.entries()[pick.index].genotype;
        agent.reentry = true;
        return;
    }
    agent.genotype = mutate_offspring(pool.entries()[pick.index].genotype, config_.mutation, ids_, rng_);
    begin_tuning(agent);
}

void Flatland::spawn_robot(std::size_t slot, EnergyLedger& ledger)
{
    Entity& e = entities_[slot];
    const Region& r = (e.kind == EntityKind::predator) ? config_.predator_region : config_.prey_region;
    const kernels::Circles circles{xs_.data(), ys_.data(), rs_.data(), xs_.size()};
    for (int attempt = 0; attempt < 20; ++attempt) {
        e.x = uniform_real(rng_, r.x0, r.x1);
        e.y = uniform_real(rng_, r.y0, r.y1);
        scratch_.clear();
        kernels_.overlaps(circles, e.x, e.y, e.radius, slot, scratch_);
        const bool blocked = std::any_of(scratch_.begin(), scratch_.end(),
                                         [&](std::size_t o) { return entities_[o].is_robot(); });
        if (!blocked)
            break;
    }
    e.heading = uniform_real(rng_, -std::numbers::pi, std::numbers::pi);
    e.energy = config_.start_energy;
    e.age = 0;
    e.eaten = 0;
    e.id = next_entity_id_++;
    sync(slot);
    ledger.spawned += e.energy;
    agents_[slot].brain = compile(agents_[slot].genotype);
    if (replay_ != nullptr)
        *replay_ << "SPAWN " << e.id << ' ' << to_string(e.kind) << ' ' << format_real(e.x) << ' '
                 << format_real(e.y) << '\n';
}

void Flatland::on_death(std::size_t slot, EnergyLedger& ledger)
{
    Entity& e = entities_[slot];
    Agent& agent = agents_[slot];
    const double fitness = alife_fitness(e.age, e.eaten);
    ledger.removed += e.energy;
    if (replay_ != nullptr)
        *replay_ << "DEATH " << e.id << ' ' << format_real(fitness) << '\n';

    const std::size_t s = species_index(e.kind);
    windows_[s].fitness += fitness;
    windows_[s].neurons += static_cast<double>(agent.genotype.size());
    windows_[s].deaths += 1;
    ++evaluations_;

    DeadPool& pool = pools_[s];
    bool finished = false;
    if (agent.reentry) {
        pool.reinsert(agent.genotype, fitness);
        finished = true;
    } else {
        if (!agent.evaluated) {
            agent.evaluated = true;
            agent.best = fitness;
        } else if (fitness > agent.best) {
            agent.best = fitness;
            agent.mistakes = 0;
        } else {
            restore(agent.genotype, agent.undo);
            agent.mistakes += 1;
        }
        agent.undo.clear();
        if (agent.mistakes >= agent.max_mistakes) {
            agent.genotype.fitness = agent.best;
            pool.insert(agent.genotype, agent.best);
            finished = true;
        } else {
            agent.undo = perturb(agent.genotype, agent.ngn, config_.tuning, rng_);
        }
    }
    if (finished)
        start_individual(slot);
    spawn_robot(slot, ledger);

    if (evaluations_ % config_.trace_interval == 0)
        emit_trace();
}

void Flatland::emit_trace()
{
    const bool predators = config_.scenario == Scenario::predator_prey;
    for (std::size_t s = 0; s < (predators ? 2u : 1u); ++s) {
        const EntityKind species = s == 0 ? EntityKind::prey : EntityKind::predator;
        TraceRow row;
        row.evaluation = evaluations_;
        row.species = species;
        row.deaths = windows_[s].deaths;
        if (row.deaths > 0) {
            row.avg_fitness = windows_[s].fitness / static_cast<double>(row.deaths);
            row.avg_neurons = windows_[s].neurons / static_cast<double>(row.deaths);
        } else {
            for (auto it = trace_.rbegin(); it != trace_.rend(); ++it)
                if (it->species == species) {
                    row.avg_fitness = it->avg_fitness;
                    row.avg_neurons = it->avg_neurons;
                    break;
                }
        }
        std::vector<DxnnGenotype> group = active_genotypes(species);
        for (const DeadPoolEntry& entry : pools_[s].entries())
            group.push_back(entry.genotype);
        row.diversity = minimum_diversity(group);
        trace_.push_back(row);
        windows_[s] = Window{};
    }
}

void Flatland::populate()
{
    clear_entities();
    EnergyLedger ignored;
    const std::size_t food = config_.plants;
    for (std::size_t i = 0; i < food; ++i) {
        const std::size_t slot = add_entity(EntityKind::plant, 0.0, 0.0);
        respawn_food(slot);
    }
    if (config_.scenario == Scenario::food_poison)
        for (std::size_t i = 0; i < config_.poison; ++i) {
            const std::size_t slot = add_entity(EntityKind::poison, 0.0, 0.0);
            respawn_food(slot);
        }
    std::vector<EntityKind> species{EntityKind::prey};
    if (config_.scenario == Scenario::predator_prey)
        species.push_back(EntityKind::predator);
    for (EntityKind kind : species)
        for (std::size_t i = 0; i < config_.population; ++i) {
            const std::size_t slot = add_entity(kind, -1e9, -1e9);
            agents_[slot].genotype = new_seed(kind);
            begin_tuning(agents_[slot]);
            spawn_robot(slot, ignored);
        }
}

EnergyLedger Flatland::step()
{
    EnergyLedger ledger;
    ++steps_;
    if (replay_ != nullptr)
        *replay_ << "STEP " << steps_ << '\n';
    std::vector<std::size_t> order = robots_;
    std::shuffle(order.begin(), order.end(), rng_);
    std::vector<std::uint64_t> acting(order.size());
    for (std::size_t k = 0; k < order.size(); ++k)
        acting[k] = entities_[order[k]].id;

    for (std::size_t k = 0; k < order.size(); ++k) {
        const std::size_t slot = order[k];
        if (entities_[slot].id != acting[k])
            continue; // died and respawned earlier in this step
        Agent& agent = agents_[slot];
        const bool range_used = agent.genotype.core.sensors[kRangeSensor].in_use();
        const bool color_used = agent.genotype.core.sensors[kColorSensor].in_use();
        cast(slot, &agent.senses[kRangeSensor], &agent.senses[kColorSensor]);
        if (!range_used)
            std::fill(agent.senses[kRangeSensor].begin(), agent.senses[kRangeSensor].end(), 0.0);
        if (!color_used)
            std::fill(agent.senses[kColorSensor].begin(), agent.senses[kColorSensor].end(), 0.0);
        const auto& out = agent.brain.step(agent.senses);
        differential_drive(slot, out[0][0], out[0][1], ledger);
        const Entity& e = entities_[slot];
        if (replay_ != nullptr)
            *replay_ << "MOVE " << e.id << ' ' << format_real(e.x) << ' ' << format_real(e.y) << ' '
                     << format_real(e.heading) << '\n';
        for (std::size_t victim : resolve_interactions(slot, ledger))
            on_death(victim, ledger);
        const Entity& after = entities_[slot];
        if (after.id == acting[k] && (after.energy <= 0.0 || after.age >= config_.max_age))
            on_death(slot, ledger);
    }
    return ledger;
}

FlatlandResult Flatland::run()
{
    populate();
    while (evaluations_ < config_.evaluation_cap)
        step();

    FlatlandResult result;
    result.evaluations = evaluations_;
    result.steps = steps_;
    result.trace = trace_;
    const std::size_t count = config_.scenario == Scenario::predator_prey ? 2 : 1;
    for (std::size_t s = 0; s < count; ++s) {
        SpeciesSummary summary = summaries_[s];
        bool first = true;
        for (const TraceRow& row : trace_) {
            if (row.species != summary.species || row.deaths == 0)
                continue;
            if (first)
                summary.baseline_fitness = row.avg_fitness;
            first = false;
            summary.final_fitness = row.avg_fitness;
        }
        summary.pool_mean_fitness = pools_[s].mean_fitness();
        std::vector<DxnnGenotype> group = active_genotypes(summary.species);
        for (const DeadPoolEntry& entry : pools_[s].entries())
            group.push_back(entry.genotype);
        summary.population = group.size();
        for (const DxnnGenotype& g : group)
            if (g.core.sensors.size() > kColorSensor && g.core.sensors[kColorSensor].in_use())
                summary.color_connected += 1;
        result.species.push_back(summary);
    }
    return result;
}

} // namespace dxnn
