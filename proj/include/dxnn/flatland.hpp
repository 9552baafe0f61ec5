#pragma once

// Flatland: a wall-less 2D world of circular differential-drive robots (prey
// and predators), plants and poison. Robots see through two ray-cast sensors
// (range and color, 5 rays over a 90 degree arc) and evolve in a steady-state
// loop: every death is one evaluation, each individual spends its lives as the
// attempts of its tuning phase, and finished individuals enter their species'
// dead pool, from which replacements are drawn.

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dxnn/genotype.hpp"
#include "dxnn/kernels.hpp"
#include "dxnn/mutation.hpp"
#include "dxnn/phenotype.hpp"
#include "dxnn/selection.hpp"
#include "dxnn/tuning.hpp"

namespace dxnn {

enum class EntityKind : std::uint8_t { prey, predator, plant, poison };
enum class Scenario : std::uint8_t { food, food_poison, predator_prey };

std::string_view to_string(EntityKind kind);
std::string_view to_string(Scenario scenario);
std::optional<Scenario> parse_scenario(std::string_view text);

struct Region {
    double x0 = 0.0;
    double x1 = 800.0;
    double y0 = 0.0;
    double y1 = 500.0;
};

struct ColorCodes {
    double background = -1.0;
    double plant = 0.5;
    double poison = 0.0;
    double prey = -0.5;
    double predator = 1.0;
};

struct FlatlandConfig {
    Scenario scenario = Scenario::food;
    int version = 1;             // 1, 3: range + color seeds; 2, 4: range only
    std::size_t population = 0;  // per species; 0 = by version (10 for 1-2, 20 for 3-4)
    std::size_t plants = 20;
    std::size_t poison = 10;     // food_poison only
    double robot_radius = 10.0;
    double plant_radius = 5.0;
    double ray_length = 400.0;
    std::size_t rays = 5;
    double arc = std::numbers::pi / 2.0;
    double max_speed = 1.0;      // distance per step at full wheel output
    double axle = 20.0;
    double start_energy = 1000.0;
    double plant_energy = 500.0;
    double poison_energy = -2000.0;
    double idle_cost = 0.1;
    std::size_t max_age = 20000;
    Region plant_region{0.0, 800.0, 0.0, 500.0};
    Region prey_region{0.0, 800.0, 0.0, 500.0};
    Region predator_region{800.0, 1400.0, 0.0, 500.0};
    ColorCodes colors;
    TuningConfig tuning{20};
    MutationConfig mutation{0.1, 0.1, {"tanh", "sin", "linear", "gauss", "sqrt", "abs", "log"}, {"none"}, 20};
    double reentry_probability = 0.10;
    std::size_t evaluation_cap = 0; // 0 = scenario default (25k, 50k, 100k)
    std::size_t trace_interval = 500;
    std::uint64_t seed = 1;
};

// Fills in population and evaluation cap defaults, then validates.
FlatlandConfig resolve(FlatlandConfig config);
void validate(const FlatlandConfig& config);

struct Entity {
    std::uint64_t id = 0;
    EntityKind kind = EntityKind::plant;
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0;
    double radius = 0.0;
    double energy = 0.0;
    std::size_t age = 0;
    std::size_t eaten = 0; // plants (prey) or prey (predator)

    bool is_robot() const { return kind == EntityKind::prey || kind == EntityKind::predator; }
};

// AlivePoints (min(steps, 1000)/1000) plus plants or prey eaten.
double alife_fitness(std::size_t steps, std::size_t eaten);

// Energy changes of one world step, by cause. `spawned` and `removed` are the
// energies of robots entering and leaving the world.
struct EnergyLedger {
    double movement = 0.0;
    double idle = 0.0;
    double plants = 0.0;
    double poison = 0.0;
    double predation = 0.0;
    double spawned = 0.0;
    double removed = 0.0;

    double net() const { return -movement - idle + plants + poison + predation + spawned - removed; }
};

struct TraceRow {
    std::size_t evaluation = 0;
    EntityKind species = EntityKind::prey;
    double avg_fitness = 0.0;
    double avg_neurons = 0.0;
    std::size_t diversity = 0;
    std::size_t deaths = 0;
};

struct SpeciesSummary {
    EntityKind species = EntityKind::prey;
    double baseline_fitness = 0.0; // mean death fitness in the first trace window
    double final_fitness = 0.0;    // mean death fitness in the last trace window
    double pool_mean_fitness = 0.0;
    std::size_t color_connected = 0; // pool + active genotypes reading the color sensor
    std::size_t population = 0;      // pool + active genotypes
};

struct FlatlandResult {
    std::size_t evaluations = 0;
    std::size_t steps = 0;
    std::vector<TraceRow> trace;
    std::vector<SpeciesSummary> species;
};

class Flatland {
public:
    // `replay`, when given, receives the event log.
    explicit Flatland(FlatlandConfig config, std::ostream* replay = nullptr);

    // Runs until the evaluation cap.
    FlatlandResult run();
    // Clears the world and places food and a freshly seeded population.
    void populate();
    // One world step: every robot senses, thinks and acts once, in a freshly
    // shuffled order. Returns the energy ledger of the step.
    EnergyLedger step();

    // --- world primitives (also used directly by tests) -------------------
    std::size_t add_entity(EntityKind kind, double x, double y, double heading = 0.0);
    void clear_entities();
    const std::vector<Entity>& entities() const { return entities_; }
    Entity& entity(std::size_t slot) { return entities_[slot]; }
    void move_entity(std::size_t slot, double x, double y);

    std::vector<double> ray_cast_range(std::size_t robot) const;
    std::vector<double> ray_cast_color(std::size_t robot) const;
    // Wheel outputs in [-1, 1] (clamped). Debits energy into `ledger`.
    void differential_drive(std::size_t robot, double left, double right, EnergyLedger& ledger);
    // Eating, predation and pushes for a robot that just moved. Returns the
    // slots of robots that died from predation.
    std::vector<std::size_t> resolve_interactions(std::size_t robot, EnergyLedger& ledger);

    double robot_energy_total() const;
    std::size_t evaluations() const { return evaluations_; }
    const DeadPool& dead_pool(EntityKind species) const;
    const FlatlandConfig& config() const { return config_; }
    // Genotypes currently alive in the world, for one species.
    std::vector<DxnnGenotype> active_genotypes(EntityKind species) const;

private:
    struct Agent {
        DxnnGenotype genotype;
        Phenotype brain;
        bool reentry = false;
        bool evaluated = false;
        double best = 0.0;
        std::vector<ElementId> ngn;
        std::size_t max_mistakes = 0;
        std::size_t mistakes = 0;
        WeightUndo undo;
        std::array<std::vector<double>, 2> senses;
    };

    struct Window {
        double fitness = 0.0;
        double neurons = 0.0;
        std::size_t deaths = 0;
    };

    void sync(std::size_t slot);
    void spawn_robot(std::size_t slot, EnergyLedger& ledger);
    void respawn_food(std::size_t slot);
    void start_individual(std::size_t slot);
    void begin_tuning(Agent& agent);
    void on_death(std::size_t slot, EnergyLedger& ledger);
    void emit_trace();
    std::size_t species_index(EntityKind kind) const { return kind == EntityKind::predator ? 1 : 0; }
    double color_of(EntityKind kind) const;
    DxnnGenotype new_seed(EntityKind species);
    void cast(std::size_t robot, std::vector<double>* range, std::vector<double>* color) const;

    FlatlandConfig config_;
    std::ostream* replay_;
    Rng rng_;
    IdAllocator ids_;
    std::uint64_t next_entity_id_ = 1;
    const kernels::KernelTable& kernels_;

    std::vector<Entity> entities_;
    std::vector<double> xs_, ys_, rs_;
    std::vector<Agent> agents_; // indexed by slot; unused for food slots
    std::vector<std::size_t> robots_;
    std::vector<DeadPool> pools_;
    std::vector<std::size_t> scratch_;

    std::size_t evaluations_ = 0;
    std::size_t steps_ = 0;
    std::vector<Window> windows_;
    std::vector<TraceRow> trace_;
    std::vector<SpeciesSummary> summaries_;
    bool stop_ = false;
};

} // namespace dxnn
