#include <doctest.h>

#include "dxnn/errors.hpp"
#include "dxnn/selection.hpp"
#include "oracles.hpp"

using namespace dxnn;

namespace {

ElementId net(std::uint64_t serial)
{
    return ElementId{ElementKind::network, serial};
}

DxnnGenotype entry(std::uint64_t serial, std::size_t neurons = 1)
{
    DxnnGenotype g;
    g.id = net(serial);
    for (std::size_t i = 0; i < neurons; ++i)
        g.neurons.push_back(make_neuron(ElementId{ElementKind::neuron, serial * 100 + i}, "tanh", "none", 0));
    return g;
}

std::vector<double> fitnesses(const DeadPool& pool)
{
    std::vector<double> f;
    for (const DeadPoolEntry& e : pool.entries())
        f.push_back(e.fitness);
    return f;
}

} // namespace

TEST_CASE("rounding is half away from zero")
{
    CHECK(round_half_away(0.5) == 1);
    CHECK(round_half_away(1.5) == 2);
    CHECK(round_half_away(2.5) == 3);
    CHECK(round_half_away(-0.5) == -1);
    CHECK(round_half_away(0.49) == 0);
}

TEST_CASE("fitness ties are broken by compactness")
{
    const std::vector<Scored> s{{net(0), 10, 1}, {net(1), 10, 2}};
    const SelectionOutcome out = competition_select(s, 2);
    REQUIRE(out.survivors.size() == 1);
    CHECK(out.survivors[0].id == net(0));
    CHECK(out.deleted == std::vector<ElementId>{net(1)});
}

TEST_CASE("single survivor fills the population")
{
    const std::vector<Scored> s{{net(0), 100, 1}, {net(1), 0, 1}};
    const SelectionOutcome out = competition_select(s, 10);
    REQUIRE(out.survivors.size() == 1);
    CHECK(out.survivors[0].nao == 10);
}

TEST_CASE("identical survivors get identical budgets")
{
    std::vector<Scored> s;
    for (std::uint64_t i = 0; i < 8; ++i)
        s.push_back({net(i), 3.5, 2});
    const SelectionOutcome out = competition_select(s, 8);
    REQUIRE(out.survivors.size() == 4);
    for (const Survivor& v : out.survivors)
        CHECK(v.nao == out.survivors[0].nao);
}

TEST_CASE("nothing scored: survivors share the population round-robin")
{
    const std::vector<Scored> s{{net(0), 0, 1}, {net(1), 0, 1}, {net(2), 0, 1}, {net(3), 0, 1}};
    const SelectionOutcome out = competition_select(s, 5);
    REQUIRE(out.survivors.size() == 2);
    CHECK(out.survivors[0].nao + out.survivors[1].nao == 5);
}

TEST_CASE("selection rejects bad input")
{
    const std::vector<Scored> one{{net(0), 1, 1}};
    CHECK_THROWS_AS(competition_select(one, 10), ConfigError);
    const std::vector<Scored> negative{{net(0), -1, 1}, {net(1), 1, 1}};
    CHECK_THROWS_AS(competition_select(negative, 10), ConfigError);
}

TEST_CASE("selection oracle tables")
{
    for (const testing::SelectionTable& t : testing::selection_tables()) {
        CAPTURE(t.name);
        std::vector<Scored> scored;
        for (std::size_t i = 0; i < t.scored.size(); ++i)
            scored.push_back(Scored{net(i), t.scored[i].first, t.scored[i].second});
        const SelectionOutcome out = competition_select(scored, t.limit);
        REQUIRE(out.survivors.size() == t.survivors.size());
        for (std::size_t k = 0; k < t.survivors.size(); ++k) {
            CHECK(out.survivors[k].id.serial == t.survivors[k].first);
            CHECK(out.survivors[k].nao == t.survivors[k].second);
        }
        CHECK(out.deleted.size() == t.deleted.size());
    }
    CHECK(testing::selection_oracle().pass);
}

TEST_CASE("dead pool keeps the best")
{
    DeadPool pool(2);
    pool.insert(entry(1), 5);
    pool.insert(entry(2), 3);
    CHECK(pool.insert(entry(3), 4));
    CHECK(fitnesses(pool) == std::vector<double>{5, 4});
    CHECK_FALSE(pool.insert(entry(4), 1));
    CHECK(fitnesses(pool) == std::vector<double>{5, 4});

    DeadPool big(10);
    big.insert(entry(9), 0.0);
    CHECK(big.size() == 1);
}

TEST_CASE("re-evaluation replaces the stored fitness")
{
    DeadPool pool(3);
    pool.insert(entry(1), 5);
    pool.insert(entry(2), 3);
    pool.reinsert(entry(1), 1);
    CHECK(pool.size() == 2);
    CHECK(fitnesses(pool) == std::vector<double>{3, 1});
}

TEST_CASE("dead pool sampling")
{
    Rng rng(12);
    SUBCASE("single entry always wins")
    {
        DeadPool pool(5);
        pool.insert(entry(1), 2.0);
        for (int i = 0; i < 100; ++i)
            CHECK(pool.sample_parent(rng).index == 0);
    }
    SUBCASE("re-entry about one draw in ten")
    {
        DeadPool pool(5);
        pool.insert(entry(1), 2.0);
        int reentries = 0;
        for (int i = 0; i < 10000; ++i)
            reentries += pool.sample_parent(rng).reentry ? 1 : 0;
        CHECK(reentries / 10000.0 == doctest::Approx(0.10).epsilon(0.1));
    }
    SUBCASE("weights 3 and 1 give a 3:1 ratio")
    {
        DeadPool pool(5);
        pool.insert(entry(1), 3.0);
        pool.insert(entry(2), 1.0);
        const std::vector<double> w = pool.sampling_weights();
        CHECK(w[0] / w[1] == doctest::Approx(3.0));
        int first = 0;
        for (int i = 0; i < 10000; ++i)
            first += pool.sample_parent(rng).index == 0 ? 1 : 0;
        CHECK(first / 10000.0 == doctest::Approx(0.75).epsilon(0.03));
    }
    SUBCASE("size enters the price")
    {
        DeadPool pool(5);
        pool.insert(entry(1, 1), 2.0);
        pool.insert(entry(2, 4), 2.0);
        const std::vector<double> w = pool.sampling_weights();
        CHECK(w[0] / w[1] == doctest::Approx(4.0));
    }
}

TEST_CASE("empty dead pool cannot be sampled")
{
    DeadPool pool(2);
    Rng rng(1);
    CHECK_THROWS_AS(pool.sample_parent(rng), RuntimeError);
    CHECK_THROWS_AS(DeadPool(0), ConfigError);
}
