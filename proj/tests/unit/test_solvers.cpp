#include "oracles.hpp"

#include <ewh/solvers.hpp>

#include <gtest/gtest.h>

using namespace ewh;

namespace {

std::vector<PatternGraph> catalog_k5()
{
    std::vector<PatternGraph> out;
    for (const char *name : {"path_2", "path_3", "path_4", "path_5", "cycle_3", "cycle_4", "cycle_5", "star_2", "star_3",
                             "star_4", "matching_1", "matching_2", "clique_4", "clique_5", "vi"})
        out.push_back(parse_pattern_name(name));
    return out;
}

std::uint64_t closed_form(std::size_t n, const SeparatorD &sep)
{
    std::uint64_t sum = 0;
    for (const auto &part : sep.parts)
        sum += static_cast<std::uint64_t>(oracle::ipow(static_cast<long long>(n), static_cast<int>(part.size())));
    return static_cast<std::uint64_t>(oracle::ipow(static_cast<long long>(n), static_cast<int>(sep.s.size()))) * sum;
}

// w(χ restricted to `nodes`): node weights of `nodes` plus edges inside it.
Weight restricted_weight(const HPartiteInstance &inst, const std::vector<std::size_t> &a, const std::vector<int> &nodes)
{
    std::vector<bool> in(static_cast<std::size_t>(inst.k()), false);
    for (int x : nodes)
        in[static_cast<std::size_t>(x)] = true;
    Weight w = 0;
    for (int x : nodes)
        w += inst.node(x, a[static_cast<std::size_t>(x)]);
    const auto &edges = inst.pattern().edges();
    for (std::size_t e = 0; e < edges.size(); ++e)
        if (in[static_cast<std::size_t>(edges[e].u)] && in[static_cast<std::size_t>(edges[e].v)])
            w += inst.edge(static_cast<int>(e), a[static_cast<std::size_t>(edges[e].u)],
                           a[static_cast<std::size_t>(edges[e].v)]);
    return w;
}

} // namespace

TEST(SeparatorSolve, AgreesWithOracleAndCountsExactly)
{
    for (const auto &p : catalog_k5())
        for (std::uint64_t seed = 0; seed < 60; ++seed) {
            std::size_t n = 2 + seed % 5;
            auto inst = random_instance(p, n, 20, seed);
            if (seed % 3 == 0)
                inst = plant_solution(inst, seed + 7).instance;
            auto r = separator_solve(inst);
            ASSERT_EQ(r.solution.has_value(), oracle::ew_yes(inst)) << seed;
            if (r.solution)
                EXPECT_EQ(oracle::ew_weight(inst, r.solution->assignment), inst.target());
            auto sep = as_d_separator(gamma(p).argmin);
            EXPECT_EQ(r.stats.list_entries_built, closed_form(n, sep));
            EXPECT_EQ(r.stats.ksum_instances_emitted, expected_ksum_instances(n, sep));
            EXPECT_EQ(expected_list_entries(n, sep), closed_form(n, sep));
        }
}

TEST(SeparatorSolve, Path5Count)
{
    auto inst = random_instance(parse_pattern_name("path_5"), 8, 20, 1);
    auto r = separator_solve(inst);
    EXPECT_EQ(r.stats.list_entries_built, 1024u);
    EXPECT_EQ(r.stats.ksum_instances_emitted, 8u);
}

TEST(SeparatorSolve, ExplicitSeparatorAndEmptyPart)
{
    auto p = parse_pattern_name("clique_4");
    auto inst = plant_solution(random_instance(p, 3, 20, 2), 3).instance;
    // Clique: the only useful shape is a full scan with one empty part.
    Separator2 sep{{}, {0, 1, 2, 3}, {}};
    auto r = separator_solve(inst, sep);
    ASSERT_TRUE(r.solution);
    EXPECT_EQ(r.stats.list_entries_built, 81u + 1u);
    EXPECT_THROW(separator_solve(inst, Separator2{{}, {0, 1}, {2, 3}}), std::invalid_argument);
}

TEST(SeparatorSolve, JobsDoNotChangeTheOutcome)
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto inst = random_instance(parse_pattern_name("path_5"), 5, 20, seed);
        if (seed % 2)
            inst = plant_solution(inst, seed).instance;
        auto a = separator_solve(inst, std::nullopt, 1);
        auto b = separator_solve(inst, std::nullopt, 3);
        EXPECT_EQ(a.solution, b.solution);
        EXPECT_EQ(a.stats, b.stats);
        auto c = dsep_solve(inst, best_d_separator(inst.pattern(), 3), KSumSolver::mitm, 1);
        auto d = dsep_solve(inst, best_d_separator(inst.pattern(), 3), KSumSolver::mitm, 4);
        EXPECT_EQ(c.solution, d.solution);
        EXPECT_EQ(c.stats, d.stats);
    }
}

TEST(SeparatorSolve, TwoSum)
{
    auto r = two_sum({5, 1, 3}, {-1, 2, 7}, 4);
    ASSERT_TRUE(r);
    EXPECT_EQ(std::vector<Weight>({5, 1, 3})[r->first] + std::vector<Weight>({-1, 2, 7})[r->second], 4);
    EXPECT_FALSE(two_sum({1, 2}, {3, 4}, 100));
}

TEST(Dsep, ListsEqualRestrictedWeights)
{
    for (const char *name : {"path_4", "star_3", "cycle_5", "vi"}) {
        auto p = parse_pattern_name(name);
        auto inst = random_instance(p, 3, 20, 17);
        for (int d : {2, 3}) {
            auto sep = best_d_separator(p, d);
            DsepReduction red(inst, sep);
            const auto &frame = red.frame();
            for (std::uint64_t s = 0; s < red.instance_count(); ++s) {
                auto em = red.emission(s);
                std::vector<std::size_t> a(static_cast<std::size_t>(p.size()), 0);
                frame.place_s(s, a);
                Weight ws = restricted_weight(inst, a, sep.s);
                EXPECT_EQ(em.s_weight, ws);
                EXPECT_EQ(em.instance.target, inst.target() + Weight(d - 1) * ws);
                for (int j = 0; j < d; ++j) {
                    std::vector<int> nodes = sep.s;
                    nodes.insert(nodes.end(), sep.parts[static_cast<std::size_t>(j)].begin(),
                                 sep.parts[static_cast<std::size_t>(j)].end());
                    const auto &list = em.instance.lists[static_cast<std::size_t>(j)];
                    ASSERT_EQ(list.size(), frame.part_size(j));
                    for (std::uint64_t r = 0; r < frame.part_size(j); ++r) {
                        auto b = a;
                        frame.place_part(j, r, b);
                        EXPECT_EQ(list[r], restricted_weight(inst, b, nodes));
                    }
                }
            }
        }
    }
}

TEST(Dsep, TwoPartStreamMatchesSeparatorLists)
{
    auto p = parse_pattern_name("path_5");
    auto inst = random_instance(p, 4, 20, 3);
    auto sep2 = gamma(p).argmin;
    DsepReduction red(inst, as_d_separator(sep2));
    SeparatorFrame frame(inst, as_d_separator(sep2));
    std::uint64_t count = 0;
    red.for_each([&](const DsepEmission &em) {
        std::vector<std::size_t> a(5, 0);
        frame.place_s(em.s_rank, a);
        EXPECT_EQ(em.instance.lists[0], frame.part_list(0, a));
        EXPECT_EQ(em.instance.lists[1], frame.part_list(1, a));
        EXPECT_EQ(em.instance.target, inst.target() + frame.s_weight(a));
        ++count;
        return true;
    });
    EXPECT_EQ(count, 4u);
}

TEST(Dsep, MatchingThreeHasOneInstance)
{
    auto p = parse_pattern_name("matching_3");
    auto inst = random_instance(p, 4, 20, 5);
    SeparatorD sep{{}, {{0, 1}, {2, 3}, {4, 5}}};
    DsepReduction red(inst, sep);
    EXPECT_EQ(red.instance_count(), 1u);
    auto em = red.emission(0);
    ASSERT_EQ(em.instance.k(), 3);
    for (const auto &l : em.instance.lists)
        EXPECT_EQ(l.size(), 16u);
}

TEST(Dsep, StarIndependentSetSeparator)
{
    auto p = parse_pattern_name("star_4");
    auto sep = independent_set_separator(p);
    EXPECT_EQ(sep, (SeparatorD{{4}, {{0}, {1}, {2}, {3}}}));
    auto inst = plant_solution(random_instance(p, 6, 20, 2), 9).instance;
    auto r = dsep_solve(inst, sep);
    ASSERT_TRUE(r.solution);
    EXPECT_EQ(weight_of(inst, *r.solution), inst.target());
    EXPECT_EQ(r.stats.ksum_instances_emitted, 6u);
    EXPECT_EQ(r.stats.list_entries_built, 6u * 4u * 6u);
}

TEST(Dsep, AgreesWithOracle)
{
    for (const auto &p : catalog_k5())
        for (std::uint64_t seed = 0; seed < 30; ++seed) {
            std::size_t n = 2 + seed % 4;
            auto inst = random_instance(p, n, 20, seed + 1000);
            if (seed % 2)
                inst = plant_solution(inst, seed).instance;
            bool truth = oracle::ew_yes(inst);
            for (int d : {2, 3}) {
                if (d > p.size())
                    continue;
                auto sep = best_d_separator(p, d);
                for (auto solver : {KSumSolver::mitm, KSumSolver::bruteforce}) {
                    auto r = dsep_solve(inst, sep, solver);
                    ASSERT_EQ(r.solution.has_value(), truth);
                    if (r.solution)
                        EXPECT_EQ(oracle::ew_weight(inst, r.solution->assignment), inst.target());
                    EXPECT_EQ(r.stats.list_entries_built, closed_form(n, sep));
                    EXPECT_EQ(r.stats.ksum_instances_emitted, expected_ksum_instances(n, sep));
                }
            }
        }
}

TEST(Dsep, AllPoisonIsNo)
{
    auto p = parse_pattern_name("path_4");
    HPartiteInstance inst(p, 3);
    Weight poison = poison_for(p, 1);
    for (int e = 0; e < p.edge_count(); ++e)
        for (auto &w : inst.edge_matrix(e))
            w = poison;
    EXPECT_FALSE(dsep_solve(inst, best_d_separator(p, 2)).solution);
    EXPECT_FALSE(separator_solve(inst).solution);
}

TEST(MinWeight, AgreesWithOracleAndCounts)
{
    for (const auto &p : catalog_k5())
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            std::size_t n = 2 + seed % 5;
            auto inst = random_instance(p, n, 20, seed + 50);
            auto r = min_weight_solve(inst);
            EXPECT_EQ(r.value, oracle::ew_min(inst));
            EXPECT_EQ(weight_of(inst, r.argmin), r.value);
            int s = oracle::independence(p);
            EXPECT_EQ(r.stats.list_entries_built,
                      static_cast<std::uint64_t>(oracle::ipow(static_cast<long long>(n), p.size() - s)) *
                          static_cast<std::uint64_t>(s) * n);
            Rng rng(seed);
            for (int probe = 0; probe < 200; ++probe) {
                HSubgraph sg;
                for (int i = 0; i < p.size(); ++i)
                    sg.assignment.push_back(uniform_below(rng, n));
                EXPECT_LE(r.value, weight_of(inst, sg));
            }
        }
}

TEST(MinWeight, AllZeroIsZero)
{
    EXPECT_EQ(min_weight_solve(HPartiteInstance(parse_pattern_name("cycle_4"), 3)).value, 0);
}
