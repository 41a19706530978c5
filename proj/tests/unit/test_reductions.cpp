#include "oracles.hpp"

#include <ewh/reductions.hpp>

#include <gtest/gtest.h>

using namespace ewh;

namespace {

KSumInstance positive_ksum(int k, std::size_t n, std::uint64_t seed)
{
    auto inst = random_ksum(k, n, 20, seed);
    for (auto &l : inst.lists)
        for (auto &x : l)
            x = abs_weight(x) + 1;
    return inst;
}

// Checks yes/no agreement and replays every output witness through `back`.
template <class Back>
void expect_equivalent(const HPartiteInstance &in, const HPartiteInstance &out, Back back)
{
    auto truth = oracle::ew_yes(in);
    auto sols = oracle::ew_solutions(out);
    ASSERT_EQ(! sols.empty(), truth);
    for (const auto &s : sols)
        EXPECT_EQ(weight_of(in, back(HSubgraph{s})), in.target());
}

} // namespace

TEST(KSumToAny, PlantedTriangleRoundTrips)
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto inst = random_ksum(3, 5, 20, seed);
        auto planted = plant_ksum(inst, seed + 1);
        KSumToAny red(inst, parse_pattern_name("triangle"));
        auto r = brute_force_ew(red.instance());
        ASSERT_TRUE(r.solution);
        EXPECT_TRUE(is_solution(inst, red.map_back(*r.solution)));
        EXPECT_EQ(weight_of(red.instance(), red.map_forward(planted)), inst.target);
    }
}

TEST(KSumToAny, NoAndFormula)
{
    KSumToAny no(positive_ksum(3, 4, 1), parse_pattern_name("path_3"));
    EXPECT_FALSE(brute_force_ew(no.instance()).solution);

    auto inst = random_ksum(2, 3, 20, 4);
    KSumToAny red(inst, parse_pattern_name("path_2"));
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b)
            EXPECT_EQ(weight_of(red.instance(), HSubgraph{{a, b}}), inst.lists[0][a] + inst.lists[1][b]);
    EXPECT_THROW(KSumToAny(inst, parse_pattern_name("path_3")), std::invalid_argument);
}

TEST(KSumToMatching, DecodesAndSizes)
{
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        auto inst = random_ksum(2, 4, 20, seed);
        auto planted = plant_ksum(inst, seed + 3);
        KSumToMatching red(inst);
        EXPECT_EQ(red.side(), 2u);
        EXPECT_EQ(red.instance().k(), 4);
        EXPECT_EQ(red.instance().n(), 2u);
        auto r = brute_force_ew(red.instance());
        ASSERT_TRUE(r.solution);
        EXPECT_TRUE(is_solution(inst, red.map_back(*r.solution)));
        EXPECT_EQ(red.map_back(red.map_forward(planted)), planted);
    }
}

TEST(KSumToMatching, SingleEntryAndPadding)
{
    KSumInstance one{{{3}, {-1}, {4}}, 6};
    KSumToMatching red1(one);
    EXPECT_EQ(red1.side(), 1u);
    EXPECT_EQ(weight_of(red1.instance(), HSubgraph{{0, 0, 0, 0, 0, 0}}), 6);

    // n = 5 pads to 3 x 3; padded cells never appear in a witness.
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        auto inst = random_ksum(2, 5, 4, seed);
        KSumToMatching red(inst);
        ASSERT_EQ(red.side(), 3u);
        auto sols = oracle::ew_solutions(red.instance());
        EXPECT_EQ(! sols.empty(), oracle::ksum_yes(inst));
        for (const auto &s : sols) {
            for (std::size_t i = 0; i < 2; ++i)
                EXPECT_LT(s[2 * i] * 3 + s[2 * i + 1], 5u);
            EXPECT_TRUE(is_solution(inst, red.map_back(HSubgraph{s})));
        }
    }
}

TEST(SequenceToStar, FindsPlantedPosition)
{
    for (std::size_t pos : {0u, 2u, 4u}) {
        KSumSequence seq;
        for (std::uint64_t i = 0; i < 5; ++i)
            seq.instances.push_back(positive_ksum(3, 4, i));
        plant_ksum(seq.instances[pos], 99);
        SequenceToStar red(seq);
        EXPECT_EQ(red.instance().pattern(), parse_pattern_name("star_3"));
        auto r = brute_force_ew(red.instance());
        ASSERT_TRUE(r.solution);
        EXPECT_EQ(r.solution->assignment.back(), pos);
        auto w = red.map_back(*r.solution);
        EXPECT_EQ(w.instance_index, pos);
        EXPECT_TRUE(is_solution(seq.instances[pos], w.solution));
        EXPECT_EQ(red.map_forward(w), *r.solution);
    }
}

TEST(SequenceToStar, AllNoAndDegenerate)
{
    KSumSequence seq;
    for (std::uint64_t i = 0; i < 3; ++i)
        seq.instances.push_back(positive_ksum(2, 4, i));
    EXPECT_FALSE(brute_force_ew(SequenceToStar(seq).instance()).solution);

    KSumSequence tiny{{KSumInstance{{{7}}, 7}}};
    SequenceToStar red(tiny);
    EXPECT_EQ(red.instance().pattern().edge_count(), 1);
    EXPECT_EQ(weight_of(red.instance(), HSubgraph{{0, 0}}), 7);

    KSumSequence mixed{{random_ksum(2, 3, 5, 1), random_ksum(3, 3, 5, 1)}};
    EXPECT_THROW(SequenceToStar{mixed}, std::invalid_argument);
}

TEST(SequenceToStar, EquivalenceFuzz)
{
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        KSumSequence seq;
        std::size_t count = 1 + seed % 5;
        for (std::size_t i = 0; i < count; ++i)
            seq.instances.push_back(random_ksum(2, 3, 6, seed * 10 + i));
        SequenceToStar red(seq);
        bool truth = solve_sequence(seq, KSumSolver::bruteforce).hit.has_value();
        auto sols = oracle::ew_solutions(red.instance());
        ASSERT_EQ(! sols.empty(), truth);
        for (const auto &s : sols) {
            auto w = red.map_back(HSubgraph{s});
            EXPECT_TRUE(is_solution(seq.instances[w.instance_index], w.solution));
        }
    }
}

TEST(ConvToPath, PlantedDecodesWithIdentity)
{
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        auto inst = random_convksum(4, 5, 20, seed);
        auto planted = plant_convksum(inst, seed + 1);
        ConvToPath red(inst);
        EXPECT_EQ(red.instance().pattern(), parse_pattern_name("path_3"));
        auto r = brute_force_ew(red.instance());
        ASSERT_TRUE(r.solution);
        auto b = red.map_back(*r.solution);
        EXPECT_TRUE(is_solution(inst, b));
        EXPECT_EQ(b.indices[3], b.indices[0] + b.indices[1] + b.indices[2]);
        EXPECT_EQ(weight_of(red.instance(), red.map_forward(planted)), inst.target);
    }
}

TEST(ConvToPath, EquivalenceFuzz)
{
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        int k = 3 + static_cast<int>(seed % 3);
        auto inst = random_convksum(k, 2 + seed % 4, 5, seed);
        inst.target = static_cast<Weight>(seed % 7) - 3;
        ConvToPath red(inst);
        auto sols = oracle::ew_solutions(red.instance());
        ASSERT_EQ(! sols.empty(), oracle::conv_yes(inst)) << seed;
        for (const auto &s : sols)
            EXPECT_TRUE(is_solution(inst, red.map_back(HSubgraph{s})));
    }
}

TEST(ConvToPath, SingleEntryLists)
{
    ConvKSumInstance inst{{{1}, {2}, {3}, {-6}}, 0};
    ConvToPath red(inst);
    EXPECT_EQ(weight_of(red.instance(), HSubgraph{{0, 0, 0}}), 0);
    auto b = red.map_back(HSubgraph{{0, 0, 0}});
    EXPECT_EQ(b.indices, (std::vector<std::size_t>{0, 0, 0, 0}));
    EXPECT_THROW(ConvToPath(ConvKSumInstance{{{1}, {2}}, 0}), std::invalid_argument);
}

TEST(EdgeDeleteLift, PathToTriangle)
{
    auto tri = parse_pattern_name("triangle");
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        auto inst = random_instance(parse_pattern_name("path_3"), 3, 6, seed);
        if (seed % 2)
            inst = plant_solution(inst, seed).instance;
        EdgeDeleteLift red(inst, tri, 0, 2);
        expect_equivalent(inst, red.instance(), [&](const HSubgraph &s) { return red.map_back(s); });
        std::vector<std::size_t> a(3, 0), lim(3, 3);
        do {
            EXPECT_EQ(weight_of(red.instance(), HSubgraph{a}), weight_of(inst, HSubgraph{a}));
        } while (oracle::next_tuple(a, lim));
    }
    HPartiteInstance zero(parse_pattern_name("path_3"), 2);
    EXPECT_TRUE(brute_force_ew(EdgeDeleteLift(zero, tri, 0, 2).instance()).solution);
    EXPECT_THROW(EdgeDeleteLift(zero, tri, 0, 1), std::invalid_argument);
}

TEST(ContractLift, TriangleToPath4)
{
    auto p4 = parse_pattern_name("path_4");
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        auto inst = random_instance(parse_pattern_name("triangle"), 2 + seed % 3, 8, seed);
        if (seed % 2)
            inst = plant_solution(inst, seed).instance;
        ContractLift red(inst, p4, 0, 3);
        Weight w = std::max(inst.max_magnitude(), abs_weight(inst.target()));
        EXPECT_EQ(red.multiplier(), Weight(3 + 3 + 1) * (w + 1));
        auto sols = oracle::ew_solutions(red.instance());
        ASSERT_EQ(! sols.empty(), oracle::ew_yes(inst)) << seed;
        for (const auto &s : sols) {
            EXPECT_EQ(s[0], s[3]);
            EXPECT_EQ(weight_of(inst, red.map_back(HSubgraph{s})), inst.target());
        }
    }
}

TEST(ContractLift, AdjacentSplitAndSharedNeighbour)
{
    // Star_2 centre split into adjacent nodes 1,2 of path_4: u1-u2 edge and
    // both copies adjacent to distinct leaves.
    auto star = parse_pattern_name("star_2");
    auto p4 = parse_pattern_name("path_4");
    ASSERT_TRUE(find_isomorphism(apply_vm_op(p4, Contract{1, 2}), star));
    // Triangle from cycle_4 by contracting 0,2: both copies see 1 and 3.
    auto c4 = parse_pattern_name("cycle_4");
    auto merged = apply_vm_op(c4, Contract{0, 2});
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        auto inst = random_instance(merged, 3, 6, seed);
        ContractLift red(inst, c4, 0, 2);
        expect_equivalent(inst, red.instance(), [&](const HSubgraph &s) { return red.map_back(s); });
    }
    auto p3 = apply_vm_op(p4, Contract{1, 2});
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        auto inst = random_instance(p3, 3, 6, seed);
        ContractLift red(inst, p4, 1, 2);
        expect_equivalent(inst, red.instance(), [&](const HSubgraph &s) { return red.map_back(s); });
    }
    EXPECT_THROW(ContractLift(random_instance(p3, 2, 3, 1), p4, 0, 2), std::invalid_argument);
}

TEST(VmChain, TriangleThroughPath4ToCycle4)
{
    auto c4 = parse_pattern_name("cycle_4");
    std::vector<VmOp> ops{EdgeDelete{0, 3}, Contract{0, 3}};
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        auto inst = random_instance(parse_pattern_name("triangle"), 3, 6, seed);
        if (seed % 2)
            inst = plant_solution(inst, seed).instance;
        VmChain red(inst, c4, ops);
        EXPECT_EQ(red.instance().pattern(), c4);
        expect_equivalent(inst, red.instance(), [&](const HSubgraph &s) { return red.map_back(s); });
    }
}

TEST(VmChain, EmptyChainIsIdentity)
{
    auto inst = random_instance(parse_pattern_name("path_3"), 3, 20, 1);
    VmChain red(inst, inst.pattern(), {});
    EXPECT_EQ(red.instance().pattern(), inst.pattern());
    for (int e = 0; e < 2; ++e)
        EXPECT_EQ(red.instance().edge_matrix(e), inst.edge_matrix(e));
    EXPECT_EQ(red.map_back(HSubgraph{{2, 0, 1}}).assignment, (std::vector<std::size_t>{2, 0, 1}));
}

TEST(VmChain, Path4ToVi)
{
    auto vi = parse_pattern_name("vi");
    auto p4 = parse_pattern_name("path_4");
    auto ops = find_vm_sequence(p4, vi, 4);
    ASSERT_TRUE(ops);
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        auto inst = random_instance(p4, 3, 6, seed);
        if (seed % 2)
            inst = plant_solution(inst, seed).instance;
        VmChain red(inst, vi, *ops);
        expect_equivalent(inst, red.instance(), [&](const HSubgraph &s) { return red.map_back(s); });
        auto fwd = red.map_forward(HSubgraph{{0, 1, 2, 0}});
        EXPECT_EQ(red.map_back(fwd).assignment, (std::vector<std::size_t>{0, 1, 2, 0}));
    }
}

TEST(VmChain, RelabelledEndpoint)
{
    // path_3 drawn as 1-0-2 still lifts to the triangle.
    PatternGraph odd(3, {{0, 1}, {0, 2}});
    auto inst = random_instance(odd, 3, 6, 4);
    VmChain red(inst, parse_pattern_name("triangle"), {EdgeDelete{1, 2}});
    expect_equivalent(inst, red.instance(), [&](const HSubgraph &s) { return red.map_back(s); });
    EXPECT_THROW(VmChain(inst, parse_pattern_name("triangle"), {Contract{0, 1}}), std::invalid_argument);
}

TEST(ApexSplit, TriangleToEdges)
{
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        auto inst = random_instance(parse_pattern_name("triangle"), 4, 8, seed);
        if (seed % 2)
            inst = plant_solution(inst, seed).instance;
        ApexSplit red(inst, 2);
        ASSERT_EQ(red.instances().size(), 4u);
        bool any = false;
        for (std::size_t a = 0; a < 4; ++a) {
            const auto &sub = red.instances()[a];
            EXPECT_EQ(sub.pattern(), parse_pattern_name("path_2"));
            for (const auto &s : oracle::ew_solutions(sub)) {
                any = true;
                auto full = red.map_back(a, HSubgraph{s});
                EXPECT_EQ(full.assignment[2], a);
                EXPECT_EQ(weight_of(inst, full), inst.target());
                EXPECT_EQ(red.map_forward(full), std::make_pair(a, HSubgraph{s}));
            }
        }
        EXPECT_EQ(any, oracle::ew_yes(inst));
    }
}

TEST(ApexSplit, PlantedApexIndexAndPoison)
{
    auto p = parse_pattern_name("triangle");
    auto base = random_instance(p, 4, 20, 3);
    HSubgraph target{{1, 3, 2}};
    base.set_target(weight_of(base, target));
    ApexSplit red(base, 2);
    EXPECT_TRUE(brute_force_ew(red.instances()[2]).solution);

    auto poisoned = base;
    Weight poison = poison_for(p, 20);
    for (int e = 0; e < p.edge_count(); ++e)
        if (p.edges()[static_cast<std::size_t>(e)].v == 2)
            for (auto &w : poisoned.edge_matrix(e))
                w = poison;
    ApexSplit split(poisoned, 2);
    for (const auto &sub : split.instances())
        EXPECT_FALSE(brute_force_ew(sub).solution);

    EXPECT_THROW(ApexSplit(random_instance(parse_pattern_name("path_3"), 2, 3, 1), 0), std::invalid_argument);
}

TEST(ApexSplit, NonLastApex)
{
    auto p = parse_pattern_name("clique_4");
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto inst = plant_solution(random_instance(p, 3, 5, seed), seed).instance;
        ApexSplit red(inst, 1);
        bool any = false;
        for (std::size_t a = 0; a < 3; ++a)
            for (const auto &s : oracle::ew_solutions(red.instances()[a])) {
                any = true;
                EXPECT_EQ(weight_of(inst, red.map_back(a, HSubgraph{s})), inst.target());
            }
        EXPECT_TRUE(any);
    }
}

TEST(EwToKSumEdges, TriangleAgreesWithOracle)
{
    int yes = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto g = random_general(parse_pattern_name("triangle"), 6, 0.5, 5, seed);
        if (seed % 3 == 0)
            plant_general(g, seed);
        EwToKSumEdges red(g, seed);
        auto out = red.solve(KSumSolver::mitm);
        bool truth = oracle::general_yes(g);
        EXPECT_EQ(out.map.has_value(), truth) << seed;
        if (out.map)
            EXPECT_EQ(mapped_weight(g, *out.map), g.target);
        yes += truth;
        EXPECT_LE(out.longest_list, g.edges.size());
    }
    EXPECT_GT(yes, 30);
}

TEST(EwToKSumEdges, RoundListsAreSparse)
{
    auto g = random_general(parse_pattern_name("path_4"), 7, 0.4, 20, 2);
    EwToKSumEdges red(g, 1);
    EXPECT_EQ(red.rounds(), 3u * 256u * 3u);
    for (std::size_t r = 0; r < 20; ++r) {
        auto rd = red.round(r);
        ASSERT_EQ(rd.instance.k(), 3);
        for (const auto &l : rd.instance.lists)
            EXPECT_LE(l.size(), g.edges.size());
    }
}

TEST(EwToKSumEdges, SingleEdgeIsMembership)
{
    GeneralGraphInstance g;
    g.nv = 4;
    g.pattern = parse_pattern_name("path_2");
    g.edges = {{0, 1, 3}, {1, 2, 5}, {2, 3, 9}};
    g.target = 5;
    EwToKSumEdges red(g, 3);
    auto out = red.solve(KSumSolver::bruteforce);
    ASSERT_TRUE(out.map);
    EXPECT_EQ(mapped_weight(g, *out.map), Weight{5});
    g.target = 4;
    EXPECT_FALSE(EwToKSumEdges(g, 3).solve(KSumSolver::bruteforce).map);
}

TEST(EwToKSumEdges, OtherPatterns)
{
    for (const char *name : {"path_3", "star_3", "cycle_4", "vi"})
        for (std::uint64_t seed = 0; seed < 6; ++seed) {
            auto g = random_general(parse_pattern_name(name), 6, 0.6, 4, seed);
            plant_general(g, seed + 1);
            EwToKSumEdges red(g, seed);
            auto out = red.solve(KSumSolver::mitm);
            ASSERT_TRUE(out.map) << name << " " << seed;
            EXPECT_EQ(mapped_weight(g, *out.map), g.target);
        }
    auto isolated = random_general(PatternGraph(3, {{0, 1}}), 5, 0.5, 3, 1);
    EXPECT_THROW(EwToKSumEdges(isolated, 1), std::invalid_argument);
}

TEST(ReductionIds, Stable)
{
    EXPECT_EQ(std::size(kReductionIds), 9u);
    EXPECT_EQ(kReductionIds[0], "ksum-to-any");
    EXPECT_EQ(kReductionIds[8], "ew-to-ksum-edges");
}

TEST(EwToKSumEdges, EdgelessGraphEmitsNothing)
{
    GeneralGraphInstance g;
    g.nv = 4;
    g.pattern = parse_pattern_name("path_3");
    EwToKSumEdges red(g, 2);
    EXPECT_TRUE(red.round(0).empty_list);
    auto out = red.solve(KSumSolver::mitm);
    EXPECT_FALSE(out.map);
    EXPECT_EQ(out.longest_list, 0u);
    EXPECT_EQ(out.stats.ksum_instances_emitted, 0u);
}
