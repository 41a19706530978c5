#include "oracles.hpp"

#include <ewh/ksum.hpp>

#include <gtest/gtest.h>

#include <sstream>

using namespace ewh;

namespace {

KSumInstance make(std::vector<std::vector<Weight>> lists, Weight target = 0)
{
    return KSumInstance{std::move(lists), target};
}

} // namespace

TEST(Weight, Int128TextRoundTrip)
{
    for (Weight w : {Weight{0}, Weight{-1}, kMaxMagnitude, -kMaxMagnitude * kMaxMagnitude * 1000, Weight{42}})
        EXPECT_EQ(parse_weight(to_string(w)), w);
    EXPECT_EQ(to_string(Weight{-17}), "-17");
    EXPECT_THROW(parse_weight("12x"), std::invalid_argument);
    EXPECT_THROW(parse_weight(""), std::invalid_argument);
}

TEST(Weight, CheckedArithmetic)
{
    Weight big = Weight{1} << 100;
    EXPECT_THROW(checked_mul(big, big), std::overflow_error);
    EXPECT_EQ(checked_mul(Weight{-3}, Weight{7}), -21);
    EXPECT_EQ(saturating_pow(10, 30), UINT64_MAX);
    EXPECT_EQ(saturating_pow(3, 4), 81u);
}

TEST(Weight, PoisonExceedsEveryLegalSum)
{
    for (int terms = 1; terms <= 8; ++terms) {
        Weight p = poison_value(terms);
        // Poison plus (terms - 1) most negative legal entries still exceeds
        // the largest legal target.
        EXPECT_GT(p - Weight(terms - 1) * kMaxMagnitude, Weight(terms) * kMaxMagnitude);
    }
}

TEST(Weight, RngIsDeterministicAndBounded)
{
    Rng a(5), b(5);
    for (int i = 0; i < 1000; ++i) {
        auto x = uniform_between(a, -3, 3);
        EXPECT_EQ(x, uniform_between(b, -3, 3));
        EXPECT_GE(x, -3);
        EXPECT_LE(x, 3);
    }
    EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
}

TEST(KSum, BruteForceExamples)
{
    auto r = solve_ksum_bruteforce(make({{1, 2}, {-2, 5}}));
    ASSERT_TRUE(r.solution);
    EXPECT_EQ(r.solution->indices, (std::vector<std::size_t>{1, 0}));

    r = solve_ksum_bruteforce(make({{0}, {0}, {0}}));
    ASSERT_TRUE(r.solution);
    EXPECT_EQ(r.solution->indices, (std::vector<std::size_t>{0, 0, 0}));

    r = solve_ksum_bruteforce(make({{4, -1}, {2, 2}, {-1, -6}}));
    ASSERT_TRUE(r.solution);
    EXPECT_EQ(r.solution->indices, (std::vector<std::size_t>{0, 0, 1}));
    EXPECT_TRUE(is_solution(make({{4, -1}, {2, 2}, {-1, -6}}), KSolution{{0, 1, 1}}));
}

TEST(KSum, MitmExamples)
{
    EXPECT_TRUE(solve_ksum_mitm(make({{1, 2}, {-2, 5}})).solution);
    EXPECT_TRUE(solve_ksum_mitm(make({{0}, {0}, {0}})).solution);
    EXPECT_TRUE(solve_ksum_mitm(make({{4, -1}, {2, 2}, {-1, -6}})).solution);
    EXPECT_TRUE(solve_ksum_mitm(make({{1}, {1}, {1}, {1}}, 4)).solution);
    auto r = solve_ksum_mitm(make({{3, 1}, {-1, -3}}));
    ASSERT_TRUE(r.solution);
    EXPECT_TRUE(is_solution(make({{3, 1}, {-1, -3}}), *r.solution));
    EXPECT_FALSE(solve_ksum_mitm(make({{1, 2}, {3, 4}})).solution);
}

TEST(KSum, SingleListDegenerate)
{
    auto inst = make({{5, -2, 7}}, 7);
    auto r = solve_ksum_bruteforce(inst);
    ASSERT_TRUE(r.solution);
    EXPECT_EQ(r.solution->indices, std::vector<std::size_t>{2});
    EXPECT_TRUE(solve_ksum_mitm(inst).solution);
}

TEST(KSum, MitmAgreesWithBruteForce)
{
    for (int k = 2; k <= 5; ++k)
        for (std::uint64_t seed = 0; seed < 500; ++seed) {
            std::size_t n = 1 + seed % (k <= 3 ? 12 : 7);
            auto inst = random_ksum(k, n, 20, seed * 31 + static_cast<std::uint64_t>(k));
            auto brute = solve_ksum_bruteforce(inst);
            auto mitm = solve_ksum_mitm(inst);
            ASSERT_EQ(brute.solution.has_value(), mitm.solution.has_value()) << k << " " << seed;
            ASSERT_EQ(brute.solution.has_value(), oracle::ksum_yes(inst));
            if (mitm.solution)
                EXPECT_TRUE(is_solution(inst, *mitm.solution));
            if (brute.solution)
                EXPECT_TRUE(is_solution(inst, *brute.solution));
            auto half = oracle::ipow(static_cast<long long>(n), (k + 1) / 2) + oracle::ipow(static_cast<long long>(n), k / 2);
            EXPECT_EQ(mitm.stats.list_entries_built, static_cast<std::uint64_t>(half));
        }
}

TEST(KSum, GuardIsEnforced)
{
    auto inst = random_ksum(5, 50, 20, 1);
    EXPECT_THROW(solve_ksum_bruteforce(inst), GuardExceeded);
}

TEST(KSum, ValidationRejectsOutOfRange)
{
    auto inst = make({{kMaxMagnitude + 1}, {0}});
    EXPECT_THROW(validate_ksum(inst), std::invalid_argument);
    EXPECT_THROW(check_shape(make({{1}, {}})), std::invalid_argument);
}

TEST(ConvKSum, Examples)
{
    ConvKSumInstance a{{{5, 0}, {7, 0}, {1, 9}}, 9};
    EXPECT_FALSE(solve_convksum_bruteforce(a).solution);
    EXPECT_FALSE(oracle::conv_yes(a));

    ConvKSumInstance b{{{1}, {1}, {-2}}, 0};
    auto r = solve_convksum_bruteforce(b);
    ASSERT_TRUE(r.solution);
    EXPECT_EQ(r.solution->indices, (std::vector<std::size_t>{0, 0, 0}));

    // Last list too short for any index sum above zero.
    ConvKSumInstance c{{{0, 1, 2}, {0, 1, 2}, {5}}, 5};
    r = solve_convksum_bruteforce(c);
    ASSERT_TRUE(r.solution);
    EXPECT_EQ(r.solution->indices, (std::vector<std::size_t>{0, 0, 0}));
    c.target = 6;
    EXPECT_FALSE(solve_convksum_bruteforce(c).solution);
}

TEST(ConvKSum, AgreesWithOracleAndPlanting)
{
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        int k = 3 + static_cast<int>(seed % 2);
        auto inst = random_convksum(k, 1 + seed % 7, 20, seed);
        auto r = solve_convksum_bruteforce(inst);
        ASSERT_EQ(r.solution.has_value(), oracle::conv_yes(inst));
        if (r.solution)
            EXPECT_TRUE(is_solution(inst, *r.solution));
        auto planted = plant_convksum(inst, seed + 1000);
        EXPECT_TRUE(is_solution(inst, planted));
        EXPECT_TRUE(solve_convksum_bruteforce(inst).solution);
    }
}

TEST(KSum, PlantMakesYes)
{
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto inst = random_ksum(3, 9, 1000, seed);
        inst.target = 17;
        auto sol = plant_ksum(inst, seed + 1);
        EXPECT_TRUE(is_solution(inst, sol));
    }
    EXPECT_EQ(random_ksum(3, 5, 20, 9).lists, random_ksum(3, 5, 20, 9).lists);
}

TEST(Sequence, Examples)
{
    KSumSequence one{{make({{0}, {0}})}};
    auto r = solve_sequence(one, KSumSolver::mitm);
    ASSERT_TRUE(r.hit);
    EXPECT_EQ(r.hit->instance_index, 0u);

    KSumSequence none;
    for (int i = 0; i < 4; ++i)
        none.instances.push_back(make({{1, 2}, {3, 4}}));
    EXPECT_FALSE(solve_sequence(none, KSumSolver::bruteforce).hit);

    KSumSequence mixed;
    for (int i = 0; i < 10; ++i)
        mixed.instances.push_back(make({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}}));
    mixed.instances[7].lists[2][1] = -6;
    r = solve_sequence(mixed, KSumSolver::mitm);
    ASSERT_TRUE(r.hit);
    EXPECT_EQ(r.hit->instance_index, 7u);
}

TEST(KSumIo, RoundTrips)
{
    auto inst = random_ksum(3, 4, 20, 3);
    inst.target = -5;
    std::stringstream ss;
    write_ksum(ss, inst);
    auto back = read_ksum(ss);
    EXPECT_EQ(back.lists, inst.lists);
    EXPECT_EQ(back.target, inst.target);

    ConvKSumInstance conv{{{1, 2}, {3, 4}, {5, 6}}, 7};
    std::stringstream cs;
    write_convksum(cs, conv);
    EXPECT_EQ(cs.str().substr(0, 8), "CONVKSUM");
    EXPECT_EQ(read_convksum(cs).lists, conv.lists);

    KSumSequence seq{{inst, inst}};
    std::stringstream qs;
    write_ksum_sequence(qs, seq);
    EXPECT_EQ(read_ksum_sequence(qs).instances.size(), 2u);

    std::istringstream bad("KSUM 2 0\n2 2\n1 2\n3\n");
    EXPECT_THROW(read_ksum(bad), std::invalid_argument);
}
