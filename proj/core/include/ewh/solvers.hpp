#pragma once

#include <ewh/hgraph.hpp>
#include <ewh/ksum.hpp>
#include <ewh/pattern.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace ewh {

SeparatorD as_d_separator(const Separator2 &sep);

// Separator used for d-SUM solving when none is given: the first d-separator
// in enumeration order minimising |S| + ceil(d/2) * max_j |H_j| (the exponent
// of n^|S| meet-in-the-middle d-SUM solves).
SeparatorD best_d_separator(const PatternGraph &p, int d);

// S = V \ I for a maximum independent set I, one singleton part per node of
// I. Parts may number one (cliques); callers that need d >= 2 must check.
SeparatorD independent_set_separator(const PatternGraph &p);

// Fixes χ_S and evaluates part extensions for one separator. Weights of a
// part list are w(χ_Hj ∪ χ_S): node weights of S and H_j plus every pattern
// edge with both ends in S ∪ H_j. Edges between S and a part are therefore
// charged to that part's list and the S-internal weight w(χ_S) is counted
// once per list, so for d parts
//   w(χ) = sum_j w(χ_Hj ∪ χ_S) - (d - 1) * w(χ_S).
class SeparatorFrame {
public:
    SeparatorFrame(const HPartiteInstance &inst, SeparatorD sep);

    const SeparatorD &separator() const { return sep_; }
    const HPartiteInstance &instance() const { return *inst_; }

    // n^|S|; the χ_S ranks are [0, s_assignments()).
    std::uint64_t s_assignments() const { return s_count_; }
    // n^|H_j| (1 for an empty part).
    std::uint64_t part_size(int j) const { return part_counts_[static_cast<std::size_t>(j)]; }

    // Writes the S slots of `assignment` for χ_S rank `rank` (S nodes in id
    // order, the last node varying fastest).
    void place_s(std::uint64_t rank, std::vector<std::size_t> &assignment) const;
    void place_part(int j, std::uint64_t rank, std::vector<std::size_t> &assignment) const;

    // w(χ_S) for the S slots already placed in `assignment`.
    Weight s_weight(const std::vector<std::size_t> &assignment) const;

    // The full list for part j given placed S slots, in rank order.
    std::vector<Weight> part_list(int j, std::vector<std::size_t> assignment) const;

private:
    const HPartiteInstance *inst_;
    SeparatorD sep_;
    std::uint64_t s_count_;
    std::vector<std::uint64_t> part_counts_;
    std::vector<int> class_of_;
};

struct SolveOutcome {
    std::optional<HSubgraph> solution;
    SolveStats stats;
};

// Sorted 2-SUM: both lists are sorted by (value, rank) and scanned with two
// pointers. Returns ranks (i, j) with a[i] + b[j] == target.
std::optional<std::pair<std::size_t, std::size_t>> two_sum(const std::vector<Weight> &a, const std::vector<Weight> &b,
                                                          Weight target, SolveStats *stats = nullptr);

// For each χ_S builds L1 = {w(χ_H1 ∪ χ_S)} and L2 = {w(χ_H2 ∪ χ_S)} and
// solves 2-SUM with target inst.target + w(χ_S). Every χ_S is visited, so
// list_entries_built = n^|S| * (n^|H1| + n^|H2|) exactly. The reported
// witness is the one of the smallest χ_S rank. Uses gamma's separator when
// none is given. `jobs` splits the χ_S ranks into contiguous blocks.
SolveOutcome separator_solve(const HPartiteInstance &inst, std::optional<Separator2> sep = std::nullopt, int jobs = 1);

struct DsepEmission {
    std::uint64_t s_rank = 0;
    Weight s_weight = 0;
    // d lists, list j entry r is w(χ_Hj ∪ χ_S) for part-j rank r; target is
    // inst.target + (d - 1) * w(χ_S).
    KSumInstance instance;
};

// One d-SUM instance per χ_S, in χ_S rank order.
class DsepReduction {
public:
    DsepReduction(const HPartiteInstance &inst, SeparatorD sep);

    std::uint64_t instance_count() const { return frame_.s_assignments(); }
    DsepEmission emission(std::uint64_t s_rank, SolveStats *stats = nullptr) const;

    // Visits emissions until `visit` returns false.
    void for_each(const std::function<bool(const DsepEmission &)> &visit, SolveStats *stats = nullptr) const;

    HSubgraph map_back(const DsepEmission &emission, const KSolution &solution) const;

    const SeparatorFrame &frame() const { return frame_; }

private:
    SeparatorFrame frame_;
};

// Solves every emitted d-SUM instance with `solver` and reconstructs the hit
// of the smallest χ_S rank.
SolveOutcome dsep_solve(const HPartiteInstance &inst, const SeparatorD &sep, KSumSolver solver = KSumSolver::mitm,
                        int jobs = 1);

struct MinWeightOutcome {
    Weight value = 0;
    HSubgraph argmin;
    SolveStats stats;
};

// Per χ_S: sum of list minima minus (d - 1) * w(χ_S); global minimum over χ_S.
// Defaults to independent_set_separator.
MinWeightOutcome min_weight_solve(const HPartiteInstance &inst, std::optional<SeparatorD> sep = std::nullopt);

// Closed forms the solvers' counters must match.
std::uint64_t expected_list_entries(std::size_t n, const SeparatorD &sep);
std::uint64_t expected_ksum_instances(std::size_t n, const SeparatorD &sep);

} // namespace ewh
