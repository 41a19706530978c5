#pragma once

#include <ewh/stats.hpp>
#include <ewh/weight.hpp>

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

namespace ewh {

// k lists of integers and a target; a solution picks one entry per list.
struct KSumInstance {
    std::vector<std::vector<Weight>> lists;
    Weight target = 0;

    int k() const { return static_cast<int>(lists.size()); }
    std::size_t max_list_size() const;
    // Max |entry| over all lists.
    Weight max_magnitude() const;
};

// Same shape as KSumInstance, but a solution must also satisfy
// indices[k-1] == indices[0] + ... + indices[k-2] over the integers.
struct ConvKSumInstance {
    std::vector<std::vector<Weight>> lists;
    Weight target = 0;

    int k() const { return static_cast<int>(lists.size()); }
};

struct KSumSequence {
    std::vector<KSumInstance> instances;
};

struct KSolution {
    std::vector<std::size_t> indices;

    friend bool operator==(const KSolution &, const KSolution &) = default;
};

struct KSumResult {
    std::optional<KSolution> solution;
    SolveStats stats;
};

enum class KSumSolver { bruteforce, mitm };

// Shape checks shared by every entry point: k >= 1 and no empty list.
void check_shape(const KSumInstance &inst);
void check_shape(const ConvKSumInstance &inst);

// Input contract for user-facing instances: |entry| <= kMaxMagnitude and
// |target| <= k * kMaxMagnitude. Throws std::invalid_argument.
void validate_ksum(const KSumInstance &inst);

Weight sum_of(const KSumInstance &inst, const KSolution &sol);
bool is_solution(const KSumInstance &inst, const KSolution &sol);
bool is_solution(const ConvKSumInstance &inst, const KSolution &sol);

// First solution in lexicographic index order. Throws GuardExceeded when the
// product of list lengths exceeds kEnumerationGuard.
KSumResult solve_ksum_bruteforce(const KSumInstance &inst);

// Meet in the middle over lists [0, ceil(k/2)) and [ceil(k/2), k). Both sides
// are always fully built, so list_entries_built is exactly
// prod(left lengths) + prod(right lengths).
KSumResult solve_ksum_mitm(const KSumInstance &inst);

KSumResult solve_ksum(const KSumInstance &inst, KSumSolver solver);

// Enumerates the first k-1 indices and derives the last one.
KSumResult solve_convksum_bruteforce(const ConvKSumInstance &inst);

struct SequenceHit {
    std::size_t instance_index = 0;
    KSolution solution;
};

struct SequenceResult {
    std::optional<SequenceHit> hit;
    SolveStats stats;
};

// First instance (in order) with a solution.
SequenceResult solve_sequence(const KSumSequence &seq, KSumSolver solver);

KSumInstance read_ksum(std::istream &in);
ConvKSumInstance read_convksum(std::istream &in);
KSumSequence read_ksum_sequence(std::istream &in);
void write_ksum(std::ostream &out, const KSumInstance &inst);
void write_convksum(std::ostream &out, const ConvKSumInstance &inst);
void write_ksum_sequence(std::ostream &out, const KSumSequence &seq);

// Uniform entries in [-bound, bound], all lists of length n, target 0.
KSumInstance random_ksum(int k, std::size_t n, std::int64_t bound, std::uint64_t seed);

// Overwrites one entry per list at random indices so that they sum to the
// target (the last list absorbs the difference). Returns the planted indices.
KSolution plant_ksum(KSumInstance &inst, std::uint64_t seed);

ConvKSumInstance random_convksum(int k, std::size_t n, std::int64_t bound, std::uint64_t seed);

// Picks indices b_0..b_{k-2} with sum below the common list length, sets the
// last index to that sum and rewrites the last entry to hit the target.
KSolution plant_convksum(ConvKSumInstance &inst, std::uint64_t seed);

} // namespace ewh
