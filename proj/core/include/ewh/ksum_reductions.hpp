#pragma once

#include <ewh/hashing.hpp>
#include <ewh/ksum.hpp>

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace ewh {

inline constexpr std::size_t kPaddingSlot = std::numeric_limits<std::size_t>::max();

// origin[j][a]: index in the source list j of entry a of emitted list j, or
// kPaddingSlot when the entry is poison padding.
using ListOrigins = std::vector<std::vector<std::size_t>>;

// Hash-based self-reductions work on target-0 instances. A non-zero target is
// moved into list 0 (x - target); indices are unchanged by the shift.
KSumInstance shift_target_to_zero(const KSumInstance &inst);

// Number of hashing rounds: c * k^k * ceil(log2 n), at least 1.
std::size_t hashing_rounds(int k, std::size_t n, int repetitions);

// k-SUM to convolution k-SUM by multiply-shift bucketing.
//
// Per round, entries of lists 0..k-2 go to bucket h(x) and entries of the last
// list go to bucket h(-x); for a zero-sum tuple the latter is
// sum of the other buckets + c with c in [0, k-2] (mod t). Buckets holding
// more than k*n/t entries are dropped. For every pick (i_1..i_k) of bucket
// ranks and every offset y in [0, k) one instance is emitted: list j < k-1
// has t entries (entry a = i_j-th member of bucket a), the last list has
// (k-1)(t-1)+1 entries (entry a = i_k-th member of bucket (a+y) mod t).
// Missing members are poison.
class KSumToConv {
public:
    struct Emission {
        std::size_t round = 0;
        std::vector<std::size_t> picks;
        std::size_t offset = 0;
        ConvKSumInstance instance;
        ListOrigins origin;
    };

    KSumToConv(const KSumInstance &inst, int bucket_bits, std::uint64_t seed, int repetitions = 3);

    std::size_t rounds() const { return rounds_; }
    HashParams hash_for_round(std::size_t round) const;
    Weight poison() const { return poison_; }

    // Visits emitted instances in deterministic order until `visit` returns
    // false. Returns the number of instances emitted.
    std::uint64_t for_each(const std::function<bool(const Emission &)> &visit) const;

    // Source indices of a solution to an emitted instance.
    KSolution map_back(const Emission &emission, const KSolution &conv_solution) const;

private:
    KSumInstance shifted_;
    int bucket_bits_;
    std::uint64_t seed_;
    std::size_t rounds_;
    Weight poison_;
};

// k-SUM to a sequence of smaller k-SUM instances (the k-sum^N self-reduction).
//
// t = ceil(n^(1/k)) rounded up to a power of two. Per round, for every choice
// of buckets a_1..a_{k-1} and each of the k candidate final buckets
// (a_1 + ... + a_{k-1} + y) mod t, one instance over the bucket contents is
// emitted, each list padded with poison to N = ceil(k*n/t).
class KSumToSequence {
public:
    struct Round {
        KSumSequence sequence;
        std::vector<ListOrigins> origins;
    };

    KSumToSequence(const KSumInstance &inst, std::uint64_t seed, int repetitions = 3);

    std::size_t rounds() const { return rounds_; }
    std::size_t buckets() const { return std::size_t{1} << bucket_bits_; }
    std::size_t padded_size() const { return padded_; }
    Weight poison() const { return poison_; }

    Round round(std::size_t r) const;

    // Solves every round's sequence in order until a hit; the returned
    // solution is already mapped back to source indices.
    struct Outcome {
        std::optional<KSolution> solution;
        std::size_t round = 0;
        std::size_t instance_index = 0;
        SolveStats stats;
    };
    Outcome solve(KSumSolver solver) const;

    KSolution map_back(const ListOrigins &origin, const KSolution &solution) const;

private:
    KSumInstance shifted_;
    int bucket_bits_;
    std::size_t padded_;
    std::uint64_t seed_;
    std::size_t rounds_;
    Weight poison_;
};

} // namespace ewh
