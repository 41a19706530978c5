#pragma once

#include <cstdint>

namespace ewh {

// Deterministic operation counters. For fixed inputs and seeds every field is
// reproducible, which lets tests assert running-time expressions exactly.
struct SolveStats {
    std::uint64_t tuples_enumerated = 0;
    std::uint64_t list_entries_built = 0;
    std::uint64_t ksum_instances_emitted = 0;
    std::uint64_t oracle_comparisons = 0;

    SolveStats &operator+=(const SolveStats &other)
    {
        tuples_enumerated += other.tuples_enumerated;
        list_entries_built += other.list_entries_built;
        ksum_instances_emitted += other.ksum_instances_emitted;
        oracle_comparisons += other.oracle_comparisons;
        return *this;
    }

    friend bool operator==(const SolveStats &, const SolveStats &) = default;
};

} // namespace ewh
