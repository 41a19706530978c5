#pragma once

#include <ewh/weight.hpp>

#include <cstdint>

namespace ewh {

// Multiply-shift hashing into t = 2^bucket_bits buckets:
//   h(x) = (a * x mod 2^w) >> (w - s)
// with a odd. Because a*(x + y) = a*x + a*y (mod 2^w), the bucket of a sum is
// the sum of the buckets plus a carry in {0, 1} (mod t); this is the
// almost-linearity the self-reductions rely on.
struct HashParams {
    int word_bits = 64;
    int bucket_bits = 1;
    std::uint64_t multiplier = 1;
    std::uint64_t seed = 0;

    std::uint64_t buckets() const { return std::uint64_t{1} << bucket_bits; }
};

HashParams sample_hash(std::uint64_t seed, int bucket_bits, int word_bits = 64);

// Negative x is embedded by two's complement into the 2^w residue ring.
std::uint64_t hash_eval(const HashParams &h, Weight x);

} // namespace ewh
