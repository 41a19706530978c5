#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ewh {

// Weights and sums are carried in 128-bit signed arithmetic. Inputs are bounded
// by kMaxMagnitude so that every layered reduction stays far from overflow.
using Weight = __int128;

inline constexpr Weight kMaxMagnitude = Weight{1} << 40;

// Upper bound on enumerated tuples for the exhaustive solvers.
inline constexpr std::uint64_t kEnumerationGuard = 100'000'000;

// Thrown when an exhaustive routine would exceed kEnumerationGuard.
class GuardExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

constexpr Weight abs_weight(Weight w) { return w < 0 ? -w : w; }

// Finite stand-in for "+infinity": any selection of `terms` values that
// contains at least one poison value and otherwise only values bounded by
// `bound` has a sum exceeding terms * bound, hence it cannot reach a target
// of magnitude <= terms * bound.
constexpr Weight poison_value(int terms, Weight bound = kMaxMagnitude)
{
    if (bound < kMaxMagnitude)
        bound = kMaxMagnitude;
    return 2 * Weight{terms} * bound + 1;
}

std::string to_string(Weight w);
Weight parse_weight(std::string_view text);

// a * b with an overflow check; throws std::overflow_error.
Weight checked_mul(Weight a, Weight b);
Weight checked_add(Weight a, Weight b);

// Saturating n^e for guard checks.
std::uint64_t saturating_pow(std::uint64_t n, int e);
std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b);

// Deterministic RNG helpers. std::uniform_int_distribution is not portable
// across standard libraries, so bounded draws use rejection sampling.
using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);
std::uint64_t uniform_below(Rng &rng, std::uint64_t bound);
std::int64_t uniform_between(Rng &rng, std::int64_t lo, std::int64_t hi);

} // namespace ewh
