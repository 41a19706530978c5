#include <ewh/weight.hpp>

#include <algorithm>
#include <limits>

namespace ewh {

std::string to_string(Weight w)
{
    if (w == 0)
        return "0";
    bool negative = w < 0;
    // Work on the negative side so the minimum value does not overflow.
    Weight v = negative ? w : -w;
    std::string digits;
    while (v != 0) {
        int d = static_cast<int>(-(v % 10));
        digits.push_back(static_cast<char>('0' + d));
        v /= 10;
    }
    if (negative)
        digits.push_back('-');
    std::reverse(digits.begin(), digits.end());
    return digits;
}

Weight parse_weight(std::string_view text)
{
    if (text.empty())
        throw std::invalid_argument("empty integer");
    std::size_t pos = 0;
    bool negative = false;
    if (text[0] == '-' || text[0] == '+') {
        negative = text[0] == '-';
        pos = 1;
    }
    if (pos == text.size())
        throw std::invalid_argument("malformed integer '" + std::string(text) + "'");
    Weight v = 0;
    for (; pos < text.size(); ++pos) {
        char c = text[pos];
        if (c < '0' || c > '9')
            throw std::invalid_argument("malformed integer '" + std::string(text) + "'");
        Weight next;
        if (__builtin_mul_overflow(v, Weight{10}, &next) || __builtin_sub_overflow(next, Weight{c - '0'}, &next))
            throw std::out_of_range("integer out of range '" + std::string(text) + "'");
        v = next;
    }
    if (! negative) {
        if (v == std::numeric_limits<Weight>::min())
            throw std::out_of_range("integer out of range '" + std::string(text) + "'");
        v = -v;
    }
    return v;
}

Weight checked_mul(Weight a, Weight b)
{
    Weight r;
    if (__builtin_mul_overflow(a, b, &r))
        throw std::overflow_error("weight multiplication overflows 128 bits");
    return r;
}

Weight checked_add(Weight a, Weight b)
{
    Weight r;
    if (__builtin_add_overflow(a, b, &r))
        throw std::overflow_error("weight addition overflows 128 bits");
    return r;
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b)
{
    std::uint64_t r;
    if (__builtin_mul_overflow(a, b, &r))
        return std::numeric_limits<std::uint64_t>::max();
    return r;
}

std::uint64_t saturating_pow(std::uint64_t n, int e)
{
    std::uint64_t r = 1;
    for (int i = 0; i < e; ++i)
        r = saturating_mul(r, n);
    return r;
}

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream)
{
    return splitmix64(splitmix64(master) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

std::uint64_t uniform_below(Rng &rng, std::uint64_t bound)
{
    if (bound == 0)
        throw std::invalid_argument("uniform_below: empty range");
    // Rejection sampling on the largest multiple of bound.
    std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

std::int64_t uniform_between(Rng &rng, std::int64_t lo, std::int64_t hi)
{
    if (hi < lo)
        throw std::invalid_argument("uniform_between: empty range");
    auto span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    if (span == 0)
        return static_cast<std::int64_t>(rng());
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + uniform_below(rng, span));
}

} // namespace ewh
