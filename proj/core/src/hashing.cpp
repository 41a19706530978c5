#include <ewh/hashing.hpp>

#include <stdexcept>

namespace ewh {

namespace {
    std::uint64_t word_mask(int w)
    {
        return w == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << w) - 1;
    }
}

HashParams sample_hash(std::uint64_t seed, int bucket_bits, int word_bits)
{
    if (word_bits < 2 || word_bits > 64)
        throw std::invalid_argument("hash word size must be in [2, 64]");
    if (bucket_bits < 1 || bucket_bits >= word_bits)
        throw std::invalid_argument("hash bucket bits must be in [1, w)");
    Rng rng(seed);
    HashParams h;
    h.word_bits = word_bits;
    h.bucket_bits = bucket_bits;
    h.multiplier = (rng() & word_mask(word_bits)) | 1u;
    h.seed = seed;
    return h;
}

std::uint64_t hash_eval(const HashParams &h, Weight x)
{
    // The low 64 bits of a two's-complement 128-bit value are x mod 2^64.
    auto residue = static_cast<std::uint64_t>(static_cast<unsigned __int128>(x));
    std::uint64_t product = (h.multiplier * residue) & word_mask(h.word_bits);
    return product >> (h.word_bits - h.bucket_bits);
}

} // namespace ewh
