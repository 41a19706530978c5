#include <ewh/ksum_reductions.hpp>

#include <bit>
#include <cmath>
#include <stdexcept>

namespace ewh {

namespace {
    // Bucket contents (source indices) per list for one hash function, with
    // overloaded buckets emptied.
    using Buckets = std::vector<std::vector<std::vector<std::size_t>>>;

    Buckets bucketize(const KSumInstance &inst, const HashParams &h)
    {
        const std::size_t k = inst.lists.size();
        const std::size_t t = h.buckets();
        const std::size_t n = inst.max_list_size();
        Buckets buckets(k, std::vector<std::vector<std::size_t>>(t));
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t i = 0; i < inst.lists[j].size(); ++i) {
                Weight x = inst.lists[j][i];
                auto b = hash_eval(h, j + 1 == k ? -x : x);
                buckets[j][b].push_back(i);
            }
        for (auto &list : buckets)
            for (auto &bucket : list)
                if (bucket.size() * t > k * n)
                    bucket.clear();
        return buckets;
    }

    void require_hashable(const KSumInstance &inst)
    {
        check_shape(inst);
        if (inst.k() < 2)
            throw std::invalid_argument("hashing self-reductions need k >= 2");
    }

    Weight poison_for(const KSumInstance &shifted)
    {
        return poison_value(shifted.k(), shifted.max_magnitude());
    }
} // namespace

KSumInstance shift_target_to_zero(const KSumInstance &inst)
{
    check_shape(inst);
    KSumInstance out = inst;
    if (out.target != 0) {
        for (auto &x : out.lists.front())
            x -= inst.target;
        out.target = 0;
    }
    return out;
}

std::size_t hashing_rounds(int k, std::size_t n, int repetitions)
{
    if (repetitions < 1)
        throw std::invalid_argument("repetition constant must be positive");
    std::size_t log_n = n <= 1 ? 1 : static_cast<std::size_t>(std::bit_width(n - 1));
    std::size_t kk = 1;
    for (int i = 0; i < k; ++i)
        kk *= static_cast<std::size_t>(k);
    return static_cast<std::size_t>(repetitions) * kk * log_n;
}

KSumToConv::KSumToConv(const KSumInstance &inst, int bucket_bits, std::uint64_t seed, int repetitions) :
    shifted_(shift_target_to_zero(inst)),
    bucket_bits_(bucket_bits),
    seed_(seed)
{
    require_hashable(inst);
    if (bucket_bits < 1 || bucket_bits > 20)
        throw std::invalid_argument("bucket bits must be in [1, 20]");
    rounds_ = hashing_rounds(inst.k(), inst.max_list_size(), repetitions);
    poison_ = poison_for(shifted_);
}

HashParams KSumToConv::hash_for_round(std::size_t round) const
{
    return sample_hash(derive_seed(seed_, round), bucket_bits_);
}

std::uint64_t KSumToConv::for_each(const std::function<bool(const Emission &)> &visit) const
{
    const std::size_t k = shifted_.lists.size();
    const std::size_t t = std::size_t{1} << bucket_bits_;
    const std::size_t last_len = (k - 1) * (t - 1) + 1;
    std::uint64_t emitted = 0;

    for (std::size_t round = 0; round < rounds_; ++round) {
        auto buckets = bucketize(shifted_, hash_for_round(round));
        std::size_t capacity = 0;
        for (const auto &list : buckets)
            for (const auto &bucket : list)
                capacity = std::max(capacity, bucket.size());
        if (capacity == 0)
            continue;

        Emission e;
        e.round = round;
        e.picks.assign(k, 0);
        for (;;) {
            for (std::size_t y = 0; y < k; ++y) {
                e.offset = y;
                e.instance.target = 0;
                e.instance.lists.assign(k, {});
                e.origin.assign(k, {});
                for (std::size_t j = 0; j < k; ++j) {
                    std::size_t len = j + 1 == k ? last_len : t;
                    auto &list = e.instance.lists[j];
                    auto &origin = e.origin[j];
                    list.resize(len);
                    origin.resize(len);
                    for (std::size_t a = 0; a < len; ++a) {
                        const auto &bucket = buckets[j][j + 1 == k ? (a + y) % t : a];
                        if (e.picks[j] < bucket.size()) {
                            origin[a] = bucket[e.picks[j]];
                            list[a] = shifted_.lists[j][origin[a]];
                        } else {
                            origin[a] = kPaddingSlot;
                            list[a] = poison_;
                        }
                    }
                }
                ++emitted;
                if (! visit(e))
                    return emitted;
            }
            std::size_t pos = k;
            while (pos > 0) {
                --pos;
                if (++e.picks[pos] < capacity)
                    break;
                e.picks[pos] = 0;
            }
            if (pos == 0 && e.picks[0] == 0)
                break;
        }
    }
    return emitted;
}

KSolution KSumToConv::map_back(const Emission &emission, const KSolution &conv_solution) const
{
    KSolution out;
    for (std::size_t j = 0; j < conv_solution.indices.size(); ++j) {
        auto origin = emission.origin.at(j).at(conv_solution.indices[j]);
        if (origin == kPaddingSlot)
            throw std::logic_error("convolution witness uses a padding slot");
        out.indices.push_back(origin);
    }
    return out;
}

KSumToSequence::KSumToSequence(const KSumInstance &inst, std::uint64_t seed, int repetitions) :
    shifted_(shift_target_to_zero(inst)),
    seed_(seed)
{
    require_hashable(inst);
    const auto k = static_cast<std::size_t>(inst.k());
    const std::size_t n = inst.max_list_size();
    // t = ceil(n^(1/k)), rounded up to a power of two.
    std::size_t root = 1;
    while (true) {
        std::uint64_t p = saturating_pow(root, static_cast<int>(k));
        if (p >= n)
            break;
        ++root;
    }
    bucket_bits_ = std::max(1, static_cast<int>(std::bit_width(root - 1)));
    const std::size_t t = std::size_t{1} << bucket_bits_;
    padded_ = (k * n + t - 1) / t;
    rounds_ = hashing_rounds(inst.k(), n, repetitions);
    poison_ = poison_for(shifted_);
}

KSumToSequence::Round KSumToSequence::round(std::size_t r) const
{
    const std::size_t k = shifted_.lists.size();
    const std::size_t t = buckets();
    auto bucket = bucketize(shifted_, sample_hash(derive_seed(seed_, r), bucket_bits_));

    Round out;
    std::vector<std::size_t> choice(k - 1, 0);
    for (;;) {
        std::size_t base = 0;
        for (auto a : choice)
            base += a;
        for (std::size_t y = 0; y < k; ++y) {
            KSumInstance inst;
            ListOrigins origin(k);
            inst.lists.assign(k, std::vector<Weight>(padded_, poison_));
            for (std::size_t j = 0; j < k; ++j) {
                std::size_t b = j + 1 == k ? (base + y) % t : choice[j];
                origin[j].assign(padded_, kPaddingSlot);
                const auto &members = bucket[j][b];
                for (std::size_t i = 0; i < members.size(); ++i) {
                    inst.lists[j][i] = shifted_.lists[j][members[i]];
                    origin[j][i] = members[i];
                }
            }
            out.sequence.instances.push_back(std::move(inst));
            out.origins.push_back(std::move(origin));
        }
        std::size_t pos = choice.size();
        bool done = true;
        while (pos > 0) {
            --pos;
            if (++choice[pos] < t) {
                done = false;
                break;
            }
            choice[pos] = 0;
        }
        if (done)
            break;
    }
    return out;
}

KSumToSequence::Outcome KSumToSequence::solve(KSumSolver solver) const
{
    Outcome outcome;
    for (std::size_t r = 0; r < rounds_; ++r) {
        auto rs = round(r);
        auto res = solve_sequence(rs.sequence, solver);
        outcome.stats += res.stats;
        if (res.hit) {
            outcome.round = r;
            outcome.instance_index = res.hit->instance_index;
            outcome.solution = map_back(rs.origins[res.hit->instance_index], res.hit->solution);
            return outcome;
        }
    }
    return outcome;
}

KSolution KSumToSequence::map_back(const ListOrigins &origin, const KSolution &solution) const
{
    KSolution out;
    for (std::size_t j = 0; j < solution.indices.size(); ++j) {
        auto o = origin.at(j).at(solution.indices[j]);
        if (o == kPaddingSlot)
            throw std::logic_error("sequence witness uses a padding slot");
        out.indices.push_back(o);
    }
    return out;
}

} // namespace ewh
