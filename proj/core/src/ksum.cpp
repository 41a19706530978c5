#include <ewh/ksum.hpp>

#include <algorithm>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace ewh {

namespace {
    template <typename Lists>
    void check_lists(const Lists &lists)
    {
        if (lists.empty())
            throw std::invalid_argument("k-SUM instance needs at least one list");
        for (std::size_t i = 0; i < lists.size(); ++i)
            if (lists[i].empty())
                throw std::invalid_argument("k-SUM list " + std::to_string(i) + " is empty");
    }

    std::uint64_t product_of_sizes(const std::vector<std::vector<Weight>> &lists, std::size_t from, std::size_t to)
    {
        std::uint64_t p = 1;
        for (std::size_t i = from; i < to; ++i)
            p = saturating_mul(p, lists[i].size());
        return p;
    }

    // Odometer over lists [from, to): calls visit(indices, partial_sum) in
    // lexicographic order; stops early when visit returns false.
    template <typename Visit>
    void for_each_tuple(const std::vector<std::vector<Weight>> &lists, std::size_t from, std::size_t to, Visit &&visit)
    {
        std::vector<std::size_t> idx(to - from, 0);
        for (;;) {
            Weight sum = 0;
            for (std::size_t j = from; j < to; ++j)
                sum += lists[j][idx[j - from]];
            if (! visit(idx, sum))
                return;
            std::size_t pos = idx.size();
            while (pos > 0) {
                --pos;
                if (++idx[pos] < lists[from + pos].size())
                    break;
                idx[pos] = 0;
                if (pos == 0)
                    return;
            }
            if (idx.empty())
                return;
        }
    }

    std::vector<std::vector<Weight>> read_lists(std::istream &in, int k)
    {
        std::vector<std::size_t> sizes(static_cast<std::size_t>(k));
        for (auto &n : sizes)
            if (! (in >> n))
                throw std::invalid_argument("truncated k-SUM list sizes");
        std::vector<std::vector<Weight>> lists(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) {
            auto &list = lists[static_cast<std::size_t>(i)];
            list.reserve(sizes[static_cast<std::size_t>(i)]);
            for (std::size_t j = 0; j < sizes[static_cast<std::size_t>(i)]; ++j) {
                std::string tok;
                if (! (in >> tok))
                    throw std::invalid_argument("truncated k-SUM list " + std::to_string(i));
                list.push_back(parse_weight(tok));
            }
        }
        return lists;
    }

    void write_lists(std::ostream &out, const char *tag, const std::vector<std::vector<Weight>> &lists, Weight target)
    {
        out << tag << ' ' << lists.size() << ' ' << to_string(target) << '\n';
        for (std::size_t i = 0; i < lists.size(); ++i)
            out << (i ? " " : "") << lists[i].size();
        out << '\n';
        for (const auto &list : lists) {
            for (std::size_t j = 0; j < list.size(); ++j)
                out << (j ? " " : "") << to_string(list[j]);
            out << '\n';
        }
    }

    std::pair<int, Weight> read_header(std::istream &in, const char *expected)
    {
        std::string tag, target;
        int k = 0;
        if (! (in >> tag >> k >> target) || tag != expected)
            throw std::invalid_argument(std::string("expected '") + expected + " <k> <target>' header");
        if (k < 1)
            throw std::invalid_argument("k must be positive");
        return {k, parse_weight(target)};
    }
} // namespace

std::size_t KSumInstance::max_list_size() const
{
    std::size_t n = 0;
    for (const auto &l : lists)
        n = std::max(n, l.size());
    return n;
}

Weight KSumInstance::max_magnitude() const
{
    Weight m = 0;
    for (const auto &l : lists)
        for (Weight x : l)
            m = std::max(m, abs_weight(x));
    return m;
}

void check_shape(const KSumInstance &inst) { check_lists(inst.lists); }
void check_shape(const ConvKSumInstance &inst) { check_lists(inst.lists); }

void validate_ksum(const KSumInstance &inst)
{
    check_shape(inst);
    if (inst.max_magnitude() > kMaxMagnitude)
        throw std::invalid_argument("k-SUM entry magnitude exceeds 2^40");
    if (abs_weight(inst.target) > Weight{inst.k()} * kMaxMagnitude)
        throw std::invalid_argument("k-SUM target magnitude exceeds k * 2^40");
}

Weight sum_of(const KSumInstance &inst, const KSolution &sol)
{
    if (sol.indices.size() != inst.lists.size())
        throw std::invalid_argument("solution arity does not match k");
    Weight s = 0;
    for (std::size_t i = 0; i < sol.indices.size(); ++i)
        s += inst.lists[i].at(sol.indices[i]);
    return s;
}

bool is_solution(const KSumInstance &inst, const KSolution &sol)
{
    if (sol.indices.size() != inst.lists.size())
        return false;
    for (std::size_t i = 0; i < sol.indices.size(); ++i)
        if (sol.indices[i] >= inst.lists[i].size())
            return false;
    return sum_of(inst, sol) == inst.target;
}

bool is_solution(const ConvKSumInstance &inst, const KSolution &sol)
{
    if (sol.indices.size() != inst.lists.size() || sol.indices.empty())
        return false;
    std::size_t index_sum = 0;
    for (std::size_t i = 0; i + 1 < sol.indices.size(); ++i)
        index_sum += sol.indices[i];
    if (index_sum != sol.indices.back())
        return false;
    return is_solution(KSumInstance{inst.lists, inst.target}, sol);
}

KSumResult solve_ksum_bruteforce(const KSumInstance &inst)
{
    check_shape(inst);
    if (product_of_sizes(inst.lists, 0, inst.lists.size()) > kEnumerationGuard)
        throw GuardExceeded("brute-force k-SUM exceeds the enumeration guard");
    KSumResult result;
    for_each_tuple(inst.lists, 0, inst.lists.size(), [&](const std::vector<std::size_t> &idx, Weight sum) {
        ++result.stats.tuples_enumerated;
        if (sum == inst.target) {
            result.solution = KSolution{idx};
            return false;
        }
        return true;
    });
    return result;
}

KSumResult solve_ksum_mitm(const KSumInstance &inst)
{
    check_shape(inst);
    const std::size_t k = inst.lists.size();
    const std::size_t split = (k + 1) / 2;
    if (product_of_sizes(inst.lists, 0, split) > kEnumerationGuard ||
        product_of_sizes(inst.lists, split, k) > kEnumerationGuard)
        throw GuardExceeded("meet-in-the-middle k-SUM exceeds the enumeration guard");

    KSumResult result;
    struct Partial {
        Weight sum;
        std::uint64_t rank;
    };
    std::vector<Partial> right;
    std::uint64_t rank = 0;
    for_each_tuple(inst.lists, split, k, [&](const std::vector<std::size_t> &, Weight sum) {
        right.push_back({sum, rank++});
        return true;
    });
    result.stats.list_entries_built += right.size();
    std::sort(right.begin(), right.end(), [](const Partial &a, const Partial &b) {
        return a.sum < b.sum || (a.sum == b.sum && a.rank < b.rank);
    });

    std::optional<std::pair<std::vector<std::size_t>, std::uint64_t>> hit;
    for_each_tuple(inst.lists, 0, split, [&](const std::vector<std::size_t> &idx, Weight sum) {
        ++result.stats.list_entries_built;
        if (hit)
            return true;
        Weight want = inst.target - sum;
        auto it = std::lower_bound(right.begin(), right.end(), want,
                                   [](const Partial &p, Weight w) { return p.sum < w; });
        ++result.stats.oracle_comparisons;
        if (it != right.end() && it->sum == want)
            hit.emplace(idx, it->rank);
        return true;
    });

    if (hit) {
        KSolution sol;
        sol.indices = hit->first;
        // Decode the mixed-radix rank of the right-hand tuple.
        std::vector<std::size_t> tail(k - split);
        std::uint64_t r = hit->second;
        for (std::size_t j = k; j-- > split;) {
            tail[j - split] = static_cast<std::size_t>(r % inst.lists[j].size());
            r /= inst.lists[j].size();
        }
        sol.indices.insert(sol.indices.end(), tail.begin(), tail.end());
        result.solution = std::move(sol);
    }
    return result;
}

KSumResult solve_ksum(const KSumInstance &inst, KSumSolver solver)
{
    return solver == KSumSolver::mitm ? solve_ksum_mitm(inst) : solve_ksum_bruteforce(inst);
}

KSumResult solve_convksum_bruteforce(const ConvKSumInstance &inst)
{
    check_shape(inst);
    const std::size_t k = inst.lists.size();
    if (product_of_sizes(inst.lists, 0, k - 1) > kEnumerationGuard)
        throw GuardExceeded("brute-force convolution k-SUM exceeds the enumeration guard");
    KSumResult result;
    const auto &last = inst.lists.back();
    for_each_tuple(inst.lists, 0, k - 1, [&](const std::vector<std::size_t> &idx, Weight sum) {
        ++result.stats.tuples_enumerated;
        std::size_t derived = 0;
        for (auto i : idx)
            derived += i;
        if (derived >= last.size())
            return true;
        if (sum + last[derived] == inst.target) {
            KSolution sol{idx};
            sol.indices.push_back(derived);
            result.solution = std::move(sol);
            return false;
        }
        return true;
    });
    return result;
}

SequenceResult solve_sequence(const KSumSequence &seq, KSumSolver solver)
{
    SequenceResult result;
    for (std::size_t i = 0; i < seq.instances.size(); ++i) {
        auto r = solve_ksum(seq.instances[i], solver);
        result.stats += r.stats;
        ++result.stats.ksum_instances_emitted;
        if (r.solution) {
            result.hit = SequenceHit{i, std::move(*r.solution)};
            break;
        }
    }
    return result;
}

KSumInstance read_ksum(std::istream &in)
{
    auto [k, target] = read_header(in, "KSUM");
    return KSumInstance{read_lists(in, k), target};
}

ConvKSumInstance read_convksum(std::istream &in)
{
    auto [k, target] = read_header(in, "CONVKSUM");
    return ConvKSumInstance{read_lists(in, k), target};
}

KSumSequence read_ksum_sequence(std::istream &in)
{
    std::string tag;
    std::size_t count = 0;
    if (! (in >> tag >> count) || tag != "KSUMSEQ")
        throw std::invalid_argument("expected 'KSUMSEQ <count>' header");
    KSumSequence seq;
    for (std::size_t i = 0; i < count; ++i)
        seq.instances.push_back(read_ksum(in));
    return seq;
}

void write_ksum(std::ostream &out, const KSumInstance &inst)
{
    write_lists(out, "KSUM", inst.lists, inst.target);
}

void write_convksum(std::ostream &out, const ConvKSumInstance &inst)
{
    write_lists(out, "CONVKSUM", inst.lists, inst.target);
}

void write_ksum_sequence(std::ostream &out, const KSumSequence &seq)
{
    out << "KSUMSEQ " << seq.instances.size() << '\n';
    for (const auto &inst : seq.instances)
        write_ksum(out, inst);
}

KSumInstance random_ksum(int k, std::size_t n, std::int64_t bound, std::uint64_t seed)
{
    if (k < 1 || n == 0)
        throw std::invalid_argument("random_ksum needs k >= 1 and n >= 1");
    if (bound < 0 || Weight{bound} > kMaxMagnitude)
        throw std::invalid_argument("weight bound outside [0, 2^40]");
    Rng rng(seed);
    KSumInstance inst;
    inst.lists.assign(static_cast<std::size_t>(k), std::vector<Weight>(n));
    for (auto &list : inst.lists)
        for (auto &x : list)
            x = uniform_between(rng, -bound, bound);
    return inst;
}

KSolution plant_ksum(KSumInstance &inst, std::uint64_t seed)
{
    check_shape(inst);
    Rng rng(seed);
    KSolution sol;
    for (const auto &list : inst.lists)
        sol.indices.push_back(static_cast<std::size_t>(uniform_below(rng, list.size())));
    Weight rest = 0;
    for (std::size_t i = 0; i + 1 < inst.lists.size(); ++i)
        rest += inst.lists[i][sol.indices[i]];
    inst.lists.back()[sol.indices.back()] = inst.target - rest;
    return sol;
}

ConvKSumInstance random_convksum(int k, std::size_t n, std::int64_t bound, std::uint64_t seed)
{
    auto base = random_ksum(k, n, bound, seed);
    return ConvKSumInstance{std::move(base.lists), 0};
}

KSolution plant_convksum(ConvKSumInstance &inst, std::uint64_t seed)
{
    check_shape(inst);
    if (inst.k() < 2)
        throw std::invalid_argument("convolution instances need k >= 2");
    std::size_t n = inst.lists.front().size();
    for (const auto &l : inst.lists)
        n = std::min(n, l.size());
    Rng rng(seed);
    KSolution sol;
    std::size_t budget = n - 1;
    Weight rest = 0;
    for (int i = 0; i + 1 < inst.k(); ++i) {
        std::size_t b = static_cast<std::size_t>(uniform_below(rng, budget + 1));
        budget -= b;
        sol.indices.push_back(b);
        rest += inst.lists[static_cast<std::size_t>(i)][b];
    }
    std::size_t last = n - 1 - budget;
    sol.indices.push_back(last);
    inst.lists.back()[last] = inst.target - rest;
    return sol;
}

} // namespace ewh
