#include <ewh/solvers.hpp>

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace ewh {

namespace {
    constexpr int kSClass = -1;

    int ceil_half(int d) { return (d + 1) / 2; }

    // Decodes `rank` into slots of `nodes` (last node fastest).
    void place(const std::vector<int> &nodes, std::size_t n, std::uint64_t rank, std::vector<std::size_t> &assignment)
    {
        for (std::size_t i = nodes.size(); i-- > 0;) {
            assignment[static_cast<std::size_t>(nodes[i])] = static_cast<std::size_t>(rank % n);
            rank /= n;
        }
    }

    struct BlockResult {
        std::optional<HSubgraph> solution;
        SolveStats stats;
    };

    // Runs `block(begin, end)` over contiguous χ_S ranges on `jobs` threads and
    // keeps the hit of the lowest block.
    template <typename Block>
    SolveOutcome run_blocks(std::uint64_t total, int jobs, Block &&block)
    {
        jobs = std::max(1, std::min<int>(jobs, static_cast<int>(std::min<std::uint64_t>(total, 64))));
        std::vector<BlockResult> results(static_cast<std::size_t>(jobs));
        auto bounds = [&](int j) { return total * static_cast<std::uint64_t>(j) / static_cast<std::uint64_t>(jobs); };
        if (jobs == 1) {
            results[0] = block(0, total);
        } else {
            std::vector<std::thread> threads;
            for (int j = 0; j < jobs; ++j)
                threads.emplace_back([&, j] { results[static_cast<std::size_t>(j)] = block(bounds(j), bounds(j + 1)); });
            for (auto &t : threads)
                t.join();
        }
        SolveOutcome out;
        for (auto &r : results) {
            out.stats += r.stats;
            if (! out.solution && r.solution)
                out.solution = std::move(r.solution);
        }
        return out;
    }
} // namespace

SeparatorD as_d_separator(const Separator2 &sep)
{
    return SeparatorD{sep.s, {sep.h1, sep.h2}};
}

SeparatorD best_d_separator(const PatternGraph &p, int d)
{
    auto all = enumerate_d_separators(p, d);
    const SeparatorD *best = nullptr;
    int best_cost = 0;
    for (const auto &sep : all) {
        std::size_t largest = 0;
        for (const auto &part : sep.parts)
            largest = std::max(largest, part.size());
        int cost = static_cast<int>(sep.s.size()) + ceil_half(d) * static_cast<int>(largest);
        if (! best || cost < best_cost) {
            best = &sep;
            best_cost = cost;
        }
    }
    return *best;
}

SeparatorD independent_set_separator(const PatternGraph &p)
{
    auto mis = independence_number(p);
    SeparatorD sep;
    for (int v = 0; v < p.size(); ++v)
        if (! std::binary_search(mis.nodes.begin(), mis.nodes.end(), v))
            sep.s.push_back(v);
    for (int v : mis.nodes)
        sep.parts.push_back({v});
    return sep;
}

SeparatorFrame::SeparatorFrame(const HPartiteInstance &inst, SeparatorD sep) :
    inst_(&inst),
    sep_(std::move(sep))
{
    const auto &p = inst.pattern();
    if (sep_.parts.empty())
        throw std::invalid_argument("separator needs at least one part");
    if (! is_valid_separator(p, sep_))
        throw std::invalid_argument("separator is not valid for this pattern");
    const int k = p.size();
    class_of_.assign(static_cast<std::size_t>(k), kSClass);
    for (std::size_t j = 0; j < sep_.parts.size(); ++j)
        for (int v : sep_.parts[j])
            class_of_[static_cast<std::size_t>(v)] = static_cast<int>(j);

    const std::size_t n = inst.n();
    s_count_ = saturating_pow(n, static_cast<int>(sep_.s.size()));
    std::uint64_t work = 0;
    for (const auto &part : sep_.parts) {
        part_counts_.push_back(saturating_pow(n, static_cast<int>(part.size())));
        work = std::max(work, part_counts_.back());
    }
    if (s_count_ > kEnumerationGuard || work > kEnumerationGuard ||
        saturating_mul(s_count_, work) > 10 * kEnumerationGuard)
        throw GuardExceeded("separator enumeration exceeds the enumeration guard");
}

void SeparatorFrame::place_s(std::uint64_t rank, std::vector<std::size_t> &assignment) const
{
    place(sep_.s, inst_->n(), rank, assignment);
}

void SeparatorFrame::place_part(int j, std::uint64_t rank, std::vector<std::size_t> &assignment) const
{
    place(sep_.parts[static_cast<std::size_t>(j)], inst_->n(), rank, assignment);
}

Weight SeparatorFrame::s_weight(const std::vector<std::size_t> &assignment) const
{
    Weight w = 0;
    for (int v : sep_.s)
        w += inst_->node(v, assignment[static_cast<std::size_t>(v)]);
    const auto &edges = inst_->pattern().edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto [u, v] = edges[e];
        if (class_of_[static_cast<std::size_t>(u)] == kSClass && class_of_[static_cast<std::size_t>(v)] == kSClass)
            w += inst_->edge(static_cast<int>(e), assignment[static_cast<std::size_t>(u)],
                             assignment[static_cast<std::size_t>(v)]);
    }
    return w;
}

std::vector<Weight> SeparatorFrame::part_list(int j, std::vector<std::size_t> assignment) const
{
    const auto &part = sep_.parts[static_cast<std::size_t>(j)];
    const auto &edges = inst_->pattern().edges();
    // Edges charged to this list beyond w(χ_S): both ends in S ∪ H_j with at
    // least one end in H_j.
    std::vector<int> charged;
    for (std::size_t e = 0; e < edges.size(); ++e) {
        int cu = class_of_[static_cast<std::size_t>(edges[e].u)], cv = class_of_[static_cast<std::size_t>(edges[e].v)];
        bool in_u = cu == kSClass || cu == j, in_v = cv == kSClass || cv == j;
        if (in_u && in_v && (cu == j || cv == j))
            charged.push_back(static_cast<int>(e));
    }
    const Weight base = s_weight(assignment);
    const std::uint64_t count = part_size(j);
    std::vector<Weight> list;
    list.reserve(static_cast<std::size_t>(count));
    for (std::uint64_t r = 0; r < count; ++r) {
        place(part, inst_->n(), r, assignment);
        Weight w = base;
        for (int v : part)
            w += inst_->node(v, assignment[static_cast<std::size_t>(v)]);
        for (int e : charged) {
            const auto [u, v] = edges[static_cast<std::size_t>(e)];
            w += inst_->edge(e, assignment[static_cast<std::size_t>(u)], assignment[static_cast<std::size_t>(v)]);
        }
        list.push_back(w);
    }
    return list;
}

std::optional<std::pair<std::size_t, std::size_t>> two_sum(const std::vector<Weight> &a, const std::vector<Weight> &b,
                                                          Weight target, SolveStats *stats)
{
    auto order = [](const std::vector<Weight> &v) {
        std::vector<std::size_t> idx(v.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return v[x] < v[y] || (v[x] == v[y] && x < y); });
        return idx;
    };
    auto ia = order(a), ib = order(b);
    std::size_t i = 0, j = ib.size();
    while (i < ia.size() && j > 0) {
        Weight s = a[ia[i]] + b[ib[j - 1]];
        if (stats)
            ++stats->oracle_comparisons;
        if (s == target)
            return std::make_pair(ia[i], ib[j - 1]);
        if (s < target)
            ++i;
        else
            --j;
    }
    return std::nullopt;
}

SolveOutcome separator_solve(const HPartiteInstance &inst, std::optional<Separator2> sep, int jobs)
{
    if (! sep)
        sep = gamma(inst.pattern()).argmin;
    SeparatorFrame frame(inst, as_d_separator(*sep));
    const auto k = static_cast<std::size_t>(inst.k());

    return run_blocks(frame.s_assignments(), jobs, [&](std::uint64_t begin, std::uint64_t end) {
        BlockResult out;
        std::vector<std::size_t> assignment(k, 0);
        for (std::uint64_t r = begin; r < end; ++r) {
            frame.place_s(r, assignment);
            Weight ws = frame.s_weight(assignment);
            auto l1 = frame.part_list(0, assignment);
            auto l2 = frame.part_list(1, assignment);
            out.stats.list_entries_built += l1.size() + l2.size();
            ++out.stats.ksum_instances_emitted;
            auto hit = two_sum(l1, l2, inst.target() + ws, &out.stats);
            if (hit && ! out.solution) {
                frame.place_part(0, hit->first, assignment);
                frame.place_part(1, hit->second, assignment);
                out.solution = HSubgraph{assignment};
            }
        }
        return out;
    });
}

DsepReduction::DsepReduction(const HPartiteInstance &inst, SeparatorD sep) :
    frame_(inst, std::move(sep))
{
}

DsepEmission DsepReduction::emission(std::uint64_t s_rank, SolveStats *stats) const
{
    const auto &inst = frame_.instance();
    std::vector<std::size_t> assignment(static_cast<std::size_t>(inst.k()), 0);
    frame_.place_s(s_rank, assignment);
    DsepEmission e;
    e.s_rank = s_rank;
    e.s_weight = frame_.s_weight(assignment);
    const int d = frame_.separator().d();
    for (int j = 0; j < d; ++j) {
        e.instance.lists.push_back(frame_.part_list(j, assignment));
        if (stats)
            stats->list_entries_built += e.instance.lists.back().size();
    }
    e.instance.target = inst.target() + Weight{d - 1} * e.s_weight;
    if (stats)
        ++stats->ksum_instances_emitted;
    return e;
}

void DsepReduction::for_each(const std::function<bool(const DsepEmission &)> &visit, SolveStats *stats) const
{
    for (std::uint64_t r = 0; r < frame_.s_assignments(); ++r)
        if (! visit(emission(r, stats)))
            return;
}

HSubgraph DsepReduction::map_back(const DsepEmission &emission, const KSolution &solution) const
{
    const auto &inst = frame_.instance();
    if (solution.indices.size() != static_cast<std::size_t>(frame_.separator().d()))
        throw std::invalid_argument("d-SUM solution arity does not match the separator");
    std::vector<std::size_t> assignment(static_cast<std::size_t>(inst.k()), 0);
    frame_.place_s(emission.s_rank, assignment);
    for (int j = 0; j < frame_.separator().d(); ++j)
        frame_.place_part(j, solution.indices[static_cast<std::size_t>(j)], assignment);
    return HSubgraph{assignment};
}

SolveOutcome dsep_solve(const HPartiteInstance &inst, const SeparatorD &sep, KSumSolver solver, int jobs)
{
    DsepReduction reduction(inst, sep);
    return run_blocks(reduction.instance_count(), jobs, [&](std::uint64_t begin, std::uint64_t end) {
        BlockResult out;
        for (std::uint64_t r = begin; r < end; ++r) {
            auto e = reduction.emission(r, &out.stats);
            auto res = solve_ksum(e.instance, solver);
            out.stats.tuples_enumerated += res.stats.tuples_enumerated;
            out.stats.oracle_comparisons += res.stats.oracle_comparisons;
            if (res.solution && ! out.solution)
                out.solution = reduction.map_back(e, *res.solution);
        }
        return out;
    });
}

MinWeightOutcome min_weight_solve(const HPartiteInstance &inst, std::optional<SeparatorD> sep)
{
    if (! sep)
        sep = independent_set_separator(inst.pattern());
    SeparatorFrame frame(inst, *sep);
    const int d = frame.separator().d();
    MinWeightOutcome out;
    bool first = true;
    std::vector<std::size_t> assignment(static_cast<std::size_t>(inst.k()), 0);
    for (std::uint64_t r = 0; r < frame.s_assignments(); ++r) {
        frame.place_s(r, assignment);
        Weight ws = frame.s_weight(assignment);
        Weight total = -Weight{d - 1} * ws;
        std::vector<std::size_t> best_rank(static_cast<std::size_t>(d), 0);
        for (int j = 0; j < d; ++j) {
            auto list = frame.part_list(j, assignment);
            out.stats.list_entries_built += list.size();
            auto it = std::min_element(list.begin(), list.end());
            best_rank[static_cast<std::size_t>(j)] = static_cast<std::size_t>(it - list.begin());
            total += *it;
        }
        ++out.stats.ksum_instances_emitted;
        if (first || total < out.value) {
            first = false;
            out.value = total;
            for (int j = 0; j < d; ++j)
                frame.place_part(j, best_rank[static_cast<std::size_t>(j)], assignment);
            out.argmin = HSubgraph{assignment};
        }
    }
    return out;
}

std::uint64_t expected_list_entries(std::size_t n, const SeparatorD &sep)
{
    std::uint64_t per_s = 0;
    for (const auto &part : sep.parts)
        per_s += saturating_pow(n, static_cast<int>(part.size()));
    return saturating_mul(saturating_pow(n, static_cast<int>(sep.s.size())), per_s);
}

std::uint64_t expected_ksum_instances(std::size_t n, const SeparatorD &sep)
{
    return saturating_pow(n, static_cast<int>(sep.s.size()));
}

} // namespace ewh
