#include <ewh/reductions.hpp>

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ewh {

namespace {

    Weight ksum_bound(const std::vector<std::vector<Weight>> &lists, Weight target)
    {
        Weight b = abs_weight(target);
        for (const auto &l : lists)
            for (Weight x : l)
                b = std::max(b, abs_weight(x));
        return b;
    }

    std::size_t common_length(const std::vector<std::vector<Weight>> &lists)
    {
        if (lists.empty())
            throw std::invalid_argument("instance has no lists");
        for (const auto &l : lists)
            if (l.size() != lists.front().size() || l.empty())
                throw std::invalid_argument("reduction needs non-empty lists of one common length");
        return lists.front().size();
    }

    // Copies super-edge `from_edge` of `src` into `to_edge` of `dst`; `swap`
    // transposes the matrix when the endpoint order is reversed.
    void copy_edge(const HPartiteInstance &src, int from_edge, HPartiteInstance &dst, int to_edge, bool swap)
    {
        const std::size_t n = src.n();
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                dst.edge(to_edge, a, b) = swap ? src.edge(from_edge, b, a) : src.edge(from_edge, a, b);
    }

    Weight instance_bound(const HPartiteInstance &inst)
    {
        return std::max(inst.max_magnitude(), abs_weight(inst.target()));
    }
} // namespace

KSumToAny::KSumToAny(const KSumInstance &inst, const PatternGraph &pattern)
{
    check_shape(inst);
    if (pattern.size() != inst.k())
        throw std::invalid_argument("pattern has " + std::to_string(pattern.size()) + " nodes but the instance has " +
                                    std::to_string(inst.k()) + " lists");
    const std::size_t n = common_length(inst.lists);
    out_ = HPartiteInstance(pattern, n, inst.target);
    for (int i = 0; i < inst.k(); ++i)
        for (std::size_t j = 0; j < n; ++j)
            out_.node(i, j) = inst.lists[static_cast<std::size_t>(i)][j];
}

KSolution KSumToAny::map_back(const HSubgraph &sg) const
{
    return KSolution{sg.assignment};
}

HSubgraph KSumToAny::map_forward(const KSolution &sol) const
{
    return HSubgraph{sol.indices};
}

KSumToMatching::KSumToMatching(const KSumInstance &inst)
{
    check_shape(inst);
    const int k = inst.k();
    if (2 * k > kMaxPatternNodes)
        throw std::invalid_argument("matching pattern would exceed the pattern size cap");
    std::size_t n = inst.max_list_size();
    r_ = 1;
    while (r_ * r_ < n)
        ++r_;
    for (const auto &l : inst.lists)
        lengths_.push_back(l.size());

    const Weight poison = poison_value(k, ksum_bound(inst.lists, inst.target));
    out_ = HPartiteInstance(make_catalog_pattern(PatternFamily::matching, k), r_, inst.target);
    for (int i = 0; i < k; ++i) {
        const auto &list = inst.lists[static_cast<std::size_t>(i)];
        for (std::size_t a = 0; a < r_; ++a)
            for (std::size_t b = 0; b < r_; ++b) {
                std::size_t idx = a * r_ + b;
                out_.edge(i, a, b) = idx < list.size() ? list[idx] : poison;
            }
    }
}

KSolution KSumToMatching::map_back(const HSubgraph &sg) const
{
    KSolution sol;
    for (std::size_t i = 0; i < lengths_.size(); ++i) {
        std::size_t idx = sg.assignment.at(2 * i) * r_ + sg.assignment.at(2 * i + 1);
        if (idx >= lengths_[i])
            throw std::logic_error("matching witness selects a padding cell");
        sol.indices.push_back(idx);
    }
    return sol;
}

HSubgraph KSumToMatching::map_forward(const KSolution &sol) const
{
    HSubgraph sg;
    for (auto idx : sol.indices) {
        sg.assignment.push_back(idx / r_);
        sg.assignment.push_back(idx % r_);
    }
    return sg;
}

SequenceToStar::SequenceToStar(const KSumSequence &seq)
{
    if (seq.instances.empty())
        throw std::invalid_argument("empty k-SUM sequence");
    const auto &first = seq.instances.front();
    check_shape(first);
    k_ = first.k();
    n_ = common_length(first.lists);
    count_ = seq.instances.size();
    Weight bound = 0;
    for (const auto &inst : seq.instances) {
        if (inst.k() != k_ || common_length(inst.lists) != n_ || inst.target != first.target)
            throw std::invalid_argument("k-SUM sequence is heterogeneous (k, n and target must agree)");
        bound = std::max(bound, ksum_bound(inst.lists, inst.target));
    }
    if (k_ + 1 > kMaxPatternNodes)
        throw std::invalid_argument("star pattern would exceed the pattern size cap");

    const std::size_t slots = std::max(n_, count_);
    const Weight poison = poison_value(k_, bound);
    out_ = HPartiteInstance(make_catalog_pattern(PatternFamily::star, k_), slots, first.target);
    // Edge j of star_k is (j, k): rows index the leaf slot, columns the centre.
    for (int j = 0; j < k_; ++j)
        for (std::size_t l = 0; l < slots; ++l)
            for (std::size_t i = 0; i < slots; ++i)
                out_.edge(j, l, i) = (i < count_ && l < n_) ? seq.instances[i].lists[static_cast<std::size_t>(j)][l] : poison;
}

SequenceToStar::Witness SequenceToStar::map_back(const HSubgraph &sg) const
{
    Witness w;
    w.instance_index = sg.assignment.at(static_cast<std::size_t>(k_));
    if (w.instance_index >= count_)
        throw std::logic_error("star witness selects a padding instance");
    for (int j = 0; j < k_; ++j) {
        auto l = sg.assignment.at(static_cast<std::size_t>(j));
        if (l >= n_)
            throw std::logic_error("star witness selects a padding entry");
        w.solution.indices.push_back(l);
    }
    return w;
}

HSubgraph SequenceToStar::map_forward(const Witness &w) const
{
    HSubgraph sg{w.solution.indices};
    sg.assignment.push_back(w.instance_index);
    return sg;
}

ConvToPath::ConvToPath(const ConvKSumInstance &inst)
{
    check_shape(inst);
    path_nodes_ = inst.k() - 1;
    if (path_nodes_ < 2)
        throw std::invalid_argument("convolution to path needs at least 3 lists");
    const std::size_t n = common_length(inst.lists);
    const int K = path_nodes_;
    // A path witness sums K-1 edges of up to three entries each.
    const Weight poison = poison_value(3 * K, ksum_bound(inst.lists, inst.target));
    out_ = HPartiteInstance(make_catalog_pattern(PatternFamily::path, K), n, inst.target);
    const auto &x = inst.lists;
    for (int i = 0; i + 1 < K; ++i)
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t s = 0; s < n; ++s) {
                if (s < r) {
                    out_.edge(i, r, s) = poison;
                    continue;
                }
                std::size_t diff = s - r;
                Weight w = x[static_cast<std::size_t>(i) + 1][diff];
                if (i == 0)
                    w += x[0][r];
                if (i == K - 2)
                    w += x[static_cast<std::size_t>(K)][s];
                out_.edge(i, r, s) = w;
            }
}

KSolution ConvToPath::map_back(const HSubgraph &sg) const
{
    const auto &a = sg.assignment;
    if (a.size() != static_cast<std::size_t>(path_nodes_))
        throw std::invalid_argument("path witness arity mismatch");
    KSolution sol;
    sol.indices.push_back(a[0]);
    for (std::size_t i = 1; i < a.size(); ++i) {
        if (a[i] < a[i - 1])
            throw std::logic_error("path witness has a decreasing prefix sum");
        sol.indices.push_back(a[i] - a[i - 1]);
    }
    sol.indices.push_back(a.back());
    return sol;
}

HSubgraph ConvToPath::map_forward(const KSolution &sol) const
{
    if (sol.indices.size() != static_cast<std::size_t>(path_nodes_) + 1)
        throw std::invalid_argument("convolution solution arity mismatch");
    HSubgraph sg;
    std::size_t prefix = 0;
    for (int i = 0; i < path_nodes_; ++i) {
        prefix += sol.indices[static_cast<std::size_t>(i)];
        sg.assignment.push_back(prefix);
    }
    return sg;
}

EdgeDeleteLift::EdgeDeleteLift(const HPartiteInstance &inst, const PatternGraph &hprime, int u, int v)
{
    if (! hprime.adjacent(u, v) || apply_vm_op(hprime, EdgeDelete{u, v}) != inst.pattern())
        throw std::invalid_argument("instance pattern is not the target pattern minus edge (" + std::to_string(u) +
                                    "," + std::to_string(v) + ")");
    out_ = HPartiteInstance(hprime, inst.n(), inst.target());
    for (int i = 0; i < inst.k(); ++i)
        for (std::size_t a = 0; a < inst.n(); ++a)
            out_.node(i, a) = inst.node(i, a);
    for (int e = 0; e < hprime.edge_count(); ++e) {
        const auto [x, y] = hprime.edges()[static_cast<std::size_t>(e)];
        int src = inst.pattern().edge_index(x, y);
        if (src >= 0)
            copy_edge(inst, src, out_, e, false);
    }
}

ContractLift::ContractLift(const HPartiteInstance &inst, const PatternGraph &hprime, int u1, int u2) :
    op_{u1, u2},
    hprime_nodes_(hprime.size())
{
    if (u1 == u2 || u1 < 0 || u2 < 0 || u1 >= hprime.size() || u2 >= hprime.size() ||
        apply_vm_op(hprime, op_) != inst.pattern())
        throw std::invalid_argument("instance pattern is not the target pattern with nodes " + std::to_string(u1) +
                                    " and " + std::to_string(u2) + " contracted");
    const Weight d = inst.pattern().edge_count();
    const Weight k = inst.k();
    const std::size_t n = inst.n();
    K_ = checked_mul(d + k + 1, checked_add(instance_bound(inst), 1));
    // Every weight of the lifted instance, summed over a witness, must stay
    // representable.
    checked_mul(checked_mul(K_, Weight(n)), Weight{4 * (hprime.size() + hprime.edge_count() + 1)});

    out_ = HPartiteInstance(hprime, n, inst.target());
    for (int x = 0; x < hprime.size(); ++x) {
        int h = contracted_id(op_, x);
        for (std::size_t a = 0; a < n; ++a) {
            Weight w = inst.node(h, a);
            if (x == u1)
                w += Weight(a) * K_;
            else if (x == u2)
                w = -Weight(a) * K_;
            out_.node(x, a) = w;
        }
    }

    std::vector<bool> claimed(static_cast<std::size_t>(inst.pattern().edge_count()), false);
    for (int e = 0; e < hprime.edge_count(); ++e) {
        const auto [x, y] = hprime.edges()[static_cast<std::size_t>(e)];
        int fx = contracted_id(op_, x), fy = contracted_id(op_, y);
        if (fx == fy)
            continue;
        int src = inst.pattern().edge_index(fx, fy);
        if (claimed[static_cast<std::size_t>(src)])
            continue;
        claimed[static_cast<std::size_t>(src)] = true;
        copy_edge(inst, src, out_, e, fx > fy);
    }
}

HSubgraph ContractLift::map_back(const HSubgraph &sg) const
{
    const auto &a = sg.assignment;
    if (a.size() != static_cast<std::size_t>(hprime_nodes_))
        throw std::invalid_argument("contracted witness arity mismatch");
    if (a[static_cast<std::size_t>(op_.u)] != a[static_cast<std::size_t>(op_.v)])
        throw std::logic_error("witness picks different copies of a contracted vertex");
    HSubgraph out;
    out.assignment.assign(static_cast<std::size_t>(hprime_nodes_ - 1), 0);
    for (int x = 0; x < hprime_nodes_; ++x)
        out.assignment[static_cast<std::size_t>(contracted_id(op_, x))] = a[static_cast<std::size_t>(x)];
    return out;
}

HSubgraph ContractLift::map_forward(const HSubgraph &sg) const
{
    HSubgraph out;
    for (int x = 0; x < hprime_nodes_; ++x)
        out.assignment.push_back(sg.assignment.at(static_cast<std::size_t>(contracted_id(op_, x))));
    return out;
}

RelabelLift::RelabelLift(const HPartiteInstance &inst, const PatternGraph &target, std::vector<int> perm) :
    perm_(std::move(perm))
{
    const auto &src = inst.pattern();
    if (perm_.size() != static_cast<std::size_t>(src.size()) || target.size() != src.size() ||
        target.edge_count() != src.edge_count())
        throw std::invalid_argument("relabelling does not match the pattern size");
    {
        auto sorted = perm_;
        std::sort(sorted.begin(), sorted.end());
        for (int i = 0; i < src.size(); ++i)
            if (sorted[static_cast<std::size_t>(i)] != i)
                throw std::invalid_argument("relabelling is not a permutation");
    }
    out_ = HPartiteInstance(target, inst.n(), inst.target());
    for (int y = 0; y < target.size(); ++y)
        for (std::size_t a = 0; a < inst.n(); ++a)
            out_.node(y, a) = inst.node(perm_[static_cast<std::size_t>(y)], a);
    for (int e = 0; e < target.edge_count(); ++e) {
        const auto [y1, y2] = target.edges()[static_cast<std::size_t>(e)];
        int p1 = perm_[static_cast<std::size_t>(y1)], p2 = perm_[static_cast<std::size_t>(y2)];
        int idx = src.edge_index(p1, p2);
        if (idx < 0)
            throw std::invalid_argument("relabelling is not an isomorphism");
        copy_edge(inst, idx, out_, e, p1 > p2);
    }
}

HSubgraph RelabelLift::map_back(const HSubgraph &sg) const
{
    HSubgraph out;
    out.assignment.assign(perm_.size(), 0);
    for (std::size_t y = 0; y < perm_.size(); ++y)
        out.assignment[static_cast<std::size_t>(perm_[y])] = sg.assignment.at(y);
    return out;
}

HSubgraph RelabelLift::map_forward(const HSubgraph &sg) const
{
    HSubgraph out;
    for (int p : perm_)
        out.assignment.push_back(sg.assignment.at(static_cast<std::size_t>(p)));
    return out;
}

VmChain::VmChain(const HPartiteInstance &inst, const PatternGraph &h2, const std::vector<VmOp> &ops,
                 std::optional<std::vector<int>> perm)
{
    std::vector<PatternGraph> graphs{h2};
    for (const auto &op : ops)
        graphs.push_back(apply_vm_op(graphs.back(), op));
    const auto &end = graphs.back();

    if (! perm) {
        if (end == inst.pattern()) {
            perm.emplace(static_cast<std::size_t>(end.size()));
            for (int i = 0; i < end.size(); ++i)
                (*perm)[static_cast<std::size_t>(i)] = i;
        } else {
            perm = find_isomorphism(end, inst.pattern());
            if (! perm)
                throw std::invalid_argument("operation chain does not end at the instance pattern");
        }
    }
    relabel_.emplace(inst, end, *perm);
    const HPartiteInstance *current = &relabel_->instance();

    for (std::size_t i = ops.size(); i-- > 0;) {
        Step step;
        const auto &before = graphs[i];
        if (auto *del = std::get_if<EdgeDelete>(&ops[i])) {
            step.edge_delete.emplace(*current, before, del->u, del->v);
        } else {
            const auto &c = std::get<Contract>(ops[i]);
            step.contract.emplace(*current, before, c.u, c.v);
        }
        steps_.push_back(std::move(step));
        const auto &s = steps_.back();
        current = s.contract ? &s.contract->instance() : &s.edge_delete->instance();
    }
    out_ = *current;
}

HSubgraph VmChain::map_back(const HSubgraph &sg) const
{
    HSubgraph cur = sg;
    for (std::size_t i = steps_.size(); i-- > 0;) {
        const auto &s = steps_[i];
        cur = s.contract ? s.contract->map_back(cur) : s.edge_delete->map_back(cur);
    }
    return relabel_->map_back(cur);
}

HSubgraph VmChain::map_forward(const HSubgraph &sg) const
{
    HSubgraph cur = relabel_->map_forward(sg);
    for (const auto &s : steps_)
        cur = s.contract ? s.contract->map_forward(cur) : s.edge_delete->map_forward(cur);
    return cur;
}

ApexSplit::ApexSplit(const HPartiteInstance &inst, int apex) :
    apex_(apex)
{
    const auto &p = inst.pattern();
    if (apex < 0 || apex >= p.size())
        throw std::invalid_argument("apex node out of range");
    if (p.size() < 2 || p.degree(apex) != p.size() - 1)
        throw std::invalid_argument("apex node is not adjacent to every other node");

    auto shrink = [&](int x) { return x > apex ? x - 1 : x; };
    std::vector<Edge> rest;
    for (const auto &e : p.edges())
        if (e.u != apex && e.v != apex)
            rest.push_back({shrink(e.u), shrink(e.v)});
    PatternGraph h1(p.size() - 1, rest);

    const std::size_t n = inst.n();
    for (std::size_t a = 0; a < n; ++a) {
        HPartiteInstance out(h1, n, inst.target() - inst.node(apex, a));
        for (int x = 0; x < p.size(); ++x) {
            if (x == apex)
                continue;
            int apex_edge = p.edge_index(x, apex);
            for (std::size_t b = 0; b < n; ++b)
                out.node(shrink(x), b) = inst.node(x, b) + (x < apex ? inst.edge(apex_edge, b, a) : inst.edge(apex_edge, a, b));
        }
        for (int e = 0; e < h1.edge_count(); ++e) {
            const auto [u, v] = h1.edges()[static_cast<std::size_t>(e)];
            int ou = u >= apex ? u + 1 : u, ov = v >= apex ? v + 1 : v;
            copy_edge(inst, p.edge_index(ou, ov), out, e, false);
        }
        out_.push_back(std::move(out));
    }
}

HSubgraph ApexSplit::map_back(std::size_t instance_index, const HSubgraph &sg) const
{
    HSubgraph out = sg;
    out.assignment.insert(out.assignment.begin() + apex_, instance_index);
    return out;
}

std::pair<std::size_t, HSubgraph> ApexSplit::map_forward(const HSubgraph &sg) const
{
    HSubgraph out = sg;
    std::size_t a = out.assignment.at(static_cast<std::size_t>(apex_));
    out.assignment.erase(out.assignment.begin() + apex_);
    return {a, out};
}

EwToKSumEdges::EwToKSumEdges(const GeneralGraphInstance &g, std::uint64_t seed, int repetitions) :
    g_(g),
    coloring_(g, seed, repetitions)
{
    const auto &p = g.pattern;
    const int d = p.edge_count();
    if (d < 1)
        throw std::invalid_argument("edge reduction needs a pattern with at least one edge");
    if (! validate_pattern(p).empty())
        throw std::invalid_argument("edge reduction needs a pattern without isolated nodes");
    if (2 * d > kMaxPatternNodes)
        throw std::invalid_argument("matching pattern would exceed the pattern size cap");
    matching_ = make_catalog_pattern(PatternFamily::matching, d);

    // Matching edge j = (2j, 2j+1) stands for pattern edge j = (u_j, v_j).
    // Contract copies of the same pattern node until one copy of each is left.
    std::vector<int> owner;
    for (const auto &e : p.edges()) {
        owner.push_back(e.u);
        owner.push_back(e.v);
    }
    for (;;) {
        bool merged = false;
        for (std::size_t x = 0; x < owner.size() && ! merged; ++x)
            for (std::size_t y = x + 1; y < owner.size() && ! merged; ++y)
                if (owner[x] == owner[y]) {
                    ops_.push_back(Contract{static_cast<int>(x), static_cast<int>(y)});
                    owner.erase(owner.begin() + static_cast<std::ptrdiff_t>(y));
                    merged = true;
                }
        if (! merged)
            break;
    }
    perm_ = owner;
}

EwToKSumEdges::Round EwToKSumEdges::round(std::size_t r) const
{
    Round out;
    out.index = r;
    auto colored = coloring_.instance(r);
    auto lift = std::make_shared<VmChain>(colored, matching_, ops_, perm_);
    const auto &lifted = lift->instance();
    const Weight poison = coloring_.poison();
    const std::size_t n = colored.n();
    const auto &edges = g_.pattern.edges();

    out.instance.target = lifted.target();
    for (std::size_t j = 0; j < edges.size(); ++j) {
        const auto [u, v] = edges[j];
        std::vector<Weight> list;
        std::vector<std::pair<std::size_t, std::size_t>> origin;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                if (colored.edge(static_cast<int>(j), a, b) == poison || colored.node(u, a) == poison ||
                    colored.node(v, b) == poison)
                    continue;
                int e = static_cast<int>(j);
                list.push_back(lifted.node(2 * e, a) + lifted.node(2 * e + 1, b) + lifted.edge(e, a, b));
                origin.emplace_back(a, b);
            }
        out.empty_list = out.empty_list || list.empty();
        out.instance.lists.push_back(std::move(list));
        out.origin.push_back(std::move(origin));
    }
    out.lift = std::move(lift);
    return out;
}

std::vector<std::size_t> EwToKSumEdges::map_back(const Round &round, const KSolution &solution) const
{
    HSubgraph matching_sg;
    for (std::size_t j = 0; j < solution.indices.size(); ++j) {
        auto [a, b] = round.origin.at(j).at(solution.indices[j]);
        matching_sg.assignment.push_back(a);
        matching_sg.assignment.push_back(b);
    }
    return coloring_.map_back(round.lift->map_back(matching_sg));
}

EwToKSumEdges::Outcome EwToKSumEdges::solve(KSumSolver solver) const
{
    Outcome outcome;
    for (std::size_t r = 0; r < rounds(); ++r) {
        auto rd = round(r);
        if (rd.empty_list)
            continue;
        for (const auto &list : rd.instance.lists) {
            outcome.longest_list = std::max(outcome.longest_list, list.size());
            outcome.stats.list_entries_built += list.size();
        }
        ++outcome.stats.ksum_instances_emitted;
        auto res = solve_ksum(rd.instance, solver);
        outcome.stats.tuples_enumerated += res.stats.tuples_enumerated;
        if (res.solution) {
            outcome.round = r;
            outcome.map = map_back(rd, *res.solution);
            return outcome;
        }
    }
    return outcome;
}

} // namespace ewh
