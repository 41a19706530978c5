#include <ewh/hgraph.hpp>

#include <ewh/ksum_reductions.hpp>

#include <algorithm>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace ewh {

namespace {
    std::uint64_t assignment_space(std::size_t n, int k)
    {
        return saturating_pow(n, k);
    }

    // Calls visit(assignment) for every assignment in lexicographic order
    // until visit returns false.
    template <typename Visit>
    void for_each_assignment(std::size_t n, int k, Visit &&visit)
    {
        std::vector<std::size_t> a(static_cast<std::size_t>(k), 0);
        for (;;) {
            if (! visit(a))
                return;
            std::size_t pos = a.size();
            while (pos > 0) {
                --pos;
                if (++a[pos] < n)
                    break;
                a[pos] = 0;
                if (pos == 0)
                    return;
            }
            if (a.empty())
                return;
        }
    }

    Weight expect_weight(std::istream &in, const char *what)
    {
        std::string tok;
        if (! (in >> tok))
            throw std::invalid_argument(std::string("truncated ") + what);
        return parse_weight(tok);
    }

    void expect_keyword(std::istream &in, const char *keyword)
    {
        std::string tok;
        if (! (in >> tok) || tok != keyword)
            throw std::invalid_argument(std::string("expected '") + keyword + "'");
    }
} // namespace

HPartiteInstance::HPartiteInstance(PatternGraph pattern, std::size_t n, Weight target) :
    pattern_(std::move(pattern)),
    n_(n),
    target_(target)
{
    if (n == 0)
        throw std::invalid_argument("super-node size must be positive");
    node_weights_.assign(static_cast<std::size_t>(pattern_.size()), std::vector<Weight>(n, 0));
    edge_weights_.assign(static_cast<std::size_t>(pattern_.edge_count()), std::vector<Weight>(n * n, 0));
}

Weight HPartiteInstance::max_magnitude() const
{
    Weight m = 0;
    for (const auto &row : node_weights_)
        for (Weight w : row)
            m = std::max(m, abs_weight(w));
    for (const auto &matrix : edge_weights_)
        for (Weight w : matrix)
            m = std::max(m, abs_weight(w));
    return m;
}

GraphIndex::GraphIndex(const GeneralGraphInstance &g) :
    nv_(g.nv),
    present_(g.nv * g.nv, false),
    weights_(g.nv * g.nv, 0)
{
    for (const auto &e : g.edges) {
        if (e.u >= g.nv || e.v >= g.nv || e.u == e.v)
            throw std::invalid_argument("graph edge references a bad vertex");
        if (present_[e.u * nv_ + e.v])
            throw std::invalid_argument("duplicate graph edge");
        present_[e.u * nv_ + e.v] = present_[e.v * nv_ + e.u] = true;
        weights_[e.u * nv_ + e.v] = weights_[e.v * nv_ + e.u] = e.w;
    }
}

Weight poison_for(const PatternGraph &pattern, Weight bound)
{
    return poison_value(pattern.size() + pattern.edge_count(), bound);
}

void validate_general(const GeneralGraphInstance &g)
{
    GraphIndex index(g);
    for (const auto &e : g.edges)
        if (abs_weight(e.w) > kMaxMagnitude)
            throw std::invalid_argument("graph edge weight exceeds 2^40");
}

Weight weight_of(const HPartiteInstance &inst, const HSubgraph &sg)
{
    if (sg.assignment.size() != static_cast<std::size_t>(inst.k()))
        throw std::invalid_argument("assignment arity does not match the pattern");
    for (auto a : sg.assignment)
        if (a >= inst.n())
            throw std::out_of_range("assignment index out of range");
    Weight total = 0;
    for (int i = 0; i < inst.k(); ++i)
        total += inst.node(i, sg.assignment[static_cast<std::size_t>(i)]);
    const auto &edges = inst.pattern().edges();
    for (std::size_t e = 0; e < edges.size(); ++e)
        total += inst.edge(static_cast<int>(e), sg.assignment[static_cast<std::size_t>(edges[e].u)],
                           sg.assignment[static_cast<std::size_t>(edges[e].v)]);
    return total;
}

std::optional<Weight> mapped_weight(const GeneralGraphInstance &g, const std::vector<std::size_t> &map)
{
    if (map.size() != static_cast<std::size_t>(g.pattern.size()))
        return std::nullopt;
    for (std::size_t i = 0; i < map.size(); ++i) {
        if (map[i] >= g.nv)
            return std::nullopt;
        for (std::size_t j = 0; j < i; ++j)
            if (map[i] == map[j])
                return std::nullopt;
    }
    GraphIndex index(g);
    Weight total = 0;
    for (const auto &e : g.pattern.edges()) {
        auto a = map[static_cast<std::size_t>(e.u)], b = map[static_cast<std::size_t>(e.v)];
        if (! index.has_edge(a, b))
            return std::nullopt;
        total += index.weight(a, b);
    }
    return total;
}

HPartiteInstance random_instance(const PatternGraph &pattern, std::size_t n, std::int64_t bound, std::uint64_t seed,
                                 Weight target)
{
    if (bound < 0 || Weight{bound} > kMaxMagnitude)
        throw std::invalid_argument("weight bound outside [0, 2^40]");
    Rng rng(seed);
    HPartiteInstance inst(pattern, n, target);
    for (int i = 0; i < pattern.size(); ++i)
        for (std::size_t a = 0; a < n; ++a)
            inst.node(i, a) = uniform_between(rng, -bound, bound);
    for (int e = 0; e < pattern.edge_count(); ++e)
        for (auto &w : inst.edge_matrix(e))
            w = uniform_between(rng, -bound, bound);
    return inst;
}

Planted plant_solution(const HPartiteInstance &inst, std::uint64_t seed)
{
    Rng rng(seed);
    Planted out{inst, {}};
    for (int i = 0; i < inst.k(); ++i)
        out.solution.assignment.push_back(static_cast<std::size_t>(uniform_below(rng, inst.n())));
    Weight gap = inst.target() - weight_of(inst, out.solution);
    const auto &a = out.solution.assignment;
    if (inst.pattern().edge_count() > 0) {
        const auto &e = inst.pattern().edges().front();
        out.instance.edge(0, a[static_cast<std::size_t>(e.u)], a[static_cast<std::size_t>(e.v)]) += gap;
    } else {
        out.instance.node(0, a[0]) += gap;
    }
    return out;
}

GeneralGraphInstance random_general(const PatternGraph &pattern, std::size_t nv, double density, std::int64_t bound,
                                    std::uint64_t seed, Weight target)
{
    if (density < 0.0 || density > 1.0)
        throw std::invalid_argument("edge density must be in [0, 1]");
    if (bound < 0 || Weight{bound} > kMaxMagnitude)
        throw std::invalid_argument("weight bound outside [0, 2^40]");
    Rng rng(seed);
    GeneralGraphInstance g{nv, {}, pattern, target};
    const auto threshold = static_cast<std::uint64_t>(density * 1'000'000.0);
    for (std::size_t u = 0; u < nv; ++u)
        for (std::size_t v = u + 1; v < nv; ++v) {
            bool keep = uniform_below(rng, 1'000'000) < threshold;
            Weight w = uniform_between(rng, -bound, bound);
            if (keep)
                g.edges.push_back({u, v, w});
        }
    return g;
}

std::vector<std::size_t> plant_general(GeneralGraphInstance &g, std::uint64_t seed)
{
    const auto k = static_cast<std::size_t>(g.pattern.size());
    if (g.nv < k)
        throw std::invalid_argument("graph has fewer vertices than the pattern");
    Rng rng(seed);
    std::vector<std::size_t> vertices(g.nv);
    for (std::size_t i = 0; i < g.nv; ++i)
        vertices[i] = i;
    // Partial Fisher-Yates for k distinct vertices.
    for (std::size_t i = 0; i < k; ++i) {
        auto j = i + static_cast<std::size_t>(uniform_below(rng, g.nv - i));
        std::swap(vertices[i], vertices[j]);
    }
    std::vector<std::size_t> map(vertices.begin(), vertices.begin() + static_cast<std::ptrdiff_t>(k));

    auto find_edge = [&](std::size_t a, std::size_t b) -> WeightedEdge * {
        for (auto &e : g.edges)
            if ((e.u == a && e.v == b) || (e.u == b && e.v == a))
                return &e;
        return nullptr;
    };
    for (const auto &pe : g.pattern.edges()) {
        auto a = map[static_cast<std::size_t>(pe.u)], b = map[static_cast<std::size_t>(pe.v)];
        if (! find_edge(a, b))
            g.edges.push_back({std::min(a, b), std::max(a, b), 0});
    }
    if (g.pattern.edge_count() > 0) {
        auto current = *mapped_weight(g, map);
        const auto &pe = g.pattern.edges().front();
        find_edge(map[static_cast<std::size_t>(pe.u)], map[static_cast<std::size_t>(pe.v)])->w += g.target - current;
    }
    return map;
}

EwResult brute_force_ew(const HPartiteInstance &inst)
{
    if (assignment_space(inst.n(), inst.k()) > kEnumerationGuard)
        throw GuardExceeded("brute-force EW(H) exceeds the enumeration guard");
    EwResult result;
    HSubgraph sg;
    for_each_assignment(inst.n(), inst.k(), [&](const std::vector<std::size_t> &a) {
        ++result.stats.tuples_enumerated;
        sg.assignment = a;
        if (weight_of(inst, sg) == inst.target()) {
            result.solution = sg;
            return false;
        }
        return true;
    });
    return result;
}

GeneralResult brute_force_general(const GeneralGraphInstance &g)
{
    const int k = g.pattern.size();
    if (assignment_space(g.nv, k) > kEnumerationGuard)
        throw GuardExceeded("brute-force Exact-Weight-H exceeds the enumeration guard");
    GraphIndex index(g);
    GeneralResult result;
    std::vector<std::size_t> map(static_cast<std::size_t>(k));
    std::vector<bool> used(g.nv, false);

    // Depth-first over pattern nodes in id order, vertices in increasing order.
    auto extend = [&](auto &self, int node, Weight partial) -> bool {
        if (node == k) {
            ++result.stats.tuples_enumerated;
            if (partial == g.target) {
                result.map = map;
                return true;
            }
            return false;
        }
        for (std::size_t v = 0; v < g.nv; ++v) {
            if (used[v])
                continue;
            Weight added = 0;
            bool ok = true;
            for (int u = 0; u < node && ok; ++u)
                if (g.pattern.adjacent(u, node)) {
                    auto w = map[static_cast<std::size_t>(u)];
                    if (! index.has_edge(w, v))
                        ok = false;
                    else
                        added += index.weight(w, v);
                }
            if (! ok)
                continue;
            map[static_cast<std::size_t>(node)] = v;
            used[v] = true;
            bool found = self(self, node + 1, partial + added);
            used[v] = false;
            if (found)
                return true;
        }
        return false;
    };
    extend(extend, 0, 0);
    return result;
}

MinWeightResult brute_force_min_weight(const HPartiteInstance &inst)
{
    if (assignment_space(inst.n(), inst.k()) > kEnumerationGuard)
        throw GuardExceeded("brute-force minimum weight exceeds the enumeration guard");
    MinWeightResult result;
    bool first = true;
    HSubgraph sg;
    for_each_assignment(inst.n(), inst.k(), [&](const std::vector<std::size_t> &a) {
        ++result.stats.tuples_enumerated;
        sg.assignment = a;
        Weight w = weight_of(inst, sg);
        if (first || w < result.value) {
            result.value = w;
            result.argmin = sg;
            first = false;
        }
        return true;
    });
    return result;
}

HPartiteToGeneral::HPartiteToGeneral(const HPartiteInstance &inst) :
    n_(inst.n()),
    k_(inst.k())
{
    const auto &p = inst.pattern();
    if (! validate_pattern(p).empty())
        throw std::invalid_argument("H-partite to general reduction needs a pattern without isolated nodes");
    const int m = p.edge_count();
    const Weight W = std::max(inst.max_magnitude(), abs_weight(inst.target()));

    base_ = checked_add(checked_mul(Weight{m}, checked_add(checked_mul(checked_mul(Weight{2 * k_}, Weight(n_)), W), 1)), 1);

    // fold[i]: the first pattern edge incident to node i receives its weight.
    std::vector<int> fold(static_cast<std::size_t>(k_), -1);
    for (int e = 0; e < m; ++e)
        for (int end : {p.edges()[static_cast<std::size_t>(e)].u, p.edges()[static_cast<std::size_t>(e)].v})
            if (fold[static_cast<std::size_t>(end)] < 0)
                fold[static_cast<std::size_t>(end)] = e;

    out_.nv = static_cast<std::size_t>(k_) * n_;
    out_.pattern = p;
    Weight marker = 1;
    Weight marker_sum = 0;
    for (int e = 0; e < m; ++e) {
        marker = checked_mul(marker, base_);
        marker_sum = checked_add(marker_sum, marker);
        const auto [u, v] = p.edges()[static_cast<std::size_t>(e)];
        for (std::size_t a = 0; a < n_; ++a)
            for (std::size_t b = 0; b < n_; ++b) {
                Weight w = inst.edge(e, a, b) + marker;
                if (fold[static_cast<std::size_t>(u)] == e)
                    w += inst.node(u, a);
                if (fold[static_cast<std::size_t>(v)] == e)
                    w += inst.node(v, b);
                out_.edges.push_back({static_cast<std::size_t>(u) * n_ + a, static_cast<std::size_t>(v) * n_ + b, w});
            }
    }
    // Headroom so every copy's sum (m edges) stays representable.
    checked_mul(marker_sum, Weight{2 * (m + 1)});
    out_.target = checked_add(inst.target(), marker_sum);
}

HSubgraph HPartiteToGeneral::map_back(const std::vector<std::size_t> &map) const
{
    if (map.size() != static_cast<std::size_t>(k_))
        throw std::invalid_argument("vertex map arity does not match the pattern");
    HSubgraph sg;
    sg.assignment.assign(static_cast<std::size_t>(k_), 0);
    std::vector<bool> seen(static_cast<std::size_t>(k_), false);
    for (auto vertex : map) {
        auto super = vertex / n_;
        if (super >= static_cast<std::size_t>(k_) || seen[super])
            throw std::logic_error("witness does not use every super-node exactly once");
        seen[super] = true;
        sg.assignment[super] = vertex % n_;
    }
    return sg;
}

std::vector<std::size_t> HPartiteToGeneral::map_forward(const HSubgraph &sg) const
{
    std::vector<std::size_t> map;
    for (std::size_t i = 0; i < sg.assignment.size(); ++i)
        map.push_back(i * n_ + sg.assignment[i]);
    return map;
}

GeneralToHPartite::GeneralToHPartite(const GeneralGraphInstance &g, std::uint64_t seed, int repetitions) :
    g_(g),
    index_(g),
    seed_(seed),
    rounds_(hashing_rounds(g.pattern.size(), g.nv, repetitions))
{
    if (g.nv == 0)
        throw std::invalid_argument("graph has no vertices");
    Weight bound = abs_weight(g.target);
    for (const auto &e : g.edges)
        bound = std::max(bound, abs_weight(e.w));
    poison_ = poison_for(g.pattern, bound);
}

std::vector<int> GeneralToHPartite::coloring(std::size_t round) const
{
    Rng rng(derive_seed(seed_, round));
    std::vector<int> colors(g_.nv);
    for (auto &c : colors)
        c = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(g_.pattern.size())));
    return colors;
}

HPartiteInstance GeneralToHPartite::instance(std::size_t round) const
{
    auto colors = coloring(round);
    HPartiteInstance inst(g_.pattern, g_.nv, g_.target);
    for (int i = 0; i < g_.pattern.size(); ++i)
        for (std::size_t a = 0; a < g_.nv; ++a)
            inst.node(i, a) = colors[a] == i ? 0 : poison_;
    const auto &edges = g_.pattern.edges();
    for (std::size_t e = 0; e < edges.size(); ++e)
        for (std::size_t a = 0; a < g_.nv; ++a)
            for (std::size_t b = 0; b < g_.nv; ++b) {
                bool real = a != b && colors[a] == edges[e].u && colors[b] == edges[e].v && index_.has_edge(a, b);
                inst.edge(static_cast<int>(e), a, b) = real ? index_.weight(a, b) : poison_;
            }
    return inst;
}

std::vector<std::size_t> GeneralToHPartite::map_back(const HSubgraph &sg) const
{
    return sg.assignment;
}

GeneralToHPartite::Outcome GeneralToHPartite::solve() const
{
    Outcome outcome;
    for (std::size_t r = 0; r < rounds_; ++r) {
        auto res = brute_force_ew(instance(r));
        outcome.stats += res.stats;
        if (res.solution) {
            outcome.round = r;
            outcome.map = map_back(*res.solution);
            return outcome;
        }
    }
    return outcome;
}

HPartiteInstance read_hpartite(std::istream &in)
{
    expect_keyword(in, "EWH");
    auto pattern = read_pattern(in);
    expect_keyword(in, "N");
    std::size_t n = 0;
    if (! (in >> n) || n == 0)
        throw std::invalid_argument("bad super-node size");
    expect_keyword(in, "TARGET");
    Weight target = expect_weight(in, "target");
    HPartiteInstance inst(pattern, n, target);
    for (int i = 0; i < pattern.size(); ++i)
        for (std::size_t a = 0; a < n; ++a)
            inst.node(i, a) = expect_weight(in, "node weights");
    for (int e = 0; e < pattern.edge_count(); ++e) {
        expect_keyword(in, "EDGE");
        int u = -1, v = -1;
        if (! (in >> u >> v))
            throw std::invalid_argument("truncated EDGE header");
        int idx = pattern.edge_index(u, v);
        if (idx < 0 || u > v)
            throw std::invalid_argument("EDGE block names a non-edge or reversed pair");
        for (auto &w : inst.edge_matrix(idx))
            w = expect_weight(in, "edge weights");
    }
    return inst;
}

void write_hpartite(std::ostream &out, const HPartiteInstance &inst)
{
    out << "EWH\n";
    write_pattern(out, inst.pattern());
    out << "N " << inst.n() << '\n';
    out << "TARGET " << to_string(inst.target()) << '\n';
    for (int i = 0; i < inst.k(); ++i) {
        for (std::size_t a = 0; a < inst.n(); ++a)
            out << (a ? " " : "") << to_string(inst.node(i, a));
        out << '\n';
    }
    for (int e = 0; e < inst.pattern().edge_count(); ++e) {
        const auto &edge = inst.pattern().edges()[static_cast<std::size_t>(e)];
        out << "EDGE " << edge.u << ' ' << edge.v << '\n';
        for (std::size_t a = 0; a < inst.n(); ++a) {
            for (std::size_t b = 0; b < inst.n(); ++b)
                out << (b ? " " : "") << to_string(inst.edge(e, a, b));
            out << '\n';
        }
    }
}

GeneralGraphInstance read_general(std::istream &in)
{
    expect_keyword(in, "EWG");
    GeneralGraphInstance g;
    expect_keyword(in, "NV");
    if (! (in >> g.nv))
        throw std::invalid_argument("bad vertex count");
    expect_keyword(in, "TARGET");
    g.target = expect_weight(in, "target");
    g.pattern = read_pattern(in);
    expect_keyword(in, "M");
    std::size_t m = 0;
    if (! (in >> m))
        throw std::invalid_argument("bad edge count");
    for (std::size_t i = 0; i < m; ++i) {
        WeightedEdge e;
        if (! (in >> e.u >> e.v))
            throw std::invalid_argument("truncated graph edge list");
        e.w = expect_weight(in, "graph edge weight");
        g.edges.push_back(e);
    }
    GraphIndex check(g);
    return g;
}

void write_general(std::ostream &out, const GeneralGraphInstance &g)
{
    out << "EWG\n";
    out << "NV " << g.nv << '\n';
    out << "TARGET " << to_string(g.target) << '\n';
    write_pattern(out, g.pattern);
    out << "M " << g.edges.size() << '\n';
    for (const auto &e : g.edges)
        out << e.u << ' ' << e.v << ' ' << to_string(e.w) << '\n';
}

} // namespace ewh
