#include <ewh/pattern.hpp>

#include <bit>
#include <functional>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace ewh {

namespace {
    std::vector<int> mask_to_nodes(NodeMask mask)
    {
        std::vector<int> nodes;
        for (int i = 0; mask != 0; ++i, mask >>= 1)
            if (mask & 1u)
                nodes.push_back(i);
        return nodes;
    }

    NodeMask nodes_to_mask(const std::vector<int> &nodes)
    {
        NodeMask m = 0;
        for (int v : nodes)
            m |= NodeMask{1} << v;
        return m;
    }

    // Depth-first walk over class assignments in counter order: the most
    // significant digit (highest node id) is fixed first. `classes` digits are
    // 0 for S and 1..parts for the parts. A branch is cut as soon as it would
    // join two different parts.
    template <typename Visit>
    void walk_assignments(const PatternGraph &p, int parts, std::vector<NodeMask> &part_masks, int node, Visit &visit)
    {
        if (node < 0) {
            visit(part_masks);
            return;
        }
        for (int c = 0; c <= parts; ++c) {
            if (c > 0) {
                bool ok = true;
                for (int other = 1; other <= parts && ok; ++other)
                    if (other != c && (p.neighbours(node) & part_masks[static_cast<std::size_t>(other)]))
                        ok = false;
                if (! ok)
                    continue;
            }
            part_masks[static_cast<std::size_t>(c)] |= NodeMask{1} << node;
            walk_assignments(p, parts, part_masks, node - 1, visit);
            part_masks[static_cast<std::size_t>(c)] &= ~(NodeMask{1} << node);
        }
    }
} // namespace

PatternGraph::PatternGraph(int k, std::vector<Edge> edges, std::vector<std::string> labels) :
    k_(k),
    labels_(std::move(labels))
{
    if (k < 1 || k > kMaxPatternNodes)
        throw std::invalid_argument("pattern size " + std::to_string(k) + " outside [1, " +
                                    std::to_string(kMaxPatternNodes) + "]");
    if (! labels_.empty() && labels_.size() != static_cast<std::size_t>(k))
        throw std::invalid_argument("pattern labels must name every node");
    adjacency_.assign(static_cast<std::size_t>(k), 0);
    for (auto &e : edges) {
        if (e.u < 0 || e.v < 0 || e.u >= k || e.v >= k)
            throw std::invalid_argument("pattern edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                        ") references a node outside [0, " + std::to_string(k) + ")");
        if (e.u == e.v)
            throw std::invalid_argument("pattern self-loop on node " + std::to_string(e.u));
        if (e.u > e.v)
            std::swap(e.u, e.v);
        if (adjacency_[static_cast<std::size_t>(e.u)] & (NodeMask{1} << e.v))
            throw std::invalid_argument("duplicate pattern edge (" + std::to_string(e.u) + "," +
                                        std::to_string(e.v) + ")");
        adjacency_[static_cast<std::size_t>(e.u)] |= NodeMask{1} << e.v;
        adjacency_[static_cast<std::size_t>(e.v)] |= NodeMask{1} << e.u;
    }
    std::sort(edges.begin(), edges.end());
    edges_ = std::move(edges);
}

bool PatternGraph::adjacent(int u, int v) const
{
    if (u < 0 || v < 0 || u >= k_ || v >= k_)
        return false;
    return adjacency_[static_cast<std::size_t>(u)] & (NodeMask{1} << v);
}

int PatternGraph::edge_index(int u, int v) const
{
    if (u > v)
        std::swap(u, v);
    auto it = std::lower_bound(edges_.begin(), edges_.end(), Edge{u, v});
    if (it == edges_.end() || *it != Edge{u, v})
        return -1;
    return static_cast<int>(it - edges_.begin());
}

int PatternGraph::degree(int u) const
{
    return std::popcount(neighbours(u));
}

std::vector<std::string> validate_pattern(const PatternGraph &p)
{
    std::vector<std::string> warnings;
    for (int v = 0; v < p.size(); ++v)
        if (p.neighbours(v) == 0)
            warnings.push_back("node " + std::to_string(v) + " is isolated");
    return warnings;
}

std::optional<PatternFamily> parse_family(std::string_view name)
{
    if (name == "path")
        return PatternFamily::path;
    if (name == "cycle")
        return PatternFamily::cycle;
    if (name == "star")
        return PatternFamily::star;
    if (name == "matching")
        return PatternFamily::matching;
    if (name == "clique")
        return PatternFamily::clique;
    if (name == "vi")
        return PatternFamily::vi;
    return std::nullopt;
}

std::string_view family_name(PatternFamily f)
{
    switch (f) {
    case PatternFamily::path: return "path";
    case PatternFamily::cycle: return "cycle";
    case PatternFamily::star: return "star";
    case PatternFamily::matching: return "matching";
    case PatternFamily::clique: return "clique";
    case PatternFamily::vi: return "vi";
    }
    return "?";
}

PatternGraph make_catalog_pattern(PatternFamily family, int size)
{
    auto bad_size = [&](std::string_view range) {
        return std::invalid_argument("invalid size " + std::to_string(size) + " for " +
                                     std::string(family_name(family)) + " (expected " + std::string(range) + ")");
    };
    std::vector<Edge> edges;
    switch (family) {
    case PatternFamily::path:
        if (size < 2 || size > kMaxPatternNodes)
            throw bad_size("2..16 nodes");
        for (int i = 0; i + 1 < size; ++i)
            edges.push_back({i, i + 1});
        return PatternGraph(size, edges);
    case PatternFamily::cycle:
        if (size < 3 || size > kMaxPatternNodes)
            throw bad_size("3..16 nodes");
        for (int i = 0; i + 1 < size; ++i)
            edges.push_back({i, i + 1});
        edges.push_back({0, size - 1});
        return PatternGraph(size, edges);
    case PatternFamily::star:
        if (size < 1 || size + 1 > kMaxPatternNodes)
            throw bad_size("1..15 leaves");
        for (int i = 0; i < size; ++i)
            edges.push_back({i, size});
        return PatternGraph(size + 1, edges);
    case PatternFamily::matching:
        if (size < 1 || 2 * size > kMaxPatternNodes)
            throw bad_size("1..8 edges");
        for (int i = 0; i < size; ++i)
            edges.push_back({2 * i, 2 * i + 1});
        return PatternGraph(2 * size, edges);
    case PatternFamily::clique:
        if (size < 2 || size > kMaxPatternNodes)
            throw bad_size("2..16 nodes");
        for (int i = 0; i < size; ++i)
            for (int j = i + 1; j < size; ++j)
                edges.push_back({i, j});
        return PatternGraph(size, edges);
    case PatternFamily::vi:
        if (size != 5)
            throw bad_size("exactly 5 nodes");
        return PatternGraph(5, {{0, 1}, {1, 2}, {3, 4}});
    }
    throw std::invalid_argument("unknown pattern family");
}

PatternGraph parse_pattern_name(std::string_view name)
{
    if (name == "triangle")
        return make_catalog_pattern(PatternFamily::clique, 3);
    if (name == "vi")
        return make_catalog_pattern(PatternFamily::vi, 5);
    auto sep = name.find('_');
    if (sep == std::string_view::npos)
        throw std::invalid_argument("unknown pattern '" + std::string(name) + "'");
    auto family = parse_family(name.substr(0, sep));
    if (! family)
        throw std::invalid_argument("unknown pattern family in '" + std::string(name) + "'");
    int size = 0;
    auto digits = name.substr(sep + 1);
    if (digits.empty())
        throw std::invalid_argument("missing size in '" + std::string(name) + "'");
    for (char c : digits) {
        if (c < '0' || c > '9' || size > 1000)
            throw std::invalid_argument("bad size in '" + std::string(name) + "'");
        size = size * 10 + (c - '0');
    }
    return make_catalog_pattern(*family, size);
}

std::vector<Separator2> enumerate_2separators(const PatternGraph &p)
{
    std::vector<Separator2> result;
    std::vector<NodeMask> masks(3, 0);
    auto visit = [&](const std::vector<NodeMask> &m) {
        result.push_back({mask_to_nodes(m[0]), mask_to_nodes(m[1]), mask_to_nodes(m[2])});
    };
    walk_assignments(p, 2, masks, p.size() - 1, visit);
    return result;
}

std::vector<SeparatorD> enumerate_d_separators(const PatternGraph &p, int d)
{
    if (d < 2 || d > p.size())
        throw std::invalid_argument("d-separator arity " + std::to_string(d) + " outside [2, k]");
    std::vector<SeparatorD> result;
    std::vector<NodeMask> masks(static_cast<std::size_t>(d) + 1, 0);
    auto visit = [&](const std::vector<NodeMask> &m) {
        SeparatorD sep;
        sep.s = mask_to_nodes(m[0]);
        for (int j = 1; j <= d; ++j)
            sep.parts.push_back(mask_to_nodes(m[static_cast<std::size_t>(j)]));
        result.push_back(std::move(sep));
    };
    walk_assignments(p, d, masks, p.size() - 1, visit);
    return result;
}

bool is_valid_separator(const PatternGraph &p, const SeparatorD &sep)
{
    NodeMask seen = 0;
    auto absorb = [&](const std::vector<int> &nodes) {
        for (int v : nodes) {
            if (v < 0 || v >= p.size() || (seen & (NodeMask{1} << v)))
                return false;
            seen |= NodeMask{1} << v;
        }
        return true;
    };
    if (! absorb(sep.s))
        return false;
    for (const auto &part : sep.parts)
        if (! absorb(part))
            return false;
    if (seen != (NodeMask{1} << p.size()) - 1)
        return false;
    for (std::size_t i = 0; i < sep.parts.size(); ++i) {
        NodeMask a = nodes_to_mask(sep.parts[i]);
        for (std::size_t j = i + 1; j < sep.parts.size(); ++j) {
            NodeMask b = nodes_to_mask(sep.parts[j]);
            for (int v : mask_to_nodes(a))
                if (p.neighbours(v) & b)
                    return false;
        }
    }
    return true;
}

bool is_valid_separator(const PatternGraph &p, const Separator2 &sep)
{
    return is_valid_separator(p, SeparatorD{sep.s, {sep.h1, sep.h2}});
}

GammaResult gamma(const PatternGraph &p)
{
    // Same walk as enumerate_2separators, with a branch-and-bound cut: a
    // partial assignment whose cost already reaches the best value cannot
    // produce a strictly smaller one, so the first minimum is preserved.
    const int k = p.size();
    int best = k + 1;
    NodeMask best_masks[3] = {0, 0, 0};
    NodeMask masks[3] = {0, 0, 0};

    std::function<void(int)> walk = [&](int node) {
        int s = std::popcount(masks[0]);
        int cost = s + std::max(std::popcount(masks[1]), std::popcount(masks[2]));
        if (cost >= best)
            return;
        if (node < 0) {
            best = cost;
            std::copy(std::begin(masks), std::end(masks), std::begin(best_masks));
            return;
        }
        NodeMask bit = NodeMask{1} << node;
        for (int c = 0; c < 3; ++c) {
            if (c == 1 && (p.neighbours(node) & masks[2]))
                continue;
            if (c == 2 && (p.neighbours(node) & masks[1]))
                continue;
            masks[c] |= bit;
            walk(node - 1);
            masks[c] &= ~bit;
        }
    };
    walk(k - 1);
    return {best, {mask_to_nodes(best_masks[0]), mask_to_nodes(best_masks[1]), mask_to_nodes(best_masks[2])}};
}

IndependentSet independence_number(const PatternGraph &p)
{
    const int k = p.size();
    IndependentSet best;
    NodeMask best_mask = 0;
    for (NodeMask m = 0; m < (NodeMask{1} << k); ++m) {
        int size = std::popcount(m);
        if (size <= best.size)
            continue;
        bool independent = true;
        for (NodeMask rest = m; rest && independent; rest &= rest - 1) {
            int v = std::countr_zero(rest);
            if (p.neighbours(v) & m)
                independent = false;
        }
        if (independent && size > best.size) {
            best.size = size;
            best_mask = m;
        }
    }
    best.nodes = mask_to_nodes(best_mask);
    return best;
}

int tree_decomposition_width(const PatternGraph &p, const std::vector<std::vector<int>> &bags,
                             const std::vector<std::pair<int, int>> &tree_edges)
{
    const int b = static_cast<int>(bags.size());
    if (b == 0)
        throw std::invalid_argument("tree decomposition has no bags");
    if (static_cast<int>(tree_edges.size()) != b - 1)
        throw std::invalid_argument("bag tree must have exactly bags-1 edges");

    std::vector<NodeMask> bag_masks;
    int width = 0;
    for (const auto &bag : bags) {
        for (int v : bag)
            if (v < 0 || v >= p.size())
                throw std::invalid_argument("bag references unknown node");
        bag_masks.push_back(nodes_to_mask(bag));
        width = std::max(width, std::popcount(bag_masks.back()) - 1);
    }

    std::vector<std::vector<int>> tree(static_cast<std::size_t>(b));
    for (auto [x, y] : tree_edges) {
        if (x < 0 || y < 0 || x >= b || y >= b || x == y)
            throw std::invalid_argument("bad bag-tree edge");
        tree[static_cast<std::size_t>(x)].push_back(y);
        tree[static_cast<std::size_t>(y)].push_back(x);
    }

    // Connected components of bags restricted by `allowed`.
    auto components = [&](const std::vector<bool> &allowed) {
        std::vector<int> comp(static_cast<std::size_t>(b), -1);
        int count = 0;
        for (int start = 0; start < b; ++start) {
            if (! allowed[static_cast<std::size_t>(start)] || comp[static_cast<std::size_t>(start)] != -1)
                continue;
            std::vector<int> stack{start};
            comp[static_cast<std::size_t>(start)] = count;
            while (! stack.empty()) {
                int x = stack.back();
                stack.pop_back();
                for (int y : tree[static_cast<std::size_t>(x)])
                    if (allowed[static_cast<std::size_t>(y)] && comp[static_cast<std::size_t>(y)] == -1) {
                        comp[static_cast<std::size_t>(y)] = count;
                        stack.push_back(y);
                    }
            }
            ++count;
        }
        return count;
    };

    if (components(std::vector<bool>(static_cast<std::size_t>(b), true)) != 1)
        throw std::invalid_argument("bag tree is not connected");

    for (int v = 0; v < p.size(); ++v) {
        std::vector<bool> holds(static_cast<std::size_t>(b));
        bool any = false;
        for (int i = 0; i < b; ++i) {
            holds[static_cast<std::size_t>(i)] = bag_masks[static_cast<std::size_t>(i)] & (NodeMask{1} << v);
            any = any || holds[static_cast<std::size_t>(i)];
        }
        if (! any)
            throw std::invalid_argument("node " + std::to_string(v) + " is in no bag");
        if (components(holds) != 1)
            throw std::invalid_argument("bags holding node " + std::to_string(v) + " are not connected");
    }
    for (const auto &e : p.edges()) {
        NodeMask need = (NodeMask{1} << e.u) | (NodeMask{1} << e.v);
        if (std::none_of(bag_masks.begin(), bag_masks.end(), [&](NodeMask m) { return (m & need) == need; }))
            throw std::invalid_argument("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                        ") is in no bag");
    }
    return width;
}

std::string describe(const VmOp &op)
{
    if (auto *d = std::get_if<EdgeDelete>(&op))
        return "delete " + std::to_string(d->u) + " " + std::to_string(d->v);
    const auto &c = std::get<Contract>(op);
    return "contract " + std::to_string(c.u) + " " + std::to_string(c.v);
}

int contracted_id(const Contract &c, int node)
{
    int lo = std::min(c.u, c.v), hi = std::max(c.u, c.v);
    if (node == hi)
        return lo;
    return node > hi ? node - 1 : node;
}

PatternGraph apply_vm_op(const PatternGraph &p, const VmOp &op)
{
    if (auto *d = std::get_if<EdgeDelete>(&op)) {
        int idx = p.edge_index(d->u, d->v);
        if (idx < 0)
            throw std::invalid_argument("cannot delete missing edge (" + std::to_string(d->u) + "," +
                                        std::to_string(d->v) + ")");
        auto edges = p.edges();
        edges.erase(edges.begin() + idx);
        return PatternGraph(p.size(), std::move(edges), p.labels());
    }

    const auto &c = std::get<Contract>(op);
    if (c.u < 0 || c.v < 0 || c.u >= p.size() || c.v >= p.size())
        throw std::invalid_argument("cannot contract missing node");
    if (c.u == c.v)
        throw std::invalid_argument("cannot contract a node with itself");
    if (p.size() < 2)
        throw std::invalid_argument("cannot contract a single-node pattern");

    std::set<Edge> merged;
    for (const auto &e : p.edges()) {
        int a = contracted_id(c, e.u), b = contracted_id(c, e.v);
        if (a == b)
            continue;
        merged.insert({std::min(a, b), std::max(a, b)});
    }
    std::vector<std::string> labels;
    if (! p.labels().empty()) {
        int lo = std::min(c.u, c.v), hi = std::max(c.u, c.v);
        for (int v = 0; v < p.size(); ++v) {
            if (v == hi)
                continue;
            if (v == lo)
                labels.push_back(p.labels()[static_cast<std::size_t>(lo)] + "+" +
                                 p.labels()[static_cast<std::size_t>(hi)]);
            else
                labels.push_back(p.labels()[static_cast<std::size_t>(v)]);
        }
    }
    return PatternGraph(p.size() - 1, std::vector<Edge>(merged.begin(), merged.end()), std::move(labels));
}

std::optional<std::vector<int>> find_isomorphism(const PatternGraph &a, const PatternGraph &b)
{
    const int k = a.size();
    if (k != b.size() || a.edge_count() != b.edge_count())
        return std::nullopt;
    std::vector<int> degree_a(static_cast<std::size_t>(k)), degree_b(static_cast<std::size_t>(k));
    for (int v = 0; v < k; ++v) {
        degree_a[static_cast<std::size_t>(v)] = a.degree(v);
        degree_b[static_cast<std::size_t>(v)] = b.degree(v);
    }
    {
        auto sa = degree_a, sb = degree_b;
        std::sort(sa.begin(), sa.end());
        std::sort(sb.begin(), sb.end());
        if (sa != sb)
            return std::nullopt;
    }

    std::vector<int> perm(static_cast<std::size_t>(k), -1);
    NodeMask used = 0;
    std::function<bool(int)> extend = [&](int v) -> bool {
        if (v == k)
            return true;
        for (int w = 0; w < k; ++w) {
            if ((used & (NodeMask{1} << w)) || degree_a[static_cast<std::size_t>(v)] != degree_b[static_cast<std::size_t>(w)])
                continue;
            bool ok = true;
            for (int u = 0; u < v && ok; ++u)
                if (a.adjacent(u, v) != b.adjacent(perm[static_cast<std::size_t>(u)], w))
                    ok = false;
            if (! ok)
                continue;
            perm[static_cast<std::size_t>(v)] = w;
            used |= NodeMask{1} << w;
            if (extend(v + 1))
                return true;
            used &= ~(NodeMask{1} << w);
        }
        return false;
    };
    if (! extend(0))
        return std::nullopt;
    return perm;
}

std::optional<std::vector<VmOp>> find_vm_sequence(const PatternGraph &h1, const PatternGraph &h2, int budget)
{
    if (h2.size() > 8)
        throw std::invalid_argument("vertex-minor search is limited to patterns of at most 8 nodes");
    if (budget < 0 || h1.size() > h2.size())
        return std::nullopt;

    // Labelled graphs on <= 8 nodes: 28 possible edges fit in the low bits.
    auto key = [](const PatternGraph &g) {
        std::uint64_t bits = 0;
        for (const auto &e : g.edges()) {
            int idx = e.v * (e.v - 1) / 2 + e.u;
            bits |= std::uint64_t{1} << idx;
        }
        return (static_cast<std::uint64_t>(g.size()) << 32) | bits;
    };
    // Largest remaining budget with which a state was explored without success.
    std::unordered_map<std::uint64_t, int> failed;
    std::vector<VmOp> trail;

    std::function<bool(const PatternGraph &, int)> search = [&](const PatternGraph &g, int remaining) -> bool {
        int contractions_needed = g.size() - h1.size();
        if (contractions_needed < 0 || g.edge_count() < h1.edge_count())
            return false;
        if (contractions_needed == 0 && g.edge_count() == h1.edge_count() && find_isomorphism(g, h1))
            return true;
        if (remaining <= 0 || contractions_needed > remaining)
            return false;
        auto k = key(g);
        auto it = failed.find(k);
        if (it != failed.end() && it->second >= remaining)
            return false;

        for (int u = 0; u < g.size(); ++u)
            for (int v = u + 1; v < g.size(); ++v) {
                VmOp op = Contract{u, v};
                trail.push_back(op);
                if (search(apply_vm_op(g, op), remaining - 1))
                    return true;
                trail.pop_back();
            }
        for (const auto &e : g.edges()) {
            VmOp op = EdgeDelete{e.u, e.v};
            trail.push_back(op);
            if (search(apply_vm_op(g, op), remaining - 1))
                return true;
            trail.pop_back();
        }
        failed[k] = std::max(failed[k], remaining);
        return false;
    };

    for (int depth = 0; depth <= budget; ++depth) {
        failed.clear();
        trail.clear();
        if (search(h2, depth))
            return trail;
    }
    return std::nullopt;
}

PatternGraph read_pattern(std::istream &in)
{
    std::string tag;
    int k = 0, m = 0;
    if (! (in >> tag >> k >> m) || tag != "PATTERN")
        throw std::invalid_argument("expected 'PATTERN <k> <m>' header");
    if (m < 0)
        throw std::invalid_argument("negative pattern edge count");
    std::vector<Edge> edges;
    for (int i = 0; i < m; ++i) {
        Edge e;
        if (! (in >> e.u >> e.v))
            throw std::invalid_argument("truncated pattern edge list");
        if (e.u >= e.v)
            throw std::invalid_argument("pattern edges must be written with u < v");
        edges.push_back(e);
    }
    return PatternGraph(k, std::move(edges));
}

void write_pattern(std::ostream &out, const PatternGraph &p)
{
    out << "PATTERN " << p.size() << ' ' << p.edge_count() << '\n';
    for (const auto &e : p.edges())
        out << e.u << ' ' << e.v << '\n';
}

} // namespace ewh
