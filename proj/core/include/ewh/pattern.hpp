#pragma once

#include <algorithm>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ewh {

// Node-count cap for pattern graphs. Separator enumeration is exponential in
// k, so larger patterns are rejected rather than silently degraded.
inline constexpr int kMaxPatternNodes = 16;

using NodeMask = std::uint32_t;

struct Edge {
    int u = 0;
    int v = 0;

    friend bool operator==(const Edge &, const Edge &) = default;
    friend auto operator<=>(const Edge &, const Edge &) = default;
};

// A small undirected simple graph H on nodes [0, k). Edges are stored with
// u < v, sorted, so an edge's position in edges() is a stable super-edge id.
class PatternGraph {
public:
    PatternGraph() = default;
    PatternGraph(int k, std::vector<Edge> edges, std::vector<std::string> labels = {});

    int size() const { return k_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<Edge> &edges() const { return edges_; }
    const std::vector<std::string> &labels() const { return labels_; }

    bool adjacent(int u, int v) const;
    // Index into edges() of {u, v}, or -1.
    int edge_index(int u, int v) const;
    NodeMask neighbours(int u) const { return adjacency_.at(static_cast<std::size_t>(u)); }
    int degree(int u) const;

    friend bool operator==(const PatternGraph &a, const PatternGraph &b)
    {
        return a.k_ == b.k_ && a.edges_ == b.edges_;
    }

private:
    int k_ = 0;
    std::vector<Edge> edges_;
    std::vector<NodeMask> adjacency_;
    std::vector<std::string> labels_;
};

// Diagnostics that do not invalidate the graph (isolated nodes).
std::vector<std::string> validate_pattern(const PatternGraph &p);

enum class PatternFamily { path, cycle, star, matching, clique, vi };

std::optional<PatternFamily> parse_family(std::string_view name);
std::string_view family_name(PatternFamily f);

// path: `size` nodes in order. cycle: `size` nodes. star: `size` leaves, centre
// is the last id. matching: `size` edges (2i, 2i+1). clique: `size` nodes.
// vi: the 5-node graph made of a 2-edge path and a disjoint edge.
PatternGraph make_catalog_pattern(PatternFamily family, int size);

// Parses "path_5", "triangle", "clique_4" and similar names.
PatternGraph parse_pattern_name(std::string_view name);

struct Separator2 {
    std::vector<int> s;
    std::vector<int> h1;
    std::vector<int> h2;

    friend bool operator==(const Separator2 &, const Separator2 &) = default;
};

struct SeparatorD {
    std::vector<int> s;
    std::vector<std::vector<int>> parts;

    int d() const { return static_cast<int>(parts.size()); }
    friend bool operator==(const SeparatorD &, const SeparatorD &) = default;
};

// All valid 2-separators, in base-3 counter order: digit of node i is its
// class (0 = S, 1 = H1, 2 = H2) and node 0 is the least significant digit.
std::vector<Separator2> enumerate_2separators(const PatternGraph &p);

// All valid d-separators, counter order in base d+1 (digit 0 = S, j = part j-1).
std::vector<SeparatorD> enumerate_d_separators(const PatternGraph &p, int d);

bool is_valid_separator(const PatternGraph &p, const Separator2 &sep);
bool is_valid_separator(const PatternGraph &p, const SeparatorD &sep);

struct GammaResult {
    int value = 0;
    Separator2 argmin;
};

// min |S| + max(|H1|, |H2|) over all 2-separators; the first minimum in
// enumeration order is reported.
GammaResult gamma(const PatternGraph &p);

inline int separator_cost(const Separator2 &sep)
{
    return static_cast<int>(sep.s.size() + std::max(sep.h1.size(), sep.h2.size()));
}

struct IndependentSet {
    int size = 0;
    std::vector<int> nodes;
};

IndependentSet independence_number(const PatternGraph &p);

// Width of a user-supplied tree decomposition, after checking it covers every
// node and edge, that bags containing a node are connected, and that the
// bag-tree is a tree. Throws std::invalid_argument otherwise.
int tree_decomposition_width(const PatternGraph &p, const std::vector<std::vector<int>> &bags,
                             const std::vector<std::pair<int, int>> &tree_edges);

struct EdgeDelete {
    int u = 0;
    int v = 0;
    friend bool operator==(const EdgeDelete &, const EdgeDelete &) = default;
};

// Merge u and v (adjacent or not). The merged node takes min(u, v); ids above
// max(u, v) shift down by one.
struct Contract {
    int u = 0;
    int v = 0;
    int merged_id() const { return std::min(u, v); }
    friend bool operator==(const Contract &, const Contract &) = default;
};

using VmOp = std::variant<EdgeDelete, Contract>;

std::string describe(const VmOp &op);

// Node id of `node` after contracting {c.u, c.v}.
int contracted_id(const Contract &c, int node);

PatternGraph apply_vm_op(const PatternGraph &p, const VmOp &op);

// perm[i] is the node of `b` that node i of `a` maps to.
std::optional<std::vector<int>> find_isomorphism(const PatternGraph &a, const PatternGraph &b);

// Bounded search for at most `budget` operations turning `h2` into a graph
// isomorphic to `h1`. An empty result is not a proof that h1 is not a
// vertex-minor of h2.
std::optional<std::vector<VmOp>> find_vm_sequence(const PatternGraph &h1, const PatternGraph &h2, int budget);

PatternGraph read_pattern(std::istream &in);
void write_pattern(std::ostream &out, const PatternGraph &p);

} // namespace ewh
