#pragma once

#include <ewh/pattern.hpp>
#include <ewh/stats.hpp>
#include <ewh/weight.hpp>

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

namespace ewh {

// Complete H-partite weighted graph: super-node i holds vertices v_{i,0..n-1};
// super-edge e (the e-th edge {u < v} of the pattern) is a full n x n matrix
// indexed [a_u][a_v].
class HPartiteInstance {
public:
    HPartiteInstance() = default;
    HPartiteInstance(PatternGraph pattern, std::size_t n, Weight target = 0);

    const PatternGraph &pattern() const { return pattern_; }
    std::size_t n() const { return n_; }
    int k() const { return pattern_.size(); }
    Weight target() const { return target_; }
    void set_target(Weight t) { target_ = t; }

    Weight node(int i, std::size_t a) const { return node_weights_[static_cast<std::size_t>(i)][a]; }
    Weight &node(int i, std::size_t a) { return node_weights_[static_cast<std::size_t>(i)][a]; }

    // Weight on super-edge `e` between v_{u,a} and v_{v,b}, where {u < v} is
    // pattern edge e.
    Weight edge(int e, std::size_t a, std::size_t b) const { return edge_weights_[static_cast<std::size_t>(e)][a * n_ + b]; }
    Weight &edge(int e, std::size_t a, std::size_t b) { return edge_weights_[static_cast<std::size_t>(e)][a * n_ + b]; }

    const std::vector<Weight> &edge_matrix(int e) const { return edge_weights_[static_cast<std::size_t>(e)]; }
    std::vector<Weight> &edge_matrix(int e) { return edge_weights_[static_cast<std::size_t>(e)]; }

    // Max |w| over all node and edge weights.
    Weight max_magnitude() const;

private:
    PatternGraph pattern_;
    std::size_t n_ = 0;
    std::vector<std::vector<Weight>> node_weights_;
    std::vector<std::vector<Weight>> edge_weights_;
    Weight target_ = 0;
};

// One vertex per super-node: assignment[i] selects v_{i, assignment[i]}.
struct HSubgraph {
    std::vector<std::size_t> assignment;

    friend bool operator==(const HSubgraph &, const HSubgraph &) = default;
};

struct WeightedEdge {
    std::size_t u = 0;
    std::size_t v = 0;
    Weight w = 0;
};

// Arbitrary edge-weighted graph plus the pattern and target of an
// Exact-Weight-H query.
struct GeneralGraphInstance {
    std::size_t nv = 0;
    std::vector<WeightedEdge> edges;
    PatternGraph pattern;
    Weight target = 0;
};

// Dense adjacency lookup over a GeneralGraphInstance.
class GraphIndex {
public:
    explicit GraphIndex(const GeneralGraphInstance &g);

    bool has_edge(std::size_t u, std::size_t v) const { return present_[u * nv_ + v]; }
    Weight weight(std::size_t u, std::size_t v) const { return weights_[u * nv_ + v]; }

private:
    std::size_t nv_;
    std::vector<bool> present_;
    std::vector<Weight> weights_;
};

// Poison weight for an H-partite instance: a selection containing any poison
// node or edge exceeds every reachable target.
Weight poison_for(const PatternGraph &pattern, Weight bound);

void validate_general(const GeneralGraphInstance &g);

Weight weight_of(const HPartiteInstance &inst, const HSubgraph &sg);

// Mapped edge-weight sum of `map` (pattern node -> graph vertex); nullopt if
// the map is not injective or misses a pattern edge.
std::optional<Weight> mapped_weight(const GeneralGraphInstance &g, const std::vector<std::size_t> &map);

HPartiteInstance random_instance(const PatternGraph &pattern, std::size_t n, std::int64_t bound, std::uint64_t seed,
                                 Weight target = 0);

struct Planted {
    HPartiteInstance instance;
    HSubgraph solution;
};

// Picks a random assignment and adjusts one weight so it hits the target:
// the first pattern edge, or a node weight when the pattern has no edges.
Planted plant_solution(const HPartiteInstance &inst, std::uint64_t seed);

// Random G(nv, density) graph with weights in [-bound, bound].
GeneralGraphInstance random_general(const PatternGraph &pattern, std::size_t nv, double density, std::int64_t bound,
                                    std::uint64_t seed, Weight target = 0);

// Embeds a copy of the pattern on random distinct vertices and adjusts one of
// its edge weights so that the copy hits the target. Returns the copy's map.
std::vector<std::size_t> plant_general(GeneralGraphInstance &g, std::uint64_t seed);

struct EwResult {
    std::optional<HSubgraph> solution;
    SolveStats stats;
};

// Lexicographically first assignment hitting the target.
EwResult brute_force_ew(const HPartiteInstance &inst);

struct GeneralResult {
    std::optional<std::vector<std::size_t>> map;
    SolveStats stats;
};

// First injective map (lexicographic) whose image carries every pattern edge
// and whose mapped edge weights sum to the target.
GeneralResult brute_force_general(const GeneralGraphInstance &g);

struct MinWeightResult {
    Weight value = 0;
    HSubgraph argmin;
    SolveStats stats;
};

MinWeightResult brute_force_min_weight(const HPartiteInstance &inst);

// H-partite to general graph. Vertex v_{i,a} becomes i*n + a. Edges of the
// z-th super-edge (z = 1..m) gain B^z, with
//   B = m * (2*k*n*W + 1) + 1,  W = max(|weights|, |target|),
// node weights are folded into the first incident pattern edge, and the
// target becomes target + sum_z B^z. Any copy of H hitting the new target
// uses every super-edge exactly once.
class HPartiteToGeneral {
public:
    explicit HPartiteToGeneral(const HPartiteInstance &inst);

    const GeneralGraphInstance &instance() const { return out_; }
    Weight base() const { return base_; }

    HSubgraph map_back(const std::vector<std::size_t> &map) const;
    std::vector<std::size_t> map_forward(const HSubgraph &sg) const;

private:
    std::size_t n_;
    int k_;
    Weight base_;
    GeneralGraphInstance out_;
};

// General graph to H-partite by color coding. Each of c * k^k * ceil(log2 nv)
// rounds colors every vertex uniformly in [0, k). Super-node i has nv slots;
// slot a is vertex a, and non-members (color != i) carry a poison node
// weight. Super-edge entries are the graph weight when the edge exists and
// both endpoints carry the right colors, poison otherwise.
class GeneralToHPartite {
public:
    GeneralToHPartite(const GeneralGraphInstance &g, std::uint64_t seed, int repetitions = 3);

    std::size_t rounds() const { return rounds_; }
    Weight poison() const { return poison_; }
    std::vector<int> coloring(std::size_t round) const;
    HPartiteInstance instance(std::size_t round) const;

    // Vertex map of a yes-witness from any round.
    std::vector<std::size_t> map_back(const HSubgraph &sg) const;

    struct Outcome {
        std::optional<std::vector<std::size_t>> map;
        std::size_t round = 0;
        SolveStats stats;
    };
    // Runs brute_force_ew on the rounds in order until one is a yes.
    Outcome solve() const;

private:
    GeneralGraphInstance g_;
    GraphIndex index_;
    std::uint64_t seed_;
    std::size_t rounds_;
    Weight poison_;
};

HPartiteInstance read_hpartite(std::istream &in);
void write_hpartite(std::ostream &out, const HPartiteInstance &inst);
GeneralGraphInstance read_general(std::istream &in);
void write_general(std::ostream &out, const GeneralGraphInstance &g);

} // namespace ewh
