#pragma once

#include <ewh/hgraph.hpp>
#include <ewh/ksum.hpp>
#include <ewh/pattern.hpp>

#include <cstddef>
#include <memory>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace ewh {

// Each reduction owns its output instance and the data its witness mappers
// need. map_back translates an output witness into an input witness;
// map_forward (where the construction provides one) goes the other way.

// k-SUM to EW(H) for any k-node pattern: node (i, j) carries x_{i,j}, every
// edge weight is 0. Lists must share one length n.
class KSumToAny {
public:
    KSumToAny(const KSumInstance &inst, const PatternGraph &pattern);

    const HPartiteInstance &instance() const { return out_; }
    KSolution map_back(const HSubgraph &sg) const;
    HSubgraph map_forward(const KSolution &sol) const;

private:
    HPartiteInstance out_;
};

// k-SUM to EW(matching_k) on super-nodes of size r = ceil(sqrt(n)): list i is
// laid out row-major on super-edge (2i, 2i+1), padded with poison to r^2.
class KSumToMatching {
public:
    explicit KSumToMatching(const KSumInstance &inst);

    const HPartiteInstance &instance() const { return out_; }
    std::size_t side() const { return r_; }
    KSolution map_back(const HSubgraph &sg) const;
    HSubgraph map_forward(const KSolution &sol) const;

private:
    std::vector<std::size_t> lengths_;
    std::size_t r_;
    HPartiteInstance out_;
};

// A sequence of k-SUM instances (common k, n, target) to EW(star_k): centre
// vertex i encodes instance i and the edge (v_{k,i}, v_{j,l}) carries
// x^(i)_{j,l}. Super-nodes have max(n, sequence length) slots; missing
// instances and entries are poison.
class SequenceToStar {
public:
    explicit SequenceToStar(const KSumSequence &seq);

    const HPartiteInstance &instance() const { return out_; }

    struct Witness {
        std::size_t instance_index = 0;
        KSolution solution;
    };
    Witness map_back(const HSubgraph &sg) const;
    HSubgraph map_forward(const Witness &w) const;

private:
    std::size_t count_;
    std::size_t n_;
    int k_;
    HPartiteInstance out_;
};

// Convolution (K+1)-SUM to EW(path_K). Super-edge (i, i+1) at (r, s) with
// 0 <= s - r < n carries x_{i+1, s-r}, plus x_{0, r} on the first edge and
// x_{K, s} on the last; other pairs are poison. Node slot a_i is the prefix
// sum b_0 + ... + b_i of the convolution indices.
class ConvToPath {
public:
    explicit ConvToPath(const ConvKSumInstance &inst);

    const HPartiteInstance &instance() const { return out_; }
    KSolution map_back(const HSubgraph &sg) const;
    HSubgraph map_forward(const KSolution &sol) const;

private:
    int path_nodes_;
    HPartiteInstance out_;
};

// EW(H) to EW(H') where H = H' minus edge {u, v}: the new super-edge is all 0.
class EdgeDeleteLift {
public:
    EdgeDeleteLift(const HPartiteInstance &inst, const PatternGraph &hprime, int u, int v);

    const HPartiteInstance &instance() const { return out_; }
    HSubgraph map_back(const HSubgraph &sg) const { return sg; }
    HSubgraph map_forward(const HSubgraph &sg) const { return sg; }

private:
    HPartiteInstance out_;
};

// EW(H) to EW(H') where H is H' with nodes u1, u2 contracted. Every vertex of
// the contracted super-node gets two copies; copy a gains +a*K at u1 and -a*K
// at u2, with K = (d + k + 1) * (W + 1), d = |E(H)|, k = |V(H)| and W the
// largest magnitude among weights and target. A target-hitting H'-subgraph
// must therefore pick equal copies. When both u1 and u2 see a neighbour, or
// u1-u2 is an edge, the duplicate super-edge carries zeros.
class ContractLift {
public:
    ContractLift(const HPartiteInstance &inst, const PatternGraph &hprime, int u1, int u2);

    const HPartiteInstance &instance() const { return out_; }
    Weight multiplier() const { return K_; }
    HSubgraph map_back(const HSubgraph &sg) const;
    HSubgraph map_forward(const HSubgraph &sg) const;

private:
    Contract op_;
    int hprime_nodes_;
    Weight K_;
    HPartiteInstance out_;
};

// Carries an instance to an isomorphic relabelled pattern; perm[y] is the node
// of the source pattern that node y of `target` stands for.
class RelabelLift {
public:
    RelabelLift(const HPartiteInstance &inst, const PatternGraph &target, std::vector<int> perm);

    const HPartiteInstance &instance() const { return out_; }
    HSubgraph map_back(const HSubgraph &sg) const;
    HSubgraph map_forward(const HSubgraph &sg) const;

private:
    std::vector<int> perm_;
    HPartiteInstance out_;
};

// EW(H1) to EW(H2) where applying `ops` to H2 (via apply_vm_op) yields a graph
// isomorphic to H1. `perm` optionally gives that isomorphism (end-graph node
// -> H1 node); it is searched for otherwise.
class VmChain {
public:
    VmChain(const HPartiteInstance &inst, const PatternGraph &h2, const std::vector<VmOp> &ops,
            std::optional<std::vector<int>> perm = std::nullopt);

    const HPartiteInstance &instance() const { return out_; }
    HSubgraph map_back(const HSubgraph &sg) const;
    HSubgraph map_forward(const HSubgraph &sg) const;

private:
    struct Step {
        std::optional<ContractLift> contract;
        std::optional<EdgeDeleteLift> edge_delete;
    };
    std::optional<RelabelLift> relabel_;
    // In lifting order: steps_[0] undoes the last op, steps_.back() the first.
    std::vector<Step> steps_;
    HPartiteInstance out_;
};

// EW(H2) with a universal apex to n instances of EW(H1 = H2 - apex). Instance
// a fixes the apex at slot a: apex edges fold into H1 node weights and the
// target drops by the apex vertex's node weight.
class ApexSplit {
public:
    ApexSplit(const HPartiteInstance &inst, int apex);

    const std::vector<HPartiteInstance> &instances() const { return out_; }
    int apex() const { return apex_; }

    HSubgraph map_back(std::size_t instance_index, const HSubgraph &sg) const;
    std::pair<std::size_t, HSubgraph> map_forward(const HSubgraph &sg) const;

private:
    int apex_;
    std::vector<HPartiteInstance> out_;
};

// Exact-Weight-H on a general graph to d-SUM, d = |E(H)|. Per color-coding
// round the H-partite instance is lifted along H <=vm matching_d (contracting
// the copies of each node), and the S = {} d-separator of matching_d gives
// one d-SUM instance whose list j holds the candidate weights of pattern edge
// j. Entries coming from non-edges of the graph are dropped, so every list has
// at most m entries.
class EwToKSumEdges {
public:
    EwToKSumEdges(const GeneralGraphInstance &g, std::uint64_t seed, int repetitions = 3);

    std::size_t rounds() const { return coloring_.rounds(); }
    // Operations turning matching_d into (a relabelling of) the pattern.
    const std::vector<VmOp> &chain() const { return ops_; }

    struct Round {
        std::size_t index = 0;
        KSumInstance instance;
        // origin[j][r] = (a, b): graph vertices of entry r of list j.
        std::vector<std::vector<std::pair<std::size_t, std::size_t>>> origin;
        std::shared_ptr<const VmChain> lift;
        // Some pattern edge has no candidate graph edge this round; the round
        // is a no and `instance` is not a valid k-SUM instance.
        bool empty_list = false;
    };
    Round round(std::size_t r) const;

    std::vector<std::size_t> map_back(const Round &round, const KSolution &solution) const;

    struct Outcome {
        std::optional<std::vector<std::size_t>> map;
        std::size_t round = 0;
        std::size_t longest_list = 0;
        SolveStats stats;
    };
    Outcome solve(KSumSolver solver) const;

private:
    GeneralGraphInstance g_;
    GeneralToHPartite coloring_;
    PatternGraph matching_;
    std::vector<VmOp> ops_;
    std::vector<int> perm_;
};

// Stable identifiers used by the CLI.
inline constexpr std::string_view kReductionIds[] = {"ksum-to-any", "ksum-to-matching", "seq-to-star",
                                                    "conv-to-path", "vm-edge-del",      "vm-contract",
                                                    "vm-chain",     "apex-split",       "ew-to-ksum-edges"};

} // namespace ewh
