#ifndef ASFM_BRANCH_AND_CUT_HPP
#define ASFM_BRANCH_AND_CUT_HPP

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "constraint_generation.hpp"
#include "limits.hpp"
#include "set_function.hpp"
#include "subset.hpp"

namespace asfm {

struct BcStats {
    std::uint64_t nodes_processed = 0;
    std::uint64_t nodes_pruned_inherited = 0;
    std::uint64_t nodes_pruned_solved = 0;
    std::uint64_t subsolver_calls = 0;
    std::vector<std::pair<std::uint64_t, double>> incumbent_history;  // (node id, value)
};

struct BcNodeTraceEntry {
    std::uint64_t id = 0;
    int depth = 0;    // |S0 u S1|
    int s1_card = 0;
    double zbar = 0.0;
    double z = 0.0;   // NaN when pruned before solving
    double f_best = 0.0;
    std::string action;  // pruned-inherited | pruned-solved | branched | leaf
};

struct BcResult {
    Subset best;
    double value = 0.0;
    double bound = 0.0;  // max over open nodes on limit, incumbent on optimality
    SolveStatus status = SolveStatus::Optimal;
    BcStats stats;
    std::vector<CgTraceEntry> warmup_trace;
    std::vector<BcNodeTraceEntry> node_trace;
};

/// Branch-and-cut: depth-first search over variable-fixing nodes (S0, S1),
/// warm-started by the first k iterations of improved constraint generation
/// and reusing its growing cut pool at every node. The 1-branch child is
/// pushed last, so it is explored first.
inline BcResult bc_icg_solve(const EvaluatedFunction& f, const GroundSet& gs, int lambda,
                             const SolveLimits& limits = {}, std::uint64_t rng_seed = 0,
                             bool keep_node_trace = false) {
    IcgEngine engine(f, gs, lambda, rng_seed);
    BcResult res;

    for (int it = 0; it < gs.k; ++it) {
        if (engine.iterate()) {
            res.best = engine.best();
            res.value = engine.best_value();
            res.bound = engine.bound();
            res.status = SolveStatus::Optimal;
            res.stats.subsolver_calls = engine.subsolver_calls();
            res.warmup_trace = engine.trace();
            return res;
        }
    }
    res.warmup_trace = engine.trace();

    struct BcNode {
        Subset fixed_zero;
        Subset fixed_one;
        double inherited_bound;
    };
    std::vector<BcNode> stack;
    stack.push_back({Subset(gs.n), Subset(gs.n),
                     std::numeric_limits<double>::infinity()});

    std::uint64_t node_id = 0;
    while (!stack.empty()) {
        if (engine.expired(limits) ||
            (limits.node_limit && res.stats.nodes_processed >= limits.node_limit)) {
            res.status = SolveStatus::Limit;
            res.best = engine.best();
            res.value = engine.best_value();
            res.bound = engine.best_value();
            for (const BcNode& open : stack)
                res.bound = std::max(res.bound, open.inherited_bound);
            res.stats.subsolver_calls = engine.subsolver_calls();
            return res;
        }
        BcNode node = stack.back();
        stack.pop_back();
        ++res.stats.nodes_processed;
        ++node_id;

        BcNodeTraceEntry entry;
        entry.id = node_id;
        entry.depth = node.fixed_zero.cardinality() + node.fixed_one.cardinality();
        entry.s1_card = node.fixed_one.cardinality();
        entry.zbar = node.inherited_bound;
        entry.z = std::numeric_limits<double>::quiet_NaN();

        if (node.inherited_bound <= engine.best_value() + kValueTol) {
            ++res.stats.nodes_pruned_inherited;
            if (keep_node_trace) {
                entry.f_best = engine.best_value();
                entry.action = "pruned-inherited";
                res.node_trace.push_back(entry);
            }
            continue;
        }

        BipSolution sol = engine.solve_node(node.fixed_zero, node.fixed_one);
        entry.z = sol.z;

        double before = engine.best_value();
        engine.grow_pool(sol.y, sol.tight_rows);  // also offers sol.y and samples
        if (engine.best_value() > before)
            res.stats.incumbent_history.emplace_back(node_id, engine.best_value());

        if (sol.z <= engine.best_value() + kValueTol) {
            ++res.stats.nodes_pruned_solved;
            if (keep_node_trace) {
                entry.f_best = engine.best_value();
                entry.action = "pruned-solved";
                res.node_trace.push_back(entry);
            }
            continue;
        }

        const int fixed = node.fixed_zero.cardinality() + node.fixed_one.cardinality();
        if (fixed <= gs.n - 1 && node.fixed_one.cardinality() <= gs.k - 1) {
            int i_star = -1;
            double best_score = -std::numeric_limits<double>::infinity();
            for (int i = 0; i < gs.n; ++i) {
                if (node.fixed_zero.contains(i) || node.fixed_one.contains(i)) continue;
                double score = f.value(node.fixed_one.with(i));
                if (score > best_score) {
                    best_score = score;
                    i_star = i;
                }
            }
            stack.push_back({node.fixed_zero.with(i_star), node.fixed_one, sol.z});
            stack.push_back({node.fixed_zero, node.fixed_one.with(i_star), sol.z});
            if (keep_node_trace) entry.action = "branched";
        } else {
            if (keep_node_trace) entry.action = "leaf";
        }
        if (keep_node_trace) {
            entry.f_best = engine.best_value();
            res.node_trace.push_back(entry);
        }
    }

    res.best = engine.best();
    res.value = engine.best_value();
    res.bound = engine.best_value();
    res.status = SolveStatus::Optimal;
    res.stats.subsolver_calls = engine.subsolver_calls();
    return res;
}

}  // namespace asfm

#endif
