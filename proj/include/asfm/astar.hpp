#ifndef ASFM_ASTAR_HPP
#define ASFM_ASTAR_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

#include "greedy.hpp"
#include "limits.hpp"
#include "set_function.hpp"
#include "subset.hpp"

namespace asfm {

struct HeuristicResult {
    double h = 0.0;
    Subset completion;  // the feasible solution S' derived from the node
};

/// Admissible completion bound for a prefix-structured node: marginals of the
/// elements beyond the node's largest index, top (k-|S|) of them scaled by
/// 1/gamma. Falls back to the exact completion marginal when everything fits
/// in the budget or a chosen marginal is zero (then the scaled sum is not
/// needed for admissibility).
inline HeuristicResult heuristic_h(const EvaluatedFunction& f, const Subset& s,
                                   double gamma) {
    const GroundSet gs = f.ground();
    HeuristicResult res;
    res.completion = s;
    const int p = gs.k - s.cardinality();
    if (p <= 0) return res;

    const int smax = s.max_element();
    std::vector<std::pair<double, int>> outside;  // (marginal, element), i > smax
    for (int i = smax + 1; i < gs.n; ++i) outside.emplace_back(f.marginal(i, s), i);
    if (outside.empty()) return res;

    if (static_cast<int>(outside.size()) <= p) {
        Subset full = s;
        for (auto& [m, i] : outside) full.add(i);
        res.completion = full;
        res.h = f.value(full) - f.value(s);
        return res;
    }

    std::sort(outside.begin(), outside.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    Subset completion = s;
    double sum = 0.0;
    bool zero_marginal = false;
    for (int t = 0; t < p; ++t) {
        completion.add(outside[t].second);
        sum += outside[t].first;
        if (outside[t].first <= 0.0) zero_marginal = true;
    }
    res.completion = completion;
    res.h = zero_marginal ? f.value(completion) - f.value(s) : sum / gamma;
    return res;
}

struct AstarResult {
    Subset best;
    double value = 0.0;
    std::uint64_t nodes = 0;  // nodes extracted from the open list
    SolveStatus status = SolveStatus::Optimal;
};

/// Best-first search over prefix-structured nodes (children of S add one
/// element beyond its largest index). Returns the optimum when run to
/// completion.
inline AstarResult astar_solve(const EvaluatedFunction& f, const GroundSet& gs,
                               double gamma, const SolveLimits& limits = {}) {
    Stopwatch clock;

    struct Node {
        Subset subset;
        double fbar;
        double fval;
        Subset completion;
    };
    // max-heap on fbar; ties prefer larger f, then lexicographically smaller subsets
    auto lower_priority = [](const Node& a, const Node& b) {
        if (a.fbar != b.fbar) return a.fbar < b.fbar;
        if (a.fval != b.fval) return a.fval < b.fval;
        return Subset::compare(a.subset, b.subset) > 0;
    };
    std::priority_queue<Node, std::vector<Node>, decltype(lower_priority)> open(
        lower_priority);

    GreedyChain seed = greedy(f, gs);
    AstarResult res;
    res.best = seed.solution();
    res.value = seed.value();

    {
        Subset root(gs.n);
        HeuristicResult h = heuristic_h(f, root, gamma);
        open.push({root, f.value(root) + h.h, f.value(root), h.completion});
    }

    while (!open.empty()) {
        if (clock.expired(limits) || (limits.node_limit && res.nodes >= limits.node_limit)) {
            res.status = SolveStatus::Limit;
            return res;
        }
        Node node = open.top();
        open.pop();
        ++res.nodes;
        if (node.fbar <= res.value) continue;

        double completion_value = f.value(node.completion);
        if (completion_value > res.value) {
            res.value = completion_value;
            res.best = node.completion;
        }

        if (node.subset.cardinality() >= gs.k) continue;
        for (int i = node.subset.max_element() + 1; i < gs.n; ++i) {
            Subset child = node.subset.with(i);
            HeuristicResult h = heuristic_h(f, child, gamma);
            double fval = f.value(child);
            double fbar = fval + h.h;
            if (fbar > res.value) open.push({child, fbar, fval, h.completion});
        }
    }
    res.status = SolveStatus::Optimal;
    return res;
}

}  // namespace asfm

#endif
