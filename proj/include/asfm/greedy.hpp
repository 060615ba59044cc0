#ifndef ASFM_GREEDY_HPP
#define ASFM_GREEDY_HPP

#include <vector>

#include "set_function.hpp"
#include "subset.hpp"

namespace asfm {

/// Greedy solution together with its nested prefix chain S_[0] c ... c S_[k].
struct GreedyChain {
    std::vector<int> order;        // elements in selection order, size k
    std::vector<Subset> prefixes;  // k+1 nested selections
    std::vector<double> values;    // f at each prefix

    const Subset& solution() const { return prefixes.back(); }
    double value() const { return values.back(); }
};

/// Runs exactly k greedy steps (zero-marginal steps included, so the full
/// prefix chain always exists for cut-pool seeding). Ties pick the smallest
/// element index.
inline GreedyChain greedy(const EvaluatedFunction& f, const GroundSet& gs) {
    GreedyChain chain;
    Subset current(gs.n);
    chain.prefixes.push_back(current);
    chain.values.push_back(f.value(current));
    for (int step = 0; step < gs.k; ++step) {
        std::vector<int> candidates;
        for (int i = 0; i < gs.n; ++i)
            if (!current.contains(i)) candidates.push_back(i);
        int pick = f.argmax_marginal(candidates, current);
        current.add(pick);
        chain.order.push_back(pick);
        chain.prefixes.push_back(current);
        chain.values.push_back(f.value(current));
    }
    return chain;
}

}  // namespace asfm

#endif
