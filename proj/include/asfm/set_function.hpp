#ifndef ASFM_SET_FUNCTION_HPP
#define ASFM_SET_FUNCTION_HPP

#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "subset.hpp"

namespace asfm {

inline constexpr double kValueTol = 1e-9;

/// Set-function oracle with memoization, oracle-call accounting, and a
/// declared lower bound on the submodular ratio.
///
/// Accounting rule: the call counter advances once per evaluation that
/// actually reaches the underlying evaluator; memo hits are free. A marginal
/// therefore costs the number of uncached full evaluations it triggers
/// (0, 1, or 2).
class EvaluatedFunction {
public:
    using Evaluator = std::function<double(const Subset&)>;

    EvaluatedFunction(GroundSet gs, Evaluator eval, double gamma_lower = 1.0)
        : gs_(gs), eval_(std::move(eval)), gamma_lower_(gamma_lower) {
        if (gamma_lower_ <= 0.0 || gamma_lower_ > 1.0)
            throw std::invalid_argument("EvaluatedFunction: gamma_lower must be in (0,1]");
    }

    const GroundSet& ground() const { return gs_; }
    double gamma_lower() const { return gamma_lower_; }

    void set_memo_enabled(bool on) { memo_enabled_ = on; }

    double value(const Subset& s) const {
        if (memo_enabled_) {
            auto it = memo_.find(s);
            if (it != memo_.end()) return it->second;
        }
        double v = eval_(s);
        ++oracle_calls_;
        if (memo_enabled_ && memo_.size() < kMemoCap) memo_.emplace(s, v);
        return v;
    }

    /// f({i} | S) = f(S u {i}) - f(S). Requires i not in S.
    double marginal(int i, const Subset& s) const {
        if (s.contains(i))
            throw std::invalid_argument("marginal: element already present");
        return value(s.with(i)) - value(s);
    }

    /// Candidate with the largest marginal gain; ties broken by smallest index.
    int argmax_marginal(const std::vector<int>& candidates, const Subset& s) const {
        if (candidates.empty())
            throw std::invalid_argument("argmax_marginal: empty candidate set");
        int best = -1;
        double best_gain = -std::numeric_limits<double>::infinity();
        for (int i : candidates) {
            double g = marginal(i, s);
            if (g > best_gain || (g == best_gain && (best < 0 || i < best))) {
                best_gain = g;
                best = i;
            }
        }
        return best;
    }

    std::uint64_t oracle_calls() const { return oracle_calls_; }

private:
    // Cap keeps the cache bounded on large ground sets where solvers touch
    // millions of distinct subsets.
    static constexpr std::size_t kMemoCap = std::size_t{1} << 17;

    GroundSet gs_;
    Evaluator eval_;
    double gamma_lower_;
    bool memo_enabled_ = true;
    mutable std::uint64_t oracle_calls_ = 0;
    mutable std::unordered_map<Subset, double, SubsetHash> memo_;
};

}  // namespace asfm

#endif
