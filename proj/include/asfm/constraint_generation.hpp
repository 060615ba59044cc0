#ifndef ASFM_CONSTRAINT_GENERATION_HPP
#define ASFM_CONSTRAINT_GENERATION_HPP

#include <cstdint>
#include <limits>
#include <random>
#include <unordered_set>
#include <vector>

#include "bip.hpp"
#include "greedy.hpp"
#include "limits.hpp"
#include "set_function.hpp"
#include "subset.hpp"

namespace asfm {

/// The sets Q (solver-produced solutions) and Q+ (everything inducing a
/// constraint row: Q plus greedy prefixes and SUB-ICG samples), with
/// per-element occurrence counts over Q+.
class CutPool {
public:
    explicit CutPool(int n) : occurrence_(n, 0) {}

    const std::vector<CutRow>& rows() const { return rows_; }
    const std::vector<Subset>& extended() const { return extended_; }
    const std::vector<Subset>& generated() const { return generated_; }

    bool contains(const Subset& s) const { return index_.count(s) > 0; }

    /// Adds a member of Q+ and its induced row; returns false on duplicates.
    bool add_extended(const EvaluatedFunction& f, const Subset& s, double gamma,
                      RowMode mode) {
        if (!index_.insert(s).second) return false;
        rows_.push_back(make_cut_row(f, s, gamma, mode));
        extended_.push_back(s);
        s.for_each([&](int i) { ++occurrence_[i]; });
        return true;
    }

    void add_generated(const Subset& s) {
        if (generated_index_.insert(s).second) generated_.push_back(s);
    }

    /// Occurrence rates p_i = q_i / sum_j q_j over Q+.
    std::vector<double> occurrence_rates() const {
        double total = 0.0;
        for (int q : occurrence_) total += q;
        std::vector<double> p(occurrence_.size(), 0.0);
        if (total > 0.0)
            for (std::size_t i = 0; i < p.size(); ++i) p[i] = occurrence_[i] / total;
        return p;
    }

private:
    std::vector<CutRow> rows_;
    std::vector<Subset> extended_;
    std::vector<Subset> generated_;
    std::unordered_set<Subset, SubsetHash> index_;
    std::unordered_set<Subset, SubsetHash> generated_index_;
    std::vector<int> occurrence_;
};

struct CgTraceEntry {
    int t = 0;
    double z = 0.0;
    double f_solution = 0.0;  // f(S^(t))
    double f_best = 0.0;      // incumbent after this iteration
    std::size_t q_size = 0;
    std::size_t qplus_size = 0;
    std::uint64_t subsolver_nodes = 0;
    std::int64_t millis = 0;
};

struct CgResult {
    Subset best;
    double value = 0.0;
    double bound = 0.0;  // final z
    SolveStatus status = SolveStatus::Optimal;
    std::uint64_t iterations = 0;
    std::uint64_t subsolver_calls = 0;
    std::uint64_t subsolver_nodes = 0;
    std::vector<CgTraceEntry> trace;
};

enum class CgMode {
    SfmExact,  // unscaled rows, valid only for exactly submodular f
    Asfm,      // scaled rows with the declared ratio lower bound
};

/// Constraint generation (CG when mode is SfmExact, MCG otherwise): seed the
/// pool with the greedy prefix chain, then alternate reduced-BIP solves and
/// single-cut additions until the bound meets the incumbent. The node limit,
/// when set, caps the number of iterations.
inline CgResult cg_solve(const EvaluatedFunction& f, const GroundSet& gs, CgMode mode,
                         const SolveLimits& limits = {}) {
    Stopwatch clock;
    const RowMode row_mode = mode == CgMode::SfmExact ? RowMode::Unscaled : RowMode::Scaled;
    const double gamma = f.gamma_lower();

    CutPool pool(gs.n);
    GreedyChain chain = greedy(f, gs);
    for (const Subset& prefix : chain.prefixes) {
        pool.add_extended(f, prefix, gamma, row_mode);
        pool.add_generated(prefix);
    }

    CgResult res;
    res.best = chain.solution();
    res.value = chain.value();

    for (int t = 1;; ++t) {
        ReducedBipModel model(pool.rows(), gs);
        BipSolution sol = solve_bip(model, res.value);
        ++res.subsolver_calls;
        res.subsolver_nodes += sol.nodes;
        res.iterations = static_cast<std::uint64_t>(t);

        double f_st = f.value(sol.y);
        if (f_st > res.value) {
            res.value = f_st;
            res.best = sol.y;
        }
        res.bound = sol.z;
        res.trace.push_back({t, sol.z, f_st, res.value, pool.generated().size(),
                             pool.extended().size(), sol.nodes, clock.elapsed_ms()});

        if (sol.z - res.value <= kValueTol) {
            res.status = SolveStatus::Optimal;
            return res;
        }
        if (clock.expired(limits) ||
            (limits.node_limit && res.iterations >= limits.node_limit)) {
            res.status = SolveStatus::Limit;
            return res;
        }
        if (!pool.add_extended(f, sol.y, gamma, row_mode)) {
            // numerically stalled: a pool member re-emerged with an open gap
            res.status = SolveStatus::Limit;
            return res;
        }
        pool.add_generated(sol.y);
    }
}

/// Randomized cut minting: blend a tight row's source with the current
/// solution, weighting elements by their occurrence rates over Q+. Returns at
/// most lambda subsets absent from Q+; total draws are capped at 20*lambda so
/// exhausted candidate spaces terminate.
inline std::vector<Subset> sub_icg(const CutPool& pool,
                                   const std::vector<int>& tight_rows, const Subset& s_t,
                                   int k, int lambda, std::mt19937_64& rng) {
    std::vector<Subset> out;
    if (tight_rows.empty()) return out;
    std::unordered_set<Subset, SubsetHash> seen;
    std::vector<double> p = pool.occurrence_rates();
    std::uniform_int_distribution<std::size_t> pick_tight(0, tight_rows.size() - 1);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    const long max_draws = 20L * lambda;
    for (long draw = 0; draw < max_draws && static_cast<int>(out.size()) < lambda;
         ++draw) {
        const Subset& s_nat = pool.rows()[tight_rows[pick_tight(rng)]].source;
        Subset u = s_nat.union_with(s_t);
        std::vector<std::pair<double, int>> r;  // (draw, element), ascending elements
        u.for_each([&](int i) { r.emplace_back(unif(rng) * p[i], i); });

        Subset candidate(s_t.capacity());
        if (s_nat.cardinality() == k) {
            std::sort(r.begin(), r.end(), [](const auto& a, const auto& b) {
                return a.first != b.first ? a.first > b.first : a.second < b.second;
            });
            for (int t = 0; t < k && t < static_cast<int>(r.size()); ++t)
                candidate.add(r[t].second);
        } else {
            int best = -1;
            double best_r = -1.0;
            for (const auto& [ri, i] : r)
                if (!s_nat.contains(i) && s_t.contains(i) && ri > best_r) {
                    best_r = ri;
                    best = i;
                }
            if (best < 0) continue;  // S^(t) adds nothing beyond S-natural
            candidate = s_nat.with(best);
        }
        if (!pool.contains(candidate) && seen.insert(candidate).second)
            out.push_back(candidate);
    }
    return out;
}

/// Improved constraint generation, exposed as a stepwise engine so the
/// branch-and-cut warm-up can share its pool and incumbent.
class IcgEngine {
public:
    IcgEngine(const EvaluatedFunction& f, const GroundSet& gs, int lambda,
              std::uint64_t rng_seed)
        : f_(f), gs_(gs), lambda_(lambda), rng_(rng_seed), pool_(gs.n) {
        if (lambda < 1) throw std::invalid_argument("IcgEngine: lambda must be >= 1");
        GreedyChain chain = greedy(f_, gs_);
        for (const Subset& prefix : chain.prefixes)
            pool_.add_extended(f_, prefix, f_.gamma_lower(), RowMode::Scaled);
        pool_.add_generated(chain.solution());
        best_ = chain.solution();
        best_value_ = chain.value();
        bound_ = std::numeric_limits<double>::infinity();
    }

    /// One constraint-generation iteration; true once optimality is proven.
    bool iterate() {
        ++t_;
        ReducedBipModel model(pool_.rows(), gs_);
        BipSolution sol = solve_bip(model, best_value_);
        ++subsolver_calls_;
        subsolver_nodes_ += sol.nodes;

        double f_st = f_.value(sol.y);
        if (f_st > best_value_) {
            best_value_ = f_st;
            best_ = sol.y;
        }
        bound_ = sol.z;

        bool optimal = sol.z - best_value_ <= kValueTol;
        if (!optimal) {
            grow_pool(sol.y, sol.tight_rows);
        }
        trace_.push_back({t_, sol.z, f_st, best_value_, pool_.generated().size(),
                          pool_.extended().size(), sol.nodes, clock_.elapsed_ms()});
        return optimal;
    }

    /// Pool growth and incumbent updates shared with branch-and-cut: add the
    /// solver solution's row, mint SUB-ICG samples from the tight rows, and
    /// test every sample against the incumbent.
    void grow_pool(const Subset& solution, const std::vector<int>& tight_rows) {
        pool_.add_extended(f_, solution, f_.gamma_lower(), RowMode::Scaled);
        offer_incumbent(solution);
        std::vector<Subset> samples = sub_icg(pool_, tight_rows, solution, gs_.k,
                                              lambda_, rng_);
        for (const Subset& s : samples) {
            pool_.add_extended(f_, s, f_.gamma_lower(), RowMode::Scaled);
            double v = f_.value(s);
            if (v > best_value_) {
                best_value_ = v;
                best_ = s;
            }
        }
        pool_.add_generated(solution);
    }

    void offer_incumbent(const Subset& s) {
        double v = f_.value(s);
        if (v > best_value_) {
            best_value_ = v;
            best_ = s;
        }
    }

    BipSolution solve_node(const Subset& fixed_zero, const Subset& fixed_one) {
        ReducedBipModel model(pool_.rows(), gs_);
        model.fixed_zero = fixed_zero;
        model.fixed_one = fixed_one;
        // the incumbent warm-starts pruning only when it respects the fixings
        double hint = -std::numeric_limits<double>::infinity();
        if (fixed_one.is_subset_of(best_) && !best_.intersects(fixed_zero))
            hint = best_value_;
        BipSolution sol = solve_bip(model, hint);
        ++subsolver_calls_;
        subsolver_nodes_ += sol.nodes;
        return sol;
    }

    const EvaluatedFunction& function() const { return f_; }
    const GroundSet& ground() const { return gs_; }
    const CutPool& pool() const { return pool_; }
    const Subset& best() const { return best_; }
    double best_value() const { return best_value_; }
    double bound() const { return bound_; }
    int iterations() const { return t_; }
    std::uint64_t subsolver_calls() const { return subsolver_calls_; }
    std::uint64_t subsolver_nodes() const { return subsolver_nodes_; }
    const std::vector<CgTraceEntry>& trace() const { return trace_; }
    std::int64_t elapsed_ms() const { return clock_.elapsed_ms(); }
    bool expired(const SolveLimits& limits) const { return clock_.expired(limits); }

private:
    const EvaluatedFunction& f_;
    GroundSet gs_;
    int lambda_;
    std::mt19937_64 rng_;
    CutPool pool_;
    Subset best_;
    double best_value_ = 0.0;
    double bound_ = 0.0;
    int t_ = 0;
    std::uint64_t subsolver_calls_ = 0;
    std::uint64_t subsolver_nodes_ = 0;
    std::vector<CgTraceEntry> trace_;
    Stopwatch clock_;
};

/// Improved constraint generation run to completion. The node limit, when
/// set, caps the number of iterations.
inline CgResult icg_solve(const EvaluatedFunction& f, const GroundSet& gs, int lambda,
                          const SolveLimits& limits = {}, std::uint64_t rng_seed = 0) {
    IcgEngine engine(f, gs, lambda, rng_seed);
    CgResult res;
    res.best = engine.best();
    res.value = engine.best_value();
    while (true) {
        std::size_t pool_before = engine.pool().extended().size();
        bool optimal = engine.iterate();
        res.best = engine.best();
        res.value = engine.best_value();
        res.bound = engine.bound();
        res.iterations = static_cast<std::uint64_t>(engine.iterations());
        res.subsolver_calls = engine.subsolver_calls();
        res.subsolver_nodes = engine.subsolver_nodes();
        res.trace = engine.trace();
        if (optimal) {
            res.status = SolveStatus::Optimal;
            return res;
        }
        if (engine.expired(limits) ||
            (limits.node_limit && res.iterations >= limits.node_limit) ||
            engine.pool().extended().size() == pool_before) {
            res.status = SolveStatus::Limit;
            return res;
        }
    }
}

}  // namespace asfm

#endif
