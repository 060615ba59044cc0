#ifndef ASFM_PERTURB_HPP
#define ASFM_PERTURB_HPP

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "greedy.hpp"
#include "instances.hpp"
#include "subset.hpp"

namespace asfm {

namespace detail {

/// Validation state for incremental reward acceptance. For n <= 15 the base
/// function is tabulated over the full power set and every approximate-
/// submodularity constraint touching a marginal adjacent to the candidate key
/// is checked; for larger n a fixed number of sampled chains is checked
/// instead.
class PerturbValidator {
public:
    PerturbValidator(const Instance& inst, double gamma, std::mt19937_64& rng)
        : inst_(inst), n_(inst.n), gamma_(gamma), rng_(rng) {
        if (n_ <= kExhaustiveMaxN) {
            table_.resize(std::size_t{1} << n_);
            for (std::uint64_t mask = 0; mask < table_.size(); ++mask)
                table_[mask] = inst_.base_value(Subset::from_mask(n_, mask));
        }
    }

    bool exhaustive() const { return !table_.empty(); }

    bool accepts(const Subset& key, double r) {
        return exhaustive() ? check_exhaustive(key.to_mask(), r) : check_sampled(key, r);
    }

    void commit(const Subset& key, double r) {
        if (exhaustive()) table_[key.to_mask()] += r;
        else overlay_.rewards[key] += r;
    }

private:
    static constexpr int kExhaustiveMaxN = 15;
    static constexpr int kSampledChains = 200;
    static constexpr double kTol = 1e-12;

    // g with the candidate reward applied on top of everything accepted so far.
    double g(std::uint64_t mask, std::uint64_t cand, double r) const {
        return table_[mask] + (mask == cand ? r : 0.0);
    }

    double marg(int i, std::uint64_t a, std::uint64_t cand, double r) const {
        return g(a | (std::uint64_t{1} << i), cand, r) - g(a, cand, r);
    }

    bool check_exhaustive(std::uint64_t s, double r) const {
        const std::uint64_t full = (std::uint64_t{1} << n_) - 1;
        // Monotonicity on covers adjacent to the key.
        for (int i = 0; i < n_; ++i) {
            std::uint64_t bit = std::uint64_t{1} << i;
            std::uint64_t a = (s & bit) ? (s & ~bit) : s;
            if (marg(i, a, s, r) < 0.0) return false;
        }
        // Diminishing-returns ratio on every pair involving an affected marginal.
        for (int i = 0; i < n_; ++i) {
            std::uint64_t bit = std::uint64_t{1} << i;
            std::uint64_t a = (s & bit) ? (s & ~bit) : s;
            double ma = marg(i, a, s, r);
            // a as the smaller set against every superset avoiding i.
            std::uint64_t rest = full & ~a & ~bit;
            for (std::uint64_t sub = rest;; sub = (sub - 1) & rest) {
                if (ma + kTol < gamma_ * marg(i, a | sub, s, r)) return false;
                if (sub == 0) break;
            }
            // a as the larger set against every subset.
            for (std::uint64_t sub = a;; sub = (sub - 1) & a) {
                if (marg(i, sub, s, r) + kTol < gamma_ * ma) return false;
                if (sub == 0) break;
            }
        }
        return true;
    }

    double g_big(const Subset& x, const Subset& cand, double r) const {
        return inst_.base_value(x) + overlay_.reward(x) + (x == cand ? r : 0.0);
    }

    double marg_big(int i, const Subset& a, const Subset& cand, double r) const {
        return g_big(a.with(i), cand, r) - g_big(a, cand, r);
    }

    bool check_sampled(const Subset& s, double r) {
        for (int i = 0; i < n_; ++i) {
            Subset a = s.contains(i) ? s.without(i) : s;
            if (marg_big(i, a, s, r) < 0.0) return false;
        }
        std::uniform_int_distribution<int> pick(0, n_ - 1);
        std::bernoulli_distribution coin(0.5);
        for (int c = 0; c < kSampledChains; ++c) {
            int i = pick(rng_);
            Subset a = s.contains(i) ? s.without(i) : s;
            if (coin(rng_)) {
                Subset b = a;
                for (int j = 0; j < n_; ++j)
                    if (j != i && !b.contains(j) && coin(rng_)) b.add(j);
                if (marg_big(i, a, s, r) + kTol < gamma_ * marg_big(i, b, s, r))
                    return false;
            } else {
                Subset sub(n_);
                a.for_each([&](int j) {
                    if (coin(rng_)) sub.add(j);
                });
                if (marg_big(i, sub, s, r) + kTol < gamma_ * marg_big(i, a, s, r))
                    return false;
            }
        }
        return true;
    }

    const Instance& inst_;
    int n_;
    double gamma_;
    std::mt19937_64& rng_;
    std::vector<double> table_;  // base + committed rewards, n <= 15 only
    RewardOverlay overlay_;      // committed rewards, n > 15 only
};

}  // namespace detail

/// Samples up to `count` distinct nonempty subsets of cardinality <= k and
/// assigns each a reward that keeps the overlaid function non-decreasing and
/// within the target submodular-ratio lower bound. Rejected candidate rewards
/// are halved up to 10 times before the subset is skipped.
inline RewardOverlay perturb(const Instance& inst, int count, double gamma_target,
                             std::uint64_t seed) {
    if (gamma_target <= 0.0 || gamma_target > 1.0)
        throw std::invalid_argument("perturb: gamma_target must be in (0,1]");
    RewardOverlay overlay;
    if (count <= 0) return overlay;

    const GroundSet gs = inst.ground();
    EvaluatedFunction base = inst.make_base_function(inst.n <= 24);
    GreedyChain chain = greedy(base, gs);
    const double cap0 = 0.1 * chain.value();
    if (cap0 <= 0.0) return overlay;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::uniform_int_distribution<int> bitpick(0, 1);
    detail::PerturbValidator validator(inst, gamma_target, rng);

    const long max_attempts = 20L * count;
    for (long attempt = 0; attempt < max_attempts &&
                           overlay.rewards.size() < static_cast<std::size_t>(count);
         ++attempt) {
        Subset s(gs.n);
        for (int inner = 0; inner < 1000; ++inner) {
            Subset cand(gs.n);
            for (int i = 0; i < gs.n; ++i)
                if (bitpick(rng)) cand.add(i);
            if (cand.cardinality() >= 1 && cand.cardinality() <= gs.k) {
                s = cand;
                break;
            }
        }
        if (s.empty() || overlay.rewards.count(s)) continue;

        double r = cap0 * (1.0 - unif(rng));  // uniform in (0, cap0]
        for (int halvings = 0; halvings <= 10; ++halvings) {
            if (validator.accepts(s, r)) {
                validator.commit(s, r);
                overlay.rewards.emplace(s, r);
                break;
            }
            r *= 0.5;
        }
    }
    return overlay;
}

/// Installs a perturbation overlay on the instance and records the declared
/// ratio lower bound.
inline void perturb_in_place(Instance& inst, int count, double gamma_target,
                             std::uint64_t seed) {
    inst.overlay = perturb(inst, count, gamma_target, seed);
    if (!inst.overlay.rewards.empty()) inst.gamma_lower = gamma_target;
}

}  // namespace asfm

#endif
