#ifndef ASFM_ORACLE_HPP
#define ASFM_ORACLE_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "set_function.hpp"
#include "subset.hpp"

namespace asfm {

/// Enumerates every subset of {0..n-1} with cardinality <= k in lexicographic
/// order (by size, then by element list) and calls fn on each.
template <typename Fn>
void for_each_feasible_subset(int n, int k, Fn&& fn) {
    Subset empty(n);
    fn(empty);
    std::vector<int> idx;
    for (int size = 1; size <= k; ++size) {
        idx.assign(size, 0);
        for (int i = 0; i < size; ++i) idx[i] = i;
        while (true) {
            fn(Subset::of(n, idx));
            int pos = size - 1;
            while (pos >= 0 && idx[pos] == n - size + pos) --pos;
            if (pos < 0) break;
            ++idx[pos];
            for (int j = pos + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
}

inline std::uint64_t feasible_subset_count(int n, int k) {
    std::uint64_t total = 0, c = 1;
    for (int size = 0; size <= k; ++size) {
        total += c;
        if (total > (std::uint64_t{1} << 60)) return total;
        c = c * static_cast<std::uint64_t>(n - size) / static_cast<std::uint64_t>(size + 1);
    }
    return total;
}

struct OracleReport {
    double optimum = 0.0;
    std::vector<Subset> optimizers;  // all argmaxes, ties within 1e-12
    std::uint64_t subsets_enumerated = 0;
};

/// Exact optimum of max f(S) s.t. |S| <= k by full enumeration.
inline OracleReport brute_force_opt(const EvaluatedFunction& f, const GroundSet& gs) {
    if (feasible_subset_count(gs.n, gs.k) > 10'000'000ull)
        throw std::runtime_error("brute_force_opt: enumeration guard exceeded");
    OracleReport report;
    report.optimum = -std::numeric_limits<double>::infinity();
    for_each_feasible_subset(gs.n, gs.k, [&](const Subset& s) {
        ++report.subsets_enumerated;
        double v = f.value(s);
        if (v > report.optimum + 1e-12) {
            report.optimum = v;
            report.optimizers.clear();
            report.optimizers.push_back(s);
        } else if (v > report.optimum - 1e-12) {
            report.optimizers.push_back(s);
        }
    });
    return report;
}

namespace detail {

/// f tabulated over the full power set, indexed by bit mask. Requires n <= 20.
inline std::vector<double> full_table(const EvaluatedFunction& f, int n) {
    if (n > 20) throw std::runtime_error("full_table: n too large for enumeration");
    std::vector<double> tab(std::size_t{1} << n);
    for (std::uint64_t mask = 0; mask < tab.size(); ++mask)
        tab[mask] = f.value(Subset::from_mask(n, mask));
    return tab;
}

inline void require_monotone(const std::vector<double>& tab, int n) {
    for (std::uint64_t mask = 0; mask < tab.size(); ++mask)
        for (int i = 0; i < n; ++i) {
            std::uint64_t bit = std::uint64_t{1} << i;
            if (!(mask & bit) && tab[mask | bit] - tab[mask] < -1e-9)
                throw std::runtime_error("negative marginal: function is not non-decreasing");
        }
}

}  // namespace detail

/// Exhaustive submodular-ratio bounds: gamma from the intersection/union form
/// over all set pairs, gamma_bar from single-element extensions. Ratios with
/// denominator <= 1e-12 follow the 0/0 = 1 convention (they impose nothing).
/// Both results are clamped to at most 1.
inline std::pair<double, double> ratio_bounds_bruteforce(const EvaluatedFunction& f) {
    const int n = f.ground().n;
    if (n > 15) throw std::runtime_error("ratio_bounds_bruteforce: n must be <= 15");
    std::vector<double> tab = detail::full_table(f, n);
    detail::require_monotone(tab, n);

    double gamma = 1.0;
    const std::uint64_t size = std::uint64_t{1} << n;
    for (std::uint64_t s = 0; s < size; ++s)
        for (std::uint64_t t = 0; t < size; ++t) {
            double den = tab[s | t] - tab[t];
            if (den > 1e-12) gamma = std::min(gamma, (tab[s] - tab[s & t]) / den);
        }

    double gamma_bar = 1.0;
    for (std::uint64_t s = 0; s < size; ++s)
        for (int j = 0; j < n; ++j) {
            std::uint64_t jb = std::uint64_t{1} << j;
            if (s & jb) continue;
            for (int i = 0; i < n; ++i) {
                std::uint64_t ib = std::uint64_t{1} << i;
                if (i == j || (s & ib)) continue;
                double den = tab[s | jb | ib] - tab[s | jb];
                if (den > 1e-12)
                    gamma_bar = std::min(gamma_bar, (tab[s | ib] - tab[s]) / den);
            }
        }
    return {gamma, gamma_bar};
}

// ---------------------------------------------------------------------------
// Proposition checkers (exhaustive, test oracles).
// ---------------------------------------------------------------------------

struct PropViolation {
    std::string condition;
    std::uint64_t a = 0, b = 0;  // the two set masks involved
    int i = -1, j = -1;          // the elements involved, -1 when unused
    double lhs = 0.0, rhs = 0.0;
};

namespace detail {

constexpr double kPropTol = 1e-9;

struct PropContext {
    int n;
    std::vector<double> tab;
    std::vector<std::vector<double>> marg;  // marg[i][mask], i not in mask

    PropContext(const EvaluatedFunction& f, int n_) : n(n_), tab(full_table(f, n_)) {
        marg.assign(n, std::vector<double>(tab.size(), 0.0));
        for (int i = 0; i < n; ++i) {
            std::uint64_t bit = std::uint64_t{1} << i;
            for (std::uint64_t mask = 0; mask < tab.size(); ++mask)
                if (!(mask & bit)) marg[i][mask] = tab[mask | bit] - tab[mask];
        }
    }
};

/// Shared check for conditions (iv)/(v)/(iv*): the two-leading-element upper
/// bound on f(T), optionally with the removal sum over S \ T (condition (iv))
/// and optionally restricted to nested pairs.
inline void check_leading_pair_bound(const PropContext& ctx, double gamma,
                                     double gamma_bar, bool nested_only,
                                     bool with_removal_sum, const std::string& label,
                                     std::vector<PropViolation>& out) {
    const std::uint64_t size = std::uint64_t{1} << ctx.n;
    for (std::uint64_t s = 0; s < size; ++s)
        for (std::uint64_t t = 0; t < size; ++t) {
            if (nested_only && (s & ~t)) continue;
            std::uint64_t diff = t & ~s;
            if (!diff) continue;
            double removal = 0.0;
            if (with_removal_sum) {
                std::uint64_t gone = s & ~t;
                std::uint64_t bits = gone;
                while (bits) {
                    int i = std::countr_zero(bits);
                    bits &= bits - 1;
                    removal += gamma * ctx.marg[i][(t | s) & ~(std::uint64_t{1} << i)];
                }
            }
            double sum_all = 0.0;
            {
                std::uint64_t bits = diff;
                while (bits) {
                    int j = std::countr_zero(bits);
                    bits &= bits - 1;
                    sum_all += ctx.marg[j][s] / gamma;
                }
            }
            auto emit = [&](int j1, int j2, double rhs) {
                if (ctx.tab[t] > rhs + kPropTol)
                    out.push_back({label, s, t, j1, j2, ctx.tab[t], rhs});
            };
            std::vector<int> elems;
            {
                std::uint64_t bits = diff;
                while (bits) {
                    elems.push_back(std::countr_zero(bits));
                    bits &= bits - 1;
                }
            }
            if (elems.size() == 1) {
                int j1 = elems[0];
                double rhs = ctx.tab[s] + ctx.marg[j1][s] - removal;
                emit(j1, -1, rhs);
            } else {
                for (int j1 : elems)
                    for (int j2 : elems) {
                        if (j1 == j2) continue;
                        double rhs = ctx.tab[s] + sum_all -
                                     ctx.marg[j1][s] / gamma - ctx.marg[j2][s] / gamma +
                                     ctx.marg[j1][s] + ctx.marg[j2][s] / gamma_bar -
                                     removal;
                        emit(j1, j2, rhs);
                    }
            }
        }
}

}  // namespace detail

/// Conditions (i)-(v): the approximate-submodularity characterizations.
inline std::vector<PropViolation> check_prop1(const EvaluatedFunction& f,
                                              const GroundSet& gs, double gamma,
                                              double gamma_bar) {
    if (gs.n > 10) throw std::runtime_error("check_prop1: n must be <= 10");
    detail::PropContext ctx(f, gs.n);
    const std::uint64_t size = std::uint64_t{1} << gs.n;
    std::vector<PropViolation> out;
    using detail::kPropTol;

    // (i) over all set pairs.
    for (std::uint64_t a = 0; a < size; ++a)
        for (std::uint64_t b = 0; b < size; ++b) {
            double lhs = ctx.tab[a] - ctx.tab[a & b];
            double rhs = gamma * (ctx.tab[a | b] - ctx.tab[b]);
            if (lhs + kPropTol < rhs) out.push_back({"i", a, b, -1, -1, lhs, rhs});
        }

    // (ii) over all nested pairs and outside elements.
    for (std::uint64_t t = 0; t < size; ++t)
        for (std::uint64_t s = t;; s = (s - 1) & t) {
            for (int i = 0; i < gs.n; ++i) {
                if (t & (std::uint64_t{1} << i)) continue;
                double lhs = ctx.marg[i][s], rhs = gamma * ctx.marg[i][t];
                if (lhs + kPropTol < rhs) out.push_back({"ii", s, t, i, -1, lhs, rhs});
            }
            if (s == 0) break;
        }

    // (iii) single-element extensions against gamma_bar.
    for (std::uint64_t s = 0; s < size; ++s)
        for (int e = 0; e < gs.n; ++e) {
            std::uint64_t eb = std::uint64_t{1} << e;
            if (s & eb) continue;
            for (int i = 0; i < gs.n; ++i) {
                if (i == e || (s & (std::uint64_t{1} << i))) continue;
                double lhs = ctx.marg[i][s], rhs = gamma_bar * ctx.marg[i][s | eb];
                if (lhs + kPropTol < rhs)
                    out.push_back({"iii", s, s | eb, i, e, lhs, rhs});
            }
        }

    detail::check_leading_pair_bound(ctx, gamma, gamma_bar, false, true, "iv", out);
    detail::check_leading_pair_bound(ctx, gamma, gamma_bar, true, false, "v", out);
    return out;
}

/// Conditions (i*), (ii*), (iv*): the non-decreasing variants.
inline std::vector<PropViolation> check_prop2(const EvaluatedFunction& f,
                                              const GroundSet& gs, double gamma,
                                              double gamma_bar) {
    if (gs.n > 10) throw std::runtime_error("check_prop2: n must be <= 10");
    detail::PropContext ctx(f, gs.n);
    const std::uint64_t size = std::uint64_t{1} << gs.n;
    std::vector<PropViolation> out;
    using detail::kPropTol;

    // (i*) monotonicity over nested pairs.
    for (std::uint64_t b = 0; b < size; ++b)
        for (std::uint64_t a = b;; a = (a - 1) & b) {
            if (ctx.tab[a] > ctx.tab[b] + kPropTol)
                out.push_back({"i*", a, b, -1, -1, ctx.tab[a], ctx.tab[b]});
            if (a == 0) break;
        }

    // (ii*) including the sign condition on the larger-set marginal.
    for (std::uint64_t t = 0; t < size; ++t)
        for (std::uint64_t s = t;; s = (s - 1) & t) {
            for (int i = 0; i < gs.n; ++i) {
                if (t & (std::uint64_t{1} << i)) continue;
                double lhs = ctx.marg[i][s], rhs = gamma * ctx.marg[i][t];
                if (lhs + kPropTol < rhs) out.push_back({"ii*", s, t, i, -1, lhs, rhs});
                if (ctx.marg[i][t] < -kPropTol)
                    out.push_back({"ii*", t, t, i, -1, ctx.marg[i][t], 0.0});
            }
            if (s == 0) break;
        }

    detail::check_leading_pair_bound(ctx, gamma, gamma_bar, false, false, "iv*", out);
    return out;
}

/// BIP cut-set membership: for every feasible indicator vector, eta = f(T)
/// satisfies all cut inequalities, and eta + epsilon violates the witness cut
/// rooted at T itself.
inline std::vector<PropViolation> check_prop3(const EvaluatedFunction& f,
                                              const GroundSet& gs, double gamma,
                                              double gamma_bar) {
    if (gs.n > 10) throw std::runtime_error("check_prop3: n must be <= 10");
    detail::PropContext ctx(f, gs.n);
    const std::uint64_t size = std::uint64_t{1} << gs.n;
    std::vector<PropViolation> out;
    using detail::kPropTol;
    constexpr double kEps = 1e-6;

    std::vector<std::uint64_t> feasible;
    for (std::uint64_t m = 0; m < size; ++m)
        if (std::popcount(m) <= gs.k) feasible.push_back(m);

    for (std::uint64_t y : feasible) {
        double eta = ctx.tab[y];
        // (<=) direction: eta is a member of X.
        for (std::uint64_t s : feasible) {
            std::vector<int> outside;
            for (int j = 0; j < gs.n; ++j)
                if (!(s & (std::uint64_t{1} << j))) outside.push_back(j);
            if (outside.empty()) {
                if (eta > ctx.tab[s] + kPropTol)
                    out.push_back({"X-member", s, y, -1, -1, eta, ctx.tab[s]});
                continue;
            }
            double sum_all = 0.0;
            for (int j : outside)
                if (y & (std::uint64_t{1} << j)) sum_all += ctx.marg[j][s] / gamma;
            auto check = [&](int j1, int j2, double rhs) {
                if (eta > rhs + kPropTol) out.push_back({"X-member", s, y, j1, j2, eta, rhs});
            };
            if (outside.size() == 1) {
                int j1 = outside[0];
                double term = (y & (std::uint64_t{1} << j1)) ? ctx.marg[j1][s] : 0.0;
                check(j1, -1, ctx.tab[s] + term);
            } else {
                for (int j1 : outside)
                    for (int j2 : outside) {
                        if (j1 == j2) continue;
                        double rhs = ctx.tab[s] + sum_all;
                        if (y & (std::uint64_t{1} << j1))
                            rhs += ctx.marg[j1][s] - ctx.marg[j1][s] / gamma;
                        if (y & (std::uint64_t{1} << j2))
                            rhs += ctx.marg[j2][s] / gamma_bar - ctx.marg[j2][s] / gamma;
                        check(j1, j2, rhs);
                    }
            }
        }
        // (=>) direction: eta + eps must be excluded. The witness is the cut
        // rooted at S = T_y itself: every indicator term vanishes there, so
        // its right-hand side collapses to f(T_y) and the inflated eta fails it.
        if (eta + kEps <= ctx.tab[y] + kPropTol)
            out.push_back({"X-excluded", y, y, -1, -1, eta + kEps, ctx.tab[y]});
    }
    return out;
}

}  // namespace asfm

#endif
