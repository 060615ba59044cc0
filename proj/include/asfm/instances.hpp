#ifndef ASFM_INSTANCES_HPP
#define ASFM_INSTANCES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "set_function.hpp"
#include "subset.hpp"

namespace asfm {

/// Facility location: f(S) = sum_i max_{j in S} g[i][j].
struct LocInstance {
    int n = 0, m = 0;
    std::vector<std::vector<double>> g;  // m x n, entries in [0,1]

    double value(const Subset& s) const {
        double total = 0.0;
        for (int i = 0; i < m; ++i) {
            double best = 0.0;
            s.for_each([&](int j) { best = std::max(best, g[i][j]); });
            total += best;
        }
        return total;
    }
};

/// Weighted coverage: f(S) = sum_i w[i] * max_{j in S} a[i][j].
struct CovInstance {
    int n = 0, m = 0;
    std::vector<std::vector<std::uint8_t>> a;  // m x n binary
    std::vector<double> w;                     // m weights in [0,1]

    double value(const Subset& s) const {
        double total = 0.0;
        for (int i = 0; i < m; ++i) {
            bool covered = false;
            s.for_each([&](int j) { covered = covered || a[i][j]; });
            if (covered) total += w[i];
        }
        return total;
    }
};

/// Bipartite influence: f(S) = sum_i (1 - prod_{j in S} (1 - q_ij)),
/// q_ij = p[j] on edges and 0 otherwise.
struct InfInstance {
    int n = 0, m = 0;
    std::vector<std::vector<std::uint8_t>> edge;  // m x n adjacency
    std::vector<double> p;                        // n activation probabilities

    double value(const Subset& s) const {
        double total = 0.0;
        for (int i = 0; i < m; ++i) {
            double miss = 1.0;
            s.for_each([&](int j) {
                if (edge[i][j]) miss *= 1.0 - p[j];
            });
            total += 1.0 - miss;
        }
        return total;
    }
};

/// Combinatorial auction: f(S) = sum_{i in S} w[i] + sum_{i<j in S} r[i][j].
struct CaInstance {
    int n = 0;
    std::vector<double> w;                // individual utilities in [1,2]
    std::vector<std::vector<double>> r;   // symmetric, zero diagonal

    double value(const Subset& s) const {
        auto elems = s.elements();
        double total = 0.0;
        for (std::size_t a = 0; a < elems.size(); ++a) {
            total += w[elems[a]];
            for (std::size_t b = a + 1; b < elems.size(); ++b)
                total += r[elems[a]][elems[b]];
        }
        return total;
    }
};

/// Additive reward overlay turning an exactly submodular instance into an
/// approximately submodular one. Keys never include the empty set.
struct RewardOverlay {
    std::unordered_map<Subset, double, SubsetHash> rewards;

    std::size_t count() const { return rewards.size(); }

    double reward(const Subset& s) const {
        auto it = rewards.find(s);
        return it == rewards.end() ? 0.0 : it->second;
    }
};

enum class InstanceType { Loc, Cov, Inf, Ca };

inline std::string to_string(InstanceType t) {
    switch (t) {
        case InstanceType::Loc: return "LOC";
        case InstanceType::Cov: return "COV";
        case InstanceType::Inf: return "INF";
        case InstanceType::Ca: return "CA";
    }
    return "?";
}

inline InstanceType instance_type_from_string(const std::string& s) {
    std::string u;
    for (char c : s) u += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (u == "LOC") return InstanceType::Loc;
    if (u == "COV") return InstanceType::Cov;
    if (u == "INF") return InstanceType::Inf;
    if (u == "CA") return InstanceType::Ca;
    throw std::invalid_argument("unknown instance type: " + s);
}

/// A benchmark instance: generated (or ingested) data, budget, declared
/// submodular-ratio lower bound, and an optional reward overlay.
struct Instance {
    InstanceType type = InstanceType::Loc;
    int n = 0, m = 0, k = 1;
    double gamma_lower = 1.0;
    std::uint64_t seed = 0;
    std::variant<LocInstance, CovInstance, InfInstance, CaInstance> data;
    RewardOverlay overlay;

    GroundSet ground() const { return GroundSet(n, k); }

    double base_value(const Subset& s) const {
        return std::visit([&](const auto& d) { return d.value(s); }, data);
    }

    double value(const Subset& s) const { return base_value(s) + overlay.reward(s); }

    std::string id() const {
        return to_string(type) + "-n" + std::to_string(n) + "-k" + std::to_string(k) +
               "-s" + std::to_string(seed);
    }

    /// Oracle over the overlaid function. The instance must outlive the result.
    EvaluatedFunction make_function(bool memo = true) const {
        EvaluatedFunction f(ground(), [this](const Subset& s) { return value(s); },
                            gamma_lower);
        f.set_memo_enabled(memo);
        return f;
    }

    /// Oracle over the unperturbed base function (gamma = 1 families).
    EvaluatedFunction make_base_function(bool memo = true) const {
        EvaluatedFunction f(ground(), [this](const Subset& s) { return base_value(s); },
                            1.0);
        f.set_memo_enabled(memo);
        return f;
    }
};

// ---------------------------------------------------------------------------
// Generators. All are pure functions of (parameters, seed).
// ---------------------------------------------------------------------------

inline LocInstance generate_loc(int n, int m, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("generate_loc: n must be >= 1");
    if (m < 1) throw std::invalid_argument("generate_loc: m must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    LocInstance inst;
    inst.n = n;
    inst.m = m;
    inst.g.assign(m, std::vector<double>(n));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) inst.g[i][j] = unif(rng);
    return inst;
}

inline CovInstance generate_cov(int n, int m, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("generate_cov: n must be >= 1");
    if (m < 1) throw std::invalid_argument("generate_cov: m must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    CovInstance inst;
    inst.n = n;
    inst.m = m;
    inst.a.assign(m, std::vector<std::uint8_t>(n));
    inst.w.resize(m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) inst.a[i][j] = unif(rng) < 0.15 ? 1 : 0;
    for (int i = 0; i < m; ++i) inst.w[i] = unif(rng);
    return inst;
}

inline InfInstance generate_inf(int n, int m, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("generate_inf: n must be >= 1");
    if (m < 1) throw std::invalid_argument("generate_inf: m must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    InfInstance inst;
    inst.n = n;
    inst.m = m;
    inst.edge.assign(m, std::vector<std::uint8_t>(n));
    inst.p.resize(n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) inst.edge[i][j] = unif(rng) < 0.1 ? 1 : 0;
    for (int j = 0; j < n; ++j) inst.p[j] = unif(rng);
    return inst;
}

// ---------------------------------------------------------------------------
// Combinatorial auction ingestion and its closed-form ratio bound.
// ---------------------------------------------------------------------------

/// Builds a CA instance from transaction rows (each row a set of 0-based item
/// indices). Mutual utilities map pair co-occurrence counts affinely into
/// [lo, hi]: minimum count -> lo, maximum count -> hi (all-equal counts -> hi).
inline CaInstance ingest_ca(const std::vector<std::vector<int>>& transactions, int n,
                            std::uint64_t seed, double lo = -0.09, double hi = 0.01) {
    if (transactions.empty()) throw std::invalid_argument("ingest_ca: empty stream");
    if (n < 2) throw std::invalid_argument("ingest_ca: need n >= 2");
    std::vector<std::vector<std::int64_t>> cooc(n, std::vector<std::int64_t>(n, 0));
    for (const auto& row : transactions) {
        for (int item : row)
            if (item < 0 || item >= n)
                throw std::invalid_argument("ingest_ca: item index out of range");
        for (std::size_t a = 0; a < row.size(); ++a) {
            for (std::size_t b = a + 1; b < row.size(); ++b) {
                if (row[a] == row[b]) continue;
                ++cooc[row[a]][row[b]];
                ++cooc[row[b]][row[a]];
            }
        }
    }
    std::int64_t cmin = cooc[0][1], cmax = cooc[0][1];
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            cmin = std::min(cmin, cooc[i][j]);
            cmax = std::max(cmax, cooc[i][j]);
        }
    CaInstance inst;
    inst.n = n;
    inst.r.assign(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double v = cmax == cmin
                           ? hi
                           : lo + (hi - lo) * static_cast<double>(cooc[i][j] - cmin) /
                                      static_cast<double>(cmax - cmin);
            inst.r[i][j] = inst.r[j][i] = v;
        }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(1.0, 2.0);
    inst.w.resize(n);
    for (int i = 0; i < n; ++i) inst.w[i] = unif(rng);
    return inst;
}

/// Closed-form lower bound on the submodular ratio of a CA instance: for each
/// item, the worst marginal (budget-1 most negative partners) over the best
/// marginal (budget-1 largest positive partners), minimized over items.
inline double ca_gamma_lower(const CaInstance& inst, int k) {
    if (k < 2) throw std::invalid_argument("ca_gamma_lower: need k >= 2");
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < inst.n; ++i) {
        std::vector<double> neg, pos;
        for (int j = 0; j < inst.n; ++j) {
            if (j == i) continue;
            if (inst.r[i][j] < 0) neg.push_back(inst.r[i][j]);
            else if (inst.r[i][j] > 0) pos.push_back(inst.r[i][j]);
        }
        std::sort(neg.begin(), neg.end());                          // most negative first
        std::sort(pos.begin(), pos.end(), std::greater<double>());  // largest first
        int q1 = std::min<int>(k - 1, static_cast<int>(neg.size()));
        int q2 = std::min<int>(k - 1, static_cast<int>(pos.size()));
        double num = inst.w[i], den = inst.w[i];
        for (int t = 0; t < q1; ++t) num += neg[t];
        for (int t = 0; t < q2; ++t) den += pos[t];
        if (den <= 0.0)
            throw std::runtime_error("ca_gamma_lower: utility structure violates positivity");
        best = std::min(best, num / den);
    }
    if (best <= 0.0)
        throw std::runtime_error("ca_gamma_lower: utility structure violates positivity");
    return std::min(best, 1.0);
}

}  // namespace asfm

#endif
