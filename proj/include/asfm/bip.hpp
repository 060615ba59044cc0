#ifndef ASFM_BIP_HPP
#define ASFM_BIP_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "set_function.hpp"
#include "subset.hpp"

namespace asfm {

enum class RowMode {
    Scaled,    // pinned leading element unscaled, all others 1/gamma
    Unscaled,  // every coefficient is the plain marginal (exactly submodular form)
};

/// One linear upper-bound row z <= f(S) + sum coeff_i y_i induced by a
/// feasible solution S. Members of S carry coefficient 0, so the row is tight
/// at its own generator.
struct CutRow {
    Subset source;
    int j_star = -1;  // pinned argmax-marginal element, -1 in unscaled mode
    double base = 0.0;
    std::vector<double> coeff;  // dense over N

    double value_at(const Subset& y) const {
        double v = base;
        y.for_each([&](int i) { v += coeff[i]; });
        return v;
    }
};

inline CutRow make_cut_row(const EvaluatedFunction& f, const Subset& source,
                           double gamma, RowMode mode) {
    const int n = f.ground().n;
    CutRow row;
    row.source = source;
    row.base = f.value(source);
    row.coeff.assign(n, 0.0);
    std::vector<double> m(n, 0.0);
    int jstar = -1;
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        if (source.contains(i)) continue;
        m[i] = f.marginal(i, source);
        if (m[i] > best) {
            best = m[i];
            jstar = i;
        }
    }
    if (mode == RowMode::Unscaled) {
        for (int i = 0; i < n; ++i)
            if (!source.contains(i)) row.coeff[i] = m[i];
    } else {
        row.j_star = jstar;
        for (int i = 0; i < n; ++i)
            if (!source.contains(i)) row.coeff[i] = (i == jstar) ? m[i] : m[i] / gamma;
    }
    return row;
}

/// Max-min binary program: maximize z s.t. z <= each row, a cardinality
/// budget, and variable fixings.
struct ReducedBipModel {
    const std::vector<CutRow>* rows = nullptr;
    int n = 0, k = 0;
    Subset fixed_zero;  // S0
    Subset fixed_one;   // S1

    ReducedBipModel() = default;
    ReducedBipModel(const std::vector<CutRow>& rows_, GroundSet gs)
        : rows(&rows_), n(gs.n), k(gs.k), fixed_zero(gs.n), fixed_one(gs.n) {}
};

struct BipSolution {
    Subset y;
    double z = 0.0;
    std::vector<int> tight_rows;  // row indices attaining the min at y
    std::uint64_t nodes = 0;      // branch-and-bound nodes explored
};

namespace detail {

struct BipSearch {
    const std::vector<CutRow>& rows;
    std::vector<int> order;                        // free variables, branch order
    std::vector<double> cur;                       // partial row values
    std::vector<std::vector<double>> topsum;       // [row][pos * (budget+1) + c]
    int budget;
    double best_z;
    std::vector<int> chosen, best_chosen;
    std::uint64_t nodes = 0;
    double threshold;

    void dfs(std::size_t pos, int c) {
        ++nodes;
        const int room = budget - c;
        double bound = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < rows.size(); ++r)
            bound = std::min(bound, cur[r] + topsum[r][pos * (budget + 1) + room]);
        if (bound <= std::max(best_z, threshold)) return;
        if (pos == order.size() || room == 0) {
            double val = std::numeric_limits<double>::infinity();
            for (double v : cur) val = std::min(val, v);
            if (val > best_z) {
                best_z = val;
                best_chosen = chosen;
            }
            return;
        }
        const int var = order[pos];
        // include-first keeps large-coefficient solutions early
        chosen.push_back(var);
        for (std::size_t r = 0; r < rows.size(); ++r) cur[r] += rows[r].coeff[var];
        dfs(pos + 1, c + 1);
        for (std::size_t r = 0; r < rows.size(); ++r) cur[r] -= rows[r].coeff[var];
        chosen.pop_back();
        dfs(pos + 1, c);
    }
};

}  // namespace detail

/// Exact depth-first branch-and-bound for the reduced BIP. `incumbent_hint`
/// must be a valid lower bound on the model optimum (e.g., the value of a
/// feasible solution respecting the fixings); it only strengthens pruning.
inline BipSolution solve_bip(const ReducedBipModel& model,
                             double incumbent_hint = -std::numeric_limits<double>::infinity()) {
    if (!model.rows || model.rows->empty())
        throw std::invalid_argument("solve_bip: model has no rows");
    if (model.fixed_one.intersects(model.fixed_zero))
        throw std::invalid_argument("solve_bip: overlapping fixings");
    if (model.fixed_one.cardinality() > model.k)
        throw std::invalid_argument("solve_bip: infeasible fixing |S1| > k");

    const auto& rows = *model.rows;
    detail::BipSearch search{rows, {}, {}, {}, 0, 0.0, {}, {}, 0, 0.0};
    search.budget = model.k - model.fixed_one.cardinality();
    search.threshold = incumbent_hint - 1e-9;

    for (int i = 0; i < model.n; ++i)
        if (!model.fixed_zero.contains(i) && !model.fixed_one.contains(i))
            search.order.push_back(i);
    std::vector<double> score(model.n, 0.0);
    for (int i : search.order) {
        double s = -std::numeric_limits<double>::infinity();
        for (const auto& row : rows) s = std::max(s, row.coeff[i]);
        score[i] = s;
    }
    std::stable_sort(search.order.begin(), search.order.end(),
                     [&](int a, int b) { return score[a] > score[b]; });

    search.cur.resize(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        search.cur[r] = rows[r].value_at(model.fixed_one);

    // Per-row suffix tables: sum of the c largest positive coefficients among
    // the not-yet-decided variables.
    const std::size_t positions = search.order.size() + 1;
    search.topsum.assign(rows.size(),
                         std::vector<double>(positions * (search.budget + 1), 0.0));
    std::vector<double> top;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        top.clear();
        auto& tbl = search.topsum[r];
        for (std::size_t pos = search.order.size(); pos-- > 0;) {
            double c = rows[r].coeff[search.order[pos]];
            if (c > 0.0) {
                top.insert(std::upper_bound(top.begin(), top.end(), c,
                                            std::greater<double>()),
                           c);
                if (static_cast<int>(top.size()) > search.budget) top.pop_back();
            }
            double acc = 0.0;
            for (int b = 1; b <= search.budget; ++b) {
                if (b <= static_cast<int>(top.size())) acc += top[b - 1];
                tbl[pos * (search.budget + 1) + b] = acc;
            }
        }
    }

    search.best_z = -std::numeric_limits<double>::infinity();
    search.dfs(0, 0);

    BipSolution sol;
    sol.y = model.fixed_one;
    for (int i : search.best_chosen) sol.y.add(i);
    sol.nodes = search.nodes;
    sol.z = std::numeric_limits<double>::infinity();
    for (const auto& row : rows) sol.z = std::min(sol.z, row.value_at(sol.y));
    double best_gap = std::numeric_limits<double>::infinity();
    int best_row = 0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        double gap = rows[r].value_at(sol.y) - sol.z;
        if (gap <= kValueTol) sol.tight_rows.push_back(static_cast<int>(r));
        if (gap < best_gap) {
            best_gap = gap;
            best_row = static_cast<int>(r);
        }
    }
    if (sol.tight_rows.empty()) sol.tight_rows.push_back(best_row);
    return sol;
}

/// Text dump for cross-checking against external MIP solvers: one row per
/// line, base value followed by sparse index:coefficient pairs (1-based).
inline void dump_model(const ReducedBipModel& model, std::ostream& os) {
    os << "n " << model.n << " k " << model.k << " fix0 "
       << model.fixed_zero.to_string() << " fix1 " << model.fixed_one.to_string()
       << "\n";
    for (const auto& row : *model.rows) {
        os << row.base;
        for (int i = 0; i < model.n; ++i)
            if (row.coeff[i] != 0.0) os << " " << (i + 1) << ":" << row.coeff[i];
        os << "\n";
    }
}

}  // namespace asfm

#endif
