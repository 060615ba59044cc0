// Independent reference implementations used as test oracles. These are
// written directly from the closed-form definitions over element lists, on
// purpose sharing no evaluation code with the library headers.
#ifndef ASFM_TEST_ORACLES_HPP
#define ASFM_TEST_ORACLES_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include <asfm/instances.hpp>
#include <asfm/bip.hpp>
#include <asfm/subset.hpp>

namespace testref {

inline std::vector<int> mask_elements(std::uint64_t mask, int n) {
    std::vector<int> out;
    for (int i = 0; i < n; ++i)
        if (mask >> i & 1) out.push_back(i);
    return out;
}

inline double loc_value(const asfm::LocInstance& inst, const std::vector<int>& s) {
    double total = 0.0;
    for (int i = 0; i < inst.m; ++i) {
        double best = 0.0;
        for (int j : s)
            if (inst.g[i][j] > best) best = inst.g[i][j];
        total += best;
    }
    return total;
}

inline double cov_value(const asfm::CovInstance& inst, const std::vector<int>& s) {
    double total = 0.0;
    for (int i = 0; i < inst.m; ++i)
        for (int j : s)
            if (inst.a[i][j]) {
                total += inst.w[i];
                break;
            }
    return total;
}

inline double inf_value(const asfm::InfInstance& inst, const std::vector<int>& s) {
    double total = 0.0;
    for (int i = 0; i < inst.m; ++i) {
        double stay_inactive = 1.0;
        for (int j : s)
            if (inst.edge[i][j]) stay_inactive *= 1.0 - inst.p[j];
        total += 1.0 - stay_inactive;
    }
    return total;
}

inline double ca_value(const asfm::CaInstance& inst, const std::vector<int>& s) {
    double total = 0.0;
    for (int a : s) total += inst.w[a];
    for (std::size_t a = 0; a < s.size(); ++a)
        for (std::size_t b = a + 1; b < s.size(); ++b) total += inst.r[s[a]][s[b]];
    return total;
}

inline double instance_value(const asfm::Instance& inst, std::uint64_t mask) {
    auto elems = mask_elements(mask, inst.n);
    double base = std::visit(
        [&](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, asfm::LocInstance>) return loc_value(d, elems);
            else if constexpr (std::is_same_v<T, asfm::CovInstance>) return cov_value(d, elems);
            else if constexpr (std::is_same_v<T, asfm::InfInstance>) return inf_value(d, elems);
            else return ca_value(d, elems);
        },
        inst.data);
    return base + inst.overlay.reward(asfm::Subset::from_mask(inst.n, mask));
}

/// Enumerates every mask with popcount <= k, invoking fn(mask).
inline void for_each_mask_upto(int n, int k, const std::function<void(std::uint64_t)>& fn) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask)
        if (std::popcount(mask) <= k) fn(mask);
}

struct BruteMax {
    double value = -std::numeric_limits<double>::infinity();
    std::uint64_t mask = 0;
};

/// Exhaustive max of an arbitrary mask-valued function over |S| <= k.
inline BruteMax brute_max(int n, int k,
                          const std::function<double(std::uint64_t)>& value) {
    BruteMax best;
    for_each_mask_upto(n, k, [&](std::uint64_t mask) {
        double v = value(mask);
        if (v > best.value) {
            best.value = v;
            best.mask = mask;
        }
    });
    return best;
}

/// Exhaustive max-min reference for the reduced binary program: enumerates
/// every y with the cardinality and fixing constraints and takes min over rows
/// directly.
inline BruteMax bip_brute(const asfm::ReducedBipModel& model) {
    BruteMax best;
    std::uint64_t zero_mask = model.fixed_zero.to_mask();
    std::uint64_t one_mask = model.fixed_one.to_mask();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << model.n); ++mask) {
        if (std::popcount(mask) > model.k) continue;
        if ((mask & zero_mask) != 0) continue;
        if ((mask & one_mask) != one_mask) continue;
        asfm::Subset y = asfm::Subset::from_mask(model.n, mask);
        double z = std::numeric_limits<double>::infinity();
        for (const asfm::CutRow& row : *model.rows) z = std::min(z, row.value_at(y));
        if (z > best.value) {
            best.value = z;
            best.mask = mask;
        }
    }
    return best;
}

}  // namespace testref

#endif
