#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include <asfm/greedy.hpp>
#include <asfm/instances.hpp>
#include <asfm/oracle.hpp>
#include <asfm/perturb.hpp>
#include <asfm/set_function.hpp>
#include <asfm/subset.hpp>

#include "test_oracles.hpp"

using asfm::EvaluatedFunction;
using asfm::GroundSet;
using asfm::Subset;

namespace {

EvaluatedFunction modular(const std::vector<double>& w, int k) {
    GroundSet gs(static_cast<int>(w.size()), k);
    return EvaluatedFunction(gs, [w](const Subset& s) {
        double total = 0.0;
        s.for_each([&](int i) { total += w[i]; });
        return total;
    });
}

}  // namespace

TEST_CASE("subset basics") {
    Subset s(10);
    CHECK(s.empty());
    CHECK(s.max_element() == -1);
    s.add(3);
    s.add(7);
    s.add(3);
    CHECK(s.cardinality() == 2);
    CHECK(s.contains(3));
    CHECK(!s.contains(4));
    CHECK(s.max_element() == 7);
    CHECK(s.elements() == std::vector<int>{3, 7});
    CHECK(s.to_string() == "{4,8}");

    s.remove(3);
    CHECK(s.cardinality() == 1);
    CHECK(s == Subset::of(10, {7}));
    CHECK(s.with(2).cardinality() == 2);
    CHECK(s.cardinality() == 1);

    CHECK(Subset::of(10, {1, 2}).is_subset_of(Subset::of(10, {1, 2, 5})));
    CHECK(!Subset::of(10, {1, 6}).is_subset_of(Subset::of(10, {1, 2, 5})));
    CHECK(Subset::of(10, {1, 6}).intersects(Subset::of(10, {6})));
    CHECK(Subset::of(10, {0, 2}).union_with(Subset::of(10, {2, 4})) ==
          Subset::of(10, {0, 2, 4}));

    CHECK(Subset::from_mask(10, 0b101).elements() == std::vector<int>{0, 2});
    CHECK(Subset::of(10, {0, 2}).to_mask() == 0b101u);
    CHECK_THROWS(s.add(10));
    CHECK_THROWS(s.contains(-1));
}

TEST_CASE("subset ordering and hashing") {
    // {0,2} < {1,2}, prefixes sort before extensions
    CHECK(Subset::compare(Subset::of(5, {0, 2}), Subset::of(5, {1, 2})) < 0);
    CHECK(Subset::compare(Subset::of(5, {0}), Subset::of(5, {0, 1})) < 0);
    CHECK(Subset::compare(Subset::of(5, {3}), Subset::of(5, {3})) == 0);
    CHECK(Subset::of(5, {1, 3}).hash() == Subset::of(5, {3, 1}).hash());
}

TEST_CASE("ground set validation") {
    CHECK_THROWS(GroundSet(0, 1));
    CHECK_THROWS(GroundSet(3, 0));
    CHECK_THROWS(GroundSet(3, 4));
    CHECK_NOTHROW(GroundSet(3, 3));
}

TEST_CASE("evaluation basics") {
    asfm::Instance inst;
    inst.type = asfm::InstanceType::Loc;
    inst.n = 1;
    inst.m = 1;
    inst.k = 1;
    inst.data = asfm::LocInstance{1, 1, {{0.5}}};
    EvaluatedFunction f = inst.make_function();

    CHECK(f.value(Subset(1)) == 0.0);  // empty set
    CHECK(f.value(Subset::of(1, {0})) == 0.5);
}

TEST_CASE("evaluation matches direct formula on a seeded coverage instance") {
    asfm::Instance inst;
    inst.type = asfm::InstanceType::Cov;
    inst.n = 3;
    inst.m = 4;
    inst.k = 2;
    inst.data = asfm::generate_cov(3, 4, 7);
    EvaluatedFunction f = inst.make_function();
    for (std::uint64_t mask = 0; mask < 8; ++mask)
        CHECK(f.value(Subset::from_mask(3, mask)) ==
              Catch::Approx(testref::instance_value(inst, mask)).margin(1e-12));
}

TEST_CASE("marginals") {
    EvaluatedFunction f = modular({3.0, 1.0, 2.0}, 2);
    Subset empty(3);
    CHECK(f.marginal(0, empty) == 3.0);  // marginal at the empty set is f({i})
    CHECK(f.marginal(1, Subset::of(3, {0})) == 1.0);
    CHECK_THROWS_AS(f.marginal(0, Subset::of(3, {0})), std::invalid_argument);
}

TEST_CASE("modular marginals are independent of the context set") {
    // disjoint-edge influence instance: each target touched by one item only
    asfm::InfInstance inf;
    inf.n = 3;
    inf.m = 3;
    inf.edge = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    inf.p = {0.3, 0.6, 0.9};
    asfm::Instance inst;
    inst.type = asfm::InstanceType::Inf;
    inst.n = 3;
    inst.m = 3;
    inst.k = 3;
    inst.data = inf;
    EvaluatedFunction f = inst.make_function();
    for (std::uint64_t mask = 0; mask < 8; ++mask)
        for (int i = 0; i < 3; ++i) {
            if (mask >> i & 1) continue;
            CHECK(f.marginal(i, Subset::from_mask(3, mask)) ==
                  Catch::Approx(inf.p[i]).margin(1e-12));
        }
}

TEST_CASE("marginal submodularity on a seeded facility-location instance") {
    asfm::Instance inst;
    inst.type = asfm::InstanceType::Loc;
    inst.n = 8;
    inst.m = 9;
    inst.k = 3;
    inst.data = asfm::generate_loc(8, 9, 11);
    EvaluatedFunction f = inst.make_function();
    for (std::uint64_t t = 0; t < 256; ++t)
        for (std::uint64_t s = t;; s = (s - 1) & t) {  // all s subset of t
            for (int i = 0; i < 8; ++i) {
                if (t >> i & 1) continue;
                CHECK(f.marginal(i, Subset::from_mask(8, s)) >=
                      f.marginal(i, Subset::from_mask(8, t)) - 1e-12);
            }
            if (s == 0) break;
        }
}

TEST_CASE("argmax marginal") {
    EvaluatedFunction f = modular({3.0, 1.0, 3.0}, 2);
    Subset empty(3);
    CHECK(f.argmax_marginal({1}, empty) == 1);               // single candidate
    CHECK(f.argmax_marginal({1, 2}, empty) == 2);            // larger marginal wins
    CHECK(f.argmax_marginal({0, 1, 2}, empty) == 0);         // tie -> smallest index
    CHECK_THROWS(f.argmax_marginal(std::vector<int>{}, empty));

    asfm::Instance inst;
    inst.type = asfm::InstanceType::Cov;
    inst.n = 6;
    inst.m = 7;
    inst.k = 2;
    inst.data = asfm::generate_cov(6, 7, 3);
    EvaluatedFunction g = inst.make_function();
    std::vector<int> all{0, 1, 2, 3, 4, 5};
    int best = 0;
    double best_m = -1.0;
    for (int i : all) {  // independent linear scan
        double m = testref::instance_value(inst, 1ull << i);
        if (m > best_m) {
            best_m = m;
            best = i;
        }
    }
    CHECK(g.argmax_marginal(all, Subset(6)) == best);
}

TEST_CASE("oracle call accounting and memo purity") {
    EvaluatedFunction f = modular({1.0, 2.0}, 2);
    CHECK(f.oracle_calls() == 0);
    Subset a = Subset::of(2, {0});
    double v1 = f.value(a);
    CHECK(f.oracle_calls() == 1);
    double v2 = f.value(a);  // memo hit
    CHECK(f.oracle_calls() == 1);
    CHECK(v1 == v2);
    f.marginal(1, a);  // one cached endpoint, one fresh
    CHECK(f.oracle_calls() == 2);
    f.marginal(1, a);  // both cached now
    CHECK(f.oracle_calls() == 2);

    EvaluatedFunction g = modular({1.0, 2.0}, 2);
    g.set_memo_enabled(false);
    g.marginal(1, a);
    CHECK(g.oracle_calls() == 2);  // no cache: both endpoints evaluated
    g.marginal(1, a);
    CHECK(g.oracle_calls() == 4);
}

TEST_CASE("greedy on modular weights") {
    EvaluatedFunction f = modular({3.0, 1.0, 2.0}, 2);
    asfm::GreedyChain chain = asfm::greedy(f, GroundSet(3, 2));
    CHECK(chain.order == std::vector<int>{0, 2});
    CHECK(chain.value() == 5.0);
    CHECK(chain.prefixes.size() == 3);
    CHECK(chain.prefixes[0].empty());
    CHECK(chain.values == std::vector<double>{0.0, 3.0, 5.0});
}

TEST_CASE("greedy with k = n selects everything") {
    EvaluatedFunction f = modular({1.0, 1.0, 1.0}, 3);
    asfm::GreedyChain chain = asfm::greedy(f, GroundSet(3, 3));
    CHECK(chain.solution() == Subset::of(3, {0, 1, 2}));
}

TEST_CASE("greedy chain invariants and approximation guarantee") {
    asfm::Instance inst;
    inst.type = asfm::InstanceType::Loc;
    inst.n = 8;
    inst.m = 9;
    inst.k = 3;
    inst.data = asfm::generate_loc(8, 9, 5);
    asfm::perturb_in_place(inst, 40, 0.8, 5);
    EvaluatedFunction f = inst.make_function();
    GroundSet gs = inst.ground();

    asfm::GreedyChain chain = asfm::greedy(f, gs);
    for (std::size_t i = 1; i < chain.prefixes.size(); ++i) {
        CHECK(chain.prefixes[i - 1].is_subset_of(chain.prefixes[i]));
        CHECK(chain.prefixes[i].cardinality() == static_cast<int>(i));
        CHECK(chain.values[i] >= chain.values[i - 1] - 1e-12);
    }

    auto [gamma, gamma_bar] = asfm::ratio_bounds_bruteforce(f);
    CHECK(gamma_bar >= gamma - 1e-12);
    double opt = asfm::brute_force_opt(f, gs).optimum;
    CHECK(chain.value() >= (1.0 - std::exp(-gamma)) * opt - 1e-9);
}
